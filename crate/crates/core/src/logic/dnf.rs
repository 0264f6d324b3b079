use super::ast::{BasicEdFormula, EdFormula, Relation};
use super::LogicError;

/// A conjunction of (possibly strict) basic formulas.
pub type Conjunct = Vec<BasicEdFormula>;

/// The complement of `b` as a disjunction of basic formulas:
/// `¬(t ≥ α)` is `t < α`, and `¬(t = α)` splits into `t < α ∨ t > α`.
pub fn negate_basic(b: &BasicEdFormula) -> Vec<BasicEdFormula> {
    let with = |relation| BasicEdFormula::new(b.term.clone(), relation, b.bound.clone());
    match b.relation {
        Relation::Ge => vec![with(Relation::Lt)],
        Relation::Gt => vec![with(Relation::Le)],
        Relation::Le => vec![with(Relation::Gt)],
        Relation::Lt => vec![with(Relation::Ge)],
        Relation::Eq => vec![with(Relation::Lt), with(Relation::Gt)],
    }
}

fn literal_count(d: &[Conjunct]) -> usize {
    d.iter().map(Vec::len).sum()
}

/// Disjunctive normal form with negations folded into the relations.
///
/// Conjuncts appear in left-to-right order of the input. Fails once the
/// total number of literals would exceed `cap`.
pub fn to_dnf(f: &EdFormula, cap: usize) -> Result<Vec<Conjunct>, LogicError> {
    dnf(f, false, cap)
}

fn dnf(f: &EdFormula, negated: bool, cap: usize) -> Result<Vec<Conjunct>, LogicError> {
    match (f, negated) {
        (EdFormula::Basic(b), false) => Ok(vec![vec![b.clone()]]),
        (EdFormula::Basic(b), true) => Ok(negate_basic(b).into_iter().map(|l| vec![l]).collect()),
        (EdFormula::Not(a), _) => dnf(a, !negated, cap),
        (EdFormula::Or(a, b), false) | (EdFormula::And(a, b), true) => {
            let mut left = dnf(a, negated, cap)?;
            let right = dnf(b, negated, cap)?;
            let total = literal_count(&left) + literal_count(&right);
            if total > cap {
                return Err(LogicError::DnfTooLarge { literals: total, cap });
            }
            left.extend(right);
            Ok(left)
        }
        (EdFormula::And(a, b), false) | (EdFormula::Or(a, b), true) => {
            let left = dnf(a, negated, cap)?;
            let right = dnf(b, negated, cap)?;
            // each left conjunct pairs with every right conjunct
            let total = literal_count(&left)
                .saturating_mul(right.len())
                .saturating_add(literal_count(&right).saturating_mul(left.len()));
            if total > cap {
                return Err(LogicError::DnfTooLarge { literals: total, cap });
            }
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    c.extend(r.iter().cloned());
                    out.push(c);
                }
            }
            Ok(out)
        }
    }
}

/// Rebuilds a formula from DNF conjuncts; an empty list has no formula.
pub fn from_dnf(conjuncts: &[Conjunct]) -> Option<EdFormula> {
    conjuncts
        .iter()
        .filter_map(|c| EdFormula::conjoin(c.iter().cloned().map(EdFormula::Basic)))
        .reduce(EdFormula::or)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::ast::EdTerm;
    use crate::logic::parse;
    use crate::rational::{int, Rational};
    use std::collections::HashMap;

    /// Every assignment of values from `grid` to the distinct terms.
    fn assignments(f: &EdFormula, grid: &[Rational]) -> Vec<HashMap<EdTerm, Rational>> {
        let mut terms: Vec<EdTerm> = Vec::new();
        f.visit_basic(&mut |b| {
            if !terms.contains(&b.term) {
                terms.push(b.term.clone())
            }
        });
        let mut out = vec![HashMap::new()];
        for t in terms {
            out = out
                .into_iter()
                .flat_map(|m| {
                    let t = &t;
                    grid.iter().map(move |v| {
                        let mut m = m.clone();
                        m.insert(t.clone(), v.clone());
                        m
                    })
                })
                .collect::<Vec<_>>();
        }
        out
    }

    fn eval(f: &EdFormula, values: &HashMap<EdTerm, Rational>) -> bool {
        f.eval_with(&mut |b: &BasicEdFormula| {
            Ok::<_, ()>(b.relation.holds(&values[&b.term], &b.bound))
        })
        .unwrap()
    }

    fn check_equivalent(text: &str) -> Vec<Conjunct> {
        let f = parse(text).unwrap();
        let d = to_dnf(&f, 4096).unwrap();
        let g = from_dnf(&d).unwrap();
        let grid = [int(-1), int(0), int(1), int(2)];
        for a in assignments(&f, &grid) {
            assert_eq!(eval(&f, &a), eval(&g, &a), "{text} under {a:?}");
        }
        d
    }

    #[test]
    fn de_morgan() {
        let d = check_equivalent("!(ED(a) >= 1 & ED(b) >= 1)");
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].len(), 1);
        assert_eq!(d[0][0].relation, Relation::Lt);
        assert_eq!(d[1][0].relation, Relation::Lt);
    }

    #[test]
    fn already_dnf() {
        let d = check_equivalent("ED(a) >= 1 & ED(b) > 0 | ED(c) = 2");
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].len(), 2);
        assert_eq!(d[1].len(), 1);
        assert_eq!(d[1][0].relation, Relation::Eq);
    }

    #[test]
    fn displayed_example_has_two_conjuncts() {
        let d = check_equivalent("(2*ED(P & Q) + 0.23*ED(!Q) >= 0.2) | (ED(!P) < 0.1)");
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn negated_equality_splits() {
        let d = check_equivalent("!(ED(a) = 1)");
        assert_eq!(d.len(), 2);
        check_equivalent("!(ED(a) = 1 | !(ED(b) <= 0 & ED(c) > 1)) | ED(a) < 2 & !(ED(b) = 0)");
        check_equivalent("!!(ED(a) >= 1) & (ED(b) = 0 | ED(c) = 1) & (ED(a) <= 0 | ED(c) > 0)");
    }

    #[test]
    fn blowup_guard() {
        let clause = "(ED(a) >= 1 | ED(b) >= 1 | ED(c) >= 1 | ED(d) >= 1)";
        let text = vec![clause; 8].join(" & ");
        let f = parse(&text).unwrap();
        assert!(matches!(
            to_dnf(&f, 4096),
            Err(LogicError::DnfTooLarge { .. })
        ));
    }
}
