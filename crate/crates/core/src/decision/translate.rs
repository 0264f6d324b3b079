//! Conjuncts of basic formulas as linear systems.
//!
//! The main encoding works over mass variables `m_J`, one per set of atoms,
//! and substitutes `e_I = Σ_{J ⊆ I^c} m_J` for every ED term. The direct
//! encoding keeps one variable per `e_I` and spells out the
//! inclusion-exclusion family; it is doubly exponential and only used as an
//! oracle for one proposition or fewer.

use num_traits::{One, Zero};

use super::model::index_label;
use super::DecisionError;
use crate::linarith::{Cmp, LinearConstraintSystem};
use crate::logic::{prop_to_atom_set, AtomBasis, BasicEdFormula, Relation};
use crate::rational::Rational;

/// Largest proposition count the direct encoding accepts.
pub const DIRECT_ENCODING_MAX_PROPS: usize = 1;

/// `coeffs ≥/>/= bound` form of `sum ≥/>/=/</≤ bound` over per-index
/// coefficients.
fn push_literal(
    sys: &mut LinearConstraintSystem,
    coeffs: Vec<Rational>,
    relation: Relation,
    bound: &Rational,
) -> Result<(), DecisionError> {
    let neg = |v: Vec<Rational>| v.into_iter().map(|a| -a).collect();
    let (coeffs, cmp, bound) = match relation {
        Relation::Ge => (coeffs, Cmp::Ge, bound.clone()),
        Relation::Gt => (coeffs, Cmp::Gt, bound.clone()),
        Relation::Eq => (coeffs, Cmp::Eq, bound.clone()),
        Relation::Le => (neg(coeffs), Cmp::Ge, -bound.clone()),
        Relation::Lt => (neg(coeffs), Cmp::Gt, -bound.clone()),
    };
    sys.push(coeffs, cmp, bound)?;
    Ok(())
}

/// Coefficients of a literal's term over the `e_I` index sets.
fn e_coefficients(lit: &BasicEdFormula, basis: &AtomBasis) -> Result<Vec<Rational>, DecisionError> {
    let mut out = vec![Rational::zero(); 1usize << basis.n()];
    for s in &lit.term.summands {
        let i = prop_to_atom_set(&s.arg, basis)? as usize;
        out[i] += &s.coeff;
    }
    Ok(out)
}

/// Translates a conjunction of literals over the mass variables `m_J`.
///
/// Variables are named `m_{..}` with 1-based atom indices and are ordered by
/// atom-set mask, so `assignment[J]` is the mass of `J`.
pub fn translate_conjunct(literals: &[BasicEdFormula], basis: &AtomBasis) -> Result<LinearConstraintSystem, DecisionError> {
    let n = basis.n();
    if basis.k() > super::MAX_SOLVER_PROPS {
        return Err(DecisionError::AtomBudgetExceeded {
            k: basis.k(),
            budget: super::MAX_SOLVER_PROPS,
        });
    }
    let size = 1usize << n;
    let full = size - 1;
    let mut sys = LinearConstraintSystem::new((0..size).map(|j| format!("m_{}", index_label(j as u64))));
    let unit = |j: usize| {
        let mut v = vec![Rational::zero(); size];
        v[j] = Rational::one();
        v
    };
    for j in 0..size {
        sys.push(unit(j), Cmp::Ge, Rational::zero())?;
    }
    sys.push(unit(0), Cmp::Eq, Rational::zero())?;
    sys.push(vec![Rational::one(); size], Cmp::Eq, Rational::one())?;

    for lit in literals {
        let by_e = e_coefficients(lit, basis)?;
        let mut coeffs = vec![Rational::zero(); size];
        for (i, a) in by_e.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            // e_I sums m_J over the subsets J of I's complement
            let co = full ^ i;
            let mut j = co;
            loop {
                coeffs[j] += a;
                if j == 0 {
                    break;
                }
                j = (j - 1) & co;
            }
        }
        push_literal(&mut sys, coeffs, lit.relation, &lit.bound)?;
    }
    Ok(sys)
}

/// Translates over one variable `e_I` per index set with the normalization,
/// nonnegativity and full inclusion-exclusion constraints on them.
pub fn translate_conjunct_direct(
    literals: &[BasicEdFormula],
    basis: &AtomBasis,
) -> Result<LinearConstraintSystem, DecisionError> {
    if basis.k() > DIRECT_ENCODING_MAX_PROPS {
        return Err(DecisionError::AtomBudgetExceeded {
            k: basis.k(),
            budget: DIRECT_ENCODING_MAX_PROPS,
        });
    }
    let sets = 1usize << basis.n();
    let full = sets - 1;
    let mut sys = LinearConstraintSystem::new((0..sets).map(|i| format!("e_{}", index_label(i as u64))));
    let unit = |i: usize| {
        let mut v = vec![Rational::zero(); sets];
        v[i] = Rational::one();
        v
    };
    sys.push(unit(0), Cmp::Eq, Rational::one())?;
    sys.push(unit(full), Cmp::Eq, Rational::zero())?;
    for i in 0..sets {
        sys.push(unit(i), Cmp::Ge, Rational::zero())?;
    }
    // every nonempty family of index sets, encoded as a bitmask over masks
    for family in 1u64..(1u64 << sets) {
        let members: Vec<usize> = (0..sets).filter(|m| family >> m & 1 == 1).collect();
        if members.len() < 2 {
            continue;
        }
        let meet = members.iter().fold(full, |acc, &m| acc & m);
        let mut coeffs = unit(meet);
        for sub in 1u64..(1u64 << members.len()) {
            let chosen: Vec<usize> = (0..members.len())
                .filter(|b| sub >> b & 1 == 1)
                .map(|b| members[b])
                .collect();
            let join = chosen.iter().fold(0, |acc, &m| acc | m);
            let sign = if chosen.len() % 2 == 1 { -Rational::one() } else { Rational::one() };
            coeffs[join] += sign;
        }
        sys.push(coeffs, Cmp::Ge, Rational::zero())?;
    }
    for lit in literals {
        push_literal(&mut sys, e_coefficients(lit, basis)?, lit.relation, &lit.bound)?;
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linarith::{feasible, feasible_by_elimination};
    use crate::logic::{atom_basis, parse, to_dnf};

    fn single(text: &str) -> (Vec<BasicEdFormula>, AtomBasis) {
        let f = parse(text).unwrap();
        let basis = atom_basis(&f).unwrap();
        let mut dnf = to_dnf(&f, 1000).unwrap();
        assert_eq!(dnf.len(), 1);
        (dnf.remove(0), basis)
    }

    #[test]
    fn base_constraints_and_names() {
        let (lits, basis) = single("ED(p) >= 0");
        let sys = translate_conjunct(&lits, &basis).unwrap();
        assert_eq!(sys.variables(), ["m_{}", "m_{1}", "m_{2}", "m_{1,2}"]);
        // 4 nonnegativity rows, m_{} = 0, the sum, the literal
        assert_eq!(sys.constraints().len(), 7);
    }

    #[test]
    fn truth_constants() {
        for (text, ok) in [("ED(true) = 0", true), ("ED(false) = 1", true), ("ED(true) = 1", false)] {
            let (lits, basis) = single(text);
            let sys = translate_conjunct(&lits, &basis).unwrap();
            assert_eq!(feasible(&sys).unwrap().is_feasible(), ok, "{text}");
        }
    }

    #[test]
    fn contradictory_bounds_on_one_term() {
        let (lits, basis) = single("ED(p) = 0.5 & ED(p) > 0.6");
        let sys = translate_conjunct(&lits, &basis).unwrap();
        assert_eq!(sys.num_vars(), 4);
        assert!(!feasible(&sys).unwrap().is_feasible());
        assert!(!feasible_by_elimination(&sys).unwrap().is_feasible());
    }

    #[test]
    fn e_of_p_expands_to_masses_outside() {
        // p is atom 1 (mask 0b10); e_{2} sums m over subsets of {1}
        let (lits, basis) = single("ED(p) = 0.25");
        let sys = translate_conjunct(&lits, &basis).unwrap();
        let last = sys.constraints().last().unwrap();
        let one = Rational::one();
        assert_eq!(last.coeffs, vec![one.clone(), one, Rational::zero(), Rational::zero()]);
    }

    #[test]
    fn direct_encoding_shape() {
        let (lits, basis) = single("ED(p) >= 0.3 & ED(!p) >= 0.3");
        let sys = translate_conjunct_direct(&lits, &basis).unwrap();
        assert_eq!(sys.num_vars(), 4);
        assert!(feasible(&sys).unwrap().is_feasible());
        let (lits, basis) = single("ED(p) + ED(!p) > 1");
        let sys = translate_conjunct_direct(&lits, &basis).unwrap();
        assert!(!feasible(&sys).unwrap().is_feasible());
        let (lits, basis) = single("ED(p & q) >= 0");
        assert!(translate_conjunct_direct(&lits, &basis).is_err());
    }
}
