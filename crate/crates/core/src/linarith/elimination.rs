//! Fourier–Motzkin elimination with strictness tracking.
//!
//! Deliberately simple and independent of the simplex code so the two can
//! cross-check each other. Derived rows remember which input rows they were
//! combined from; after `s` eliminations a row built from more than `s + 1`
//! inputs is redundant (Chernikov's rule) and is dropped. Every input in a
//! row's history enters with a positive multiplier, so a row is strict iff
//! some input in its history is.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use super::system::{Cmp, FeasibilityResult, LinearConstraintSystem};
use super::LinarithError;
use crate::rational::Rational;

pub const MAX_ELIMINATION_VARS: usize = 12;

/// Intermediate constraint count beyond which elimination gives up.
const MAX_ROWS: usize = 50_000;

/// `coeffs · x >= bound`, or `>` when `strict`.
#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<Rational>,
    bound: Rational,
    strict: bool,
    history: u128,
}

impl Row {
    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn constant_holds(&self) -> bool {
        if self.strict {
            self.bound.is_negative()
        } else {
            !self.bound.is_positive()
        }
    }
}

/// Drops trivial rows and rows dominated by a parallel row whose history is
/// no larger. Returns `None` when a constant row is violated.
///
/// Domination alone is not enough: discarding a weaker row in favour of one
/// with a wider history could later let the history rule prune a needed
/// combination.
fn normalize(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut groups: HashMap<Vec<Rational>, Vec<(Rational, bool, u128)>> = HashMap::new();
    let mut order = Vec::new();
    for row in rows {
        if row.is_constant() {
            if !row.constant_holds() {
                return None;
            }
            continue;
        }
        let lead = row
            .coeffs
            .iter()
            .find(|a| !a.is_zero())
            .expect("non-constant row")
            .abs();
        let key: Vec<Rational> = row.coeffs.iter().map(|a| a / &lead).collect();
        let cand = (row.bound / &lead, row.strict, row.history);
        let at_least = |a: &(Rational, bool, u128), b: &(Rational, bool, u128)| {
            a.0 > b.0 || (a.0 == b.0 && (a.1 || !b.1))
        };
        let group = groups.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            Vec::new()
        });
        if group
            .iter()
            .any(|g| at_least(g, &cand) && g.2 & !cand.2 == 0)
        {
            continue;
        }
        group.retain(|g| !(at_least(&cand, g) && cand.2 & !g.2 == 0));
        group.push(cand);
    }
    let mut out = Vec::new();
    for key in order {
        for (bound, strict, history) in groups.remove(&key).expect("key recorded") {
            out.push(Row {
                coeffs: key.clone(),
                bound,
                strict,
                history,
            });
        }
    }
    Some(out)
}

fn lhs(row: &Row, x: &[Rational]) -> Rational {
    row.coeffs
        .iter()
        .zip(x)
        .filter(|(a, _)| !a.is_zero())
        .map(|(a, v)| a * v)
        .sum()
}

/// Decides feasibility by eliminating variables one at a time.
pub fn feasible_by_elimination(sys: &LinearConstraintSystem) -> Result<FeasibilityResult, LinarithError> {
    let n = sys.num_vars();
    if n > MAX_ELIMINATION_VARS {
        return Err(LinarithError::TooManyVariables {
            count: n,
            max: MAX_ELIMINATION_VARS,
        });
    }
    let mut rows = Vec::new();
    for c in sys.constraints() {
        let tag = |k: usize| if k < 128 { 1u128 << k } else { 0 };
        rows.push(Row {
            coeffs: c.coeffs.clone(),
            bound: c.bound.clone(),
            strict: c.cmp == Cmp::Gt,
            history: tag(rows.len()),
        });
        if c.cmp == Cmp::Eq {
            rows.push(Row {
                coeffs: c.coeffs.iter().map(|a| -a).collect(),
                bound: -c.bound.clone(),
                strict: false,
                history: tag(rows.len()),
            });
        }
    }
    // histories are exact only while every input row has its own bit
    let chernikov = rows.len() <= 128;
    let Some(mut rows) = normalize(rows) else {
        return Ok(FeasibilityResult::Infeasible);
    };

    // each stage keeps the rows that mention the variable it eliminates
    let mut stages: Vec<(usize, Vec<Row>)> = Vec::new();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut eliminated = 0u32;
    while !remaining.is_empty() {
        eliminated += 1;
        let (pos_idx, &var) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &j)| {
                let p = rows.iter().filter(|r| r.coeffs[j].is_positive()).count();
                let q = rows.iter().filter(|r| r.coeffs[j].is_negative()).count();
                (p * q, j)
            })
            .expect("non-empty");
        remaining.remove(pos_idx);

        let (touching, mut kept): (Vec<Row>, Vec<Row>) =
            rows.into_iter().partition(|r| !r.coeffs[var].is_zero());
        let (lower, upper): (Vec<&Row>, Vec<&Row>) =
            touching.iter().partition(|r| r.coeffs[var].is_positive());
        for lo in &lower {
            for up in &upper {
                let history = lo.history | up.history;
                if chernikov && history.count_ones() > eliminated + 1 {
                    continue;
                }
                let a = lo.coeffs[var].clone();
                let b = -up.coeffs[var].clone();
                let coeffs: Vec<Rational> = lo
                    .coeffs
                    .iter()
                    .zip(&up.coeffs)
                    .map(|(p, q)| p * &b + q * &a)
                    .collect();
                kept.push(Row {
                    coeffs,
                    bound: &lo.bound * &b + &up.bound * &a,
                    strict: lo.strict || up.strict,
                    history,
                });
                if kept.len() > MAX_ROWS {
                    return Err(LinarithError::ResourceLimit {
                        what: "elimination constraints",
                        limit: MAX_ROWS,
                    });
                }
            }
        }
        stages.push((var, touching));
        match normalize(kept) {
            Some(r) => rows = r,
            None => return Ok(FeasibilityResult::Infeasible),
        }
    }
    // every variable is gone; normalize has already vetted the constants

    let mut x = vec![Rational::zero(); n];
    for (var, touching) in stages.iter().rev() {
        let mut low: Option<(Rational, bool)> = None;
        let mut high: Option<(Rational, bool)> = None;
        for r in touching {
            let a = &r.coeffs[*var];
            let rest = lhs(r, &x) - a * &x[*var];
            let limit = (&r.bound - rest) / a;
            if a.is_positive() {
                if low.as_ref().map_or(true, |(l, s)| limit > *l || (limit == *l && r.strict && !s)) {
                    low = Some((limit, r.strict));
                }
            } else if high.as_ref().map_or(true, |(h, s)| limit < *h || (limit == *h && r.strict && !s)) {
                high = Some((limit, r.strict));
            }
        }
        x[*var] = match (low, high) {
            (None, None) => Rational::zero(),
            (Some((l, _)), None) => l + Rational::one(),
            (None, Some((h, _))) => h - Rational::one(),
            (Some((l, ls)), Some((h, hs))) => {
                if l < h {
                    (l + h) / Rational::from_integer(2.into())
                } else if l == h && !ls && !hs {
                    l
                } else {
                    return Err(LinarithError::Internal(
                        "elimination back-substitution found an empty interval".into(),
                    ));
                }
            }
        };
    }
    if !sys.satisfied_by(&x) {
        return Err(LinarithError::Internal(
            "elimination assignment failed re-substitution".into(),
        ));
    }
    Ok(FeasibilityResult::Feasible(x))
}
