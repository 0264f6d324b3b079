use num_traits::{Signed, Zero};
use std::fmt::Write as _;

use super::LinarithError;
use crate::rational::{parse_rational, Rational};

/// Relation of a constraint `coeffs · x  cmp  bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cmp {
    Ge,
    Gt,
    Eq,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
            Cmp::Eq => "=",
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
            Cmp::Eq => lhs == rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub cmp: Cmp,
    pub bound: Rational,
}

impl Constraint {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| c * v)
            .sum()
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        self.cmp.holds(&self.lhs(x), &self.bound)
    }

    pub fn is_strict(&self) -> bool {
        self.cmp == Cmp::Gt
    }
}

/// Linear constraints over named rational variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraintSystem {
    variables: Vec<String>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityResult {
    /// A satisfying assignment, aligned with the system's variables.
    Feasible(Vec<Rational>),
    Infeasible,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible(_))
    }

    pub fn assignment(&self) -> Option<&[Rational]> {
        match self {
            FeasibilityResult::Feasible(x) => Some(x),
            FeasibilityResult::Infeasible => None,
        }
    }
}

impl LinearConstraintSystem {
    pub fn new<I, S>(variables: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        LinearConstraintSystem {
            variables: variables.into_iter().map(Into::into).collect(),
            constraints: Vec::new(),
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, cmp: Cmp, bound: Rational) -> Result<(), LinarithError> {
        if coeffs.len() != self.variables.len() {
            return Err(LinarithError::DimensionMismatch {
                expected: self.variables.len(),
                found: coeffs.len(),
            });
        }
        self.constraints.push(Constraint { coeffs, cmp, bound });
        Ok(())
    }

    /// Every constraint holds exactly at `x`, strictness included.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.variables.len() && self.constraints.iter().all(|c| c.holds(x))
    }

    /// One constraint per line, e.g. `3/2*x + -1*y >= 7/3`, after a
    /// `# variables:` header.
    pub fn dump(&self) -> String {
        let mut out = format!("# variables: {}\n", self.variables.join(" "));
        for c in &self.constraints {
            let terms: Vec<String> = c
                .coeffs
                .iter()
                .zip(&self.variables)
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, v)| format!("{a}*{v}"))
                .collect();
            let lhs = if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            };
            let _ = writeln!(out, "{lhs} {} {}", c.cmp.symbol(), c.bound);
        }
        out
    }

    /// Reads the [`dump`](Self::dump) format back.
    pub fn from_dump(text: &str) -> Result<Self, LinarithError> {
        let bad = |line: &str| LinarithError::Parse(line.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let vars = header
            .trim()
            .strip_prefix("# variables:")
            .ok_or_else(|| bad(header))?;
        let mut sys = LinearConstraintSystem::new(vars.split_whitespace());
        for line in lines {
            let (lhs, cmp, rhs) = [(" >= ", Cmp::Ge), (" > ", Cmp::Gt), (" = ", Cmp::Eq)]
                .iter()
                .find_map(|(sym, cmp)| line.split_once(sym).map(|(l, r)| (l, *cmp, r)))
                .ok_or_else(|| bad(line))?;
            let mut coeffs = vec![Rational::zero(); sys.num_vars()];
            if lhs.trim() != "0" {
                for term in lhs.split(" + ") {
                    let (c, v) = term.trim().split_once('*').ok_or_else(|| bad(line))?;
                    let idx = sys
                        .variables
                        .iter()
                        .position(|x| x == v)
                        .ok_or_else(|| bad(line))?;
                    coeffs[idx] += parse_rational(c).map_err(|_| bad(line))?;
                }
            }
            let bound = parse_rational(rhs).map_err(|_| bad(line))?;
            sys.push(coeffs, cmp, bound)?;
        }
        Ok(sys)
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(Constraint::is_strict)
    }

    /// Multiplies constraint `index` by a positive factor.
    pub fn scale_constraint(&mut self, index: usize, factor: &Rational) {
        assert!(factor.is_positive(), "scaling must preserve direction");
        let c = &mut self.constraints[index];
        for a in &mut c.coeffs {
            *a *= factor;
        }
        c.bound *= factor;
    }
}
