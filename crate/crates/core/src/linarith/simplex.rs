//! Dense two-phase primal simplex over exact rationals with Bland's
//! least-index rule.
//!
//! Strict constraints `a·x > b` are handled with one shared slack `s`:
//! each becomes `a·x - s ≥ b`, `s` is maximized subject to `0 ≤ s ≤ 1`, and
//! the system is strictly feasible iff the optimum has `s > 0`.

use num_traits::{One, Signed, Zero};

use super::system::{Cmp, FeasibilityResult, LinearConstraintSystem};
use super::LinarithError;
use crate::rational::Rational;

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    pivots: usize,
    pivot_limit: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) -> Result<(), LinarithError> {
        self.pivots += 1;
        if self.pivots > self.pivot_limit {
            return Err(LinarithError::ResourceLimit {
                what: "simplex pivots",
                limit: self.pivot_limit,
            });
        }
        let inv = Rational::one() / &self.rows[row][col];
        for a in self.rows[row].iter_mut().filter(|a| !a.is_zero()) {
            *a *= &inv;
        }
        self.rhs[row] *= &inv;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for (a, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[row] = col;
        Ok(())
    }

    /// Maximizes `cost · y` over columns admitted by `allowed`.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> Result<Outcome, LinarithError> {
        let ncols = cost.len();
        loop {
            let mut in_basis = vec![false; ncols];
            for &b in &self.basis {
                in_basis[b] = true;
            }
            let entering = (0..ncols).find(|&j| {
                if !allowed[j] || in_basis[j] {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        reduced -= &cost[b] * &self.rows[i][j];
                    }
                }
                reduced.is_positive()
            });
            let Some(col) = entering else {
                return Ok(Outcome::Optimal);
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leaving {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, col)?,
                None => return Ok(Outcome::Unbounded),
            }
        }
    }

    fn value(&self, col: usize) -> Rational {
        self.basis
            .iter()
            .position(|&b| b == col)
            .map(|i| self.rhs[i].clone())
            .unwrap_or_else(Rational::zero)
    }
}

/// How an original variable maps onto nonnegative tableau columns.
enum Column {
    NonNegative(usize),
    Split(usize, usize),
}

/// Decides feasibility of `sys` over the rationals, strictness included.
pub fn feasible(sys: &LinearConstraintSystem, pivot_limit: usize) -> Result<FeasibilityResult, LinarithError> {
    let nvars = sys.num_vars();

    // `c * x >= 0` with c > 0 becomes a column bound rather than a row
    let mut nonneg = vec![false; nvars];
    let mut is_bound_row = vec![false; sys.constraints().len()];
    for (k, c) in sys.constraints().iter().enumerate() {
        let mut nz = c.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero());
        if let (Some((j, a)), None) = (nz.next(), nz.next()) {
            if c.cmp == Cmp::Ge && c.bound.is_zero() && a.is_positive() {
                nonneg[j] = true;
                is_bound_row[k] = true;
            }
        }
    }

    let mut ncols = 0;
    let columns: Vec<Column> = nonneg
        .iter()
        .map(|&nn| {
            let c = if nn {
                Column::NonNegative(ncols)
            } else {
                Column::Split(ncols, ncols + 1)
            };
            ncols += if nn { 1 } else { 2 };
            c
        })
        .collect();
    let strict = sys.has_strict();
    let s_col = strict.then(|| {
        ncols += 1;
        ncols - 1
    });

    // rows in equality form: structural part, then one slack/surplus column
    // where the relation needs it
    struct Row {
        coeffs: Vec<(usize, Rational)>,
        slack: Option<Rational>,
        rhs: Rational,
    }
    let mut rows = Vec::new();
    for (k, c) in sys.constraints().iter().enumerate() {
        if is_bound_row[k] {
            continue;
        }
        let mut coeffs = Vec::new();
        for (j, a) in c.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            match columns[j] {
                Column::NonNegative(col) => coeffs.push((col, a.clone())),
                Column::Split(p, n) => {
                    coeffs.push((p, a.clone()));
                    coeffs.push((n, -a.clone()));
                }
            }
        }
        if c.cmp == Cmp::Gt {
            coeffs.push((s_col.expect("strict rows imply a slack"), -Rational::one()));
        }
        let slack = (c.cmp != Cmp::Eq).then(|| -Rational::one());
        rows.push(Row {
            coeffs,
            slack,
            rhs: c.bound.clone(),
        });
    }
    if let Some(s) = s_col {
        rows.push(Row {
            coeffs: vec![(s, Rational::one())],
            slack: Some(Rational::one()),
            rhs: Rational::one(),
        });
    }

    // slack columns, then artificial columns for rows lacking a usable basic
    let slack_base = ncols;
    let nslack = rows.iter().filter(|r| r.slack.is_some()).count();
    let art_base = slack_base + nslack;
    let mut tableau_rows = Vec::with_capacity(rows.len());
    let mut rhs = Vec::with_capacity(rows.len());
    let mut basis = Vec::with_capacity(rows.len());
    let mut next_slack = slack_base;
    let mut artificial_rows = Vec::new();
    let mut dense_rows = Vec::new();
    for row in rows {
        let negate = row.rhs.is_negative();
        let sign = |v: Rational| if negate { -v } else { v };
        let mut dense: Vec<(usize, Rational)> = row.coeffs.into_iter().map(|(c, v)| (c, sign(v))).collect();
        let mut basic = None;
        if let Some(s) = row.slack {
            let s = sign(s);
            if s.is_positive() {
                basic = Some(next_slack);
            }
            dense.push((next_slack, s));
            next_slack += 1;
        }
        if basic.is_none() {
            artificial_rows.push(dense_rows.len());
        }
        basis.push(basic);
        rhs.push(sign(row.rhs));
        dense_rows.push(dense);
    }
    let total_cols = art_base + artificial_rows.len();
    let mut art_col = art_base;
    for (i, dense) in dense_rows.into_iter().enumerate() {
        let mut full = vec![Rational::zero(); total_cols];
        for (c, v) in dense {
            full[c] += v;
        }
        if basis[i].is_none() {
            full[art_col] = Rational::one();
            basis[i] = Some(art_col);
            art_col += 1;
        }
        tableau_rows.push(full);
    }
    let mut t = Tableau {
        rows: tableau_rows,
        rhs,
        basis: basis.into_iter().map(|b| b.expect("every row has a basic column")).collect(),
        pivots: 0,
        pivot_limit,
    };

    // phase 1: drive artificials to zero
    if !artificial_rows.is_empty() {
        let mut cost = vec![Rational::zero(); total_cols];
        for c in cost.iter_mut().skip(art_base) {
            *c = -Rational::one();
        }
        let allowed = vec![true; total_cols];
        if let Outcome::Unbounded = t.optimize(&cost, &allowed)? {
            return Err(LinarithError::Internal("phase 1 reported unbounded".into()));
        }
        let infeasibility: Rational = (art_base..total_cols).map(|c| t.value(c)).sum();
        if infeasibility.is_positive() {
            return Ok(FeasibilityResult::Infeasible);
        }
        // pivot remaining (zero-level) artificials out, dropping redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art_base {
                match (0..art_base).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j)?,
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // phase 2: maximize the strictness slack
    if let Some(s) = s_col {
        let mut cost = vec![Rational::zero(); total_cols];
        cost[s] = Rational::one();
        let allowed: Vec<bool> = (0..total_cols).map(|c| c < art_base).collect();
        if let Outcome::Unbounded = t.optimize(&cost, &allowed)? {
            return Err(LinarithError::Internal("slack objective reported unbounded".into()));
        }
        if !t.value(s).is_positive() {
            return Ok(FeasibilityResult::Infeasible);
        }
    }

    let x: Vec<Rational> = columns
        .iter()
        .map(|c| match *c {
            Column::NonNegative(col) => t.value(col),
            Column::Split(p, n) => t.value(p) - t.value(n),
        })
        .collect();
    if !sys.satisfied_by(&x) {
        return Err(LinarithError::Internal(
            "simplex assignment failed re-substitution".into(),
        ));
    }
    Ok(FeasibilityResult::Feasible(x))
}
