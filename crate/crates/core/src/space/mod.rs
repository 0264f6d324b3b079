//! Finite metric probability spaces and the expected-distance measure.
//!
//! A space is a frame of named points, a 1-bounded pseudometric over it and a
//! probability mass per point. The event algebra is always the full powerset.

mod frame;
pub mod io;

pub use frame::{Frame, Mask, PointSet};
pub use io::{space_from_json, space_from_value, space_to_json, space_to_value};

#[cfg(test)]
pub(crate) use tests::example_one as example_one_for_tests;

use num_traits::{One, Signed, Zero};
use std::borrow::Cow;
use std::fmt;

use crate::evidence::SetFunction;
use crate::par;
use crate::rational::{common_scale, Rational};

/// The axiom a candidate space failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// d(x, x) = 0
    PMet1,
    /// d(x, y) = d(y, x)
    PMet2,
    /// d(x, y) + d(y, z) >= d(x, z)
    PMet3,
    /// 0 <= d(x, y) <= 1
    PMet4,
    /// P(x) >= 0
    Prob1,
    /// sum of P = 1
    Prob2,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::PMet1 => "PMet1 (reflexivity)",
            Axiom::PMet2 => "PMet2 (symmetry)",
            Axiom::PMet3 => "PMet3 (triangle inequality)",
            Axiom::PMet4 => "PMet4 (distance within [0,1])",
            Axiom::Prob1 => "Prob1 (nonnegative probability)",
            Axiom::Prob2 => "Prob2 (probabilities sum to 1)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpaceError {
    #[error("frame has no points")]
    EmptyFrame,
    #[error("duplicate point identifier `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("{what}: expected {expected} entries, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{axiom} violated at ({}): {detail}", points.join(", "))]
    AxiomViolation {
        axiom: Axiom,
        points: Vec<String>,
        detail: String,
    },
    #[error("frame of {size} points exceeds the cap of {cap}")]
    FrameTooLarge { size: usize, cap: usize },
}

impl SpaceError {
    pub fn axiom(&self) -> Option<Axiom> {
        match self {
            SpaceError::AxiomViolation { axiom, .. } => Some(*axiom),
            _ => None,
        }
    }
}

/// A 1-bounded pseudometric on a frame.
#[derive(Clone, Debug, PartialEq)]
pub enum PseudoMetric {
    /// Dense distance matrix.
    Matrix(Vec<Vec<Rational>>),
    /// Crisp metric induced by a partition: distance 0 inside a class and 1
    /// across classes. Always a valid pseudometric.
    Classes(Vec<usize>),
    /// Probabilistic-sum combination of component metrics, evaluated on
    /// demand. Built only by [`crate::product::build_product`].
    Product(ProductMetric),
}

/// Lazy product pseudometric `1 - prod(1 - d_i)`.
///
/// Point `k` of the product frame is the tuple obtained by reading `k` in the
/// mixed radix given by the component sizes, first component most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductMetric {
    factors: Vec<PseudoMetric>,
    dims: Vec<usize>,
}

impl ProductMetric {
    pub(crate) fn new(factors: Vec<PseudoMetric>) -> Self {
        let dims = factors.iter().map(PseudoMetric::len).collect();
        ProductMetric { factors, dims }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut tuple = vec![0; self.dims.len()];
        for (slot, &d) in tuple.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        tuple
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.dims).fold(0, |acc, (&t, &d)| acc * d + t)
    }

    pub fn dist(&self, x: usize, y: usize) -> Rational {
        let (tx, ty) = (self.decode(x), self.decode(y));
        let mut keep = Rational::one();
        for ((f, a), b) in self.factors.iter().zip(tx).zip(ty) {
            keep *= Rational::one() - f.dist(a, b).as_ref();
        }
        Rational::one() - keep
    }
}

impl PseudoMetric {
    pub fn len(&self) -> usize {
        match self {
            PseudoMetric::Matrix(m) => m.len(),
            PseudoMetric::Classes(c) => c.len(),
            PseudoMetric::Product(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dist(&self, x: usize, y: usize) -> Cow<'_, Rational> {
        match self {
            PseudoMetric::Matrix(m) => Cow::Borrowed(&m[x][y]),
            PseudoMetric::Classes(c) => Cow::Owned(if c[x] == c[y] {
                Rational::zero()
            } else {
                Rational::one()
            }),
            PseudoMetric::Product(p) => Cow::Owned(p.dist(x, y)),
        }
    }

    pub fn to_matrix(&self) -> Vec<Vec<Rational>> {
        match self {
            PseudoMetric::Matrix(m) => m.clone(),
            _ => (0..self.len())
                .map(|x| (0..self.len()).map(|y| self.dist(x, y).into_owned()).collect())
                .collect(),
        }
    }

    /// True when every distance is 0 or 1.
    pub fn is_crisp(&self) -> bool {
        match self {
            PseudoMetric::Matrix(m) => m.iter().flatten().all(|d| d.is_zero() || d.is_one()),
            PseudoMetric::Classes(_) => true,
            PseudoMetric::Product(p) => p.factors.iter().all(PseudoMetric::is_crisp),
        }
    }
}

/// Unvalidated space data, as read from a file.
#[derive(Clone, Debug, PartialEq)]
pub struct RawSpace {
    pub points: Vec<String>,
    pub metric: Vec<Vec<Rational>>,
    pub prob: Vec<Rational>,
}

/// ed, es, ea, er of one event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureQuad {
    /// expected distance
    pub ed: Rational,
    /// expected similarity, 1 - ed(U)
    pub es: Rational,
    /// expected absoluteness, ed(U^c)
    pub ea: Rational,
    /// expected relativeness, 1 - ed(U^c)
    pub er: Rational,
}

/// A validated finite metric probability space.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricProbSpace {
    frame: Frame,
    metric: PseudoMetric,
    prob: Vec<Rational>,
}

/// Validates raw space data against PMet1-4 and Prob1-2.
///
/// Checks run in the order PMet1, PMet2, PMet4, PMet3, Prob1, Prob2 and the
/// first failure is reported together with the offending points.
pub fn validate_space(raw: &RawSpace) -> Result<MetricProbSpace, SpaceError> {
    let frame = Frame::new(raw.points.iter().cloned())?;
    MetricProbSpace::new(frame, PseudoMetric::Matrix(raw.metric.clone()), raw.prob.clone())
}

impl MetricProbSpace {
    pub fn new(frame: Frame, metric: PseudoMetric, prob: Vec<Rational>) -> Result<Self, SpaceError> {
        let space = Self::new_unchecked(frame, metric, prob)?;
        space.check_axioms(true)?;
        Ok(space)
    }

    /// Checks dimensions only. Callers must establish the axioms themselves.
    pub(crate) fn new_unchecked(
        frame: Frame,
        metric: PseudoMetric,
        prob: Vec<Rational>,
    ) -> Result<Self, SpaceError> {
        let n = frame.len();
        if metric.len() != n {
            return Err(SpaceError::DimensionMismatch {
                what: "metric rows",
                expected: n,
                found: metric.len(),
            });
        }
        if let PseudoMetric::Matrix(m) = &metric {
            if let Some(row) = m.iter().find(|r| r.len() != n) {
                return Err(SpaceError::DimensionMismatch {
                    what: "metric columns",
                    expected: n,
                    found: row.len(),
                });
            }
        }
        if prob.len() != n {
            return Err(SpaceError::DimensionMismatch {
                what: "probabilities",
                expected: n,
                found: prob.len(),
            });
        }
        Ok(MetricProbSpace { frame, metric, prob })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn metric(&self) -> &PseudoMetric {
        &self.metric
    }

    pub fn prob(&self) -> &[Rational] {
        &self.prob
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn dist(&self, x: usize, y: usize) -> Cow<'_, Rational> {
        self.metric.dist(x, y)
    }

    pub fn to_raw(&self) -> RawSpace {
        RawSpace {
            points: self.frame.names().map(str::to_string).collect(),
            metric: self.metric.to_matrix(),
            prob: self.prob.clone(),
        }
    }

    /// Re-runs every axiom check; `triangle` toggles the cubic PMet3 pass.
    ///
    /// Class metrics are valid by construction. Product metrics are
    /// materialized and checked in full only when `triangle` is set.
    pub fn check_axioms(&self, triangle: bool) -> Result<(), SpaceError> {
        match &self.metric {
            PseudoMetric::Matrix(m) => self.check_matrix(m, triangle)?,
            PseudoMetric::Product(_) if triangle => {
                self.check_matrix(&self.metric.to_matrix(), true)?
            }
            _ => {}
        }
        self.check_prob()
    }

    fn violation(&self, axiom: Axiom, pts: &[usize], detail: String) -> SpaceError {
        SpaceError::AxiomViolation {
            axiom,
            points: pts.iter().map(|&i| self.frame.name(i).to_string()).collect(),
            detail,
        }
    }

    fn check_matrix(&self, m: &[Vec<Rational>], triangle: bool) -> Result<(), SpaceError> {
        let n = m.len();
        for x in 0..n {
            if !m[x][x].is_zero() {
                return Err(self.violation(Axiom::PMet1, &[x], format!("d = {}", m[x][x])));
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if m[x][y] != m[y][x] {
                    return Err(self.violation(
                        Axiom::PMet2,
                        &[x, y],
                        format!("{} != {}", m[x][y], m[y][x]),
                    ));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let d = &m[x][y];
                if d.is_negative() || *d > Rational::one() {
                    return Err(self.violation(Axiom::PMet4, &[x, y], format!("d = {d}")));
                }
            }
        }
        if triangle {
            if let Some((x, y, z)) = triangle_violation(m) {
                return Err(self.violation(
                    Axiom::PMet3,
                    &[x, y, z],
                    format!("{} + {} < {}", m[x][y], m[y][z], m[x][z]),
                ));
            }
        }
        Ok(())
    }

    fn check_prob(&self) -> Result<(), SpaceError> {
        if let Some(x) = self.prob.iter().position(|p| p.is_negative()) {
            return Err(self.violation(Axiom::Prob1, &[x], format!("P = {}", self.prob[x])));
        }
        let total: Rational = self.prob.iter().sum();
        if !total.is_one() {
            return Err(self.violation(Axiom::Prob2, &[], format!("sum = {total}")));
        }
        Ok(())
    }

    /// d(x, U) = min over U of d(x, y), with d(x, {}) = 1.
    pub fn set_distance(&self, x: usize, set: &PointSet) -> Result<Rational, SpaceError> {
        if x >= self.len() {
            return Err(SpaceError::UnknownPoint(format!("#{x}")));
        }
        self.frame.check(set)?;
        Ok(self.set_distance_unchecked(x, set))
    }

    fn set_distance_unchecked(&self, x: usize, set: &PointSet) -> Rational {
        match &self.metric {
            PseudoMetric::Matrix(m) => set
                .iter()
                .map(|y| &m[x][y])
                .min()
                .cloned()
                .unwrap_or_else(Rational::one),
            PseudoMetric::Classes(c) => {
                if set.iter().any(|y| c[y] == c[x]) {
                    Rational::zero()
                } else {
                    Rational::one()
                }
            }
            PseudoMetric::Product(p) => set
                .iter()
                .map(|y| p.dist(x, y))
                .min()
                .unwrap_or_else(Rational::one),
        }
    }

    /// ed(U) = sum over the frame of d(x, U) P(x).
    pub fn expected_distance(&self, set: &PointSet) -> Result<Rational, SpaceError> {
        self.frame.check(set)?;
        if set.is_empty() {
            return Ok(Rational::one());
        }
        let members = set.indicator(self.len());
        let mut total = Rational::zero();
        match &self.metric {
            PseudoMetric::Matrix(_) | PseudoMetric::Product(_) => {
                for (x, p) in self.prob.iter().enumerate() {
                    if p.is_zero() || members[x] {
                        continue;
                    }
                    total += self.set_distance_unchecked(x, set) * p;
                }
            }
            PseudoMetric::Classes(c) => {
                let width = c.iter().max().map_or(0, |m| m + 1);
                let mut hit = vec![false; width];
                for y in set.iter() {
                    hit[c[y]] = true;
                }
                for (x, p) in self.prob.iter().enumerate() {
                    if !p.is_zero() && !hit[c[x]] {
                        total += p;
                    }
                }
            }
        }
        Ok(total)
    }

    pub fn dual_measures(&self, set: &PointSet) -> Result<MeasureQuad, SpaceError> {
        let ed = self.expected_distance(set)?;
        let ea = self.expected_distance(&set.complement(self.len()))?;
        Ok(MeasureQuad {
            es: Rational::one() - &ed,
            er: Rational::one() - &ea,
            ed,
            ea,
        })
    }

    /// Tabulates ed over every subset of the frame.
    pub fn ed_set_function(&self, cap: usize) -> Result<SetFunction, SpaceError> {
        let n = self.len();
        if n > cap || n >= 32 {
            return Err(SpaceError::FrameTooLarge { size: n, cap });
        }
        let values = par::map_range(1usize << n, |mask| {
            self.expected_distance(&PointSet::from_mask(mask as Mask))
                .expect("mask subsets lie in the frame")
        });
        Ok(SetFunction::new(self.frame.clone(), values).expect("table covers the powerset"))
    }
}

/// First (x, y, z) in lexicographic order with d(x,y) + d(y,z) < d(x,z).
fn triangle_violation(m: &[Vec<Rational>]) -> Option<(usize, usize, usize)> {
    let n = m.len();
    let flat: Vec<&Rational> = m.iter().flatten().collect();
    match common_scale(&flat) {
        Some(scaled) => {
            let d = |x: usize, y: usize| scaled[x * n + y] as i128;
            par::map_range(n, |x| {
                (0..n).find_map(|y| {
                    (0..n)
                        .find(|&z| d(x, y) + d(y, z) < d(x, z))
                        .map(|z| (x, y, z))
                })
            })
            .into_iter()
            .flatten()
            .next()
        }
        None => par::map_range(n, |x| {
            (0..n).find_map(|y| {
                (0..n)
                    .find(|&z| {
                        let dxz = &m[x][z];
                        // cheap rejections before the allocating sum
                        &m[x][y] < dxz && &m[y][z] < dxz && &m[x][y] + &m[y][z] < *dxz
                    })
                    .map(|z| (x, y, z))
            })
        })
        .into_iter()
        .flatten()
        .next(),
    }
}
