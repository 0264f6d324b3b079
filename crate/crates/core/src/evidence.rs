//! Mass functions, belief/doubt/plausibility, Möbius inversion and the
//! alternating min-max identity.
//!
//! Set functions are stored as dense tables indexed by subset bitmask, so a
//! frame of `n` points carries `2^n` values.

use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};

use crate::json;
use crate::rational::{self, Rational};
use crate::space::{Frame, Mask, PointSet};
use crate::Error;

/// Longest list accepted by the alternating min-max routines; they enumerate
/// every subset of the input.
pub const MAX_ALTERNATING_LEN: usize = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvidenceError {
    #[error("input list is empty")]
    EmptyInput,
    #[error("value at position {index} is not positive: {value}")]
    NonPositiveInput { index: usize, value: Rational },
    #[error("{len} values exceed the enumeration cap of {cap}")]
    InputTooLong { len: usize, cap: usize },
    #[error("table has {found} entries; a frame of {points} points needs {expected}")]
    TableSize {
        points: usize,
        expected: usize,
        found: usize,
    },
    #[error("frame of {size} points exceeds the cap of {cap}")]
    FrameTooLarge { size: usize, cap: usize },
    #[error("invalid mass function at {subset}: {reason}")]
    InvalidMass { subset: String, reason: String },
    #[error("not a doubt function: Möbius mass at {subset} is {value} ({reason})")]
    NotADoubtFunction {
        subset: String,
        value: Rational,
        reason: String,
    },
}

fn check_nonempty(values: &[Rational]) -> Result<(), EvidenceError> {
    if values.is_empty() {
        return Err(EvidenceError::EmptyInput);
    }
    if values.len() > MAX_ALTERNATING_LEN {
        return Err(EvidenceError::InputTooLong {
            len: values.len(),
            cap: MAX_ALTERNATING_LEN,
        });
    }
    Ok(())
}

/// Folds `pick` over the members of every non-empty index subset and hands
/// each result to `acc` along with whether the subset has odd size.
fn over_subsets<F, G>(values: &[Rational], pick: F, mut acc: G)
where
    F: Fn(&Rational, &Rational) -> bool,
    G: FnMut(&Rational, bool),
{
    let n = values.len();
    for mask in 1u32..(1u32 << n) {
        let mut best: Option<&Rational> = None;
        for (i, v) in values.iter().enumerate() {
            if mask >> i & 1 == 1 && best.map_or(true, |b| pick(v, b)) {
                best = Some(v);
            }
        }
        acc(best.expect("mask is non-empty"), mask.count_ones() % 2 == 1);
    }
}

/// Sum over non-empty subsets of `(-1)^(|I|+1) min_I`, which equals the maximum.
pub fn alternating_max(values: &[Rational]) -> Result<Rational, EvidenceError> {
    check_nonempty(values)?;
    let mut total = Rational::zero();
    over_subsets(values, |a, b| a < b, |m, odd| {
        if odd {
            total += m
        } else {
            total -= m
        }
    });
    Ok(total)
}

/// Sum over non-empty subsets of `(-1)^(|I|+1) max_I`, which equals the minimum.
pub fn alternating_min(values: &[Rational]) -> Result<Rational, EvidenceError> {
    check_nonempty(values)?;
    let mut total = Rational::zero();
    over_subsets(values, |a, b| a > b, |m, odd| {
        if odd {
            total += m
        } else {
            total -= m
        }
    });
    Ok(total)
}

/// The alternating identity in the multiplicative group of positive
/// rationals: product of subset minima raised to `(-1)^(|I|+1)`.
pub fn alternating_max_multiplicative(values: &[Rational]) -> Result<Rational, EvidenceError> {
    check_nonempty(values)?;
    if let Some(index) = values.iter().position(|v| !v.is_positive()) {
        return Err(EvidenceError::NonPositiveInput {
            index,
            value: values[index].clone(),
        });
    }
    let mut num = Rational::one();
    let mut den = Rational::one();
    over_subsets(values, |a, b| a < b, |m, odd| {
        if odd {
            num *= m
        } else {
            den *= m
        }
    });
    Ok(num / den)
}

/// A total map from subsets of a frame to rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct SetFunction {
    frame: Frame,
    values: Vec<Rational>,
}

impl SetFunction {
    pub fn new(frame: Frame, values: Vec<Rational>) -> Result<Self, EvidenceError> {
        let n = frame.len();
        if n >= 31 {
            return Err(EvidenceError::FrameTooLarge { size: n, cap: 30 });
        }
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(EvidenceError::TableSize {
                points: n,
                expected,
                found: values.len(),
            });
        }
        Ok(SetFunction { frame, values })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, mask: Mask) -> &Rational {
        &self.values[mask as usize]
    }

    pub fn full_mask(&self) -> Mask {
        (1 << self.frame.len()) - 1
    }

    pub(crate) fn label(&self, mask: Mask) -> String {
        subset_label(&self.frame, mask)
    }
}

fn subset_label(frame: &Frame, mask: Mask) -> String {
    format!("{{{}}}", frame.set_names(&PointSet::from_mask(mask)).join(","))
}

/// A nonnegative set function with zero mass on the empty set summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct MassFunction {
    table: SetFunction,
}

impl MassFunction {
    pub fn new(frame: Frame, mass: Vec<Rational>) -> Result<Self, EvidenceError> {
        let table = SetFunction::new(frame, mass)?;
        if !table.values[0].is_zero() {
            return Err(EvidenceError::InvalidMass {
                subset: "{}".into(),
                reason: format!("empty set carries mass {}", table.values[0]),
            });
        }
        if let Some(mask) = table.values.iter().position(|m| m.is_negative()) {
            return Err(EvidenceError::InvalidMass {
                subset: table.label(mask as Mask),
                reason: format!("negative mass {}", table.values[mask]),
            });
        }
        let total: Rational = table.values.iter().sum();
        if !total.is_one() {
            return Err(EvidenceError::InvalidMass {
                subset: "all".into(),
                reason: format!("masses sum to {total}"),
            });
        }
        Ok(MassFunction { table })
    }

    pub fn frame(&self) -> &Frame {
        self.table.frame()
    }

    pub fn values(&self) -> &[Rational] {
        self.table.values()
    }

    pub fn get(&self, mask: Mask) -> &Rational {
        self.table.get(mask)
    }

    pub fn as_set_function(&self) -> &SetFunction {
        &self.table
    }
}

/// Bel(A) = sum of m(U) over U ⊆ A, computed with the subset-sum transform.
pub fn belief_from_mass(m: &MassFunction) -> SetFunction {
    let n = m.frame().len();
    let mut bel = m.values().to_vec();
    for bit in 0..n {
        for mask in 0..bel.len() {
            if mask >> bit & 1 == 1 {
                let lower = bel[mask ^ (1 << bit)].clone();
                bel[mask] += lower;
            }
        }
    }
    SetFunction::new(m.frame().clone(), bel).expect("same frame")
}

/// Doubt(A) = Bel(A^c).
pub fn doubt_from_mass(m: &MassFunction) -> SetFunction {
    let bel = belief_from_mass(m);
    let full = bel.full_mask();
    let values = (0..=full).map(|a| bel.get(full ^ a).clone()).collect();
    SetFunction::new(m.frame().clone(), values).expect("same frame")
}

/// Pl(A) = 1 - Doubt(A).
pub fn plausibility_from_mass(m: &MassFunction) -> SetFunction {
    let doubt = doubt_from_mass(m);
    let values = doubt.values().iter().map(|d| Rational::one() - d).collect();
    SetFunction::new(m.frame().clone(), values).expect("same frame")
}

/// Möbius inversion of a doubt function:
/// `m(A) = sum over U ⊆ A of (-1)^(|A|-|U|) sf(U^c)`.
///
/// Fails with the first subset (in mask order) whose mass is invalid.
pub fn mass_from_doubt(sf: &SetFunction) -> Result<MassFunction, EvidenceError> {
    let full = sf.full_mask();
    let mut mass = Vec::with_capacity(sf.values().len());
    for a in 0..=full {
        let mut total = Rational::zero();
        let mut u = a;
        loop {
            let term = sf.get(full ^ u);
            if (a ^ u).count_ones() % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
            if u == 0 {
                break;
            }
            u = (u - 1) & a;
        }
        let bad = if a == 0 && !total.is_zero() {
            Some("the empty set must carry no mass")
        } else if total.is_negative() {
            Some("negative mass")
        } else {
            None
        };
        if let Some(reason) = bad {
            return Err(EvidenceError::NotADoubtFunction {
                subset: sf.label(a),
                value: total,
                reason: reason.into(),
            });
        }
        mass.push(total);
    }
    let sum: Rational = mass.iter().sum();
    if !sum.is_one() {
        return Err(EvidenceError::NotADoubtFunction {
            subset: "all".into(),
            value: sum,
            reason: "masses do not sum to 1".into(),
        });
    }
    MassFunction::new(sf.frame().clone(), mass)
}

/// Doubt(∅) = 1, Doubt(Ω) = 0 and a nonnegative Möbius mass.
pub fn is_doubt_function(sf: &SetFunction) -> bool {
    sf.get(0).is_one() && sf.get(sf.full_mask()).is_zero() && mass_from_doubt(sf).is_ok()
}

// ---------------------------------------------------------------------------
// file format: {"points": [..], "values": {"A,B": "1/5", "": "1", ..}}

/// Reads a subset table. Missing subsets are an error unless `default` is
/// given, in which case they take that value.
pub fn table_from_json(text: &str, default: Option<Rational>) -> Result<SetFunction, Error> {
    let v = json::parse(text)?;
    let obj = json::object(&v, "set function")?;
    let frame = Frame::new(json::strings(json::field(obj, "points")?, "points")?)?;
    if frame.len() > 20 {
        return Err(EvidenceError::FrameTooLarge {
            size: frame.len(),
            cap: 20,
        }
        .into());
    }
    let entries = json::object(json::field(obj, "values")?, "values")?;
    let mut values: Vec<Option<Rational>> = vec![None; 1 << frame.len()];
    for (key, value) in entries {
        let names: Vec<&str> = if key.trim().is_empty() {
            Vec::new()
        } else {
            key.split(',').map(str::trim).collect()
        };
        let mask = frame.subset(&names)?.to_mask() as usize;
        if values[mask].is_some() {
            return Err(json::shape(format!("subset `{key}` listed twice")).into());
        }
        values[mask] = Some(rational::from_json(value).map_err(json::FormatError::from)?);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(mask, v)| {
            v.or_else(|| default.clone()).ok_or_else(|| {
                json::shape(format!(
                    "missing value for subset {}",
                    subset_label(&frame, mask as Mask)
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SetFunction::new(frame, values)?)
}

pub fn table_to_json(sf: &SetFunction) -> String {
    let frame = sf.frame();
    let mut entries = Map::new();
    for mask in 0..=sf.full_mask() {
        let mut names = frame.set_names(&PointSet::from_mask(mask));
        names.sort_unstable();
        entries.insert(names.join(","), rational::to_json(sf.get(mask)));
    }
    let mut obj = Map::new();
    obj.insert(
        "points".into(),
        Value::Array(frame.names().map(|s| Value::String(s.into())).collect()),
    );
    obj.insert("values".into(), Value::Object(entries));
    json::to_pretty(&Value::Object(obj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn frame(n: usize) -> Frame {
        Frame::new((1..=n).map(|i| i.to_string())).unwrap()
    }

    /// Direct definition of the alternating sum, written independently.
    fn brute_alternating(values: &[i64], use_min: bool) -> i64 {
        let n = values.len();
        let mut total = 0;
        for mask in 1..(1u32 << n) {
            let picked = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| values[i]);
            let v = if use_min { picked.min() } else { picked.max() }.unwrap();
            total += if mask.count_ones() % 2 == 1 { v } else { -v };
        }
        total
    }

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn alternating_examples() {
        assert_eq!(brute_alternating(&[1, 2, 3], true), 3);
        assert_eq!(alternating_max(&q(&[1, 2, 3])).unwrap(), int(3));
        assert_eq!(alternating_max(&q(&[7])).unwrap(), int(7));
        assert_eq!(alternating_max(&q(&[5, 5])).unwrap(), int(5));
        assert_eq!(brute_alternating(&[1, 2, 3], false), 1);
        assert_eq!(alternating_min(&q(&[1, 2, 3])).unwrap(), int(1));
        assert_eq!(alternating_min(&q(&[4])).unwrap(), int(4));
        assert_eq!(alternating_min(&q(&[0, 1])).unwrap(), int(0));
        assert_eq!(alternating_max(&[]), Err(EvidenceError::EmptyInput));
        assert_eq!(alternating_min(&[]), Err(EvidenceError::EmptyInput));
        assert!(matches!(
            alternating_max(&vec![int(1); 21]),
            Err(EvidenceError::InputTooLong { .. })
        ));
    }

    #[test]
    fn multiplicative_examples() {
        assert_eq!(alternating_max_multiplicative(&q(&[2, 4])).unwrap(), int(4));
        assert_eq!(alternating_max_multiplicative(&q(&[3])).unwrap(), int(3));
        // (2*3*5) / (2*2*3) * 2 by hand
        assert_eq!(alternating_max_multiplicative(&q(&[2, 3, 5])).unwrap(), int(5));
        assert!(matches!(
            alternating_max_multiplicative(&q(&[2, 0])),
            Err(EvidenceError::NonPositiveInput { index: 1, .. })
        ));
    }

    #[test]
    fn belief_doubt_plausibility() {
        let m = MassFunction::new(frame(1), vec![int(0), int(1)]).unwrap();
        assert_eq!(belief_from_mass(&m).values(), &[int(0), int(1)]);

        let m = MassFunction::new(
            frame(2),
            vec![int(0), ratio(3, 10), ratio(1, 2), ratio(1, 5)],
        )
        .unwrap();
        let doubt = doubt_from_mass(&m);
        assert_eq!(doubt.get(0b01), &ratio(1, 2));
        assert_eq!(doubt.values(), &[int(1), ratio(1, 2), ratio(3, 10), int(0)]);
        let pl = plausibility_from_mass(&m);
        for mask in 0..4 {
            assert_eq!(pl.get(mask) + doubt.get(mask), int(1));
        }
    }

    #[test]
    fn mobius_inversion_example() {
        let sf = SetFunction::new(
            frame(2),
            vec![int(1), ratio(1, 2), ratio(3, 10), int(0)],
        )
        .unwrap();
        let m = mass_from_doubt(&sf).unwrap();
        assert_eq!(m.values(), &[int(0), ratio(3, 10), ratio(1, 2), ratio(1, 5)]);
        assert_eq!(doubt_from_mass(&m), sf);
        assert!(is_doubt_function(&sf));
    }

    #[test]
    fn point_mass() {
        // doubt of a crisp point mass at x: 1 off x, 0 on sets containing x
        let sf = SetFunction::new(frame(2), vec![int(1), int(0), int(1), int(0)]).unwrap();
        let m = mass_from_doubt(&sf).unwrap();
        assert_eq!(m.values(), &[int(0), int(1), int(0), int(0)]);
    }

    #[test]
    fn rejects_non_doubt_tables() {
        // masses {1}: 1/5, {2}: 1/5, {1,2}: 3/5
        let sf = SetFunction::new(frame(2), vec![int(1), ratio(1, 5), ratio(1, 5), int(0)])
            .unwrap();
        assert!(is_doubt_function(&sf));
        // Doubt({1}) + Doubt({2}) - Doubt(Ω) > Doubt(∅) breaks the binary inequality
        let bad = SetFunction::new(frame(2), vec![int(1), ratio(3, 5), ratio(3, 5), int(0)])
            .unwrap();
        let err = mass_from_doubt(&bad).unwrap_err();
        assert_eq!(
            err,
            EvidenceError::NotADoubtFunction {
                subset: "{1,2}".into(),
                value: ratio(-1, 5),
                reason: "negative mass".into()
            }
        );
        assert!(!is_doubt_function(&bad));

        let wrong_empty =
            SetFunction::new(frame(1), vec![int(0), int(0)]).unwrap();
        assert!(!is_doubt_function(&wrong_empty));
    }

    #[test]
    fn three_point_negative_mass_search() {
        // scan monotone-decreasing tables on 3 points with values in {0,1/2,1}
        // and confirm at least one has a negative Möbius mass
        let f = frame(3);
        let grid = [int(0), ratio(1, 2), int(1)];
        let mut found = false;
        for code in 0..3usize.pow(6) {
            let mut vals = vec![int(1); 8];
            vals[7] = int(0);
            let mut c = code;
            for mask in 1..7 {
                vals[mask] = grid[c % 3].clone();
                c /= 3;
            }
            let monotone = (0..8).all(|a| {
                (0..8).all(|b| (a & b) != a || vals[a] >= vals[b])
            });
            if !monotone {
                continue;
            }
            let sf = SetFunction::new(f.clone(), vals).unwrap();
            if !is_doubt_function(&sf) {
                found = true;
                assert!(matches!(
                    mass_from_doubt(&sf),
                    Err(EvidenceError::NotADoubtFunction { .. })
                ));
                break;
            }
        }
        assert!(found);
    }

    #[test]
    fn invalid_masses() {
        assert!(MassFunction::new(frame(1), vec![int(1), int(0)]).is_err());
        assert!(MassFunction::new(frame(1), vec![int(0), ratio(1, 2)]).is_err());
        assert!(MassFunction::new(frame(2), vec![int(0), int(2), int(-1), int(0)]).is_err());
        assert!(matches!(
            SetFunction::new(frame(2), vec![int(0)]),
            Err(EvidenceError::TableSize { .. })
        ));
    }

    #[test]
    fn json_tables() {
        let text = r#"{"points": ["A", "B"], "values": {"": 1, "A": "1/2", "B": 0.3, "B,A": 0}}"#;
        let sf = table_from_json(text, None).unwrap();
        assert_eq!(sf.values(), &[int(1), ratio(1, 2), ratio(3, 10), int(0)]);
        let again = table_from_json(&table_to_json(&sf), None).unwrap();
        assert_eq!(again, sf);
        let missing = r#"{"points": ["A", "B"], "values": {"A": 1}}"#;
        assert!(table_from_json(missing, None).is_err());
        let sparse = table_from_json(missing, Some(int(0))).unwrap();
        assert_eq!(sparse.values(), &[int(0), int(1), int(0), int(0)]);
        let unknown = r#"{"points": ["A"], "values": {"Z": 1}}"#;
        assert!(table_from_json(unknown, Some(int(0))).is_err());
    }
}
