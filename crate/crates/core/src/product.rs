//! Product spaces under the probabilistic-sum pseudometric
//! `Λ(d_1, …, d_n) = 1 - Π (1 - d_i)`, and independence relative to `ed`.

use num_traits::{One, Signed};
use serde_json::Value;

use crate::json;
use crate::rational::{self, Rational};
use crate::space::{io as space_io, Frame, MetricProbSpace, PointSet, ProductMetric, PseudoMetric, SpaceError};
use crate::{Error, Limits};

/// Separator between component point names in product point names.
pub const TUPLE_SEPARATOR: char = '|';

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProductError {
    #[error("distance {value} at position {index} lies outside [0, 1]")]
    OutOfRange { index: usize, value: Rational },
    #[error("a product needs at least {min} components, got {found}")]
    TooFewComponents { min: usize, found: usize },
    #[error("product frame of {size} tuples exceeds the cap of {cap}")]
    FrameTooLarge { size: usize, cap: usize },
    #[error("invalid joint distribution: {0}")]
    InvalidJoint(String),
    #[error("unknown component {index} (product has {count})")]
    UnknownComponent { index: usize, count: usize },
    #[error("expected one set per component ({expected}), got {found}")]
    Arity { expected: usize, found: usize },
    #[error("closed form {formula} and direct minimum {direct} disagree")]
    RouteMismatch { formula: Rational, direct: Rational },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// `1 - Π (1 - d_i)` for distances in `[0, 1]`.
pub fn lambda_combine(distances: &[Rational]) -> Result<Rational, ProductError> {
    let mut keep = Rational::one();
    for (index, d) in distances.iter().enumerate() {
        if d.is_negative() || *d > Rational::one() {
            return Err(ProductError::OutOfRange {
                index,
                value: d.clone(),
            });
        }
        keep *= Rational::one() - d;
    }
    Ok(Rational::one() - keep)
}

/// Finite product of metric probability spaces with its expanded space.
#[derive(Clone, Debug)]
pub struct ProductSpace {
    components: Vec<MetricProbSpace>,
    metric: ProductMetric,
    space: MetricProbSpace,
}

/// Builds the product space. Without `joint` the probability is the
/// independent product of the component probabilities; otherwise `joint`
/// lists `(tuple name, probability)` entries and absent tuples get zero.
pub fn build_product(
    components: Vec<MetricProbSpace>,
    joint: Option<&[(String, Rational)]>,
    limits: &Limits,
) -> Result<ProductSpace, ProductError> {
    if components.len() < 2 {
        return Err(ProductError::TooFewComponents {
            min: 2,
            found: components.len(),
        });
    }
    let size = components
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .filter(|&s| s <= limits.product_frame_cap)
        .ok_or(ProductError::FrameTooLarge {
            size: components
                .iter()
                .map(MetricProbSpace::len)
                .fold(1usize, usize::saturating_mul),
            cap: limits.product_frame_cap,
        })?;

    let metric = ProductMetric::new(components.iter().map(|c| c.metric().clone()).collect());
    let tuples: Vec<Vec<usize>> = (0..size).map(|k| metric.decode(k)).collect();
    let names: Vec<String> = tuples
        .iter()
        .map(|t| tuple_name(&components, t))
        .collect();
    let frame = Frame::new(names)?;

    let prob = match joint {
        None => tuples
            .iter()
            .map(|t| {
                components
                    .iter()
                    .zip(t)
                    .map(|(c, &x)| &c.prob()[x])
                    .product()
            })
            .collect(),
        Some(entries) => joint_table(&frame, entries)?,
    };

    let space =
        MetricProbSpace::new_unchecked(frame, PseudoMetric::Product(metric.clone()), prob)?;
    space.check_axioms(size <= limits.product_triangle_check_cap)?;
    Ok(ProductSpace {
        components,
        metric,
        space,
    })
}

fn tuple_name(components: &[MetricProbSpace], tuple: &[usize]) -> String {
    let parts: Vec<&str> = components
        .iter()
        .zip(tuple)
        .map(|(c, &x)| c.frame().name(x))
        .collect();
    parts.join(&TUPLE_SEPARATOR.to_string())
}

fn joint_table(frame: &Frame, entries: &[(String, Rational)]) -> Result<Vec<Rational>, ProductError> {
    let mut prob: Vec<Option<Rational>> = vec![None; frame.len()];
    for (key, p) in entries {
        let k = frame
            .index_of(key)
            .ok_or_else(|| ProductError::InvalidJoint(format!("`{key}` is not a product tuple")))?;
        if prob[k].is_some() {
            return Err(ProductError::InvalidJoint(format!("`{key}` listed twice")));
        }
        if p.is_negative() {
            return Err(ProductError::InvalidJoint(format!("`{key}` has probability {p}")));
        }
        prob[k] = Some(p.clone());
    }
    let prob: Vec<Rational> = prob.into_iter().map(Option::unwrap_or_default).collect();
    let total: Rational = prob.iter().sum();
    if !total.is_one() {
        return Err(ProductError::InvalidJoint(format!("probabilities sum to {total}")));
    }
    Ok(prob)
}

impl ProductSpace {
    pub fn components(&self) -> &[MetricProbSpace] {
        &self.components
    }

    /// The expanded space over tuples, named `a|b|…`.
    pub fn space(&self) -> &MetricProbSpace {
        &self.space
    }

    pub fn into_space(self) -> MetricProbSpace {
        self.space
    }

    pub fn tuple(&self, index: usize) -> Vec<usize> {
        self.metric.decode(index)
    }

    pub fn index_of(&self, tuple: &[usize]) -> usize {
        self.metric.encode(tuple)
    }

    fn component(&self, index: usize) -> Result<&MetricProbSpace, ProductError> {
        self.components
            .get(index)
            .ok_or(ProductError::UnknownComponent {
                index,
                count: self.components.len(),
            })
    }

    /// `Ω_1 × … × A × … × Ω_n` with `A` in slot `index`.
    pub fn cylinder(&self, index: usize, set: &PointSet) -> Result<PointSet, ProductError> {
        self.component(index)?.frame().check(set)?;
        Ok((0..self.space.len())
            .filter(|&k| set.contains(self.metric.decode(k)[index]))
            .collect())
    }

    /// Distance from a product point to a rectangle `A_1 × … × A_n`.
    pub fn set_distance(&self, point: usize, rects: &[PointSet]) -> Result<Rational, ProductError> {
        if point >= self.space.len() {
            return Err(SpaceError::UnknownPoint(format!("#{point}")).into());
        }
        product_set_distance(&self.components, &self.tuple(point), rects)
    }

    /// Checks `1 - ed(∩_{i∈I} A_i) = Π_{i∈I} (1 - ed(A_i))` for every
    /// non-empty sub-collection `I` of the given cylinder events, all
    /// expected distances taken in the product space.
    pub fn independent_relative_to_ed(
        &self,
        events: &[(usize, PointSet)],
    ) -> Result<bool, ProductError> {
        if events.len() > 16 {
            return Err(ProductError::InvalidJoint(format!(
                "{} events exceed the sub-collection cap of 16",
                events.len()
            )));
        }
        let cylinders = events
            .iter()
            .map(|(i, a)| self.cylinder(*i, a))
            .collect::<Result<Vec<_>, _>>()?;
        let similarity = cylinders
            .iter()
            .map(|c| Ok(Rational::one() - self.space.expected_distance(c)?))
            .collect::<Result<Vec<_>, ProductError>>()?;
        for mask in 1u32..(1 << events.len()) {
            let mut meet = self.space.frame().full();
            let mut rhs = Rational::one();
            for (k, c) in cylinders.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    meet = meet.intersection(c);
                    rhs *= &similarity[k];
                }
            }
            let lhs = Rational::one() - self.space.expected_distance(&meet)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_rects(components: &[MetricProbSpace], rects: &[PointSet]) -> Result<(), ProductError> {
    if rects.len() != components.len() {
        return Err(ProductError::Arity {
            expected: components.len(),
            found: rects.len(),
        });
    }
    for (c, r) in components.iter().zip(rects) {
        c.frame().check(r)?;
    }
    Ok(())
}

/// Calls `visit` with every tuple of the rectangle `rects[0] × … × rects[n-1]`.
fn for_each_tuple(rects: &[PointSet], mut visit: impl FnMut(&[usize])) {
    if rects.iter().any(PointSet::is_empty) {
        return;
    }
    let mut pos = vec![0usize; rects.len()];
    let mut tuple: Vec<usize> = rects.iter().map(|r| r.as_slice()[0]).collect();
    loop {
        visit(&tuple);
        let mut slot = rects.len();
        loop {
            if slot == 0 {
                return;
            }
            slot -= 1;
            pos[slot] += 1;
            if pos[slot] < rects[slot].len() {
                tuple[slot] = rects[slot].as_slice()[pos[slot]];
                break;
            }
            pos[slot] = 0;
            tuple[slot] = rects[slot].as_slice()[0];
        }
    }
}

fn tuple_distance(components: &[MetricProbSpace], x: &[usize], y: &[usize]) -> Rational {
    let ds: Vec<Rational> = components
        .iter()
        .zip(x.iter().zip(y))
        .map(|(c, (&a, &b))| c.dist(a, b).into_owned())
        .collect();
    lambda_combine(&ds).expect("validated components")
}

/// Distance from tuple `x` to the rectangle `A_1 × … × A_n`.
///
/// Computed twice: by the closed form `1 - Π (1 - d_i(x_i, A_i))` and by the
/// direct minimum over the rectangle; a disagreement is reported as an error.
/// An empty side yields 1 on both routes.
pub fn product_set_distance(
    components: &[MetricProbSpace],
    x: &[usize],
    rects: &[PointSet],
) -> Result<Rational, ProductError> {
    check_rects(components, rects)?;
    if x.len() != components.len() {
        return Err(ProductError::Arity {
            expected: components.len(),
            found: x.len(),
        });
    }
    let per_slot = components
        .iter()
        .zip(x.iter().zip(rects))
        .map(|(c, (&xi, a))| c.set_distance(xi, a))
        .collect::<Result<Vec<_>, _>>()?;
    let formula = lambda_combine(&per_slot)?;

    let mut direct: Option<Rational> = None;
    for_each_tuple(rects, |y| {
        let d = tuple_distance(components, x, y);
        if direct.as_ref().map_or(true, |best| d < *best) {
            direct = Some(d);
        }
    });
    let direct = direct.unwrap_or_else(Rational::one);
    if formula != direct {
        return Err(ProductError::RouteMismatch { formula, direct });
    }
    Ok(formula)
}

/// Minimum product distance between two rectangles, by brute force over
/// point pairs; 1 when either rectangle is empty.
pub fn rect_distance(
    components: &[MetricProbSpace],
    a: &[PointSet],
    b: &[PointSet],
) -> Result<Rational, ProductError> {
    check_rects(components, a)?;
    check_rects(components, b)?;
    let mut best: Option<Rational> = None;
    for_each_tuple(a, |x| {
        for_each_tuple(b, |y| {
            let d = tuple_distance(components, x, y);
            if best.as_ref().map_or(true, |m| d < *m) {
                best = Some(d);
            }
        })
    });
    Ok(best.unwrap_or_else(Rational::one))
}

/// Reads `{"components": [<space>..], "joint": {"a|b": "1/4", ..}}`.
pub fn product_from_json(text: &str, limits: &Limits) -> Result<ProductSpace, Error> {
    let v = json::parse(text)?;
    let obj = json::object(&v, "product")?;
    let components = json::array(json::field(obj, "components")?, "components")?
        .iter()
        .map(space_io::space_from_value)
        .collect::<Result<Vec<_>, _>>()?;
    let joint = match obj.get("joint") {
        None | Some(Value::Null) => None,
        Some(j) => Some(joint_entries(j)?),
    };
    Ok(build_product(components, joint.as_deref(), limits)?)
}

/// Parses a joint table object `{"a|b": p, ..}`.
pub fn joint_entries(v: &Value) -> Result<Vec<(String, Rational)>, Error> {
    json::object(v, "joint")?
        .iter()
        .map(|(k, p)| {
            Ok((
                k.clone(),
                rational::from_json(p).map_err(json::FormatError::from)?,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::space::{validate_space, RawSpace};

    fn two_point(d: Rational, p: Rational) -> MetricProbSpace {
        validate_space(&RawSpace {
            points: vec!["A".into(), "B".into()],
            metric: vec![vec![int(0), d.clone()], vec![d, int(0)]],
            prob: vec![p.clone(), int(1) - p],
        })
        .unwrap()
    }

    fn example_one() -> MetricProbSpace {
        two_point(ratio(1, 5), ratio(1, 10))
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_combine(&[ratio(1, 2), ratio(1, 2)]).unwrap(), ratio(3, 4));
        assert_eq!(lambda_combine(&[ratio(1, 3), int(1), ratio(2, 7)]).unwrap(), int(1));
        assert_eq!(lambda_combine(&[int(0), int(0), int(0)]).unwrap(), int(0));
        assert!(matches!(
            lambda_combine(&[ratio(3, 2)]),
            Err(ProductError::OutOfRange { index: 0, .. })
        ));
    }

    /// Order preservation is strict only away from distance 1: once one
    /// coordinate is a full unit apart, moving further saturates at 1.
    #[test]
    fn order_preservation_saturates_on_the_cube_boundary() {
        let gap = |a: &[Rational], b: &[Rational]| {
            let d: Vec<Rational> = a.iter().zip(b).map(|(p, q)| (q - p).abs()).collect();
            lambda_combine(&d).unwrap()
        };
        let (x, y, z) = ([int(0), int(0)], [int(1), int(0)], [int(1), int(1)]);
        assert_eq!(gap(&x, &y), int(1));
        assert_eq!(gap(&x, &z), int(1));
        let (y, z) = ([ratio(9, 10), int(0)], [ratio(9, 10), ratio(1, 2)]);
        assert!(gap(&x, &y) < gap(&x, &z));
    }

    #[test]
    fn independent_product_of_example_one() {
        let ps = build_product(vec![example_one(), example_one()], None, &Limits::default())
            .unwrap();
        let s = ps.space();
        assert_eq!(s.len(), 4);
        assert_eq!(s.frame().name(0), "A|A");
        assert_eq!(s.prob()[0], ratio(1, 100));
        assert_eq!(s.prob()[3], ratio(81, 100));
        // Λ(1/5, 1/5) = 1 - (4/5)^2
        assert_eq!(s.dist(0, 3).into_owned(), ratio(9, 25));
    }

    #[test]
    fn crisp_components_give_crisp_product() {
        let ps = build_product(
            vec![two_point(int(1), ratio(1, 2)), two_point(int(0), ratio(1, 3))],
            None,
            &Limits::default(),
        )
        .unwrap();
        assert!(ps.space().metric().is_crisp());
    }

    #[test]
    fn joint_validation() {
        let comps = || vec![example_one(), example_one()];
        let neg = vec![("A|A".to_string(), ratio(-1, 2)), ("B|B".into(), ratio(3, 2))];
        assert!(matches!(
            build_product(comps(), Some(&neg), &Limits::default()),
            Err(ProductError::InvalidJoint(_))
        ));
        let bad_key = vec![("A|C".to_string(), int(1))];
        assert!(build_product(comps(), Some(&bad_key), &Limits::default()).is_err());
        let short = vec![("A|A".to_string(), ratio(1, 2))];
        assert!(build_product(comps(), Some(&short), &Limits::default()).is_err());
        let ok = vec![("A|A".to_string(), ratio(1, 2)), ("B|B".into(), ratio(1, 2))];
        let ps = build_product(comps(), Some(&ok), &Limits::default()).unwrap();
        assert_eq!(ps.space().prob()[1], int(0));
    }

    #[test]
    fn frame_caps() {
        let limits = Limits {
            product_frame_cap: 3,
            ..Limits::default()
        };
        assert!(matches!(
            build_product(vec![example_one(), example_one()], None, &limits),
            Err(ProductError::FrameTooLarge { size: 4, cap: 3 })
        ));
        assert!(matches!(
            build_product(vec![example_one()], None, &Limits::default()),
            Err(ProductError::TooFewComponents { .. })
        ));
    }

    #[test]
    fn rectangle_distances() {
        let comps = vec![two_point(ratio(1, 5), ratio(1, 2)), two_point(ratio(1, 3), ratio(1, 2))];
        let full: Vec<PointSet> = comps.iter().map(|c| c.frame().full()).collect();
        assert_eq!(product_set_distance(&comps, &[0, 0], &full).unwrap(), int(0));
        // x = (A, A), rectangle {B} × {B}: 1 - (4/5)(2/3)
        let bb = vec![PointSet::from_indices([1]), PointSet::from_indices([1])];
        assert_eq!(product_set_distance(&comps, &[0, 0], &bb).unwrap(), ratio(7, 15));
        let with_empty = vec![PointSet::empty(), PointSet::from_indices([1])];
        assert_eq!(product_set_distance(&comps, &[0, 0], &with_empty).unwrap(), int(1));
        // one component reduces to the plain set distance
        let single = &comps[..1];
        let b = PointSet::from_indices([1]);
        assert_eq!(
            product_set_distance(single, &[0], std::slice::from_ref(&b)).unwrap(),
            single[0].set_distance(0, &b).unwrap()
        );
        assert!(matches!(
            product_set_distance(&comps, &[0, 0], &bb[..1]),
            Err(ProductError::Arity { .. })
        ));
    }

    #[test]
    fn cylinders() {
        let ps = build_product(vec![example_one(), example_one()], None, &Limits::default())
            .unwrap();
        let a = PointSet::from_indices([0]);
        let cyl = ps.cylinder(0, &a).unwrap();
        assert_eq!(ps.space().frame().set_names(&cyl), ["A|A", "A|B"]);
        assert_eq!(ps.cylinder(1, &PointSet::full(2)).unwrap(), ps.space().frame().full());
        assert_eq!(
            ps.space().expected_distance(&cyl).unwrap(),
            example_one().expected_distance(&a).unwrap()
        );
        assert!(matches!(
            ps.cylinder(2, &a),
            Err(ProductError::UnknownComponent { .. })
        ));
    }

    #[test]
    fn independence_checks() {
        let d = ratio(1, 5);
        let comps = || vec![two_point(d.clone(), ratio(1, 2)), two_point(d.clone(), ratio(1, 2))];
        let a = PointSet::from_indices([0]);
        let events = vec![(0, a.clone()), (1, a.clone())];
        let indep = build_product(comps(), None, &Limits::default()).unwrap();
        assert!(indep.independent_relative_to_ed(&events).unwrap());
        let full = vec![(0, PointSet::full(2)), (1, PointSet::full(2))];
        assert!(indep.independent_relative_to_ed(&full).unwrap());

        // perfectly correlated joint: left 1 - d + d²/2, right (1 - d/2)²
        let joint = vec![("A|A".to_string(), ratio(1, 2)), ("B|B".into(), ratio(1, 2))];
        let corr = build_product(comps(), Some(&joint), &Limits::default()).unwrap();
        let cyl0 = corr.cylinder(0, &a).unwrap();
        let cyl1 = corr.cylinder(1, &a).unwrap();
        let s = corr.space();
        let lhs = int(1) - s.expected_distance(&cyl0.intersection(&cyl1)).unwrap();
        assert_eq!(lhs, int(1) - &d + &d * &d / int(2));
        let rhs = (int(1) - s.expected_distance(&cyl0).unwrap())
            * (int(1) - s.expected_distance(&cyl1).unwrap());
        assert_eq!(rhs, (int(1) - &d / int(2)) * (int(1) - &d / int(2)));
        assert!(!corr.independent_relative_to_ed(&events).unwrap());
        assert!(matches!(
            corr.independent_relative_to_ed(&[(5, a)]),
            Err(ProductError::UnknownComponent { .. })
        ));
    }

    #[test]
    fn json_product() {
        let text = r#"{"components": [
            {"points": ["A", "B"], "metric": [[0, 0.2], [0.2, 0]], "prob": [0.1, 0.9]},
            {"points": ["x", "y"], "metric": [[0, 1], [1, 0]], "prob": ["1/2", "1/2"]}
        ], "joint": {"A|x": "1/2", "B|y": "1/2"}}"#;
        let ps = product_from_json(text, &Limits::default()).unwrap();
        assert_eq!(ps.space().prob()[0], ratio(1, 2));
        let again = crate::space::io::space_from_json(&crate::space::io::space_to_json(ps.space()))
            .unwrap();
        assert_eq!(again.metric().to_matrix(), ps.space().metric().to_matrix());
    }
}
