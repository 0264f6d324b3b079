use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde_json::{Map, Value};

use super::DecisionError;
use crate::json::{self, FormatError};
use crate::logic::{AtomBasis, AtomMask, EdFormula, PropFormula};
use crate::rational::Rational;
use crate::space::{self, Frame, Mask, MetricProbSpace, PointSet, PseudoMetric};
use crate::Error;

/// A metric probability space with a truth assignment at every point.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    space: MetricProbSpace,
    vocabulary: BTreeSet<String>,
    valuation: Vec<BTreeSet<String>>,
}

impl Model {
    /// `valuation[x]` lists the propositions true at point `x`.
    pub fn new(
        space: MetricProbSpace,
        vocabulary: BTreeSet<String>,
        valuation: Vec<BTreeSet<String>>,
    ) -> Result<Self, DecisionError> {
        if valuation.len() != space.len() {
            return Err(DecisionError::InvalidModel(format!(
                "valuation covers {} points, the frame has {}",
                valuation.len(),
                space.len()
            )));
        }
        if let Some(p) = valuation.iter().flatten().find(|p| !vocabulary.contains(*p)) {
            return Err(DecisionError::UnknownProposition(p.clone()));
        }
        Ok(Model {
            space,
            vocabulary,
            valuation,
        })
    }

    pub fn space(&self) -> &MetricProbSpace {
        &self.space
    }

    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocabulary
    }

    pub fn valuation(&self) -> &[BTreeSet<String>] {
        &self.valuation
    }

    /// The space file with an added `"valuation"` object.
    pub fn to_value(&self) -> Value {
        let mut v = space::space_to_value(&self.space);
        let mut val = Map::new();
        for (x, props) in self.valuation.iter().enumerate() {
            val.insert(
                self.space.frame().name(x).to_string(),
                Value::Array(props.iter().cloned().map(Value::String).collect()),
            );
        }
        v.as_object_mut()
            .expect("spaces serialize as objects")
            .insert("valuation".into(), Value::Object(val));
        v
    }

    pub fn to_json(&self) -> String {
        json::to_pretty(&self.to_value())
    }

    /// Pairs a space with a valuation object `{"point": ["P", ..], ..}`.
    ///
    /// Points missing from the object make every proposition false. The
    /// vocabulary is every proposition mentioned plus `extra_vocabulary`.
    pub fn from_parts(
        space: MetricProbSpace,
        valuation: &Value,
        extra_vocabulary: impl IntoIterator<Item = String>,
    ) -> Result<Self, Error> {
        let obj = json::object(valuation, "valuation")?;
        let mut sets = vec![BTreeSet::new(); space.len()];
        for (name, props) in obj {
            let x = space.frame().point(name)?;
            sets[x] = json::strings(props, "valuation entry")?.into_iter().collect();
        }
        let mut vocabulary: BTreeSet<String> = sets.iter().flatten().cloned().collect();
        vocabulary.extend(extra_vocabulary);
        Ok(Model::new(space, vocabulary, sets)?)
    }

    /// Reads a model file: a space file carrying a `"valuation"` field.
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let v = json::parse(text)?;
        let space = space::space_from_value(&v)?;
        let val = json::object(&v, "model")?
            .get("valuation")
            .ok_or_else(|| FormatError::Shape("missing field `valuation`".into()))?;
        Model::from_parts(space, val, std::iter::empty())
    }
}

/// The points at which `psi` holds.
pub fn extension(m: &Model, psi: &PropFormula) -> Result<PointSet, DecisionError> {
    let mut out = Vec::new();
    for (x, props) in m.valuation.iter().enumerate() {
        let truth = |p: &str| m.vocabulary.contains(p).then(|| props.contains(p));
        if psi.eval(&truth)? {
            out.push(x);
        }
    }
    Ok(PointSet::from_indices(out))
}

/// Expected distance of the extension of `psi`.
pub fn ed_of(m: &Model, psi: &PropFormula) -> Result<Rational, DecisionError> {
    let set = extension(m, psi)?;
    Ok(m.space.expected_distance(&set)?)
}

/// Truth of `f` in `m`, comparing every basic formula exactly.
pub fn satisfies(m: &Model, f: &EdFormula) -> Result<bool, DecisionError> {
    f.eval_with(&mut |b| {
        let lhs = b.term.evaluate(|psi| ed_of(m, psi))?;
        Ok(b.relation.holds(&lhs, &b.bound))
    })
}

/// Value of every ED term occurring in `f`, in order of appearance.
pub fn term_values(m: &Model, f: &EdFormula) -> Result<Vec<(PropFormula, Rational)>, DecisionError> {
    let mut args = Vec::new();
    f.visit_basic(&mut |b| {
        for s in &b.term.summands {
            if !args.contains(&s.arg) {
                args.push(s.arg.clone());
            }
        }
    });
    args.into_iter()
        .map(|a| {
            let v = ed_of(m, &a)?;
            Ok((a, v))
        })
        .collect()
}

/// Number of points in the witness model for `n` atoms.
pub fn witness_frame_size(n: usize) -> usize {
    n * n << (n - 1)
}

/// Renders a 1-based index set, e.g. `{1,3}`.
pub(crate) fn index_label(mask: Mask) -> String {
    let items: Vec<String> = (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| (b + 1).to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

/// Point of the witness construction; atom indices are 0-based here and
/// 1-based in names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Label {
    /// `x_{i,J}`, with `i ∉ J`
    X { i: usize, set: Mask },
    /// `y_{i,j,K}`, with `i ≠ j` and `j ∉ K`
    Y { i: usize, j: usize, set: Mask },
}

impl Label {
    pub(crate) fn name(&self) -> String {
        match *self {
            Label::X { i, set } => format!("x_{}_{}", i + 1, index_label(set)),
            Label::Y { i, j, set } => format!("y_{}_{}_{}", i + 1, j + 1, index_label(set)),
        }
    }

    /// The atom whose extension contains this point.
    pub(crate) fn atom(&self) -> usize {
        match *self {
            Label::X { i, .. } | Label::Y { i, .. } => i,
        }
    }

    /// The `x` point this `y` point sits at distance 0 from, if any.
    pub(crate) fn anchor(&self) -> Option<(usize, Mask)> {
        match *self {
            Label::X { i, set } => Some((i, set)),
            Label::Y { i, j, set } => (set >> i & 1 == 0).then_some((j, set)),
        }
    }
}

/// Every witness point in frame order: all `x` points, then all `y` points.
pub(crate) fn witness_labels(n: usize) -> Vec<Label> {
    let full: Mask = (1 << n) - 1;
    let subsets_without = |t: usize| (0..=full).filter(move |s| s >> t & 1 == 0);
    let mut out = Vec::with_capacity(witness_frame_size(n));
    for i in 0..n {
        out.extend(subsets_without(i).map(|set| Label::X { i, set }));
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            out.extend(subsets_without(j).map(|set| Label::Y { i, j, set }));
        }
    }
    out
}

/// Checks `m_J >= 0`, `m_∅ = 0`, `Σ m_J = 1` over `2^n` subsets.
pub(crate) fn check_mass(mass: &[Rational], n: usize) -> Result<(), DecisionError> {
    if mass.len() != 1 << n {
        return Err(DecisionError::InvalidMass(format!(
            "expected {} entries, found {}",
            1usize << n,
            mass.len()
        )));
    }
    if let Some((j, v)) = mass.iter().enumerate().find(|(_, v)| v.is_negative()) {
        return Err(DecisionError::InvalidMass(format!(
            "mass of {} is negative ({v})",
            index_label(j as Mask)
        )));
    }
    if !mass[0].is_zero() {
        return Err(DecisionError::InvalidMass("the empty set carries mass".into()));
    }
    let total: Rational = mass.iter().sum();
    if total != Rational::from_integer(1.into()) {
        return Err(DecisionError::InvalidMass(format!("masses sum to {total}")));
    }
    Ok(())
}

/// `e_I = Σ_{J ⊆ I^c} m_J` for every index set `I`, via a subset-sum
/// transform.
pub fn e_values(mass: &[Rational], n: usize) -> Vec<Rational> {
    let full = (1usize << n) - 1;
    let mut below = mass.to_vec();
    for bit in 0..n {
        for s in 0..=full {
            if s >> bit & 1 == 1 {
                let add = below[s ^ (1 << bit)].clone();
                below[s] += add;
            }
        }
    }
    (0..=full).map(|i| below[full ^ i].clone()).collect()
}

/// Builds a model realizing the expected distances `e_I` induced by `mass`
/// (indexed by atom-set mask) over the atoms of `basis`.
///
/// Points `x_{i,J}` carry probability `m_{J^c} / |J^c|`; the `y` points are
/// weightless. The metric is crisp: `x_{j,K}` and every `y_{i,j,K}` with
/// `i ∉ K` form one class, and all remaining points are singletons. Hence
/// `x_{j,K}` is at distance 1 from the union of the atoms in `I` exactly
/// when `I ⊆ K`.
pub fn build_model(mass: &[Rational], basis: &AtomBasis, point_cap: usize) -> Result<Model, DecisionError> {
    let n = basis.n();
    check_mass(mass, n)?;
    let size = witness_frame_size(n);
    if size > point_cap {
        return Err(DecisionError::ModelBudgetExceeded {
            points: size,
            cap: point_cap,
        });
    }
    let labels = witness_labels(n);
    let full: Mask = (1 << n) - 1;

    // class ids: one per (j, K) anchor, then fresh ids for loose y points
    let anchor_id = |j: usize, set: Mask| j << n | set as usize;
    let mut next_free = n << n;
    let classes: Vec<usize> = labels
        .iter()
        .map(|l| match l.anchor() {
            Some((j, set)) => anchor_id(j, set),
            None => {
                next_free += 1;
                next_free - 1
            }
        })
        .collect();
    let prob: Vec<Rational> = labels
        .iter()
        .map(|l| match *l {
            Label::X { set, .. } => {
                let co = full ^ set;
                &mass[co as usize] / Rational::from_integer(co.count_ones().into())
            }
            Label::Y { .. } => Rational::zero(),
        })
        .collect();
    let frame = Frame::new(labels.iter().map(Label::name)).map_err(DecisionError::Space)?;
    let space = MetricProbSpace::new(frame, PseudoMetric::Classes(classes), prob)?;
    let valuation = labels
        .iter()
        .map(|l| basis.true_props(l.atom()).into_iter().collect())
        .collect();
    Model::new(space, basis.props().iter().cloned().collect(), valuation)
}

/// Points of `∪_{i∈I} φ_i` in a model built by [`build_model`].
pub fn atom_union(model: &Model, basis: &AtomBasis, atoms: AtomMask) -> Result<PointSet, DecisionError> {
    let psi = (0..basis.n())
        .filter(|a| atoms >> a & 1 == 1)
        .map(|a| basis.atom_formula(a))
        .reduce(PropFormula::or)
        .unwrap_or(PropFormula::False);
    extension(model, &psi)
}

/// Checks `ed(∪_{i∈I} φ_i) = e_I` for each listed `I`.
pub fn reproduces_e(
    model: &Model,
    basis: &AtomBasis,
    e: &[Rational],
    sets: impl IntoIterator<Item = AtomMask>,
) -> Result<bool, DecisionError> {
    for i in sets {
        let set = atom_union(model, basis, i)?;
        if model.space.expected_distance(&set)? != e[i as usize] {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse, parse_prop};
    use crate::rational::{int, ratio};
    use crate::space::{example_one_for_tests, validate_space, Axiom, SpaceError};

    fn example_model() -> Model {
        let space = example_one_for_tests();
        let mut val = vec![BTreeSet::new(); 2];
        val[0].insert("AtA".to_string());
        Model::new(space, ["AtA".to_string()].into(), val).unwrap()
    }

    #[test]
    fn extension_basics() {
        let m = example_model();
        assert_eq!(extension(&m, &PropFormula::True).unwrap(), PointSet::full(2));
        let at_a = parse_prop("AtA").unwrap();
        assert_eq!(extension(&m, &at_a).unwrap(), PointSet::from_indices([0]));
        assert_eq!(
            extension(&m, &at_a.clone().not()).unwrap(),
            extension(&m, &at_a).unwrap().complement(2)
        );
        assert!(matches!(
            extension(&m, &parse_prop("Q").unwrap()),
            Err(DecisionError::UnknownProposition(p)) if p == "Q"
        ));
    }

    #[test]
    fn satisfaction_on_the_two_point_space() {
        let m = example_model();
        assert!(satisfies(&m, &parse("ED(true) = 0").unwrap()).unwrap());
        assert!(satisfies(&m, &parse("ED(AtA) = 0.18").unwrap()).unwrap());
        assert!(!satisfies(&m, &parse("!(ED(AtA) = 0.18)").unwrap()).unwrap());
        assert!(satisfies(&m, &parse("ED(!AtA) = 0.02").unwrap()).unwrap());
    }

    #[test]
    fn single_atom_model() {
        let basis = AtomBasis::new(Vec::<String>::new()).unwrap();
        let m = build_model(&[int(0), int(1)], &basis, 100).unwrap();
        assert_eq!(m.space().len(), 1);
        assert!(satisfies(&m, &parse("ED(true) = 0 & ED(false) = 1").unwrap()).unwrap());
    }

    #[test]
    fn two_atom_model_by_hand() {
        let basis = AtomBasis::new(["p"]).unwrap();
        // atom 0 is !p, atom 1 is p; mass on {1}, {2}, {1,2} as masks 1, 2, 3
        let mass = vec![int(0), ratio(1, 2), ratio(1, 2), int(0)];
        let m = build_model(&mass, &basis, 100).unwrap();
        assert_eq!(m.space().len(), 8);
        let e = e_values(&mass, 2);
        // e_{1} = m_{2}
        assert_eq!(e[0b01], ratio(1, 2));
        let phi1 = atom_union(&m, &basis, 0b01).unwrap();
        assert_eq!(m.space().expected_distance(&phi1).unwrap(), ratio(1, 2));
        assert!(reproduces_e(&m, &basis, &e, 0..4).unwrap());
        m.space().check_axioms(true).unwrap();
        let dense = validate_space(&m.space().to_raw()).unwrap();
        assert_eq!(dense.len(), 8);
    }

    #[test]
    fn names_follow_the_convention() {
        let labels = witness_labels(2);
        let names: Vec<String> = labels.iter().map(Label::name).collect();
        assert_eq!(names[..4], ["x_1_{}", "x_1_{2}", "x_2_{}", "x_2_{1}"]);
        assert_eq!(names[4..], ["y_1_2_{}", "y_1_2_{1}", "y_2_1_{}", "y_2_1_{2}"]);
        assert_eq!(witness_frame_size(8), 8192);
    }

    /// The y-y distance `max(d(x_{j,K}, y_{i,j,K}), d(x_{j',K'}, y_{i',j',K'}))`
    /// taken literally.
    fn max_rule_distance(a: &Label, b: &Label) -> Rational {
        let xy = |x: (usize, Mask), y: &Label| match *y {
            Label::Y { i, j, set } if (j, set) == x && set >> i & 1 == 0 => int(0),
            _ => int(1),
        };
        if a == b {
            return int(0);
        }
        match (*a, *b) {
            (Label::X { .. }, Label::X { .. }) => int(1),
            (Label::X { i, set }, y @ Label::Y { .. }) | (y @ Label::Y { .. }, Label::X { i, set }) => {
                xy((i, set), &y)
            }
            (Label::Y { j, set, .. }, Label::Y { j: j2, set: s2, .. }) => {
                xy((j, set), a).max(xy((j2, s2), b))
            }
        }
    }

    #[test]
    fn max_rule_breaks_the_triangle_inequality() {
        let labels = witness_labels(2);
        let metric: Vec<Vec<Rational>> = labels
            .iter()
            .map(|a| labels.iter().map(|b| max_rule_distance(a, b)).collect())
            .collect();
        let raw = space::RawSpace {
            points: labels.iter().map(Label::name).collect(),
            metric,
            prob: labels.iter().map(|l| if l.name() == "x_1_{}" { int(1) } else { int(0) }).collect(),
        };
        match validate_space(&raw) {
            Err(SpaceError::AxiomViolation { axiom, .. }) => assert_eq!(axiom, Axiom::PMet3),
            other => panic!("expected a triangle violation, got {other:?}"),
        }
    }

    #[test]
    fn crisp_metric_matches_max_rule_from_x_points() {
        let basis = AtomBasis::new(["p", "q"]).unwrap();
        let mut mass = vec![int(0); 16];
        mass[15] = int(1);
        let m = build_model(&mass, &basis, 1000).unwrap();
        let labels = witness_labels(4);
        for (a, la) in labels.iter().enumerate() {
            if !matches!(la, Label::X { .. }) {
                continue;
            }
            for (b, lb) in labels.iter().enumerate() {
                assert_eq!(*m.space().dist(a, b), max_rule_distance(la, lb));
            }
        }
    }


    #[test]
    fn rejects_bad_mass() {
        let basis = AtomBasis::new(["p"]).unwrap();
        for mass in [
            vec![int(0), int(2), int(-1), int(0)],
            vec![ratio(1, 2), ratio(1, 2), int(0), int(0)],
            vec![int(0), ratio(1, 2), int(0), int(0)],
            vec![int(0), int(1)],
        ] {
            assert!(matches!(
                build_model(&mass, &basis, 100),
                Err(DecisionError::InvalidMass(_))
            ));
        }
        let big = AtomBasis::new(["p", "q", "r"]).unwrap();
        let mut mass = vec![int(0); 256];
        mass[255] = int(1);
        assert!(matches!(
            build_model(&mass, &big, 1000),
            Err(DecisionError::ModelBudgetExceeded { points: 8192, cap: 1000 })
        ));
    }

    #[test]
    fn model_file_round_trip() {
        let m = example_model();
        let back = Model::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }
}
