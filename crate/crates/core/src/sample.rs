//! Random generators for spaces, mass functions and satisfiable formulas.
//!
//! Used by the property tests, the benchmarks and the CLI's `random-space`
//! command. Everything is exact and driven by a caller-supplied RNG.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::decision::e_values;
use crate::evidence::MassFunction;
use crate::logic::{prop_to_atom_set, AtomBasis, BasicEdFormula, EdFormula, EdTerm, PropFormula, Relation, Summand};
use crate::rational::{int, ratio, Rational};
use crate::space::{Frame, MetricProbSpace, PseudoMetric};

const WEIGHTS: [(i64, i64); 8] = [(0, 1), (1, 5), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 1)];

fn random_weight<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    if rng.gen_bool(0.25) {
        let q = rng.gen_range(1..=12);
        ratio(rng.gen_range(0..=q), q)
    } else {
        let (p, q) = *WEIGHTS.choose(rng).expect("non-empty");
        ratio(p, q)
    }
}

/// Random positive weights summing to one; some entries may be zero but
/// never all of them.
pub fn random_distribution<R: Rng + ?Sized>(len: usize, zero_chance: f64, rng: &mut R) -> Vec<Rational> {
    let mut w: Vec<i64> = (0..len)
        .map(|_| if rng.gen_bool(zero_chance) { 0 } else { rng.gen_range(1..=9) })
        .collect();
    if w.iter().all(|&x| x == 0) {
        let i = rng.gen_range(0..len);
        w[i] = rng.gen_range(1..=9);
    }
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| ratio(x, total)).collect()
}

/// Pseudometric matrix from the shortest-path closure of a random weighted
/// graph, truncated at 1. Zero-weight edges make distinct points coincide.
pub fn random_metric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec<Rational>> {
    let one = int(1);
    let mut d = vec![vec![one.clone(); n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = int(0);
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.7) {
                let w = random_weight(rng);
                d[i][j] = w.clone();
                d[j][i] = w;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// A valid space on points `w0, w1, ...`.
pub fn random_space<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MetricProbSpace {
    let frame = Frame::new((0..n).map(|i| format!("w{i}"))).expect("distinct names");
    let metric = random_metric(n, rng);
    let prob = random_distribution(n, 0.2, rng);
    MetricProbSpace::new(frame, PseudoMetric::Matrix(metric), prob)
        .expect("closure of a graph metric is a pseudometric")
}

/// Mass vector over the `2^n` subsets of an `n`-element set, indexed by
/// mask, with zero mass on the empty set.
pub fn random_mass_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Rational> {
    let size = 1usize << n;
    if size == 1 {
        // the only subset is empty, so no mass function exists
        return vec![int(0)];
    }
    let mut w = vec![0i64; size];
    for _ in 0..rng.gen_range(1..=size.min(6)) {
        w[rng.gen_range(1..size)] += rng.gen_range(1..=9);
    }
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| ratio(x, total)).collect()
}

/// Mass function on points `w0, w1, ...`.
pub fn random_mass_function<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MassFunction {
    let frame = Frame::new((0..n).map(|i| format!("w{i}"))).expect("distinct names");
    MassFunction::new(frame, random_mass_vector(n, rng)).expect("generator yields valid masses")
}

/// Random propositional formula over `props` of depth at most `depth`.
pub fn random_prop<R: Rng + ?Sized>(props: &[String], depth: usize, rng: &mut R) -> PropFormula {
    let leaf = |rng: &mut R| {
        if props.is_empty() || rng.gen_bool(0.08) {
            if rng.gen_bool(0.5) {
                PropFormula::True
            } else {
                PropFormula::False
            }
        } else {
            PropFormula::atom(props.choose(rng).expect("non-empty").clone())
        }
    };
    if depth == 0 || rng.gen_bool(0.3) {
        return leaf(rng);
    }
    match rng.gen_range(0..3) {
        0 => random_prop(props, depth - 1, rng).not(),
        1 => random_prop(props, depth - 1, rng).and(random_prop(props, depth - 1, rng)),
        _ => random_prop(props, depth - 1, rng).or(random_prop(props, depth - 1, rng)),
    }
}

/// A formula true in every model whose expected distances are induced by
/// the returned mass (indexed by atom set over `basis`).
#[derive(Clone, Debug)]
pub struct PlantedFormula {
    pub formula: EdFormula,
    pub basis: AtomBasis,
    pub mass: Vec<Rational>,
}

/// Samples a mass over the atoms of `k` propositions and asserts a few
/// equalities, inequalities and Boolean combinations it satisfies.
pub fn planted_formula<R: Rng + ?Sized>(k: usize, rng: &mut R) -> PlantedFormula {
    let props: Vec<String> = ["p", "q", "r", "s"][..k].iter().map(|s| s.to_string()).collect();
    let basis = AtomBasis::new(props.clone()).expect("at most four propositions");
    let mass = random_mass_vector(basis.n(), rng);
    let e = e_values(&mass, basis.n());
    let ed = |psi: &PropFormula| -> Rational {
        e[prop_to_atom_set(psi, &basis).expect("props come from the basis") as usize].clone()
    };

    let true_literal = |rng: &mut R| -> BasicEdFormula {
        let terms = rng.gen_range(1..=2);
        let mut summands = Vec::new();
        let mut lhs = int(0);
        for _ in 0..terms {
            let arg = random_prop(&props, 2, rng);
            let coeff = if rng.gen_bool(0.6) { int(1) } else { ratio(rng.gen_range(-3..=3), rng.gen_range(1..=4)) };
            lhs += &coeff * ed(&arg);
            summands.push(Summand { coeff, arg });
        }
        let term = EdTerm { summands };
        let slack = ratio(1, rng.gen_range(5..=20));
        let (relation, bound) = match rng.gen_range(0..5) {
            0 => (Relation::Eq, lhs),
            1 => (Relation::Ge, lhs),
            2 => (Relation::Le, lhs),
            3 => (Relation::Gt, lhs - slack),
            _ => (Relation::Lt, lhs + slack),
        };
        BasicEdFormula::new(term, relation, bound)
    };

    let parts = rng.gen_range(1..=4);
    let mut conjuncts = Vec::new();
    for _ in 0..parts {
        let lit = EdFormula::Basic(true_literal(rng));
        let part = match rng.gen_range(0..4) {
            0 => {
                // a false equality under negation
                let mut wrong = true_literal(rng);
                wrong.relation = Relation::Eq;
                wrong.bound += ratio(1, rng.gen_range(2..=9));
                EdFormula::Basic(wrong).not()
            }
            1 => {
                let other = EdFormula::Basic(BasicEdFormula::new(
                    EdTerm::single(random_prop(&props, 2, rng)),
                    Relation::Ge,
                    ratio(rng.gen_range(0..=4), 4),
                ));
                if rng.gen_bool(0.5) {
                    lit.or(other)
                } else {
                    other.or(lit)
                }
            }
            _ => lit,
        };
        conjuncts.push(part);
    }
    PlantedFormula {
        formula: EdFormula::conjoin(conjuncts).expect("at least one part"),
        basis,
        mass,
    }
}
