use std::collections::BTreeSet;

use edlogic::decision::{check_consistency, reproduces_e, satisfies, Model};
use edlogic::evidence::{doubt_from_mass, is_doubt_function, mass_from_doubt};
use edlogic::logic::{parse, EdFormula};
use edlogic::product::lambda_combine;
use edlogic::sample::{planted_formula, random_mass_function, random_prop, random_space};
use edlogic::space::PointSet;
use edlogic::{Limits, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..=12).prop_flat_map(|q| (0..=q).prop_map(move |p| Rational::new(p.into(), q.into())))
}

fn random_model(seed: u64) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=5);
    let space = random_space(n, &mut rng);
    let props = ["p", "q", "r"];
    let valuation = (0..n)
        .map(|_| {
            props
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .map(|s| s.to_string())
                .collect::<BTreeSet<_>>()
        })
        .collect();
    Model::new(space, props.iter().map(|s| s.to_string()).collect(), valuation).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expected_distance_is_a_doubt_function(seed in any::<u64>(), n in 1usize..=5) {
        let s = random_space(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let table = s.ed_set_function(16).unwrap();
        prop_assert!(is_doubt_function(&table));
    }

    #[test]
    fn dual_measures_are_consistent(seed in any::<u64>(), n in 1usize..=6, mask in any::<u64>()) {
        let s = random_space(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let set = PointSet::from_mask(mask & ((1 << n) - 1));
        let q = s.dual_measures(&set).unwrap();
        prop_assert_eq!(&q.ed + &q.es, Rational::one());
        prop_assert_eq!(&q.ea, &s.expected_distance(&set.complement(n)).unwrap());
        prop_assert_eq!(&q.ea + &q.er, Rational::one());
        prop_assert!(q.ed >= Rational::zero() && q.ed <= Rational::one());
    }

    #[test]
    fn mobius_round_trip(seed in any::<u64>(), n in 1usize..=5) {
        let m = random_mass_function(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let back = mass_from_doubt(&doubt_from_mass(&m)).unwrap();
        prop_assert_eq!(back.values(), m.values());
    }

    #[test]
    fn lambda_is_symmetric_and_recursive(ds in prop::collection::vec(unit_rational(), 1..5), extra in unit_rational()) {
        let whole = lambda_combine(&ds).unwrap();
        let mut rev = ds.clone();
        rev.reverse();
        prop_assert_eq!(&lambda_combine(&rev).unwrap(), &whole);
        let mut longer = ds.clone();
        longer.push(extra.clone());
        let grown = lambda_combine(&longer).unwrap();
        prop_assert_eq!(&grown, &lambda_combine(&[whole.clone(), extra]).unwrap());
        prop_assert!(whole <= grown);
    }

    #[test]
    fn axioms_hold_in_random_models(seed in any::<u64>()) {
        let m = random_model(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let props: Vec<String> = ["p", "q", "r"].iter().map(|s| s.to_string()).collect();
        for text in ["ED(true) = 0", "ED(false) = 1", "ED(p & !p) = 1", "ED(p | !p) = 0"] {
            prop_assert!(satisfies(&m, &parse(text).unwrap()).unwrap(), "{}", text);
        }
        let mut pick = || format!("({})", random_prop(&props, 2, &mut rng));
        let (a, b, c) = (pick(), pick(), pick());
        let instances = [
            format!("ED({a}) >= 0"),
            format!("ED({a} & {b}) >= ED({a}) + ED({b}) - ED({a} | {b})"),
            format!(
                "ED({a} & {b} & {c}) >= ED({a}) + ED({b}) + ED({c}) - ED({a} | {b}) - ED({a} | {c}) - ED({b} | {c}) + ED({a} | {b} | {c})"
            ),
            // substitution of equivalent arguments
            format!("ED(!({a} | {b})) = ED(!{a} & !{b})"),
            format!("ED({a} & {b}) >= ED({a})"),
        ];
        for text in &instances {
            let f = parse(text).unwrap();
            prop_assert!(satisfies(&m, &f).unwrap(), "{}", text);
        }
    }

    #[test]
    fn printing_then_parsing_is_identity(seed in any::<u64>(), k in 0usize..=3) {
        let f = planted_formula(k, &mut ChaCha8Rng::seed_from_u64(seed)).formula;
        let again = parse(&f.to_string()).unwrap();
        prop_assert_eq!(again, f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planted_formulas_are_found_consistent(seed in any::<u64>(), k in 0usize..=2) {
        let p = planted_formula(k, &mut ChaCha8Rng::seed_from_u64(seed));
        let r = check_consistency(&p.formula, &Limits::default()).unwrap();
        let w = r.witness().expect("planted formulas are satisfiable");
        let m = w.model.as_ref().unwrap();
        prop_assert!(satisfies(m, &p.formula).unwrap());
        let all = 0..(1u64 << w.basis.n());
        prop_assert!(reproduces_e(m, &w.basis, &w.e, all).unwrap());
        m.space().check_axioms(true).unwrap();
    }

    #[test]
    fn a_formula_or_its_negation_is_consistent(seed in any::<u64>(), k in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f: EdFormula = planted_formula(k, &mut rng).formula;
        // perturb so that both polarities get exercised
        let g = if rng.gen_bool(0.5) { f.not() } else { f };
        let limits = Limits::default();
        let pos = check_consistency(&g, &limits).unwrap().is_consistent();
        let neg = check_consistency(&g.clone().not(), &limits).unwrap().is_consistent();
        prop_assert!(pos || neg);
    }
}
