mod common;

use common::laws::{delta_collapse, galois_laws, monoid_laws, CompatibleTriples};
use common::{compatible_relation, random_reflexive};
use mrpcorr::relcalc::{FiniteRelation, Orientation, Set};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn relation_and_sets() -> impl Strategy<Value = (FiniteRelation, [Set; 2], [Set; 2])> {
    (1usize..=6, 1usize..=6, any::<u64>(), any::<[u64; 4]>()).prop_map(|(s, t, code, sets)| {
        let r = FiniteRelation::from_code(s, t, code & mask(s * t));
        (r, [sets[0] & mask(s), sets[1] & mask(s)], [sets[2] & mask(t), sets[3] & mask(t)])
    })
}

fn triples(n: usize, seed: u64) -> (FiniteRelation, [FiniteRelation; 3], [FiniteRelation; 3]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = random_reflexive(&mut rng, n);
    let boxes = std::array::from_fn(|_| compatible_relation(&mut rng, &e, Orientation::Box));
    let dias = std::array::from_fn(|_| compatible_relation(&mut rng, &e, Orientation::Dia));
    (e, boxes, dias)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn polar_operator_laws((t, u, v) in relation_and_sets()) {
        prop_assert_eq!(galois_laws(&t, u, v), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn mediated_compositions_collapse_on_delta(n in 1usize..=5, a in any::<u64>(), b in any::<u64>()) {
        let r = FiniteRelation::from_code(n, n, a & mask(n * n));
        let t = FiniteRelation::from_code(n, n, b & mask(n * n));
        prop_assert_eq!(delta_collapse(&r, &t), Ok(()));
    }

    #[test]
    fn compatible_relations_form_monoids(n in 1usize..=4, seed in any::<u64>()) {
        let (e, boxes, dias) = triples(n, seed);
        prop_assert_eq!(monoid_laws(&CompatibleTriples { e: &e, boxes, dias }), Ok(()));
    }
}

#[test]
fn sampler_reaches_non_unit_relations() {
    let mut non_unit = 0;
    for seed in 0..200 {
        let (e, boxes, _) = triples(4, seed);
        non_unit += boxes.iter().filter(|r| **r != e).count();
    }
    assert!(non_unit > 300, "only {non_unit} of 600 sampled relations differ from E");
}

/// The `[1]`-image condition is not preserved by `∗`, even for compatible
/// operands.
#[test]
fn ast_breaks_the_second_compatibility_condition() {
    use mrpcorr::relcalc::{ast, e_compatibility, is_e_compatible};
    let e = FiniteRelation::from_pairs(3, 3, [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]);
    let r = FiniteRelation::from_pairs(3, 3, [(0, 0), (0, 1), (2, 0), (2, 1)]);
    let t = FiniteRelation::from_pairs(3, 3, [(0, 0), (0, 2), (1, 0), (1, 2), (2, 0), (2, 2)]);
    assert!(is_e_compatible(&r, &e, Orientation::Box).unwrap());
    assert!(is_e_compatible(&t, &e, Orientation::Dia).unwrap());
    let a = ast(&r, &t);
    assert_eq!(a, FiniteRelation::from_pairs(3, 3, [(0, 1), (2, 1)]));
    let w = e_compatibility(&a, &e, Orientation::Box).unwrap().expect("violation");
    assert_eq!((w.side, w.element, w.set, w.closure), (1, 0, 0b101, 0b111));
}
