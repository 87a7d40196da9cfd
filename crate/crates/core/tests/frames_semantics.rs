mod common;

use common::*;
use mrpcorr::frames::{lift, shift, ConceptLattice, Frame, GraphFrame};
use mrpcorr::relcalc::{e_compatibility, is_subset, FiniteRelation, Orientation};
use mrpcorr::semantics::{frame_valid, ValidityOptions};
use mrpcorr::syntax::{Modality, ModalString, Mrp};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sorted_extents(l: &ConceptLattice) -> Vec<u64> {
    let mut v: Vec<u64> = l.concepts().iter().map(|c| c.extent).collect();
    v.sort();
    v
}

/// Validity of `lhs(p) <= rhs(p)` on a graph frame, read off the oracle
/// concept list and the defining polar formulas.
fn graph_valid_oracle(g: &GraphFrame, lhs: &ModalString, rhs: &ModalString) -> bool {
    let n = g.size();
    let (e, rb, rd) = (matrix(g.e()), matrix(g.r_box()), matrix(g.r_dia()));
    let incidence: Matrix = e.iter().map(|row| row.iter().map(|b| !b).collect()).collect();
    let eval = |s: &ModalString, c: &(Vec<bool>, Vec<bool>)| {
        s.0.iter().rev().fold(c.clone(), |(ext, int), m| match m {
            Modality::Box => {
                let ext = neg0(&rb, &int);
                let int = neg1(&e, &ext, n);
                (ext, int)
            }
            Modality::Dia => {
                let int = neg0(&rd, &ext);
                let ext = neg0(&e, &int);
                (ext, int)
            }
            _ => unreachable!("mrp strings"),
        })
    };
    concepts(&incidence, n).iter().all(|c| {
        let (l, r) = (eval(lhs, c).0, eval(rhs, c).0);
        l.iter().zip(&r).all(|(a, b)| !a || *b)
    })
}

fn random_mrp(rng: &mut ChaCha8Rng) -> Mrp {
    let mut side = || {
        let len = rng.gen_range(0..=3);
        ModalString((0..len).map(|_| if rng.gen_bool(0.5) { Modality::Box } else { Modality::Dia }).collect())
    };
    Mrp { var: "p".into(), lhs: side(), rhs: side() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lattices_match_closure_enumeration(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n);
        let incidence: Matrix = matrix(g.e()).iter().map(|row| row.iter().map(|b| !b).collect()).collect();
        let mut expected: Vec<u64> = concepts(&incidence, n).iter().map(|(ext, _)| set(ext)).collect();
        expected.sort();
        prop_assert_eq!(sorted_extents(&ConceptLattice::of_graph(&g)), expected.clone());
        prop_assert_eq!(sorted_extents(&ConceptLattice::of_polarity(&lift(&g))), expected);
    }

    #[test]
    fn kripke_validity_matches_oracle(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_kripke(&mut rng, n);
        let mrp = random_mrp(&mut rng);
        let got = frame_valid(&Frame::Kripke(k.clone()), &mrp.to_sequent(), &ValidityOptions::default()).unwrap();
        let expected = kripke_valid(&matrix(k.r_box()), &matrix(k.r_dia()), &mrp.lhs.0, &mrp.rhs.0);
        prop_assert_eq!(got.is_valid(), expected, "{} on {:?}", mrp, k);
    }

    #[test]
    fn graph_validity_matches_oracle(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n);
        let mrp = random_mrp(&mut rng);
        let got = frame_valid(&Frame::Graph(g.clone()), &mrp.to_sequent(), &ValidityOptions::default()).unwrap();
        prop_assert_eq!(got.is_valid(), graph_valid_oracle(&g, &mrp.lhs, &mrp.rhs), "{}", mrp);
    }

    #[test]
    fn compatibility_matches_definition(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_reflexive(&mut rng, n);
        let r = random_relation(&mut rng, n, n, 0.5);
        let (em, rm) = (matrix(&e), matrix(&r));
        let stable0 = |s: &[bool]| { let c = neg0(&em, &neg1(&em, s, n)); c.iter().zip(s).all(|(a, b)| !a || *b) };
        let stable1 = |s: &[bool]| { let c = neg1(&em, &neg0(&em, s), n); c.iter().zip(s).all(|(a, b)| !a || *b) };
        let point = |z: usize| (0..n).map(|i| i == z).collect::<Vec<bool>>();
        let box_ok = (0..n).all(|z| stable0(&neg0(&rm, &point(z))) && stable1(&neg1(&rm, &point(z), n)));
        let dia_ok = (0..n).all(|z| stable1(&neg0(&rm, &point(z))) && stable0(&neg1(&rm, &point(z), n)));
        prop_assert_eq!(e_compatibility(&r, &e, Orientation::Box).unwrap().is_none(), box_ok);
        prop_assert_eq!(e_compatibility(&r, &e, Orientation::Dia).unwrap().is_none(), dia_ok);
    }
}

#[test]
fn shifted_lattices_are_powersets() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=5 {
        let k = random_kripke(&mut rng, n);
        let l = ConceptLattice::of_graph(&shift(&k));
        assert_eq!(l.len(), 1 << n);
        assert_eq!(sorted_extents(&l), (0..1u64 << n).collect::<Vec<_>>());
        for i in 0..l.len() {
            for j in 0..l.len() {
                assert_eq!(l.leq(i, j), is_subset(l.get(i).extent, l.get(j).extent));
            }
        }
    }
}

#[test]
fn kripke_axioms_match_first_order_properties() {
    for n in 1..=3 {
        assert_eq!(first_order_agreement(n), Ok(1 << (n * n)));
    }
}

#[test]
fn graph_sampler_is_compatible() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let g = random_graph(&mut rng, n);
        assert!(e_compatibility(g.r_box(), g.e(), Orientation::Box).unwrap().is_none());
        assert!(e_compatibility(g.r_dia(), g.e(), Orientation::Dia).unwrap().is_none());
        let _ = FiniteRelation::identity(n);
    }
}
