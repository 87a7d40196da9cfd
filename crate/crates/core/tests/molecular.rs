mod common;

use common::laws::{molecular_graph, molecular_kripke};
use common::{block_string, random_graph, random_kripke};
use mrpcorr::syntax::Modality;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn strings(rng: &mut ChaCha8Rng, count: usize) -> Vec<mrpcorr::syntax::ModalString> {
    (0..count)
        .map(|_| {
            let lead = if rng.gen_bool(0.5) { Modality::Dia } else { Modality::Box };
            let blocks = rng.gen_range(1..=3);
            block_string(rng, lead, blocks)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_terms_match_formulas(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n);
        for s in strings(&mut rng, 20) {
            prop_assert_eq!(molecular_graph(&g, &s), Ok(()));
        }
    }

    #[test]
    fn kripke_terms_match_formulas(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_kripke(&mut rng, n);
        for s in strings(&mut rng, 20) {
            prop_assert_eq!(molecular_kripke(&k, &s), Ok(()));
        }
    }
}
