use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::relcalc::{
    e_compatibility, full_set, singleton, FiniteDomain, FiniteRelation, Orientation, Set,
};

use super::{lattice::ConceptLattice, FrameError, GraphFrame, KripkeFrame};

/// Largest size at which every valid graph frame is enumerated.
pub const EXHAUSTIVE_FULL_CAP: usize = 2;
/// Largest size at which every reflexive `E` is enumerated.
pub const EXHAUSTIVE_E_CAP: usize = 4;
/// Largest size for random generation.
pub const RANDOM_CAP: usize = 8;
/// Largest Kripke size enumerated exhaustively.
pub const KRIPKE_EXHAUSTIVE_CAP: usize = 3;

const MAX_ATTEMPTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenMode {
    /// Every valid frame at size ≤ 2; every reflexive `E` with `count`
    /// sampled relation pairs each at sizes 3–4.
    Exhaustive,
    /// `count` frames with random `E`.
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenParams {
    pub size: usize,
    pub mode: GenMode,
    pub count: usize,
    pub seed: u64,
    /// Emit `(Z, E, D, E)` for every distinct `E`.
    pub pawlak_witness: bool,
}

impl GenParams {
    pub fn random(size: usize, count: usize, seed: u64) -> Self {
        GenParams { size, mode: GenMode::Random, count, seed, pawlak_witness: true }
    }

    pub fn exhaustive(size: usize) -> Self {
        GenParams { size, mode: GenMode::Exhaustive, count: 1, seed: 0, pawlak_witness: true }
    }
}

/// Rejection-sampling statistics.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GenStats {
    pub proposals: usize,
    pub accepted: usize,
    /// Draws that exhausted the attempt budget and fell back to `E` (box)
    /// or `D` (diamond).
    pub fallbacks: usize,
    pub frames: usize,
}

impl GenStats {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            1.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }
}

pub fn graph_domain(n: usize) -> FiniteDomain {
    FiniteDomain::new((1..=n).map(|i| format!("z{i}"))).expect("small domain")
}

fn reflexive_from_code(n: usize, code: u64) -> FiniteRelation {
    let mut e = FiniteRelation::identity(n);
    let mut bit = 0;
    for u in 0..n {
        for v in 0..n {
            if u != v {
                if code >> bit & 1 == 1 {
                    e.insert(u, v);
                }
                bit += 1;
            }
        }
    }
    e
}

fn random_relation(rng: &mut ChaCha8Rng, n: usize) -> FiniteRelation {
    FiniteRelation::from_rows(n, (0..n).map(|_| rng.gen::<u64>() & full_set(n)).collect())
}

struct Sampler<'a> {
    e: &'a FiniteRelation,
    extents: Vec<Set>,
    intents: Vec<Set>,
}

impl<'a> Sampler<'a> {
    fn new(e: &'a FiniteRelation) -> Self {
        let n = e.src_len();
        let lattice = ConceptLattice::from_context(graph_domain(n), graph_domain(n), e.complement());
        Sampler {
            e,
            extents: lattice.concepts().iter().map(|c| c.extent).collect(),
            intents: lattice.concepts().iter().map(|c| c.intent).collect(),
        }
    }

    /// Half of the proposals are uniform; the other half pick every
    /// complement column among the stable sets, which satisfies one of the
    /// two conditions outright.
    fn propose(&self, rng: &mut ChaCha8Rng, orientation: Orientation) -> FiniteRelation {
        let n = self.e.src_len();
        if rng.gen_bool(0.5) {
            return random_relation(rng, n);
        }
        let pool = match orientation {
            Orientation::Box => &self.extents,
            Orientation::Dia => &self.intents,
        };
        let mut r = FiniteRelation::empty(n, n);
        for col in 0..n {
            let outside = pool[rng.gen_range(0..pool.len())];
            for u in 0..n {
                if outside & singleton(u) == 0 {
                    r.insert(u, col);
                }
            }
        }
        r
    }

    fn sample(&self, rng: &mut ChaCha8Rng, orientation: Orientation, stats: &mut GenStats) -> FiniteRelation {
        for _ in 0..MAX_ATTEMPTS {
            stats.proposals += 1;
            let r = self.propose(rng, orientation);
            if e_compatibility(&r, self.e, orientation).expect("reflexive E").is_none() {
                stats.accepted += 1;
                return r;
            }
        }
        stats.fallbacks += 1;
        match orientation {
            Orientation::Box => self.e.clone(),
            Orientation::Dia => self.e.converse(),
        }
    }
}

fn all_compatible(e: &FiniteRelation, orientation: Orientation) -> Vec<FiniteRelation> {
    let n = e.src_len();
    (0..1u64 << (n * n))
        .map(|code| FiniteRelation::from_code(n, n, code))
        .filter(|r| e_compatibility(r, e, orientation).expect("reflexive E").is_none())
        .collect()
}

/// Deterministic population of valid graph frames.
pub fn graph_frames(params: &GenParams) -> Result<(Vec<GraphFrame>, GenStats), FrameError> {
    let n = params.size;
    let cap = match params.mode {
        GenMode::Exhaustive => EXHAUSTIVE_E_CAP,
        GenMode::Random => RANDOM_CAP,
    };
    if n == 0 || n > cap {
        return Err(FrameError::CapExceeded { size: n, cap, what: "graph frame generation" });
    }
    let dom = graph_domain(n);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut stats = GenStats::default();
    let mut out = Vec::new();
    let mut seen_e = HashSet::new();
    let off_diag = n * (n - 1);
    let mut push_witness = |e: &FiniteRelation, out: &mut Vec<GraphFrame>| {
        if params.pawlak_witness && seen_e.insert(e.clone()) {
            out.push(GraphFrame::pawlak_witness(dom.clone(), e.clone()).expect("shapes"));
        }
    };
    match params.mode {
        GenMode::Exhaustive if n <= EXHAUSTIVE_FULL_CAP => {
            for code in 0..1u64 << off_diag {
                let e = reflexive_from_code(n, code);
                let boxes = all_compatible(&e, Orientation::Box);
                let dias = all_compatible(&e, Orientation::Dia);
                for rb in &boxes {
                    for rd in &dias {
                        out.push(GraphFrame::new(dom.clone(), e.clone(), rb.clone(), rd.clone())?);
                    }
                }
            }
        }
        GenMode::Exhaustive => {
            for code in 0..1u64 << off_diag {
                let e = reflexive_from_code(n, code);
                push_witness(&e, &mut out);
                let sampler = Sampler::new(&e);
                for _ in 0..params.count {
                    let rb = sampler.sample(&mut rng, Orientation::Box, &mut stats);
                    let rd = sampler.sample(&mut rng, Orientation::Dia, &mut stats);
                    out.push(GraphFrame::new(dom.clone(), e.clone(), rb, rd)?);
                }
            }
        }
        GenMode::Random => {
            for _ in 0..params.count {
                let e = reflexive_from_code(n, rng.gen::<u64>() & full_set(off_diag));
                push_witness(&e, &mut out);
                let sampler = Sampler::new(&e);
                let rb = sampler.sample(&mut rng, Orientation::Box, &mut stats);
                let rd = sampler.sample(&mut rng, Orientation::Dia, &mut stats);
                out.push(GraphFrame::new(dom.clone(), e, rb, rd)?);
            }
        }
    }
    stats.frames = out.len();
    Ok((out, stats))
}

/// Kripke frames of size `n`. Exhaustive mode enumerates every pair of
/// relations (`bimodal`) or every single relation used for both
/// modalities; random mode draws `count` frames.
pub fn kripke_frames(
    n: usize,
    mode: GenMode,
    bimodal: bool,
    count: usize,
    seed: u64,
) -> Result<Vec<KripkeFrame>, FrameError> {
    let dom = FiniteDomain::numbered(n);
    match mode {
        GenMode::Exhaustive => {
            if n == 0 || n > KRIPKE_EXHAUSTIVE_CAP {
                return Err(FrameError::CapExceeded {
                    size: n,
                    cap: KRIPKE_EXHAUSTIVE_CAP,
                    what: "exhaustive Kripke enumeration",
                });
            }
            let rels: Vec<FiniteRelation> =
                (0..1u64 << (n * n)).map(|c| FiniteRelation::from_code(n, n, c)).collect();
            let mut out = Vec::new();
            for rb in &rels {
                if bimodal {
                    for rd in &rels {
                        out.push(KripkeFrame::new(dom.clone(), rb.clone(), rd.clone())?);
                    }
                } else {
                    out.push(KripkeFrame::unimodal(dom.clone(), rb.clone())?);
                }
            }
            Ok(out)
        }
        GenMode::Random => {
            if n == 0 || n > RANDOM_CAP {
                return Err(FrameError::CapExceeded { size: n, cap: RANDOM_CAP, what: "Kripke generation" });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let rb = random_relation(&mut rng, n);
                    if bimodal {
                        let rd = random_relation(&mut rng, n);
                        KripkeFrame::new(dom.clone(), rb, rd)
                    } else {
                        KripkeFrame::unimodal(dom.clone(), rb)
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::validate_graph;

    #[test]
    fn size_one_exhaustive() {
        let (frames, _) = graph_frames(&GenParams::exhaustive(1)).unwrap();
        assert_eq!(frames.len(), 4);
        let (frames2, _) = graph_frames(&GenParams::exhaustive(2)).unwrap();
        assert!(frames2.iter().all(|f| validate_graph(f).is_empty()));
        assert!(frames2.len() > 4);
    }

    #[test]
    fn seeded_runs_reproduce() {
        let p = GenParams::random(4, 30, 7);
        let (a, sa) = graph_frames(&p).unwrap();
        let (b, sb) = graph_frames(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(sa, sb);
        assert!(a.iter().all(|f| validate_graph(f).is_empty()));
    }

    #[test]
    fn witness_for_every_e() {
        let (frames, _) = graph_frames(&GenParams::random(3, 40, 3)).unwrap();
        let es: HashSet<_> = frames.iter().map(|f| f.e().clone()).collect();
        for e in es {
            assert!(frames.iter().any(|f| f.e() == &e && f.r_box() == &e && f.r_dia() == &e.converse()));
        }
    }

    #[test]
    fn caps() {
        assert!(graph_frames(&GenParams::exhaustive(5)).is_err());
        assert!(kripke_frames(4, GenMode::Exhaustive, false, 0, 0).is_err());
        assert_eq!(kripke_frames(2, GenMode::Exhaustive, true, 0, 0).unwrap().len(), 256);
    }
}
