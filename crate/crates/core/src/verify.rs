//! Batch drivers that instance-check correspondence, shifting and lifting
//! on populations of generated frames.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::correspond::{
    correspondent, correspondent_raw, eval_term, ineq_holds, lift_inequality, normalize_inequality,
    pair_labels, translate_tau, translate_tau_inequality, CorrespondError, Lang, RelInequality, Row,
};
use crate::frames::{
    graph_frames, kripke_frames, lift, shift, Frame, FrameDocument, FrameError, GenMode, GenParams, GraphFrame,
    KripkeFrame, ValuationDocument, KRIPKE_EXHAUSTIVE_CAP,
};
use crate::relcalc::{FiniteDomain, FiniteRelation};
use crate::semantics::{frame_valid, SemanticsError, Validity, ValidityOptions};
use crate::syntax::{Mrp, SyntaxError};

/// Largest size enumerated exhaustively by the graph drivers.
pub const GRAPH_EXHAUSTIVE_SIZE: usize = 2;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Correspond(#[from] CorrespondError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Kripke,
    Graph,
    Polarity,
}

impl Semantics {
    pub fn lang(self) -> Lang {
        match self {
            Semantics::Kripke => Lang::KRel,
            Semantics::Graph => Lang::GRel,
            Semantics::Polarity => Lang::PRel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Frames of every size from 1 up to this are tested.
    pub max_size: usize,
    /// Random frames per size above the exhaustive range.
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; 0 picks the number of CPUs.
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_size: 4, samples: 200, seed: 0, jobs: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Population {
    pub size: usize,
    pub mode: GenMode,
    pub frames: usize,
}

/// A failed check with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub check: String,
    pub row: Row,
    pub inequality: String,
    pub frame: FrameDocument,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countervaluation: Option<BTreeMap<String, ValuationDocument>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterpair: Option<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyntacticCheck {
    pub row: Row,
    pub expected: String,
    pub got: String,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: &'static str,
    pub mrp: String,
    pub semantics: Semantics,
    pub seed: u64,
    pub samples: usize,
    pub populations: Vec<Population>,
    pub frames_tested: usize,
    pub agreements: usize,
    pub syntactic: Vec<SyntacticCheck>,
    pub disagreements: Vec<Disagreement>,
    /// Not serialized, so that seeded reruns give identical JSON.
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.syntactic.iter().all(|s| s.equal)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn summary(&self) -> String {
        let sizes: Vec<String> =
            self.populations.iter().map(|p| format!("n={} {:?}: {}", p.size, p.mode, p.frames)).collect();
        let syntactic_ok = self.syntactic.iter().filter(|s| s.equal).count();
        let mut s = format!(
            "{} {} [{}]: {} frames ({}), {} agreements, {} disagreements",
            self.check,
            self.mrp,
            format!("{:?}", self.semantics).to_lowercase(),
            self.frames_tested,
            sizes.join(", "),
            self.agreements,
            self.disagreements.len()
        );
        if !self.syntactic.is_empty() {
            s.push_str(&format!(", syntactic {}/{}", syntactic_ok, self.syntactic.len()));
        }
        s
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, VerifyError> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| VerifyError::Pool(e.to_string()))
}

fn size_seed(seed: u64, n: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(n as u64)
}

/// Kripke population of size `n`: every bimodal frame up to the exhaustive
/// cap, `samples` random ones above it.
fn kripke_population(n: usize, opts: &VerifyOptions) -> Result<(GenMode, Vec<KripkeFrame>), VerifyError> {
    if n <= KRIPKE_EXHAUSTIVE_CAP {
        let dom = FiniteDomain::numbered(n);
        let side = 1u64 << (n * n);
        let frames = (0..side * side)
            .into_par_iter()
            .map(|i| {
                let rb = FiniteRelation::from_code(n, n, i / side);
                let rd = FiniteRelation::from_code(n, n, i % side);
                KripkeFrame::new(dom.clone(), rb, rd).expect("square relations")
            })
            .collect();
        Ok((GenMode::Exhaustive, frames))
    } else {
        let frames = kripke_frames(n, GenMode::Random, true, opts.samples, size_seed(opts.seed, n))?;
        Ok((GenMode::Random, frames))
    }
}

fn graph_population(n: usize, opts: &VerifyOptions) -> Result<(GenMode, Vec<GraphFrame>), VerifyError> {
    if n <= GRAPH_EXHAUSTIVE_SIZE {
        Ok((GenMode::Exhaustive, graph_frames(&GenParams::exhaustive(n))?.0))
    } else {
        let (frames, _) = graph_frames(&GenParams::random(n, opts.samples, size_seed(opts.seed, n)))?;
        Ok((GenMode::Random, frames))
    }
}

fn populations(semantics: Semantics, opts: &VerifyOptions) -> Result<Vec<(Population, Vec<Frame>)>, VerifyError> {
    let mut out = Vec::new();
    for n in 1..=opts.max_size {
        let (mode, frames): (GenMode, Vec<Frame>) = match semantics {
            Semantics::Kripke => {
                let (m, f) = kripke_population(n, opts)?;
                (m, f.into_iter().map(Frame::Kripke).collect())
            }
            Semantics::Graph => {
                let (m, f) = graph_population(n, opts)?;
                (m, f.into_iter().map(Frame::Graph).collect())
            }
            Semantics::Polarity => {
                let (m, f) = graph_population(n, opts)?;
                (m, f.iter().map(|g| Frame::Polarity(lift(g))).collect())
            }
        };
        out.push((Population { size: n, mode, frames: frames.len() }, frames));
    }
    Ok(out)
}

/// Outcome of the checks on one frame.
#[derive(Default)]
struct FrameOutcome {
    agreements: usize,
    disagreements: Vec<Disagreement>,
}

impl FrameOutcome {
    fn record(&mut self, ok: bool, make: impl FnOnce() -> Disagreement) {
        if ok {
            self.agreements += 1;
        } else {
            self.disagreements.push(make());
        }
    }
}

fn run<F>(frames: Vec<Frame>, jobs: usize, check: F) -> Result<FrameOutcome, VerifyError>
where
    F: Fn(&Frame) -> Result<FrameOutcome, VerifyError> + Sync,
{
    let results: Vec<Result<FrameOutcome, VerifyError>> = pool(jobs)?.install(|| frames.par_iter().map(&check).collect());
    let mut total = FrameOutcome::default();
    for r in results {
        let r = r?;
        total.agreements += r.agreements;
        total.disagreements.extend(r.disagreements);
    }
    total.disagreements.sort_by_cached_key(|d| (d.frame.to_json(), d.check.clone(), d.row));
    Ok(total)
}

fn finish(
    check: &'static str,
    mrp: &Mrp,
    semantics: Semantics,
    opts: &VerifyOptions,
    pops: Vec<Population>,
    outcome: FrameOutcome,
    syntactic: Vec<SyntacticCheck>,
    start: Instant,
) -> VerificationReport {
    VerificationReport {
        check,
        mrp: mrp.to_string(),
        semantics,
        seed: opts.seed,
        samples: opts.samples,
        frames_tested: pops.iter().map(|p| p.frames).sum(),
        populations: pops,
        agreements: outcome.agreements,
        syntactic,
        disagreements: outcome.disagreements,
        wall_clock: start.elapsed(),
    }
}

/// Checks `frame_valid(f, mrp) ⟺ ineq_holds(correspondent, f)` for every
/// row of the correspondent, in raw and normalized form.
pub fn verify_correspondence(
    mrp: &Mrp,
    semantics: Semantics,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let lang = semantics.lang();
    let mut forms: Vec<(String, Row, RelInequality)> = Vec::new();
    for (row, i) in correspondent_raw(mrp, lang)? {
        forms.push(("normalized".into(), row, normalize_inequality(&i)));
        forms.push(("raw".into(), row, i));
    }
    let seq = mrp.to_sequent();
    let vopts = ValidityOptions::default();
    let pops = populations(semantics, opts)?;
    let (meta, frames): (Vec<Population>, Vec<Vec<Frame>>) = pops.into_iter().unzip();
    let outcome = run(frames.into_iter().flatten().collect(), opts.jobs, |f| {
        let validity = frame_valid(f, &seq, &vopts)?;
        let mut out = FrameOutcome::default();
        for (form, row, ineq) in &forms {
            let h = ineq_holds(ineq, f)?;
            out.record(h.holds == validity.is_valid(), || Disagreement {
                check: format!("correspondence ({form})"),
                row: *row,
                inequality: ineq.to_string(),
                frame: FrameDocument::from_frame(f),
                detail: format!("frame_valid = {}, ineq_holds = {}", validity.is_valid(), h.holds),
                countervaluation: match &validity {
                    Validity::Invalid(v) => Some(FrameDocument::valuation_document(f, v)),
                    Validity::Valid => None,
                },
                counterpair: h.counterpair.map(|p| pair_labels(&ineq.lhs, f, p)),
            });
        }
        Ok(out)
    })?;
    Ok(finish("correspondence", mrp, semantics, opts, meta, outcome, Vec::new(), start))
}

/// Syntactic τ-identity of the GRel and KRel correspondents, then semantic
/// agreement of the two on random Kripke frames and their shifts.
pub fn verify_shifting(mrp: &Mrp, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let grel_raw = correspondent_raw(mrp, Lang::GRel)?;
    let grel = correspondent(mrp, Lang::GRel)?;
    let krel = correspondent(mrp, Lang::KRel)?;
    let mut syntactic = Vec::new();
    for ((row, g), (_, k)) in grel.iter().zip(&krel) {
        let got = normalize_inequality(&translate_tau_inequality(g)?);
        syntactic.push(SyntacticCheck { row: *row, expected: k.to_string(), got: got.to_string(), equal: got == *k });
    }
    let mut meta = Vec::new();
    let mut frames = Vec::new();
    for n in 1..=opts.max_size {
        let ks = kripke_frames(n, GenMode::Random, true, opts.samples, size_seed(opts.seed, n))?;
        meta.push(Population { size: n, mode: GenMode::Random, frames: ks.len() });
        frames.extend(ks.into_iter().map(Frame::Kripke));
    }
    let outcome = run(frames, opts.jobs, |x| {
        let Frame::Kripke(k) = x else { unreachable!("Kripke population") };
        let shifted = Frame::Graph(shift(k));
        let mut out = FrameOutcome::default();
        for (((row, g), (_, graw)), (_, kr)) in grel.iter().zip(&grel_raw).zip(&krel) {
            let hk = ineq_holds(kr, x)?;
            let hg = ineq_holds(g, &shifted)?;
            out.record(hk.holds == hg.holds, || Disagreement {
                check: "shifting".into(),
                row: *row,
                inequality: format!("{kr}  vs  {g}"),
                frame: FrameDocument::from_frame(x),
                detail: format!("KRel holds = {}, GRel on shift holds = {}", hk.holds, hg.holds),
                countervaluation: None,
                counterpair: hk.counterpair.or(hg.counterpair).map(|p| pair_labels(&kr.lhs, x, p)),
            });
            for (side, t) in [("lhs", &graw.lhs), ("rhs", &graw.rhs)] {
                let direct = eval_term(&translate_tau(t)?, x)?;
                let via_shift = eval_term(t, &shifted)?;
                out.record(direct == via_shift, || Disagreement {
                    check: format!("translation ({side})"),
                    row: *row,
                    inequality: t.to_string(),
                    frame: FrameDocument::from_frame(x),
                    detail: format!("τ-image on X: {direct:?}; term on shift(X): {via_shift:?}"),
                    countervaluation: None,
                    counterpair: direct.first_excess(&via_shift).or(via_shift.first_excess(&direct)).map(|p| pair_labels(t, &shifted, p)),
                });
            }
        }
        Ok(out)
    })?;
    Ok(finish("shifting", mrp, Semantics::Kripke, opts, meta, outcome, syntactic, start))
}

/// Checks that each PRel correspondent is the complement-coded lifting of
/// the GRel one: its sides evaluated on `lift(f)` equal the complements of
/// the opposite GRel sides on `f`, and the two inclusions agree.
pub fn verify_lifting(mrp: &Mrp, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let grel_raw = correspondent_raw(mrp, Lang::GRel)?;
    let prel = correspondent(mrp, Lang::PRel)?;
    let prel_raw = correspondent_raw(mrp, Lang::PRel)?;
    let mut syntactic = Vec::new();
    for ((row, g), (_, p)) in grel_raw.iter().zip(&prel) {
        let got = normalize_inequality(&lift_inequality(g)?);
        syntactic.push(SyntacticCheck { row: *row, expected: p.to_string(), got: got.to_string(), equal: got == *p });
    }
    let pops = populations(Semantics::Graph, opts)?;
    let (meta, frames): (Vec<Population>, Vec<Vec<Frame>>) = pops.into_iter().unzip();
    let outcome = run(frames.into_iter().flatten().collect(), opts.jobs, |f| {
        let Frame::Graph(g) = f else { unreachable!("graph population") };
        let lifted = Frame::Polarity(lift(g));
        let mut out = FrameOutcome::default();
        for (((row, gi), (_, pi)), (_, praw)) in grel_raw.iter().zip(&prel).zip(&prel_raw) {
            for p in [pi, praw] {
                for (side, pt, gt) in [("lhs", &p.lhs, &gi.rhs), ("rhs", &p.rhs, &gi.lhs)] {
                    let lifted_value = eval_term(pt, &lifted)?;
                    let complement = eval_term(gt, f)?.complement();
                    out.record(lifted_value == complement, || Disagreement {
                        check: format!("lifting ({side})"),
                        row: *row,
                        inequality: format!("{p}  vs  {gi}"),
                        frame: FrameDocument::from_frame(f),
                        detail: format!("PRel {side} `{pt}` is not the complement of GRel `{gt}`"),
                        countervaluation: None,
                        counterpair: lifted_value
                            .first_excess(&complement)
                            .or(complement.first_excess(&lifted_value))
                            .map(|q| pair_labels(pt, &lifted, q)),
                    });
                }
            }
            let hg = ineq_holds(gi, f)?;
            let hp = ineq_holds(pi, &lifted)?;
            out.record(hg.holds == hp.holds, || Disagreement {
                check: "lifting (inclusion)".into(),
                row: *row,
                inequality: format!("{pi}  vs  {gi}"),
                frame: FrameDocument::from_frame(f),
                detail: format!("GRel holds = {}, PRel on lift holds = {}", hg.holds, hp.holds),
                countervaluation: None,
                counterpair: hg.counterpair.map(|q| pair_labels(&gi.lhs, f, q)),
            });
        }
        Ok(out)
    })?;
    Ok(finish("lifting", mrp, Semantics::Graph, opts, meta, outcome, syntactic, start))
}

/// Deterministic RNG for callers that sample their own inputs.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
