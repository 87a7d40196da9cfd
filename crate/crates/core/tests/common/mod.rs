//! Brute-force oracles and generators shared by the integration tests.
//! Everything here works on plain boolean matrices and index vectors, so it
//! shares no code with the library's bitset implementation.

#![allow(dead_code)]

use mrpcorr::frames::{kripke_frames, Frame, GenMode, GraphFrame, KripkeFrame};
use mrpcorr::relcalc::{close_source, close_target, e_compatibility, FiniteDomain, FiniteRelation, Orientation, Set};
use mrpcorr::roughsets::classify_space;
use mrpcorr::semantics::{frame_valid, ValidityOptions};
use mrpcorr::syntax::{Modality, ModalString, Mrp};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub mod laws;

pub type Matrix = Vec<Vec<bool>>;

pub fn matrix(r: &FiniteRelation) -> Matrix {
    (0..r.src_len()).map(|u| (0..r.tgt_len()).map(|v| r.contains(u, v)).collect()).collect()
}

pub fn relation(m: &Matrix, tgt: usize) -> FiniteRelation {
    let mut r = FiniteRelation::empty(m.len(), tgt);
    for (u, row) in m.iter().enumerate() {
        for (v, &b) in row.iter().enumerate() {
            if b {
                r.insert(u, v);
            }
        }
    }
    r
}

pub fn members(s: Set, n: usize) -> Vec<bool> {
    (0..n).map(|i| s >> i & 1 == 1).collect()
}

pub fn set(v: &[bool]) -> Set {
    v.iter().enumerate().filter(|(_, b)| **b).fold(0, |s, (i, _)| s | 1 << i)
}

pub fn complement(v: &[bool]) -> Vec<bool> {
    v.iter().map(|b| !b).collect()
}

/// `{u | ∀v ∈ s. uTv}`.
pub fn pos0(t: &Matrix, s: &[bool]) -> Vec<bool> {
    t.iter().map(|row| s.iter().zip(row).all(|(&inn, &r)| !inn || r)).collect()
}

/// `{v | ∀u ∈ s. uTv}`.
pub fn pos1(t: &Matrix, s: &[bool], tgt: usize) -> Vec<bool> {
    (0..tgt).map(|v| t.iter().zip(s).all(|(row, &inn)| !inn || row[v])).collect()
}

/// `{u | ∀v ∈ s. ¬uTv}`.
pub fn neg0(t: &Matrix, s: &[bool]) -> Vec<bool> {
    t.iter().map(|row| s.iter().zip(row).all(|(&inn, &r)| !inn || !r)).collect()
}

/// `{v | ∀u ∈ s. ¬uTv}`.
pub fn neg1(t: &Matrix, s: &[bool], tgt: usize) -> Vec<bool> {
    (0..tgt).map(|v| t.iter().zip(s).all(|(row, &inn)| !inn || !row[v])).collect()
}

/// `[T]W = {u | ∀v. uTv ⇒ v ∈ W}`.
pub fn boxed(t: &Matrix, w: &[bool]) -> Vec<bool> {
    t.iter().map(|row| row.iter().zip(w).all(|(&r, &inn)| !r || inn)).collect()
}

/// `⟨T⟩W = {u | ∃v. uTv ∧ v ∈ W}`.
pub fn diamond(t: &Matrix, w: &[bool]) -> Vec<bool> {
    t.iter().map(|row| row.iter().zip(w).any(|(&r, &inn)| r && inn)).collect()
}

pub fn transpose(t: &Matrix, tgt: usize) -> Matrix {
    (0..tgt).map(|v| t.iter().map(|row| row[v]).collect()).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|u| (0..n).map(|v| u == v).collect()).collect()
}

fn singleton(n: usize, i: usize) -> Vec<bool> {
    (0..n).map(|j| j == i).collect()
}

/// Builds the relation whose `[0]`-image of each target singleton is `col`:
/// `u T v` iff `u ∉ col(v)`.
fn from_neg_columns(src: usize, tgt: usize, col: impl Fn(usize) -> Vec<bool>) -> Matrix {
    let cols: Vec<Vec<bool>> = (0..tgt).map(col).collect();
    (0..src).map(|u| (0..tgt).map(|v| !cols[v][u]).collect()).collect()
}

/// Standard composition.
pub fn circ(r: &Matrix, t: &Matrix, tgt: usize) -> Matrix {
    r.iter().map(|row| (0..tgt).map(|x| row.iter().enumerate().any(|(u, &b)| b && t[u][x])).collect()).collect()
}

/// `a (R∗T) x` iff `∃u. aRu ∧ ¬uTx`.
pub fn ast(r: &Matrix, t: &Matrix, tgt: usize) -> Matrix {
    r.iter().map(|row| (0..tgt).map(|x| row.iter().enumerate().any(|(u, &b)| b && !t[u][x])).collect()).collect()
}

/// `(R ⋄_E T)^[0][a] = R^[0][E^[0][T^[0][a]]]`.
pub fn dia_e(r: &Matrix, t: &Matrix, e: &Matrix) -> Matrix {
    let n = e.len();
    from_neg_columns(r.len(), n, |a| neg0(r, &neg0(e, &neg0(t, &singleton(n, a)))))
}

/// `(R □_E T)^[0][x] = R^[0][E^[1][T^[0][x]]]`.
pub fn box_e(r: &Matrix, t: &Matrix, e: &Matrix) -> Matrix {
    let n = e.len();
    from_neg_columns(r.len(), n, |x| neg0(r, &neg1(e, &neg0(t, &singleton(n, x)), n)))
}

/// Every subset of `0..n`, as index vectors in binary counting order.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u32 << n).map(move |c| (0..n).map(|i| c >> i & 1 == 1).collect())
}

/// Formal concepts of `(A, X, I)` found by closing every subset of `A`.
pub fn concepts(i: &Matrix, x: usize) -> Vec<(Vec<bool>, Vec<bool>)> {
    let mut out: Vec<(Vec<bool>, Vec<bool>)> = Vec::new();
    for b in subsets(i.len()) {
        let intent = pos1(i, &b, x);
        let extent = pos0(i, &intent);
        if !out.iter().any(|(e, _)| *e == extent) {
            out.push((extent, intent));
        }
    }
    out
}

/// Kripke validity of `box^k`/`dia^k` strings over one variable, brute-forced
/// over every subset for `p`. Strings apply outermost first.
pub fn kripke_valid(rb: &Matrix, rd: &Matrix, lhs: &[Modality], rhs: &[Modality]) -> bool {
    let n = rb.len();
    let eval = |s: &[Modality], p: &[bool]| {
        s.iter().rev().fold(p.to_vec(), |acc, m| match m {
            Modality::Box => boxed(rb, &acc),
            Modality::Dia => diamond(rd, &acc),
            Modality::BlackBox => boxed(&transpose(rd, n), &acc),
            Modality::BlackDia => diamond(&transpose(rb, n), &acc),
        })
    };
    subsets(n).all(|p| eval(lhs, &p).iter().zip(eval(rhs, &p)).all(|(&l, r)| !l || r))
}

pub fn random_relation(rng: &mut ChaCha8Rng, src: usize, tgt: usize, density: f64) -> FiniteRelation {
    let mut r = FiniteRelation::empty(src, tgt);
    for u in 0..src {
        for v in 0..tgt {
            if rng.gen_bool(density) {
                r.insert(u, v);
            }
        }
    }
    r
}

pub fn random_reflexive(rng: &mut ChaCha8Rng, n: usize) -> FiniteRelation {
    let density = rng.gen_range(0.1..0.7);
    let mut e = random_relation(rng, n, n, density);
    for i in 0..n {
        e.insert(i, i);
    }
    e
}

/// Subsets of `0..n` fixed by `close`.
pub fn stable_sets(n: usize, close: impl Fn(Set) -> Set) -> Vec<Set> {
    (0..(1 as Set) << n).filter(|s| close(*s) == *s).collect()
}

/// A relation passing the E-compatibility test in `orientation`, drawn by
/// picking Galois-stable columns and rejecting failures. Falls back to the
/// orientation's unit.
pub fn compatible_relation(rng: &mut ChaCha8Rng, e: &FiniteRelation, orientation: Orientation) -> FiniteRelation {
    let n = e.src_len();
    let stable = match orientation {
        Orientation::Box => stable_sets(n, |s| close_source(e, s)),
        Orientation::Dia => stable_sets(n, |s| close_target(e, s)),
    };
    for _ in 0..200 {
        let cols: Vec<Set> = (0..n).map(|_| stable[rng.gen_range(0..stable.len())]).collect();
        let mut r = FiniteRelation::empty(n, n);
        for (v, col) in cols.iter().enumerate() {
            for u in 0..n {
                if col >> u & 1 == 0 {
                    r.insert(u, v);
                }
            }
        }
        if e_compatibility(&r, e, orientation).expect("reflexive E").is_none() {
            return r;
        }
    }
    match orientation {
        Orientation::Box => e.clone(),
        Orientation::Dia => e.converse(),
    }
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> GraphFrame {
    let e = random_reflexive(rng, n);
    let rb = compatible_relation(rng, &e, Orientation::Box);
    let rd = compatible_relation(rng, &e, Orientation::Dia);
    GraphFrame::new(FiniteDomain::numbered(n), e, rb, rd).expect("compatible by construction")
}

pub fn random_kripke(rng: &mut ChaCha8Rng, n: usize) -> KripkeFrame {
    let (db, dd) = (rng.gen_range(0.1..0.8), rng.gen_range(0.1..0.8));
    let rb = random_relation(rng, n, n, db);
    let rd = random_relation(rng, n, n, dd);
    KripkeFrame::new(FiniteDomain::numbered(n), rb, rd).expect("square")
}

/// Alternating box/diamond string with `blocks` blocks of length 1 to 3,
/// starting with `lead`.
pub fn block_string(rng: &mut ChaCha8Rng, lead: Modality, blocks: usize) -> ModalString {
    let mut out = Vec::new();
    let mut m = lead;
    for _ in 0..blocks {
        for _ in 0..rng.gen_range(1..=3) {
            out.push(m);
        }
        m = if m == Modality::Box { Modality::Dia } else { Modality::Box };
    }
    ModalString(out)
}

/// Properties of a single relation, checked from the first-order definitions.
pub fn is_serial(r: &Matrix) -> bool {
    r.iter().all(|row| row.iter().any(|b| *b))
}

pub fn is_reflexive(r: &Matrix) -> bool {
    (0..r.len()).all(|i| r[i][i])
}

pub fn is_symmetric(r: &Matrix) -> bool {
    (0..r.len()).all(|i| (0..r.len()).all(|j| r[i][j] == r[j][i]))
}

pub fn is_transitive(r: &Matrix) -> bool {
    let n = r.len();
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(r[i][j] && r[j][k]) || r[i][k])))
}

pub fn is_euclidean(r: &Matrix) -> bool {
    let n = r.len();
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(r[i][j] && r[i][k]) || r[j][k])))
}

/// Axioms of the classical approximation-space classes with the
/// first-order property each one defines.
pub const FIRST_ORDER_CLASSES: [(&str, &str, fn(&Matrix) -> bool); 5] = [
    ("serial", "box p <= dia p", is_serial),
    ("reflexive", "box p <= p", is_reflexive),
    ("symmetric", "p <= box dia p", is_symmetric),
    ("transitive", "box p <= box box p", is_transitive),
    ("euclidean", "dia p <= box dia p", is_euclidean),
];

/// On every single-relation Kripke frame of size `n`, each axiom is valid
/// exactly when the first-order property holds, and the class flag agrees.
/// Returns the number of frames checked.
pub fn first_order_agreement(n: usize) -> Result<usize, String> {
    let frames = kripke_frames(n, GenMode::Exhaustive, false, 0, 0).map_err(|e| e.to_string())?;
    let opts = ValidityOptions::default();
    for k in &frames {
        let f = Frame::Kripke(k.clone());
        let r = matrix(k.r_box());
        let report = classify_space(&f, false).map_err(|e| e.to_string())?;
        for (flag, axiom, holds) in FIRST_ORDER_CLASSES {
            let seq = Mrp::parse(axiom).expect("catalogued axiom").to_sequent();
            let valid = frame_valid(&f, &seq, &opts).map_err(|e| e.to_string())?.is_valid();
            if valid != holds(&r) {
                return Err(format!("`{axiom}` validity {valid} but {flag} is {} on {}", holds(&r), k.r_box()));
            }
            if report.flag(flag) != holds(&r) {
                return Err(format!("{flag} flag disagrees on {}", k.r_box()));
            }
        }
    }
    Ok(frames.len())
}
