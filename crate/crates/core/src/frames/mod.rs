//! Kripke, graph-based and polarity-based frames, their validation and the
//! shift and lift constructions between them.

mod generate;
mod io;
mod lattice;

pub use generate::{
    graph_domain, graph_frames, kripke_frames, GenMode, GenParams, GenStats, EXHAUSTIVE_E_CAP, EXHAUSTIVE_FULL_CAP,
    KRIPKE_EXHAUSTIVE_CAP, RANDOM_CAP,
};
pub use io::{FrameDocument, FrameIoError, ValuationDocument};
pub use lattice::{Concept, ConceptLattice};

use std::fmt;

use thiserror::Error;

use crate::relcalc::{
    close_source, close_target, e_compatibility, is_subset, singleton, FiniteDomain, FiniteRelation,
    Orientation, RelError, Set,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("relation {name} has shape {got:?}, expected {want:?}")]
    Shape { name: &'static str, got: (usize, usize), want: (usize, usize) },
    #[error("unshift needs E = Δ")]
    NotDiscrete,
    #[error("unshift needs R_box = R_dia")]
    DistinctRelations,
    #[error("frame size {size} exceeds the cap {cap} for {what}")]
    CapExceeded { size: usize, cap: usize, what: &'static str },
    #[error(transparent)]
    Relation(#[from] RelError),
}

fn check_shape(name: &'static str, r: &FiniteRelation, want: (usize, usize)) -> Result<(), FrameError> {
    let got = (r.src_len(), r.tgt_len());
    if got == want {
        Ok(())
    } else {
        Err(FrameError::Shape { name, got, want })
    }
}

/// Bimodal Kripke frame; a generalized approximation space when
/// `r_box == r_dia`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KripkeFrame {
    domain: FiniteDomain,
    r_box: FiniteRelation,
    r_dia: FiniteRelation,
    r_bdia: FiniteRelation,
    r_bbox: FiniteRelation,
}

impl KripkeFrame {
    pub fn new(domain: FiniteDomain, r_box: FiniteRelation, r_dia: FiniteRelation) -> Result<Self, FrameError> {
        let n = domain.len();
        check_shape("R_box", &r_box, (n, n))?;
        check_shape("R_dia", &r_dia, (n, n))?;
        Ok(KripkeFrame { r_bdia: r_box.converse(), r_bbox: r_dia.converse(), domain, r_box, r_dia })
    }

    /// Frame with a single accessibility relation for both modalities.
    pub fn unimodal(domain: FiniteDomain, r: FiniteRelation) -> Result<Self, FrameError> {
        Self::new(domain, r.clone(), r)
    }

    pub fn domain(&self) -> &FiniteDomain {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn r_box(&self) -> &FiniteRelation {
        &self.r_box
    }

    pub fn r_dia(&self) -> &FiniteRelation {
        &self.r_dia
    }

    pub fn r_bdia(&self) -> &FiniteRelation {
        &self.r_bdia
    }

    pub fn r_bbox(&self) -> &FiniteRelation {
        &self.r_bbox
    }

    pub fn is_unimodal(&self) -> bool {
        self.r_box == self.r_dia
    }
}

/// Graph-based frame `(Z, E, R_◇, R_□)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphFrame {
    domain: FiniteDomain,
    e: FiniteRelation,
    d: FiniteRelation,
    r_box: FiniteRelation,
    r_dia: FiniteRelation,
    r_bdia: FiniteRelation,
    r_bbox: FiniteRelation,
}

impl GraphFrame {
    /// Builds the frame after checking shapes only; see [`validate_graph`].
    pub fn new(
        domain: FiniteDomain,
        e: FiniteRelation,
        r_box: FiniteRelation,
        r_dia: FiniteRelation,
    ) -> Result<Self, FrameError> {
        let n = domain.len();
        check_shape("E", &e, (n, n))?;
        check_shape("R_box", &r_box, (n, n))?;
        check_shape("R_dia", &r_dia, (n, n))?;
        Ok(GraphFrame {
            d: e.converse(),
            r_bdia: r_box.converse(),
            r_bbox: r_dia.converse(),
            domain,
            e,
            r_box,
            r_dia,
        })
    }

    /// The frame `(Z, E, D, E)`: R_◇ := D and R_□ := E.
    pub fn pawlak_witness(domain: FiniteDomain, e: FiniteRelation) -> Result<Self, FrameError> {
        let d = e.converse();
        Self::new(domain, e.clone(), e, d)
    }

    pub fn domain(&self) -> &FiniteDomain {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn e(&self) -> &FiniteRelation {
        &self.e
    }

    pub fn d(&self) -> &FiniteRelation {
        &self.d
    }

    pub fn r_box(&self) -> &FiniteRelation {
        &self.r_box
    }

    pub fn r_dia(&self) -> &FiniteRelation {
        &self.r_dia
    }

    pub fn r_bdia(&self) -> &FiniteRelation {
        &self.r_bdia
    }

    pub fn r_bbox(&self) -> &FiniteRelation {
        &self.r_bbox
    }

    /// Extent closure `B ↦ B^[10]`.
    pub fn close_extent(&self, b: Set) -> Set {
        close_source(&self.e, b)
    }

    /// Intent closure `Y ↦ Y^[01]`.
    pub fn close_intent(&self, y: Set) -> Set {
        close_target(&self.e, y)
    }
}

/// Polarity-based frame `(A, X, I, R_□ ⊆ A×X, R_◇ ⊆ X×A)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolarityFrame {
    a: FiniteDomain,
    x: FiniteDomain,
    i: FiniteRelation,
    j: FiniteRelation,
    r_box: FiniteRelation,
    r_dia: FiniteRelation,
    r_bdia: FiniteRelation,
    r_bbox: FiniteRelation,
}

impl PolarityFrame {
    pub fn new(
        a: FiniteDomain,
        x: FiniteDomain,
        i: FiniteRelation,
        r_box: FiniteRelation,
        r_dia: FiniteRelation,
    ) -> Result<Self, FrameError> {
        let (na, nx) = (a.len(), x.len());
        check_shape("I", &i, (na, nx))?;
        check_shape("R_box", &r_box, (na, nx))?;
        check_shape("R_dia", &r_dia, (nx, na))?;
        Ok(PolarityFrame {
            j: i.converse(),
            r_bdia: r_box.converse(),
            r_bbox: r_dia.converse(),
            a,
            x,
            i,
            r_box,
            r_dia,
        })
    }

    pub fn a(&self) -> &FiniteDomain {
        &self.a
    }

    pub fn x(&self) -> &FiniteDomain {
        &self.x
    }

    pub fn i(&self) -> &FiniteRelation {
        &self.i
    }

    /// Converse of `I`, of sort `X×A`.
    pub fn j(&self) -> &FiniteRelation {
        &self.j
    }

    pub fn r_box(&self) -> &FiniteRelation {
        &self.r_box
    }

    pub fn r_dia(&self) -> &FiniteRelation {
        &self.r_dia
    }

    /// Converse of `R_□`, sort `X×A`.
    pub fn r_bdia(&self) -> &FiniteRelation {
        &self.r_bdia
    }

    /// Converse of `R_◇`, sort `A×X`.
    pub fn r_bbox(&self) -> &FiniteRelation {
        &self.r_bbox
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Frame {
    Kripke(KripkeFrame),
    Graph(GraphFrame),
    Polarity(PolarityFrame),
}

impl Frame {
    pub fn kind(&self) -> &'static str {
        match self {
            Frame::Kripke(_) => "kripke",
            Frame::Graph(_) => "graph",
            Frame::Polarity(_) => "polarity",
        }
    }
}

/// One failed frame condition, with an element-level witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub relation: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.relation, self.detail)
    }
}

pub fn validate_graph(g: &GraphFrame) -> Vec<Violation> {
    let dom = &g.domain;
    let mut out = Vec::new();
    if let Some(i) = (0..g.size()).find(|i| !g.e.contains(*i, *i)) {
        out.push(Violation { relation: "E", detail: format!("not reflexive at {}", dom.label(i)) });
        return out;
    }
    for (name, r, o) in [("R_box", &g.r_box, Orientation::Box), ("R_dia", &g.r_dia, Orientation::Dia)] {
        if let Ok(Some(w)) = e_compatibility(r, &g.e, o) {
            out.push(Violation {
                relation: name,
                detail: format!(
                    "not E-compatible: closure of {}^[{}][{}] = {{{}}} is {{{}}}",
                    name,
                    w.side,
                    dom.label(w.element),
                    dom.compact(w.set),
                    dom.compact(w.closure)
                ),
            });
        }
    }
    out
}

/// Galois-stability of the polar images of `R_□` and `R_◇` under `I`.
pub fn validate_polarity(p: &PolarityFrame) -> Vec<Violation> {
    let mut out = Vec::new();
    let close_a = |s: Set| p.i.pos0(p.i.pos1(s));
    let close_x = |s: Set| p.i.pos1(p.i.pos0(s));
    let mut check = |name: &'static str, what: String, set: Set, closure: Set, dom: &FiniteDomain| {
        if !is_subset(closure, set) {
            out.push(Violation {
                relation: name,
                detail: format!(
                    "not I-compatible: {what} = {{{}}} closes to {{{}}}",
                    dom.compact(set),
                    dom.compact(closure)
                ),
            });
        }
    };
    for x in 0..p.x.len() {
        let s = p.r_box.pos0(singleton(x));
        check("R_box", format!("R_box^(0)[{}]", p.x.label(x)), s, close_a(s), &p.a);
    }
    for a in 0..p.a.len() {
        let s = p.r_box.pos1(singleton(a));
        check("R_box", format!("R_box^(1)[{}]", p.a.label(a)), s, close_x(s), &p.x);
    }
    for a in 0..p.a.len() {
        let s = p.r_dia.pos0(singleton(a));
        check("R_dia", format!("R_dia^(0)[{}]", p.a.label(a)), s, close_x(s), &p.x);
    }
    for x in 0..p.x.len() {
        let s = p.r_dia.pos1(singleton(x));
        check("R_dia", format!("R_dia^(1)[{}]", p.x.label(x)), s, close_a(s), &p.a);
    }
    out
}

/// Empty when the frame satisfies its well-formedness conditions.
pub fn validate_frame(f: &Frame) -> Vec<Violation> {
    match f {
        Frame::Kripke(_) => Vec::new(),
        Frame::Graph(g) => validate_graph(g),
        Frame::Polarity(p) => validate_polarity(p),
    }
}

/// The graph-based frame `(W, Δ, R_◇, R_□)` of a Kripke frame.
pub fn shift(k: &KripkeFrame) -> GraphFrame {
    GraphFrame::new(
        k.domain.clone(),
        FiniteRelation::identity(k.size()),
        k.r_box.clone(),
        k.r_dia.clone(),
    )
    .expect("shapes carried over")
}

pub fn unshift(g: &GraphFrame) -> Result<KripkeFrame, FrameError> {
    if g.e != FiniteRelation::identity(g.size()) {
        return Err(FrameError::NotDiscrete);
    }
    if g.r_box != g.r_dia {
        return Err(FrameError::DistinctRelations);
    }
    KripkeFrame::unimodal(g.domain.clone(), g.r_box.clone())
}

/// The lifted polarity `(Z_A, Z_X, E^c, R_□^c, R_◇^c)`.
pub fn lift(g: &GraphFrame) -> PolarityFrame {
    PolarityFrame::new(
        g.domain.clone(),
        g.domain.clone(),
        g.e.complement(),
        g.r_box.complement(),
        g.r_dia.complement(),
    )
    .expect("shapes carried over")
}
