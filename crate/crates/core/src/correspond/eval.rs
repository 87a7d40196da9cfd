use serde::Serialize;

use crate::frames::Frame;
use crate::relcalc::{ast, box_e, circ, dia_e, semi, semi_i_ax, semi_i_xa, FiniteRelation};

use super::term::{Lang, Op, RelInequality, RelTerm, Sort, Sym};
use super::CorrespondError;

fn frame_lang(f: &Frame) -> Lang {
    match f {
        Frame::Kripke(_) => Lang::KRel,
        Frame::Graph(_) => Lang::GRel,
        Frame::Polarity(_) => Lang::PRel,
    }
}

/// Language whose terms are interpreted on frames of this kind.
pub fn language_of(f: &Frame) -> Lang {
    frame_lang(f)
}

fn symbol(s: Sym, f: &Frame) -> FiniteRelation {
    match (f, s) {
        (Frame::Kripke(k), Sym::Delta) => FiniteRelation::identity(k.size()),
        (Frame::Kripke(k), Sym::RBox) => k.r_box().clone(),
        (Frame::Kripke(k), Sym::RDia) => k.r_dia().clone(),
        (Frame::Kripke(k), Sym::RBDia) => k.r_bdia().clone(),
        (Frame::Kripke(k), Sym::RBBox) => k.r_bbox().clone(),
        (Frame::Graph(g), Sym::E) => g.e().clone(),
        (Frame::Graph(g), Sym::D) => g.d().clone(),
        (Frame::Graph(g), Sym::RBox) => g.r_box().clone(),
        (Frame::Graph(g), Sym::RDia) => g.r_dia().clone(),
        (Frame::Graph(g), Sym::RBDia) => g.r_bdia().clone(),
        (Frame::Graph(g), Sym::RBBox) => g.r_bbox().clone(),
        (Frame::Polarity(p), Sym::I) => p.i().clone(),
        (Frame::Polarity(p), Sym::J) => p.j().clone(),
        (Frame::Polarity(p), Sym::RBox) => p.r_box().clone(),
        (Frame::Polarity(p), Sym::RDia) => p.r_dia().clone(),
        (Frame::Polarity(p), Sym::RBDia) => p.r_bdia().clone(),
        (Frame::Polarity(p), Sym::RBBox) => p.r_bbox().clone(),
        _ => unreachable!("language checked before evaluation"),
    }
}

fn eval_rec(t: &RelTerm, f: &Frame) -> FiniteRelation {
    match t {
        RelTerm::Sym(s) => symbol(*s, f),
        RelTerm::Comp(op, l, r) => {
            let (a, b) = (eval_rec(l, f), eval_rec(r, f));
            match (op, f) {
                (Op::Circ, _) => circ(&a, &b),
                (Op::Star | Op::Ast, _) => ast(&a, &b),
                (Op::DiaE, Frame::Graph(g)) => dia_e(&a, &b, g.e()),
                (Op::BoxE, Frame::Graph(g)) => box_e(&a, &b, g.e()),
                (Op::SemiI, Frame::Polarity(p)) => match l.sort().expect("sort checked") {
                    Sort::AX => semi_i_ax(&a, &b, p.i()),
                    _ => semi_i_xa(&a, &b, p.i()),
                },
                (Op::Semi, _) => semi(&a, &b),
                _ => unreachable!("language checked before evaluation"),
            }
        }
    }
}

fn check(t: &RelTerm, f: &Frame) -> Result<(), CorrespondError> {
    let lang = frame_lang(f);
    t.check_lang(lang).map_err(|_| CorrespondError::FrameMismatch { term: t.to_string(), frame: f.kind() })?;
    if lang == Lang::PRel {
        t.sort()?;
    }
    Ok(())
}

/// Interprets a term on a frame of the matching kind.
pub fn eval_term(t: &RelTerm, f: &Frame) -> Result<FiniteRelation, CorrespondError> {
    check(t, f)?;
    Ok(eval_rec(t, f))
}

/// Outcome of checking an inclusion on one frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IneqOutcome {
    pub holds: bool,
    /// Index pair in the left side but not the right.
    pub counterpair: Option<(usize, usize)>,
}

pub fn ineq_holds(i: &RelInequality, f: &Frame) -> Result<IneqOutcome, CorrespondError> {
    if i.lang != frame_lang(f) {
        return Err(CorrespondError::FrameMismatch { term: i.to_string(), frame: f.kind() });
    }
    let l = eval_term(&i.lhs, f)?;
    let r = eval_term(&i.rhs, f)?;
    let counterpair = l.first_excess(&r);
    Ok(IneqOutcome { holds: counterpair.is_none(), counterpair })
}

/// Labels of a pair in the relation denoted by `t` on `f`.
pub fn pair_labels(t: &RelTerm, f: &Frame, (u, v): (usize, usize)) -> [String; 2] {
    let (s, d) = match f {
        Frame::Kripke(k) => (k.domain(), k.domain()),
        Frame::Graph(g) => (g.domain(), g.domain()),
        Frame::Polarity(p) => match t.sort() {
            Ok(Sort::XA) => (p.x(), p.a()),
            _ => (p.a(), p.x()),
        },
    };
    [s.label(u).to_string(), d.label(v).to_string()]
}
