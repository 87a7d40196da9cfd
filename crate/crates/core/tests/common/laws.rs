//! Instance checks for the set-operator and composition laws. Each returns
//! a description of the first violation.

use mrpcorr::correspond::{eval_term, rel_term, Lang, Role};
use mrpcorr::frames::{ConceptLattice, Frame, GraphFrame, KripkeFrame};
use mrpcorr::relcalc::{self, is_e_compatible, is_subset, FiniteRelation, Orientation, Set};
use mrpcorr::semantics::{interpret_concept, interpret_set};
use mrpcorr::syntax::{Formula, ModalString};

use super::{complement, matrix, members, set, Matrix};

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// The four polar operators on `t ⊆ U×V`, library result against oracle,
/// then antitonicity, adjunction, triple-application idempotence, union
/// distribution and the box/diamond identities.
pub fn galois_laws(t: &FiniteRelation, u: [Set; 2], v: [Set; 2]) -> Result<(), String> {
    let (ns, nt) = (t.src_len(), t.tgt_len());
    let m = matrix(t);
    let c = t.complement();
    for s in v {
        let sv = members(s, nt);
        check(t.pos0(s) == set(&super::pos0(&m, &sv)), || format!("pos0 {s:#b} on {t}"))?;
        check(t.neg0(s) == set(&super::neg0(&m, &sv)), || format!("neg0 {s:#b} on {t}"))?;
        check(t.boxed(s) == set(&super::boxed(&m, &sv)), || format!("box {s:#b} on {t}"))?;
        check(t.diamond(s) == set(&super::diamond(&m, &sv)), || format!("diamond {s:#b} on {t}"))?;
        // T^[0][W^c] = [T]W and (T^[0][W])^c = ⟨T⟩W
        let wc = set(&complement(&sv));
        check(t.neg0(wc) == t.boxed(s), || format!("neg0 of complement vs box, {s:#b} on {t}"))?;
        check(!t.neg0(s) & relcalc::full_set(ns) == t.diamond(s), || format!("complement of neg0 vs diamond, {s:#b}"))?;
    }
    for s in u {
        let su = members(s, ns);
        check(t.pos1(s) == set(&super::pos1(&m, &su, nt)), || format!("pos1 {s:#b} on {t}"))?;
        check(t.neg1(s) == set(&super::neg1(&m, &su, nt)), || format!("neg1 {s:#b} on {t}"))?;
    }
    for r in [t, &c] {
        let [u1, u2] = u;
        let [v1, v2] = v;
        // antitone
        let (vs, vb) = (v1 & v2, v1 | v2);
        check(is_subset(r.pos0(vb), r.pos0(vs)), || format!("pos0 not antitone on {r}"))?;
        let (us, ub) = (u1 & u2, u1 | u2);
        check(is_subset(r.pos1(ub), r.pos1(us)), || format!("pos1 not antitone on {r}"))?;
        // adjunction
        check(is_subset(u1, r.pos0(v1)) == is_subset(v1, r.pos1(u1)), || format!("adjunction fails on {r}"))?;
        // extensive closures and triple application
        check(is_subset(v1, r.pos1(r.pos0(v1))), || format!("V ⊄ V^(01) on {r}"))?;
        check(is_subset(u1, r.pos0(r.pos1(u1))), || format!("U ⊄ U^(10) on {r}"))?;
        check(r.pos0(r.pos1(r.pos0(v1))) == r.pos0(v1), || format!("pos0 triple on {r}"))?;
        check(r.pos1(r.pos0(r.pos1(u1))) == r.pos1(u1), || format!("pos1 triple on {r}"))?;
        // unions go to intersections
        check(r.pos0(v1 | v2) == r.pos0(v1) & r.pos0(v2), || format!("pos0 union on {r}"))?;
        check(r.pos1(u1 | u2) == r.pos1(u1) & r.pos1(u2), || format!("pos1 union on {r}"))?;
    }
    // the negative operators are the positive ones of the complement
    for s in v {
        check(t.neg0(s) == c.pos0(s), || "neg0 is not pos0 of the complement".into())?;
    }
    for s in u {
        check(t.neg1(s) == c.pos1(s), || "neg1 is not pos1 of the complement".into())?;
    }
    Ok(())
}

/// Ordinary composition and both mediated compositions agree when `E = Δ`,
/// for arbitrary relations.
pub fn delta_collapse(r: &FiniteRelation, t: &FiniteRelation) -> Result<(), String> {
    let n = r.src_len();
    let delta = FiniteRelation::identity(n);
    let c = relcalc::circ(r, t);
    check(c == super::relation(&super::circ(&matrix(r), &matrix(t), n), n), || format!("circ oracle, {r} ; {t}"))?;
    check(relcalc::dia_e(r, t, &delta) == c, || format!("dia_Δ ≠ ∘ for {r}, {t}"))?;
    check(relcalc::box_e(r, t, &delta) == c, || format!("box_Δ ≠ ∘ for {r}, {t}"))
}

/// Compatible relations on one reflexive graph: three box-oriented and
/// three diamond-oriented.
pub struct CompatibleTriples<'a> {
    pub e: &'a FiniteRelation,
    pub boxes: [FiniteRelation; 3],
    pub dias: [FiniteRelation; 3],
}

/// Unit laws, closure under the compositions, associativity of both
/// mediated compositions, and agreement with the oracle definitions.
pub fn monoid_laws(c: &CompatibleTriples<'_>) -> Result<(), String> {
    let e = c.e;
    let n = e.src_len();
    let d = e.converse();
    let em = matrix(e);
    let [r, t, u] = &c.boxes;
    let [rd, td, ud] = &c.dias;
    let compat = |x: &FiniteRelation, o| is_e_compatible(x, e, o).expect("reflexive E");

    for (x, y) in [(r, t), (t, u), (r, u)] {
        let got = relcalc::box_e(x, y, e);
        check(got == super::relation(&super::box_e(&matrix(x), &matrix(y), &em), n), || format!("box_E oracle, E = {e}"))?;
        check(compat(&got, Orientation::Box), || format!("box_E of compatible relations not compatible, E = {e}"))?;
        let a = relcalc::ast(x, y);
        check(a == super::relation(&super::ast(&matrix(x), &matrix(y), n), n), || format!("∗ oracle, E = {e}"))?;
    }
    for (x, y) in [(rd, td), (td, ud), (rd, ud)] {
        let got = relcalc::dia_e(x, y, e);
        check(got == super::relation(&super::dia_e(&matrix(x), &matrix(y), &em), n), || format!("dia_E oracle, E = {e}"))?;
        check(compat(&got, Orientation::Dia), || format!("dia_E of compatible relations not compatible, E = {e}"))?;
    }
    // ∗ keeps only the [0]-image condition of its left operand's orientation
    let (dia, boxed) = (Orientation::Dia, Orientation::Box);
    for (x, y, o) in [(rd, r, dia), (td, t, dia), (rd, ud, dia), (r, rd, boxed), (t, td, boxed), (u, r, boxed)] {
        let close = match o {
            Orientation::Dia => relcalc::close_target,
            Orientation::Box => relcalc::close_source,
        };
        let a = relcalc::ast(x, y);
        for z in 0..n {
            let img = a.neg0(relcalc::singleton(z));
            check(close(e, img) == img, || format!("({x} ∗ {y})^[0][{z}] not stable in {o:?} orientation, E = {e}"))?;
        }
    }
    for x in &c.boxes {
        check(relcalc::box_e(x, e, e) == *x && relcalc::box_e(e, x, e) == *x, || format!("E is not a unit for {x}, E = {e}"))?;
    }
    for x in &c.dias {
        check(relcalc::dia_e(x, &d, e) == *x && relcalc::dia_e(&d, x, e) == *x, || format!("D is not a unit for {x}, E = {e}"))?;
    }
    let left = relcalc::box_e(&relcalc::box_e(r, t, e), u, e);
    let right = relcalc::box_e(r, &relcalc::box_e(t, u, e), e);
    check(left == right, || format!("box_E not associative: {r}, {t}, {u}, E = {e}"))?;
    let left = relcalc::dia_e(&relcalc::dia_e(rd, td, e), ud, e);
    let right = relcalc::dia_e(rd, &relcalc::dia_e(td, ud, e), e);
    check(left == right, || format!("dia_E not associative: {rd}, {td}, {ud}, E = {e}"))
}

/// `intent ⟦χ[j]⟧ = R_χ^[0][a]` at `j` the object concept of `a` for a
/// diamond-led string, and `extent ⟦ζ[m]⟧ = R_ζ^[0][x]` at `m` the
/// attribute concept of `x` for a box-led one. Diamond-only and box-only
/// strings are also read through the φ and ψ roles.
pub fn molecular_graph(g: &GraphFrame, s: &ModalString) -> Result<(), String> {
    let f = Frame::Graph(g.clone());
    let lattice = ConceptLattice::of_graph(g);
    let leads_with_dia = s.0.first().is_some_and(|m| m.is_diamond());
    let mut roles = vec![if leads_with_dia { Role::Chi } else { Role::Zeta }];
    if s.is_diamonds() {
        roles.push(Role::Phi);
    }
    if s.is_boxes() {
        roles.push(Role::Psi);
    }
    for role in roles {
        let term = rel_term(s, role, Lang::GRel).map_err(|e| e.to_string())?;
        let rel = eval_term(&term, &f).map_err(|e| e.to_string())?;
        for z in 0..g.size() {
            let (name, concept, formula) = match role {
                Role::Chi | Role::Phi => {
                    ("j", lattice.close_objects(relcalc::singleton(z)), s.apply(Formula::Nominal("j".into())))
                }
                Role::Zeta | Role::Psi => {
                    ("m", lattice.close_attributes(relcalc::singleton(z)), s.apply(Formula::Conominal("m".into())))
                }
            };
            let v = [(name.to_string(), concept)].into_iter().collect();
            let value = interpret_concept(g, &v, &formula).map_err(|e| e.to_string())?;
            let (got, side) = match role {
                Role::Chi | Role::Phi => (value.intent, "intent"),
                Role::Zeta | Role::Psi => (value.extent, "extent"),
            };
            check(got == rel.neg0(relcalc::singleton(z)), || {
                format!("{role:?} string {s} at {z}: {side} {got:#b}, relation gives {:#b} ({term})", rel.neg0(relcalc::singleton(z)))
            })?;
        }
    }
    Ok(())
}

/// `⟦χ[{a}]⟧ = ⟨R_χ⟩{a}` and `⟦ζ[{x}^c]⟧ = [R_ζ]{x}^c` on Kripke frames.
pub fn molecular_kripke(k: &KripkeFrame, s: &ModalString) -> Result<(), String> {
    let f = Frame::Kripke(k.clone());
    let n = k.size();
    let leads_with_dia = s.0.first().is_some_and(|m| m.is_diamond());
    let role = if leads_with_dia { Role::Chi } else { Role::Zeta };
    let term = rel_term(s, role, Lang::KRel).map_err(|e| e.to_string())?;
    let rel = eval_term(&term, &f).map_err(|e| e.to_string())?;
    let rm: Matrix = matrix(&rel);
    for z in 0..n {
        let point = relcalc::singleton(z);
        let (arg, expected) = if leads_with_dia {
            (point, set(&super::diamond(&rm, &members(point, n))))
        } else {
            let co = relcalc::full_set(n) & !point;
            (co, set(&super::boxed(&rm, &members(co, n))))
        };
        let v = [("p".to_string(), arg)].into_iter().collect();
        let got = interpret_set(k, &v, &s.apply(Formula::var("p"))).map_err(|e| e.to_string())?;
        check(got == expected, || format!("{role:?} string {s} at {z}: {got:#b} vs {expected:#b} ({term})"))?;
    }
    Ok(())
}
