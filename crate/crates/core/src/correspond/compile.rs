use std::fmt;

use serde::Serialize;

use crate::syntax::{
    left_adjoint, right_adjoint, AtomKind, BlockDecomposition, Formula, ModalString, Modality, MrpClassification,
    Mrp, Polarity, TypeAParts, TypeBParts, classify,
};

use super::term::{Lang, Op, RelInequality, RelTerm, Sym};
use super::CorrespondError;

/// Position a modal string occupies in an inductive mrp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Diamond string.
    Phi,
    /// Box string.
    Psi,
    /// Diamond-led block string.
    Chi,
    /// Box-led block string.
    Zeta,
}

/// Which ALBA shape a correspondent was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Row {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Row::A => "(a)",
            Row::B => "(b)",
        })
    }
}

struct Scheme {
    phi_base: Sym,
    psi_base: Sym,
    dia_step: Op,
    box_step: Op,
    block: Op,
}

fn scheme(lang: Lang) -> Scheme {
    match lang {
        Lang::KRel => Scheme { phi_base: Sym::Delta, psi_base: Sym::Delta, dia_step: Op::Circ, box_step: Op::Circ, block: Op::Star },
        Lang::GRel => Scheme { phi_base: Sym::D, psi_base: Sym::E, dia_step: Op::DiaE, box_step: Op::BoxE, block: Op::Ast },
        Lang::PRel => Scheme { phi_base: Sym::J, psi_base: Sym::I, dia_step: Op::SemiI, box_step: Op::SemiI, block: Op::Semi },
    }
}

pub fn modality_symbol(m: Modality) -> Sym {
    match m {
        Modality::Box => Sym::RBox,
        Modality::Dia => Sym::RDia,
        Modality::BlackBox => Sym::RBBox,
        Modality::BlackDia => Sym::RBDia,
    }
}

fn steps(s: &ModalString, base: Sym, op: Op) -> RelTerm {
    s.0.iter().rev().fold(RelTerm::Sym(base), |acc, m| RelTerm::comp(op, RelTerm::Sym(modality_symbol(*m)), acc))
}

fn blocks(b: &BlockDecomposition, sc: &Scheme) -> RelTerm {
    let mut terms: Vec<RelTerm> = b
        .blocks
        .iter()
        .map(|blk| match blk.0.first().map(|m| m.is_box()).unwrap_or(b.lead == Polarity::Box) {
            true => steps(blk, sc.psi_base, sc.box_step),
            false => steps(blk, sc.phi_base, sc.dia_step),
        })
        .collect();
    if !b.terminal_empty() {
        terms.push(RelTerm::Sym(match b.lead {
            Polarity::Diamond => sc.phi_base,
            Polarity::Box => sc.psi_base,
        }));
    }
    RelTerm::chain(sc.block, terms).expect("at least one block")
}

/// Relational term associated with a modal string in the given role.
pub fn rel_term(s: &ModalString, role: Role, lang: Lang) -> Result<RelTerm, CorrespondError> {
    let sc = scheme(lang);
    let mismatch = || CorrespondError::RoleMismatch { string: s.to_string(), role };
    match role {
        Role::Phi if s.is_diamonds() => Ok(steps(s, sc.phi_base, sc.dia_step)),
        Role::Psi if s.is_boxes() => Ok(steps(s, sc.psi_base, sc.box_step)),
        Role::Chi => Ok(blocks(&BlockDecomposition::new(s, Polarity::Diamond).ok_or_else(mismatch)?, &sc)),
        Role::Zeta => Ok(blocks(&BlockDecomposition::new(s, Polarity::Box).ok_or_else(mismatch)?, &sc)),
        _ => Err(mismatch()),
    }
}

fn raw_type_a(a: &TypeAParts, lang: Lang) -> Result<RelInequality, CorrespondError> {
    let sc = scheme(lang);
    let lhs = RelTerm::comp(sc.dia_step, rel_term(&left_adjoint(&a.psi), Role::Phi, lang)?, rel_term(&a.phi, Role::Phi, lang)?);
    let rhs = rel_term(&a.chi.flatten().concat(&left_adjoint(&a.alpha)), Role::Chi, lang)?;
    oriented(lang, lhs, rhs)
}

fn raw_type_b(b: &TypeBParts, lang: Lang) -> Result<RelInequality, CorrespondError> {
    let sc = scheme(lang);
    let lhs = RelTerm::comp(sc.box_step, rel_term(&right_adjoint(&b.phi), Role::Psi, lang)?, rel_term(&b.psi, Role::Psi, lang)?);
    let rhs = rel_term(&b.zeta.flatten().concat(&right_adjoint(&b.delta)), Role::Zeta, lang)?;
    oriented(lang, lhs, rhs)
}

/// PRel terms encode complements, so the inclusion is reversed.
fn oriented(lang: Lang, lhs: RelTerm, rhs: RelTerm) -> Result<RelInequality, CorrespondError> {
    match lang {
        Lang::PRel => RelInequality::new(lang, rhs, lhs),
        _ => RelInequality::new(lang, lhs, rhs),
    }
}

/// Correspondents before unit elimination.
pub fn correspondent_raw(mrp: &Mrp, lang: Lang) -> Result<Vec<(Row, RelInequality)>, CorrespondError> {
    let c = classify(mrp);
    if c == MrpClassification::NotSahlqvist {
        return Err(CorrespondError::NotSahlqvist(mrp.to_string()));
    }
    let mut out = Vec::new();
    if let Some(a) = c.type_a() {
        out.push((Row::A, raw_type_a(a, lang)?));
    }
    if let Some(b) = c.type_b() {
        out.push((Row::B, raw_type_b(b, lang)?));
    }
    Ok(out)
}

/// First-order correspondents as normalized relational inequalities, one
/// per applicable row.
pub fn correspondent(mrp: &Mrp, lang: Lang) -> Result<Vec<(Row, RelInequality)>, CorrespondError> {
    Ok(correspondent_raw(mrp, lang)?
        .into_iter()
        .map(|(row, ineq)| (row, normalize_inequality(&ineq)))
        .collect())
}

/// Removes unit composites of the monoidal operators and flattens their
/// chains to right-nested form.
pub fn normalize(t: &RelTerm) -> RelTerm {
    match t {
        RelTerm::Sym(_) => t.clone(),
        RelTerm::Comp(op, _, _) if op.is_monoidal() => {
            let mut operands = Vec::new();
            let mut unit = None;
            collect(t, *op, &mut operands, &mut unit);
            let kept: Vec<RelTerm> =
                operands.into_iter().filter(|x| !matches!(x, RelTerm::Sym(s) if op.is_unit(*s))).collect();
            RelTerm::chain(*op, kept).unwrap_or_else(|| RelTerm::Sym(unit.expect("only units were dropped")))
        }
        RelTerm::Comp(op, l, r) => RelTerm::comp(*op, normalize(l), normalize(r)),
    }
}

fn collect(t: &RelTerm, op: Op, out: &mut Vec<RelTerm>, unit: &mut Option<Sym>) {
    match t {
        RelTerm::Comp(o, l, r) if *o == op => {
            collect(l, op, out, unit);
            collect(r, op, out, unit);
        }
        _ => {
            let n = normalize(t);
            match n {
                RelTerm::Comp(o, ..) if o == op => collect(&n, op, out, unit),
                RelTerm::Sym(s) if op.is_unit(s) => {
                    unit.get_or_insert(s);
                    out.push(n);
                }
                _ => out.push(n),
            }
        }
    }
}

pub fn normalize_inequality(i: &RelInequality) -> RelInequality {
    RelInequality { lang: i.lang, lhs: normalize(&i.lhs), rhs: normalize(&i.rhs) }
}

/// The GRel-to-KRel translation: `E`, `D` become `Δ`, the mediated
/// compositions become `∘` and `∗` becomes `⋆`.
pub fn translate_tau(t: &RelTerm) -> Result<RelTerm, CorrespondError> {
    t.check_lang(Lang::GRel)?;
    Ok(tau(t))
}

fn tau(t: &RelTerm) -> RelTerm {
    match t {
        RelTerm::Sym(Sym::E | Sym::D) => RelTerm::Sym(Sym::Delta),
        RelTerm::Sym(s) => RelTerm::Sym(*s),
        RelTerm::Comp(op, l, r) => {
            let op = match op {
                Op::Ast => Op::Star,
                _ => Op::Circ,
            };
            RelTerm::comp(op, tau(l), tau(r))
        }
    }
}

pub fn translate_tau_inequality(i: &RelInequality) -> Result<RelInequality, CorrespondError> {
    RelInequality::new(Lang::KRel, translate_tau(&i.lhs)?, translate_tau(&i.rhs)?)
}

/// The GRel-to-PRel translation on terms: `D`, `E` become `J`, `I`, the
/// mediated compositions become `;_I` and `∗` becomes `;`. The lifted term
/// denotes the complement of the original on the lifted frame.
pub fn lift_term(t: &RelTerm) -> Result<RelTerm, CorrespondError> {
    t.check_lang(Lang::GRel)?;
    Ok(lift_rec(t))
}

fn lift_rec(t: &RelTerm) -> RelTerm {
    match t {
        RelTerm::Sym(Sym::D) => RelTerm::Sym(Sym::J),
        RelTerm::Sym(Sym::E) => RelTerm::Sym(Sym::I),
        RelTerm::Sym(s) => RelTerm::Sym(*s),
        RelTerm::Comp(op, l, r) => {
            let op = match op {
                Op::Ast => Op::Semi,
                _ => Op::SemiI,
            };
            RelTerm::comp(op, lift_rec(l), lift_rec(r))
        }
    }
}

/// Lifts a GRel inequality, swapping its sides.
pub fn lift_inequality(i: &RelInequality) -> Result<RelInequality, CorrespondError> {
    RelInequality::new(Lang::PRel, lift_term(&i.rhs)?, lift_term(&i.lhs)?)
}

/// `∀j[lhs ≤ rhs]` or `∀m[lhs ≤ rhs]` over the extended language.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PureInequality {
    pub quantifier: AtomKind,
    pub name: String,
    pub lhs: Formula,
    pub rhs: Formula,
}

impl PureInequality {
    pub fn to_unicode(&self) -> String {
        format!("∀{}[{} ≤ {}]", self.name, self.lhs.to_unicode(), self.rhs.to_unicode())
    }
}

impl fmt::Display for PureInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "forall {} . {} <= {}", self.name, self.lhs, self.rhs)
    }
}

pub fn alba_type_a(a: &TypeAParts) -> PureInequality {
    let j = Formula::Nominal("j".into());
    PureInequality {
        quantifier: AtomKind::Nominal,
        name: "j".into(),
        lhs: left_adjoint(&a.psi).apply(a.phi.apply(j.clone())),
        rhs: a.chi.flatten().apply(left_adjoint(&a.alpha).apply(j)),
    }
}

pub fn alba_type_b(b: &TypeBParts) -> PureInequality {
    let m = Formula::Conominal("m".into());
    PureInequality {
        quantifier: AtomKind::Conominal,
        name: "m".into(),
        lhs: b.zeta.flatten().apply(right_adjoint(&b.delta).apply(m.clone())),
        rhs: right_adjoint(&b.phi).apply(b.psi.apply(m)),
    }
}

/// ALBA outputs; analytic mrps give both shapes.
pub fn alba_output(c: &MrpClassification) -> Result<Vec<(Row, PureInequality)>, CorrespondError> {
    if *c == MrpClassification::NotSahlqvist {
        return Err(CorrespondError::NotSahlqvist("input".into()));
    }
    let mut out = Vec::new();
    if let Some(a) = c.type_a() {
        out.push((Row::A, alba_type_a(a)));
    }
    if let Some(b) = c.type_b() {
        out.push((Row::B, alba_type_b(b)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspond::parse_rel_term;
    use crate::syntax::Modality::{BlackBox as BB, Box as B, Dia as D};

    fn ms(v: &[Modality]) -> ModalString {
        ModalString(v.to_vec())
    }

    fn corr(text: &str, lang: Lang) -> Vec<String> {
        correspondent(&Mrp::parse(text).unwrap(), lang).unwrap().iter().map(|(_, i)| i.to_string()).collect()
    }

    #[test]
    fn role_terms() {
        assert_eq!(rel_term(&ms(&[D, B]), Role::Chi, Lang::GRel).unwrap().to_string(), "(Rdia ;d D) *g (Rbox ;b E) *g D");
        assert_eq!(
            normalize(&rel_term(&ms(&[D, B]), Role::Chi, Lang::GRel).unwrap()).to_unicode(),
            "R_◇ ∗ R_□ ∗ D"
        );
        assert_eq!(
            normalize(&rel_term(&ms(&[D, B]), Role::Chi, Lang::KRel).unwrap()).to_unicode(),
            "R_◇ ⋆ R_□ ⋆ Δ"
        );
        assert_eq!(normalize(&rel_term(&ms(&[B]), Role::Psi, Lang::GRel).unwrap()).to_string(), "Rbox");
        assert_eq!(rel_term(&ms(&[]), Role::Zeta, Lang::PRel).unwrap().to_string(), "I");
        assert!(rel_term(&ms(&[B]), Role::Phi, Lang::GRel).is_err());
        assert!(rel_term(&ms(&[B]), Role::Chi, Lang::GRel).is_err());
        assert!(rel_term(&ms(&[BB, D]), Role::Zeta, Lang::PRel).is_ok());
    }

    #[test]
    fn worked_correspondents() {
        assert_eq!(corr("p <= dia box p", Lang::GRel), ["D <= Rdia *g Rbox *g D"]);
        assert_eq!(corr("box dia p <= box dia dia p", Lang::GRel), ["Rbox <= Rbox *g Rdia *g (Rbbox ;b Rbbox)"]);
        assert_eq!(corr("dia p <= box dia box p", Lang::GRel), ["Rbdia ;d Rdia <= Rdia *g Rbox *g D"]);
        assert_eq!(corr("dia p <= box dia box p", Lang::KRel), ["Rbdia o Rdia <= Rdia *k Rbox *k Delta"]);
        assert_eq!(corr("box p <= dia p", Lang::GRel), ["D <= Rdia ;d Rbdia", "E <= Rbox ;b Rbbox"]);
        assert_eq!(corr("dia box p <= p", Lang::GRel)[0], "Rdia <= Rbdia");
        assert_eq!(corr("box p <= p", Lang::PRel)[1], "Rbox <= I");
        assert_eq!(corr("box p <= box box p", Lang::PRel)[1], "Rbox <= Rbox ;I Rbox");
        assert_eq!(corr("box p <= box box p", Lang::GRel)[1], "Rbox ;b Rbox <= Rbox");
    }

    #[test]
    fn alba_goldens() {
        let alba = |t: &str| {
            alba_output(&classify(&Mrp::parse(t).unwrap())).unwrap().into_iter().map(|(_, p)| p).collect::<Vec<_>>()
        };
        assert_eq!(alba("dia dia box box p <= box dia box p")[0].to_unicode(), "∀j[⧫◇◇j ≤ ◇□⧫⧫j]");
        assert_eq!(
            alba("dia dia box box p <= box dia box p")[0].to_string(),
            "forall j . bdia dia dia j <= dia box bdia bdia j"
        );
        assert_eq!(alba("p <= dia box p")[0].to_unicode(), "∀j[j ≤ ◇□j]");
        let b = alba("dia box box p <= box box box dia dia dia dia p");
        assert_eq!(b.last().unwrap().to_unicode(), "∀m[□□■■■■m ≤ ■□□□m]");
    }

    #[test]
    fn normalization() {
        let n = |s: &str| normalize(&parse_rel_term(s).unwrap()).to_string();
        assert_eq!(n("D ;d D"), "D");
        assert_eq!(n("Rbdia ;d D"), "Rbdia");
        assert_eq!(n("Rdia *g Rbox *g D"), "Rdia *g Rbox *g D");
        assert_eq!(n("(Rbox ;b Rbox) ;b (E ;b Rbox)"), "Rbox ;b Rbox ;b Rbox");
        assert_eq!(n("J ;I (I ;I J)"), "J");
    }

    #[test]
    fn tau_and_lift() {
        let t = |s: &str| translate_tau(&parse_rel_term(s).unwrap()).unwrap().to_string();
        assert_eq!(t("E"), "Delta");
        assert_eq!(t("Rdia *g Rbox *g D"), "Rdia *k Rbox *k Delta");
        assert_eq!(t("Rbox ;b Rbox"), "Rbox o Rbox");
        assert!(translate_tau(&parse_rel_term("Delta").unwrap()).is_err());
        let g = &correspondent(&Mrp::parse("box p <= box box p").unwrap(), Lang::GRel).unwrap()[1].1;
        assert_eq!(lift_inequality(g).unwrap().to_string(), "Rbox <= Rbox ;I Rbox");
    }
}
