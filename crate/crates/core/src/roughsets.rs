//! Generalized and hyperconstructivist approximation spaces.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::correspond::{ineq_holds, parse_rel_inequality, CorrespondError, Lang};
use crate::frames::{Concept, ConceptLattice, Frame, GraphFrame, KripkeFrame};
use crate::relcalc::{is_subset, Set};
use crate::semantics::{frame_valid, ConceptAlgebra, SemanticsError, ValidityOptions};
use crate::syntax::parse_sequent;

#[derive(Debug, Error)]
pub enum RoughError {
    #[error("approximation operators need a single relation (R_box = R_dia)")]
    NotUnimodal,
    #[error("set {0:#b} is outside the domain")]
    OutOfDomain(Set),
    #[error("{0} frames are not approximation spaces")]
    UnsupportedFrame(&'static str),
    #[error("frame is not a Pawlak space: {}", .0.failed_flags().join(", "))]
    NotPawlak(Box<SpaceClassReport>),
    #[error(transparent)]
    Correspond(#[from] CorrespondError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// Lower (`[R]Z`) and upper (`⟨R⟩Z`) approximation of `z`.
pub fn approximations(k: &KripkeFrame, z: Set) -> Result<(Set, Set), RoughError> {
    if !k.is_unimodal() {
        return Err(RoughError::NotUnimodal);
    }
    if z & !crate::relcalc::full_set(k.size()) != 0 {
        return Err(RoughError::OutOfDomain(z));
    }
    Ok((k.r_box().boxed(z), k.r_box().diamond(z)))
}

/// One defining inclusion of a class, with its modal counterpart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    pub flag: &'static str,
    pub condition: String,
    pub axiom: &'static str,
    pub holds: bool,
    /// Labels of a pair in the left side but not the right.
    pub witness: Option<[String; 2]>,
    /// Validity of `axiom` on the frame, when cross-checked.
    pub modal_valid: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceClassReport {
    pub frame_kind: &'static str,
    pub flags: BTreeMap<&'static str, bool>,
    pub checks: Vec<ConditionCheck>,
}

impl SpaceClassReport {
    pub fn flag(&self, name: &str) -> bool {
        self.flags.get(name).copied().unwrap_or(false)
    }

    pub fn failed_flags(&self) -> Vec<&'static str> {
        self.flags.iter().filter(|(_, v)| !**v).map(|(k, _)| *k).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

const KRIPKE_CONDITIONS: [(&str, &str, &str); 5] = [
    ("serial", "Delta <= Rbox o Rbbox", "box p <= dia p"),
    ("reflexive", "Delta <= Rbox", "box p <= p"),
    ("symmetric", "Rbbox <= Rbox", "dia box p <= p"),
    ("transitive", "Rbox o Rbox <= Rbox", "box p <= box box p"),
    ("euclidean", "Rbbox o Rbox <= Rbbox", "dia p <= box dia p"),
];

const GRAPH_CONDITIONS: [(&str, &str, &str); 7] = [
    ("serial", "E <= Rbox ;b Rbbox", "box p <= dia p"),
    ("E-reflexive", "E <= Rbox", "box p <= p"),
    ("E-reflexive", "D <= Rdia", "p <= dia p"),
    ("E-symmetric", "Rbbox <= Rbox", "dia box p <= p"),
    ("E-symmetric", "Rbdia <= Rdia", "p <= box dia p"),
    ("E-transitive", "Rbox ;b Rbox <= Rbox", "box p <= box box p"),
    ("E-transitive", "Rdia ;d Rdia <= Rdia", "dia dia p <= dia p"),
];

/// Class flags of a Kripke or graph-based frame, each decided by its
/// defining relational inclusion. With `cross_check`, the matching modal
/// axiom is also brute-forced on the frame.
pub fn classify_space(f: &Frame, cross_check: bool) -> Result<SpaceClassReport, RoughError> {
    let (conditions, lang, labels): (&[(&'static str, &str, &'static str)], _, _) = match f {
        Frame::Kripke(k) => (&KRIPKE_CONDITIONS, Lang::KRel, k.domain()),
        Frame::Graph(g) => (&GRAPH_CONDITIONS, Lang::GRel, g.domain()),
        Frame::Polarity(_) => return Err(RoughError::UnsupportedFrame("polarity")),
    };
    let mut flags = BTreeMap::new();
    let mut checks = Vec::new();
    for (flag, cond, axiom) in conditions {
        let ineq = parse_rel_inequality(cond, Some(lang))?;
        let out = ineq_holds(&ineq, f)?;
        let modal_valid = if cross_check {
            let seq = parse_sequent(axiom).expect("well-formed axiom");
            Some(frame_valid(f, &seq, &ValidityOptions::default())?.is_valid())
        } else {
            None
        };
        *flags.entry(*flag).or_insert(true) &= out.holds;
        checks.push(ConditionCheck {
            flag,
            condition: ineq.to_unicode(),
            axiom,
            holds: out.holds,
            witness: out.counterpair.map(|(u, v)| [labels.label(u).to_string(), labels.label(v).to_string()]),
            modal_valid,
        });
    }
    if let Frame::Graph(_) = f {
        let pawlak = flags["E-reflexive"] && flags["E-symmetric"] && flags["E-transitive"];
        flags.insert("Pawlak", pawlak);
    }
    Ok(SpaceClassReport { frame_kind: f.kind(), flags, checks })
}

/// One of the ten algebraic conditions of Pawlak spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PawlakItem {
    pub item: usize,
    pub condition: &'static str,
    pub holds: bool,
    /// Concepts (as `(extent, intent)`) falsifying the condition.
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PawlakReport {
    pub concepts: usize,
    pub items: Vec<PawlakItem>,
}

impl PawlakReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.holds)
    }
}

pub const PAWLAK_CONDITIONS: [&str; 10] = [
    "◇(a ∨ b) = ◇a ∨ ◇b",
    "□(a ∧ b) = □a ∧ □b",
    "a ≤ □b ⇒ ◇a ≤ b",
    "◇a ≤ b ⇒ a ≤ □b",
    "□a ≤ a",
    "a ≤ ◇a",
    "a ≤ □◇a",
    "◇□a ≤ a",
    "◇◇a ≤ ◇a",
    "□a ≤ □□a",
];

struct Ops<'a> {
    g: &'a GraphFrame,
    l: ConceptLattice,
}

impl Ops<'_> {
    fn c(&self, i: usize) -> Concept {
        self.l.get(i)
    }
    fn idx(&self, c: Concept) -> usize {
        self.l.index_of(&c).expect("operations return concepts")
    }
    fn boxed(&self, i: usize) -> usize {
        let extent = self.g.box_extent(self.c(i).intent);
        self.idx(Concept { extent, intent: self.g.up(extent) })
    }
    fn dia(&self, i: usize) -> usize {
        let intent = self.g.dia_intent(self.c(i).extent);
        self.idx(Concept { extent: self.g.down(intent), intent })
    }
    fn leq(&self, i: usize, j: usize) -> bool {
        is_subset(self.c(i).extent, self.c(j).extent)
    }
}

/// Checks the ten conditions over every element (or pair) of the complex
/// algebra; refuses frames that are not Pawlak spaces.
pub fn pawlak_check(g: &GraphFrame) -> Result<PawlakReport, RoughError> {
    let class = classify_space(&Frame::Graph(g.clone()), false)?;
    if !class.flag("Pawlak") {
        return Err(RoughError::NotPawlak(Box::new(class)));
    }
    Ok(pawlak_conditions(g))
}

/// The ten conditions without the class precondition.
pub fn pawlak_conditions(g: &GraphFrame) -> PawlakReport {
    let ops = Ops { g, l: ConceptLattice::of_graph(g) };
    let n = ops.l.len();
    let describe = |ids: &[usize]| ids.iter().map(|i| ops.l.describe(&ops.c(*i))).collect::<Vec<_>>();
    let unary = |pred: &dyn Fn(usize) -> bool| (0..n).find(|a| !pred(*a)).map(|a| describe(&[a]));
    let binary = |pred: &dyn Fn(usize, usize) -> bool| {
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|(a, b)| !pred(*a, *b)).map(|(a, b)| describe(&[a, b]))
    };
    let o = &ops;
    let witnesses: Vec<Option<Vec<String>>> = vec![
        binary(&|a, b| o.dia(o.l.join(a, b)) == o.l.join(o.dia(a), o.dia(b))),
        binary(&|a, b| o.boxed(o.l.meet(a, b)) == o.l.meet(o.boxed(a), o.boxed(b))),
        binary(&|a, b| !o.leq(a, o.boxed(b)) || o.leq(o.dia(a), b)),
        binary(&|a, b| !o.leq(o.dia(a), b) || o.leq(a, o.boxed(b))),
        unary(&|a| o.leq(o.boxed(a), a)),
        unary(&|a| o.leq(a, o.dia(a))),
        unary(&|a| o.leq(a, o.boxed(o.dia(a)))),
        unary(&|a| o.leq(o.dia(o.boxed(a)), a)),
        unary(&|a| o.leq(o.dia(o.dia(a)), o.dia(a))),
        unary(&|a| o.leq(o.boxed(a), o.boxed(o.boxed(a)))),
    ];
    let items = witnesses
        .into_iter()
        .enumerate()
        .map(|(i, witness)| PawlakItem { item: i + 1, condition: PAWLAK_CONDITIONS[i], holds: witness.is_none(), witness })
        .collect();
    PawlakReport { concepts: n, items }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::tests::path_graph;
    use crate::relcalc::{FiniteDomain, FiniteRelation};

    fn kripke(n: usize, pairs: &[(usize, usize)]) -> KripkeFrame {
        KripkeFrame::unimodal(FiniteDomain::numbered(n), FiniteRelation::from_pairs(n, n, pairs.iter().copied()))
            .unwrap()
    }

    #[test]
    fn approximation_operators() {
        let k = kripke(3, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]);
        assert_eq!(approximations(&k, 0b101).unwrap(), (0b100, 0b111));
        let d = kripke(3, &[(0, 0), (1, 1), (2, 2)]);
        assert_eq!(approximations(&d, 0b110).unwrap(), (0b110, 0b110));
        assert_eq!(approximations(&k, 0).unwrap().1, 0);
    }

    #[test]
    fn kripke_flags() {
        let eq = kripke(3, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]);
        let r = classify_space(&Frame::Kripke(eq), true).unwrap();
        assert!(r.flags.values().all(|v| *v));
        assert!(r.checks.iter().all(|c| c.modal_valid == Some(true)));
        let r = classify_space(&Frame::Kripke(kripke(2, &[(0, 1)])), false).unwrap();
        assert!(!r.flag("serial"));
        let serial = r.checks.iter().find(|c| c.flag == "serial").unwrap();
        assert_eq!(serial.witness, Some(["2".to_string(), "2".to_string()]));
    }

    #[test]
    fn pawlak_witness_frame() {
        let g = path_graph();
        let p = GraphFrame::pawlak_witness(g.domain().clone(), g.e().clone()).unwrap();
        assert!(classify_space(&Frame::Graph(p.clone()), true).unwrap().flag("Pawlak"));
        let report = pawlak_check(&p).unwrap();
        assert_eq!(report.concepts, 5);
        assert!(report.all_pass());
        let empty = FiniteRelation::empty(3, 3);
        let not = GraphFrame::new(g.domain().clone(), g.e().clone(), empty.clone(), empty).unwrap();
        assert!(matches!(pawlak_check(&not), Err(RoughError::NotPawlak(_))));
    }
}
