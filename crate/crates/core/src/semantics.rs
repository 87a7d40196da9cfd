//! Compositional interpretation of formulas on graph-based, polarity-based
//! and Kripke models, sequent truth, and brute-force frame validity.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::frames::{Concept, ConceptLattice, Frame, GraphFrame, KripkeFrame, PolarityFrame};
use crate::relcalc::{full_set, is_subset, singleton, Set};
use crate::syntax::{AtomKind, Formula, Sequent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("no value for `{0}` in the valuation")]
    Unbound(String),
    #[error("valuation kind does not match a {0} frame")]
    Mismatch(&'static str),
    #[error("sequent has {got} propositional variables, the cap is {cap}")]
    TooManyVariables { got: usize, cap: usize },
    #[error("{count} valuations exceed the cap of {cap}; refusing to sample")]
    TooLarge { count: u128, cap: u128 },
}

/// The complex-algebra operations of a frame whose propositions are formal
/// concepts.
pub trait ConceptAlgebra {
    fn lattice(&self) -> ConceptLattice;
    /// Intent of the concept with the given extent.
    fn up(&self, extent: Set) -> Set;
    /// Extent of the concept with the given intent.
    fn down(&self, intent: Set) -> Set;
    /// Extent of `□c` from the intent of `c`.
    fn box_extent(&self, intent: Set) -> Set;
    /// Intent of `◇c` from the extent of `c`.
    fn dia_intent(&self, extent: Set) -> Set;
    /// Extent of `■c` from the intent of `c`.
    fn bbox_extent(&self, intent: Set) -> Set;
    /// Intent of `⧫c` from the extent of `c`.
    fn bdia_intent(&self, extent: Set) -> Set;
    fn full_objects(&self) -> Set;
    fn full_attributes(&self) -> Set;
    /// Whether `a` and `x` are incident (`a E^c x` on graphs).
    fn incident(&self, a: usize, x: usize) -> bool;
}

impl ConceptAlgebra for GraphFrame {
    fn lattice(&self) -> ConceptLattice {
        ConceptLattice::of_graph(self)
    }
    fn up(&self, extent: Set) -> Set {
        self.e().neg1(extent)
    }
    fn down(&self, intent: Set) -> Set {
        self.e().neg0(intent)
    }
    fn box_extent(&self, intent: Set) -> Set {
        self.r_box().neg0(intent)
    }
    fn dia_intent(&self, extent: Set) -> Set {
        self.r_dia().neg0(extent)
    }
    fn bbox_extent(&self, intent: Set) -> Set {
        self.r_bbox().neg0(intent)
    }
    fn bdia_intent(&self, extent: Set) -> Set {
        self.r_bdia().neg0(extent)
    }
    fn full_objects(&self) -> Set {
        full_set(self.size())
    }
    fn full_attributes(&self) -> Set {
        full_set(self.size())
    }
    fn incident(&self, a: usize, x: usize) -> bool {
        !self.e().contains(a, x)
    }
}

impl ConceptAlgebra for PolarityFrame {
    fn lattice(&self) -> ConceptLattice {
        ConceptLattice::of_polarity(self)
    }
    fn up(&self, extent: Set) -> Set {
        self.i().pos1(extent)
    }
    fn down(&self, intent: Set) -> Set {
        self.i().pos0(intent)
    }
    fn box_extent(&self, intent: Set) -> Set {
        self.r_box().pos0(intent)
    }
    fn dia_intent(&self, extent: Set) -> Set {
        self.r_dia().pos0(extent)
    }
    fn bbox_extent(&self, intent: Set) -> Set {
        self.r_bbox().pos0(intent)
    }
    fn bdia_intent(&self, extent: Set) -> Set {
        self.r_bdia().pos0(extent)
    }
    fn full_objects(&self) -> Set {
        full_set(self.a().len())
    }
    fn full_attributes(&self) -> Set {
        full_set(self.x().len())
    }
    fn incident(&self, a: usize, x: usize) -> bool {
        self.i().contains(a, x)
    }
}

pub type ConceptValuation = BTreeMap<String, Concept>;
pub type SetValuation = BTreeMap<String, Set>;

/// Values for propositional variables, nominals and conominals, keyed by
/// name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Concepts(ConceptValuation),
    Sets(SetValuation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Concept(Concept),
    Set(Set),
}

/// A frame together with a valuation.
#[derive(Debug, Clone)]
pub struct Model<'a> {
    pub frame: &'a Frame,
    pub valuation: Valuation,
}

pub fn interpret_concept<A: ConceptAlgebra + ?Sized>(
    alg: &A,
    v: &ConceptValuation,
    f: &Formula,
) -> Result<Concept, SemanticsError> {
    let from_extent = |extent: Set| Concept { extent, intent: alg.up(extent) };
    let from_intent = |intent: Set| Concept { extent: alg.down(intent), intent };
    Ok(match f {
        Formula::Top => from_extent(alg.full_objects()),
        Formula::Bottom => from_intent(alg.full_attributes()),
        Formula::Var(n) | Formula::Nominal(n) | Formula::Conominal(n) => {
            *v.get(n).ok_or_else(|| SemanticsError::Unbound(n.clone()))?
        }
        Formula::And(a, b) => {
            from_extent(interpret_concept(alg, v, a)?.extent & interpret_concept(alg, v, b)?.extent)
        }
        Formula::Or(a, b) => {
            from_intent(interpret_concept(alg, v, a)?.intent & interpret_concept(alg, v, b)?.intent)
        }
        Formula::Box(a) => from_extent(alg.box_extent(interpret_concept(alg, v, a)?.intent)),
        Formula::BlackBox(a) => from_extent(alg.bbox_extent(interpret_concept(alg, v, a)?.intent)),
        Formula::Dia(a) => from_intent(alg.dia_intent(interpret_concept(alg, v, a)?.extent)),
        Formula::BlackDia(a) => from_intent(alg.bdia_intent(interpret_concept(alg, v, a)?.extent)),
    })
}

/// Classical extension of `f`.
pub fn interpret_set(k: &KripkeFrame, v: &SetValuation, f: &Formula) -> Result<Set, SemanticsError> {
    Ok(match f {
        Formula::Top => full_set(k.size()),
        Formula::Bottom => 0,
        Formula::Var(n) | Formula::Nominal(n) | Formula::Conominal(n) => {
            *v.get(n).ok_or_else(|| SemanticsError::Unbound(n.clone()))?
        }
        Formula::And(a, b) => interpret_set(k, v, a)? & interpret_set(k, v, b)?,
        Formula::Or(a, b) => interpret_set(k, v, a)? | interpret_set(k, v, b)?,
        Formula::Box(a) => k.r_box().boxed(interpret_set(k, v, a)?),
        Formula::Dia(a) => k.r_dia().diamond(interpret_set(k, v, a)?),
        Formula::BlackBox(a) => k.r_bbox().boxed(interpret_set(k, v, a)?),
        Formula::BlackDia(a) => k.r_bdia().diamond(interpret_set(k, v, a)?),
    })
}

pub fn interpret(m: &Model<'_>, f: &Formula) -> Result<Value, SemanticsError> {
    match (m.frame, &m.valuation) {
        (Frame::Kripke(k), Valuation::Sets(v)) => interpret_set(k, v, f).map(Value::Set),
        (Frame::Graph(g), Valuation::Concepts(v)) => interpret_concept(g, v, f).map(Value::Concept),
        (Frame::Polarity(p), Valuation::Concepts(v)) => interpret_concept(p, v, f).map(Value::Concept),
        (frame, _) => Err(SemanticsError::Mismatch(frame.kind())),
    }
}

/// `⟦φ⟧ ≤ ⟦ψ⟧` in the complex algebra.
pub fn sequent_true(m: &Model<'_>, s: &Sequent) -> Result<bool, SemanticsError> {
    Ok(match (interpret(m, &s.lhs)?, interpret(m, &s.rhs)?) {
        (Value::Concept(a), Value::Concept(b)) => is_subset(a.extent, b.extent),
        (Value::Set(a), Value::Set(b)) => is_subset(a, b),
        _ => unreachable!("interpret returns one kind per model"),
    })
}

/// Sequent truth read off pointwise: every state satisfying the premise is
/// incident to every state refuting the conclusion.
pub fn sequent_true_pointwise<A: ConceptAlgebra + ?Sized>(
    alg: &A,
    v: &ConceptValuation,
    s: &Sequent,
) -> Result<bool, SemanticsError> {
    let sat = interpret_concept(alg, v, &s.lhs)?.extent;
    let refuted = interpret_concept(alg, v, &s.rhs)?.intent;
    Ok(crate::relcalc::elements(sat)
        .all(|z| crate::relcalc::elements(refuted).all(|z2| alg.incident(z, z2))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidityOptions {
    pub max_variables: usize,
    pub max_valuations: u128,
}

impl Default for ValidityOptions {
    fn default() -> Self {
        ValidityOptions { max_variables: 2, max_valuations: 1 << 22 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// The first valuation, in enumeration order, refuting the sequent.
    Invalid(Valuation),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

fn atoms_of(s: &Sequent, opts: &ValidityOptions) -> Result<Vec<(AtomKind, String)>, SemanticsError> {
    let mut atoms = s.lhs.atoms();
    atoms.extend(s.rhs.atoms());
    let vars = atoms.iter().filter(|(k, _)| *k == AtomKind::Var).count();
    if vars > opts.max_variables {
        return Err(SemanticsError::TooManyVariables { got: vars, cap: opts.max_variables });
    }
    Ok(atoms.into_iter().collect())
}

/// Calls `f` on every combination of candidates, first atom varying
/// slowest, until it returns `true`; returns that combination.
fn search<T: Copy>(
    domains: &[Vec<T>],
    opts: &ValidityOptions,
    mut f: impl FnMut(&[T]) -> Result<bool, SemanticsError>,
) -> Result<Option<Vec<T>>, SemanticsError> {
    let count = domains.iter().fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128));
    if count > opts.max_valuations {
        return Err(SemanticsError::TooLarge { count, cap: opts.max_valuations });
    }
    if domains.iter().any(|d| d.is_empty()) {
        return Ok(None);
    }
    let mut idx = vec![0usize; domains.len()];
    let mut current: Vec<T> = domains.iter().map(|d| d[0]).collect();
    loop {
        if f(&current)? {
            return Ok(Some(current));
        }
        let mut pos = domains.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < domains[pos].len() {
                current[pos] = domains[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            current[pos] = domains[pos][0];
        }
    }
}

/// Validity on a concept-based frame: variables range over all concepts,
/// nominals over object concepts, conominals over attribute concepts.
pub fn concept_frame_valid<A: ConceptAlgebra + ?Sized>(
    alg: &A,
    lattice: &ConceptLattice,
    s: &Sequent,
    opts: &ValidityOptions,
) -> Result<Validity, SemanticsError> {
    let atoms = atoms_of(s, opts)?;
    let all = lattice.concepts().to_vec();
    let joins = lattice.object_concepts();
    let meets = lattice.attribute_concepts();
    let domains: Vec<Vec<Concept>> = atoms
        .iter()
        .map(|(k, _)| match k {
            AtomKind::Var => all.clone(),
            AtomKind::Nominal => joins.clone(),
            AtomKind::Conominal => meets.clone(),
        })
        .collect();
    let mut v = ConceptValuation::new();
    let found = search(&domains, opts, |vals| {
        for ((_, name), c) in atoms.iter().zip(vals) {
            v.insert(name.clone(), *c);
        }
        let l = interpret_concept(alg, &v, &s.lhs)?;
        let r = interpret_concept(alg, &v, &s.rhs)?;
        Ok(!is_subset(l.extent, r.extent))
    })?;
    Ok(match found {
        None => Validity::Valid,
        Some(vals) => Validity::Invalid(Valuation::Concepts(
            atoms.iter().map(|(_, n)| n.clone()).zip(vals).collect(),
        )),
    })
}

/// Validity on a Kripke frame: variables range over all subsets (largest
/// code first), nominals over singletons, conominals over co-singletons.
pub fn kripke_frame_valid(k: &KripkeFrame, s: &Sequent, opts: &ValidityOptions) -> Result<Validity, SemanticsError> {
    let atoms = atoms_of(s, opts)?;
    let n = k.size();
    let full = full_set(n);
    let domains: Vec<Vec<Set>> = atoms
        .iter()
        .map(|(kind, _)| match kind {
            AtomKind::Var => (0..=full).rev().collect(),
            AtomKind::Nominal => (0..n).map(singleton).collect(),
            AtomKind::Conominal => (0..n).map(|i| full & !singleton(i)).collect(),
        })
        .collect();
    let mut v = SetValuation::new();
    let found = search(&domains, opts, |vals| {
        for ((_, name), c) in atoms.iter().zip(vals) {
            v.insert(name.clone(), *c);
        }
        Ok(!is_subset(interpret_set(k, &v, &s.lhs)?, interpret_set(k, &v, &s.rhs)?))
    })?;
    Ok(match found {
        None => Validity::Valid,
        Some(vals) => Validity::Invalid(Valuation::Sets(atoms.iter().map(|(_, n)| n.clone()).zip(vals).collect())),
    })
}

pub fn frame_valid(f: &Frame, s: &Sequent, opts: &ValidityOptions) -> Result<Validity, SemanticsError> {
    match f {
        Frame::Kripke(k) => kripke_frame_valid(k, s, opts),
        Frame::Graph(g) => concept_frame_valid(g, &g.lattice(), s, opts),
        Frame::Polarity(p) => concept_frame_valid(p, &p.lattice(), s, opts),
    }
}
