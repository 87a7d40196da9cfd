//! Finite relations as bit-row matrices, the polar set operators, the
//! composition operators and E-compatibility.
//!
//! Subsets of a domain are `u64` bitmasks, so domains hold at most 64
//! elements.

use std::fmt;

use thiserror::Error;

pub const MAX_DOMAIN: usize = 64;

/// Bitmask subset of a finite domain.
pub type Set = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelError {
    #[error("domain size {0} exceeds the maximum of {MAX_DOMAIN}")]
    TooLarge(usize),
    #[error("duplicate label `{0}` in domain")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("set {set:#b} is not within a domain of size {size}")]
    OutOfDomain { set: Set, size: usize },
    #[error("domain mismatch: {0}")]
    Mismatch(String),
    #[error("composition {0:?} needs the mediating relation E")]
    MissingMediator(Composition),
    #[error("E is not reflexive at element {0}")]
    NotReflexive(usize),
}

pub fn full_set(n: usize) -> Set {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn singleton(i: usize) -> Set {
    1u64 << i
}

pub fn contains(s: Set, i: usize) -> bool {
    s >> i & 1 == 1
}

pub fn is_subset(a: Set, b: Set) -> bool {
    a & !b == 0
}

pub fn elements(s: Set) -> impl Iterator<Item = usize> {
    let mut rest = s;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// Ordered, uniquely labelled finite set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteDomain {
    labels: Vec<String>,
}

impl FiniteDomain {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, RelError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > MAX_DOMAIN {
            return Err(RelError::TooLarge(labels.len()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(RelError::DuplicateLabel(l.clone()));
            }
        }
        Ok(FiniteDomain { labels })
    }

    /// Domain labelled `1..=n`.
    pub fn numbered(n: usize) -> Self {
        FiniteDomain::new((1..=n).map(|i| i.to_string())).expect("small numbered domain")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index(&self, label: &str) -> Result<usize, RelError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| RelError::UnknownLabel(label.to_string()))
    }

    pub fn set_of<'a>(&self, labels: impl IntoIterator<Item = &'a str>) -> Result<Set, RelError> {
        labels.into_iter().try_fold(0, |acc, l| Ok(acc | singleton(self.index(l)?)))
    }

    pub fn labels_of(&self, s: Set) -> Vec<String> {
        elements(s).map(|i| self.labels[i].clone()).collect()
    }

    /// Concatenated labels, e.g. `uvw`, or `∅`.
    pub fn compact(&self, s: Set) -> String {
        if s == 0 {
            return "∅".into();
        }
        let sep = if self.labels.iter().all(|l| l.chars().count() == 1) { "" } else { "," };
        self.labels_of(s).join(sep)
    }
}

/// Relation between a source domain of size `src` and a target domain of
/// size `tgt`; `rows[u]` is the set of targets related to `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteRelation {
    src: usize,
    tgt: usize,
    rows: Vec<Set>,
}

impl FiniteRelation {
    pub fn empty(src: usize, tgt: usize) -> Self {
        assert!(src <= MAX_DOMAIN && tgt <= MAX_DOMAIN, "domain too large");
        FiniteRelation { src, tgt, rows: vec![0; src] }
    }

    pub fn full(src: usize, tgt: usize) -> Self {
        let mut r = Self::empty(src, tgt);
        r.rows.iter_mut().for_each(|row| *row = full_set(tgt));
        r
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n, n);
        for (i, row) in r.rows.iter_mut().enumerate() {
            *row = singleton(i);
        }
        r
    }

    pub fn from_rows(tgt: usize, rows: Vec<Set>) -> Self {
        assert!(rows.iter().all(|r| is_subset(*r, full_set(tgt))), "row outside target");
        assert!(rows.len() <= MAX_DOMAIN && tgt <= MAX_DOMAIN, "domain too large");
        FiniteRelation { src: rows.len(), tgt, rows }
    }

    pub fn from_pairs(src: usize, tgt: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(src, tgt);
        for (u, v) in pairs {
            r.insert(u, v);
        }
        r
    }

    /// Decodes the relation from the low `src * tgt` bits of `code`,
    /// row-major.
    pub fn from_code(src: usize, tgt: usize, code: u64) -> Self {
        let mut r = Self::empty(src, tgt);
        for u in 0..src {
            r.rows[u] = (code >> (u * tgt)) & full_set(tgt);
        }
        r
    }

    pub fn src_len(&self) -> usize {
        self.src
    }

    pub fn tgt_len(&self) -> usize {
        self.tgt
    }

    pub fn rows(&self) -> &[Set] {
        &self.rows
    }

    pub fn row(&self, u: usize) -> Set {
        self.rows[u]
    }

    /// Sources related to `v`.
    pub fn column(&self, v: usize) -> Set {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| contains(**r, v))
            .fold(0, |acc, (u, _)| acc | singleton(u))
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        contains(self.rows[u], v)
    }

    pub fn insert(&mut self, u: usize, v: usize) {
        assert!(u < self.src && v < self.tgt, "pair out of range");
        self.rows[u] |= singleton(v);
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(u, r)| elements(*r).map(move |v| (u, v)))
    }

    pub fn converse(&self) -> Self {
        FiniteRelation::from_pairs(self.tgt, self.src, self.pairs().map(|(u, v)| (v, u)))
    }

    pub fn complement(&self) -> Self {
        let full = full_set(self.tgt);
        FiniteRelation { src: self.src, tgt: self.tgt, rows: self.rows.iter().map(|r| !r & full).collect() }
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!((self.src, self.tgt), (other.src, other.tgt));
        FiniteRelation {
            src: self.src,
            tgt: self.tgt,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.first_excess(other).is_none()
    }

    /// First pair of `self` not in `other`.
    pub fn first_excess(&self, other: &Self) -> Option<(usize, usize)> {
        assert_eq!((self.src, self.tgt), (other.src, other.tgt), "shape mismatch");
        self.rows
            .iter()
            .zip(&other.rows)
            .enumerate()
            .find_map(|(u, (a, b))| elements(a & !b).next().map(|v| (u, v)))
    }

    pub fn is_reflexive(&self) -> bool {
        self.src == self.tgt && (0..self.src).all(|i| self.contains(i, i))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| *r == 0)
    }

    /// `T⁽⁰⁾[V'] = {u | ∀v ∈ V'. u T v}`.
    pub fn pos0(&self, targets: Set) -> Set {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| is_subset(targets, **r))
            .fold(0, |acc, (u, _)| acc | singleton(u))
    }

    /// `T⁽¹⁾[U'] = {v | ∀u ∈ U'. u T v}`.
    pub fn pos1(&self, sources: Set) -> Set {
        elements(sources).fold(full_set(self.tgt), |acc, u| acc & self.rows[u])
    }

    /// `T^[0][V'] = {u | ∀v ∈ V'. ¬ u T v}`.
    pub fn neg0(&self, targets: Set) -> Set {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| **r & targets == 0)
            .fold(0, |acc, (u, _)| acc | singleton(u))
    }

    /// `T^[1][U'] = {v | ∀u ∈ U'. ¬ u T v}`.
    pub fn neg1(&self, sources: Set) -> Set {
        !elements(sources).fold(0, |acc, u| acc | self.rows[u]) & full_set(self.tgt)
    }

    /// Image `T[U'] = {v | ∃u ∈ U'. u T v}`.
    pub fn image(&self, sources: Set) -> Set {
        elements(sources).fold(0, |acc, u| acc | self.rows[u])
    }

    /// Preimage `T⁻¹[V'] = {u | ∃v ∈ V'. u T v}`.
    pub fn preimage(&self, targets: Set) -> Set {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| **r & targets != 0)
            .fold(0, |acc, (u, _)| acc | singleton(u))
    }

    /// `⟨T⟩W`.
    pub fn diamond(&self, w: Set) -> Set {
        self.preimage(w)
    }

    /// `[T]W = {u | T[u] ⊆ W}`.
    pub fn boxed(&self, w: Set) -> Set {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| is_subset(**r, w))
            .fold(0, |acc, (u, _)| acc | singleton(u))
    }

    /// Checked form of the positive polar operators: side 0 takes a subset
    /// of the target, side 1 a subset of the source.
    pub fn galois_pos(&self, side: u8, s: Set) -> Result<Set, RelError> {
        match side {
            0 => self.check_set(s, self.tgt).map(|_| self.pos0(s)),
            _ => self.check_set(s, self.src).map(|_| self.pos1(s)),
        }
    }

    /// Checked form of the negative polar operators, i.e. `galois_pos` on the
    /// complement.
    pub fn galois_neg(&self, side: u8, s: Set) -> Result<Set, RelError> {
        match side {
            0 => self.check_set(s, self.tgt).map(|_| self.neg0(s)),
            _ => self.check_set(s, self.src).map(|_| self.neg1(s)),
        }
    }

    fn check_set(&self, s: Set, size: usize) -> Result<(), RelError> {
        if is_subset(s, full_set(size)) {
            Ok(())
        } else {
            Err(RelError::OutOfDomain { set: s, size })
        }
    }
}

impl fmt::Display for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.pairs().map(|(u, v)| format!("({u},{v})")).collect();
        write!(f, "{{{}}}", pairs.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Composition {
    /// Ordinary relational composition, `x (R∘T) z` iff `∃y. xRy ∧ yTz`.
    Circ,
    /// The Kripke-carrier copy of `Ast`.
    Star,
    /// `(R ⋄_E T)^[0][a] = R^[0][E^[0][T^[0][a]]]`.
    DiaE,
    /// `(R □_E T)^[0][x] = R^[0][E^[1][T^[0][x]]]`.
    BoxE,
    /// `(R ∗ T)^[0][x] = R^[0][T^[0][x]]`.
    Ast,
}

pub fn compose(
    kind: Composition,
    r: &FiniteRelation,
    t: &FiniteRelation,
    e: Option<&FiniteRelation>,
) -> Result<FiniteRelation, RelError> {
    let n = r.src;
    let square = |x: &FiniteRelation| x.src == n && x.tgt == n;
    if !(square(r) && square(t)) {
        return Err(RelError::Mismatch(format!(
            "compositions act on endorelations of one domain ({}x{} vs {}x{})",
            r.src, r.tgt, t.src, t.tgt
        )));
    }
    if let Some(e) = e {
        if !square(e) {
            return Err(RelError::Mismatch("E lives on a different domain".into()));
        }
    }
    let mediator = || e.ok_or(RelError::MissingMediator(kind));
    Ok(match kind {
        Composition::Circ => circ(r, t),
        Composition::Star | Composition::Ast => ast(r, t),
        Composition::DiaE => dia_e(r, t, mediator()?),
        Composition::BoxE => box_e(r, t, mediator()?),
    })
}

pub fn circ(r: &FiniteRelation, t: &FiniteRelation) -> FiniteRelation {
    assert_eq!(r.tgt, t.src, "composition shape mismatch");
    FiniteRelation { src: r.src, tgt: t.tgt, rows: r.rows.iter().map(|row| t.image(*row)).collect() }
}

/// Builds the relation whose complement has column `c` equal to `col(c)`.
fn from_complement_columns(src: usize, tgt: usize, col: impl Fn(usize) -> Set) -> FiniteRelation {
    let mut rows = vec![0; src];
    for c in 0..tgt {
        let outside = !col(c) & full_set(src);
        for u in elements(outside) {
            rows[u] |= singleton(c);
        }
    }
    FiniteRelation { src, tgt, rows }
}

fn anti_column(t: &FiniteRelation, v: usize) -> Set {
    t.neg0(singleton(v))
}

pub fn ast(r: &FiniteRelation, t: &FiniteRelation) -> FiniteRelation {
    from_complement_columns(r.src, t.tgt, |x| r.neg0(anti_column(t, x)))
}

pub fn dia_e(r: &FiniteRelation, t: &FiniteRelation, e: &FiniteRelation) -> FiniteRelation {
    from_complement_columns(r.src, t.tgt, |a| r.neg0(e.neg0(anti_column(t, a))))
}

pub fn box_e(r: &FiniteRelation, t: &FiniteRelation, e: &FiniteRelation) -> FiniteRelation {
    from_complement_columns(r.src, t.tgt, |x| r.neg0(e.neg1(anti_column(t, x))))
}

/// Builds the relation whose column `c` is `col(c)`.
fn from_columns(src: usize, tgt: usize, col: impl Fn(usize) -> Set) -> FiniteRelation {
    let mut rows = vec![0; src];
    for c in 0..tgt {
        for u in elements(col(c)) {
            rows[u] |= singleton(c);
        }
    }
    FiniteRelation { src, tgt, rows }
}

/// I-mediated composition of two `A×X` relations:
/// `a (β₁ ;_I β₂) x` iff `a ∈ β₁⁽⁰⁾[I⁽¹⁾[β₂⁽⁰⁾[x]]]`.
pub fn semi_i_ax(b1: &FiniteRelation, b2: &FiniteRelation, i: &FiniteRelation) -> FiniteRelation {
    from_columns(b1.src, b2.tgt, |x| b1.pos0(i.pos1(b2.pos0(singleton(x)))))
}

/// I-mediated composition of two `X×A` relations:
/// `x (δ₁ ;_I δ₂) a` iff `x ∈ δ₁⁽⁰⁾[I⁽⁰⁾[δ₂⁽⁰⁾[a]]]`.
pub fn semi_i_xa(d1: &FiniteRelation, d2: &FiniteRelation, i: &FiniteRelation) -> FiniteRelation {
    from_columns(d1.src, d2.tgt, |a| d1.pos0(i.pos0(d2.pos0(singleton(a)))))
}

/// Unmediated composition: `u (R ; T) v` iff `u ∈ R⁽⁰⁾[T⁽⁰⁾[v]]`.
pub fn semi(r: &FiniteRelation, t: &FiniteRelation) -> FiniteRelation {
    assert_eq!(r.tgt, t.src, "composition shape mismatch");
    from_columns(r.src, t.tgt, |v| r.pos0(t.pos0(singleton(v))))
}

/// Which pair of stability conditions to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `(R^[0][y])^[10] ⊆ R^[0][y]` and `(R^[1][b])^[01] ⊆ R^[1][b]`.
    Box,
    /// `(R^[0][b])^[01] ⊆ R^[0][b]` and `(R^[1][y])^[10] ⊆ R^[1][y]`.
    Dia,
}

/// A failed stability condition: `closure` of `set` escapes `set`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatWitness {
    pub element: usize,
    /// 0 when `set = R^[0][element]`, 1 when `set = R^[1][element]`.
    pub side: u8,
    pub set: Set,
    pub closure: Set,
}

impl fmt::Display for CompatWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "closure of R^[{}][{}] = {:#b} is {:#b}, not contained in it",
            self.side, self.element, self.set, self.closure
        )
    }
}

/// Closure `S ↦ S^[10]` on the source side of `E`.
pub fn close_source(e: &FiniteRelation, s: Set) -> Set {
    e.neg0(e.neg1(s))
}

/// Closure `S ↦ S^[01]` on the target side of `E`.
pub fn close_target(e: &FiniteRelation, s: Set) -> Set {
    e.neg1(e.neg0(s))
}

/// First violated E-compatibility condition of `r` in the given orientation.
pub fn e_compatibility(
    r: &FiniteRelation,
    e: &FiniteRelation,
    orientation: Orientation,
) -> Result<Option<CompatWitness>, RelError> {
    let n = e.src;
    if e.tgt != n || r.src != n || r.tgt != n {
        return Err(RelError::Mismatch("R and E must be endorelations on one domain".into()));
    }
    if let Some(i) = (0..n).find(|i| !e.contains(*i, *i)) {
        return Err(RelError::NotReflexive(i));
    }
    // Side-0 sets live on the source side for the box orientation and on the
    // target side for the diamond orientation; side-1 sets the other way.
    let (close0, close1): (fn(&FiniteRelation, Set) -> Set, fn(&FiniteRelation, Set) -> Set) =
        match orientation {
            Orientation::Box => (close_source, close_target),
            Orientation::Dia => (close_target, close_source),
        };
    for y in 0..n {
        let set = r.neg0(singleton(y));
        let closure = close0(e, set);
        if !is_subset(closure, set) {
            return Ok(Some(CompatWitness { element: y, side: 0, set, closure }));
        }
    }
    for b in 0..n {
        let set = r.neg1(singleton(b));
        let closure = close1(e, set);
        if !is_subset(closure, set) {
            return Ok(Some(CompatWitness { element: b, side: 1, set, closure }));
        }
    }
    Ok(None)
}

pub fn is_e_compatible(r: &FiniteRelation, e: &FiniteRelation, orientation: Orientation) -> Result<bool, RelError> {
    e_compatibility(r, e, orientation).map(|w| w.is_none())
}
