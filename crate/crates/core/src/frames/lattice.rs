use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use crate::relcalc::{elements, full_set, is_subset, singleton, FiniteDomain, FiniteRelation, Set};

use super::{GraphFrame, PolarityFrame};

/// Galois-stable (extent, intent) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Concept {
    pub extent: Set,
    pub intent: Set,
}

/// All formal concepts of a context, ordered by extent size then bit
/// pattern, with lattice operations.
#[derive(Debug, Clone)]
pub struct ConceptLattice {
    objects: FiniteDomain,
    attributes: FiniteDomain,
    incidence: FiniteRelation,
    concepts: Vec<Concept>,
    by_extent: HashMap<Set, usize>,
}

impl ConceptLattice {
    /// Concepts of the context `(objects, attributes, incidence)` under the
    /// positive polars.
    pub fn from_context(objects: FiniteDomain, attributes: FiniteDomain, incidence: FiniteRelation) -> Self {
        let mut extents: BTreeSet<Set> = BTreeSet::new();
        extents.insert(full_set(objects.len()));
        for x in 0..attributes.len() {
            let ext = incidence.pos0(singleton(x));
            let meets: Vec<Set> = extents.iter().map(|s| s & ext).collect();
            extents.extend(meets);
        }
        let mut concepts: Vec<Concept> =
            extents.into_iter().map(|e| Concept { extent: e, intent: incidence.pos1(e) }).collect();
        concepts.sort_by_key(|c| (c.extent.count_ones(), c.extent));
        let by_extent = concepts.iter().enumerate().map(|(i, c)| (c.extent, i)).collect();
        ConceptLattice { objects, attributes, incidence, concepts, by_extent }
    }

    pub fn of_graph(g: &GraphFrame) -> Self {
        Self::from_context(g.domain().clone(), g.domain().clone(), g.e().complement())
    }

    pub fn of_polarity(p: &PolarityFrame) -> Self {
        Self::from_context(p.a().clone(), p.x().clone(), p.i().clone())
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn get(&self, i: usize) -> Concept {
        self.concepts[i]
    }

    pub fn objects(&self) -> &FiniteDomain {
        &self.objects
    }

    pub fn attributes(&self) -> &FiniteDomain {
        &self.attributes
    }

    pub fn index_of(&self, c: &Concept) -> Option<usize> {
        self.by_extent.get(&c.extent).copied().filter(|i| self.concepts[*i].intent == c.intent)
    }

    /// Concept generated by an arbitrary set of objects.
    pub fn close_objects(&self, b: Set) -> Concept {
        let intent = self.incidence.pos1(b);
        Concept { extent: self.incidence.pos0(intent), intent }
    }

    /// Concept generated by an arbitrary set of attributes.
    pub fn close_attributes(&self, y: Set) -> Concept {
        let extent = self.incidence.pos0(y);
        Concept { extent, intent: self.incidence.pos1(extent) }
    }

    pub fn is_concept(&self, c: &Concept) -> bool {
        self.incidence.pos1(c.extent) == c.intent && self.incidence.pos0(c.intent) == c.extent
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        is_subset(self.concepts[i].extent, self.concepts[j].extent)
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let e = self.concepts[i].extent & self.concepts[j].extent;
        self.by_extent[&e]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        let c = self.close_attributes(self.concepts[i].intent & self.concepts[j].intent);
        self.by_extent[&c.extent]
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.concepts.len() - 1
    }

    pub fn join_table(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.join(i, j)).collect()).collect()
    }

    pub fn meet_table(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.meet(i, j)).collect()).collect()
    }

    /// Object concepts `(a^{↑↓}, a^↑)`: the join-generators.
    pub fn object_concepts(&self) -> Vec<Concept> {
        (0..self.objects.len()).map(|a| self.close_objects(singleton(a))).collect()
    }

    /// Attribute concepts `(x^↓, x^{↓↑})`: the meet-generators.
    pub fn attribute_concepts(&self) -> Vec<Concept> {
        (0..self.attributes.len()).map(|x| self.close_attributes(singleton(x))).collect()
    }

    /// Covering pairs `(lower, upper)`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j
                    && self.leq(i, j)
                    && !(0..n).any(|k| k != i && k != j && self.leq(i, k) && self.leq(k, j))
                {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn describe(&self, c: &Concept) -> String {
        format!("({}, {})", self.objects.compact(c.extent), self.attributes.compact(c.intent))
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, c) in self.concepts.iter().enumerate() {
            let _ = writeln!(
                s,
                "  c{i} [label=\"({}|{})\"];",
                self.objects.compact(c.extent),
                self.attributes.compact(c.intent)
            );
        }
        for (lo, hi) in self.covers() {
            let _ = writeln!(s, "  c{lo} -> c{hi};");
        }
        s.push_str("}\n");
        s
    }

    /// Labels of extent and intent elements, for serialization.
    pub fn labels(&self, c: &Concept) -> (Vec<String>, Vec<String>) {
        (self.objects.labels_of(c.extent), self.attributes.labels_of(c.intent))
    }

    pub fn extent_elements(&self, c: &Concept) -> Vec<usize> {
        elements(c.extent).collect()
    }
}
