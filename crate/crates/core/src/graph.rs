//! In-memory triple store with three index permutations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::ops::Bound;

use crate::namespace::{rdf, PrefixMap};
use crate::term::{Iri, Subject, Term, Triple};

pub(crate) type TermId = u32;
type Key = (TermId, TermId, TermId);

/// A set of triples plus a prefix map and optional base IRI.
///
/// Terms are interned; `spo`, `pos` and `osp` hold the same triples in the
/// three orders so any single-position lookup is a range scan.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    terms: Vec<Term>,
    ids: BTreeMap<Term, TermId>,
    spo: BTreeSet<Key>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
    prefixes: PrefixMap,
    base: Option<Iri>,
}

/// Borrowed view of a stored triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleRef<'a> {
    pub subject: &'a Term,
    pub predicate: &'a Term,
    pub object: &'a Term,
}

impl TripleRef<'_> {
    pub fn to_triple(&self) -> Triple {
        let subject = Subject::try_from(self.subject.clone()).expect("subject is never a literal");
        let predicate = self.predicate.as_iri().expect("predicate is always an IRI").clone();
        Triple { subject, predicate, object: self.object.clone() }
    }

    pub fn predicate_iri(&self) -> &Iri {
        self.predicate.as_iri().expect("predicate is always an IRI")
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph { prefixes: PrefixMap::well_known(), ..Default::default() }
    }

    /// A graph with an empty prefix map.
    pub fn bare() -> Self {
        Graph::default()
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn prefixes_mut(&mut self) -> &mut PrefixMap {
        &mut self.prefixes
    }

    pub fn base(&self) -> Option<&Iri> {
        self.base.as_ref()
    }

    pub fn set_base(&mut self, base: Option<Iri>) {
        self.base = base;
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    fn intern(&mut self, term: Term) -> TermId {
        if let Some(id) = self.ids.get(&term) {
            return *id;
        }
        let id = self.terms.len() as TermId;
        self.terms.push(term.clone());
        self.ids.insert(term, id);
        id
    }

    pub(crate) fn id_of(&self, term: &Term) -> Option<TermId> {
        self.ids.get(term).copied()
    }

    pub(crate) fn term(&self, id: TermId) -> &Term {
        &self.terms[id as usize]
    }

    /// Insert a triple; returns `true` when it was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let s = self.intern(triple.subject.into());
        let p = self.intern(Term::Iri(triple.predicate));
        let o = self.intern(triple.object);
        if !self.spo.insert((s, p, o)) {
            return false;
        }
        self.pos.insert((p, o, s));
        self.osp.insert((o, s, p));
        true
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let ids = (
            self.id_of(&triple.subject.clone().into()),
            self.id_of(&Term::Iri(triple.predicate.clone())),
            self.id_of(&triple.object),
        );
        let (Some(s), Some(p), Some(o)) = ids else { return false };
        if !self.spo.remove(&(s, p, o)) {
            return false;
        }
        self.pos.remove(&(p, o, s));
        self.osp.remove(&(o, s, p));
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        let ids = (
            self.id_of(&triple.subject.clone().into()),
            self.id_of(&Term::Iri(triple.predicate.clone())),
            self.id_of(&triple.object),
        );
        matches!(ids, (Some(s), Some(p), Some(o)) if self.spo.contains(&(s, p, o)))
    }

    /// Union another graph into this one; prefixes are merged, ours win.
    pub fn extend_from(&mut self, other: &Graph) {
        for t in other.iter() {
            self.insert(t.to_triple());
        }
        for (p, ns) in other.prefixes.iter() {
            if self.prefixes.get(p).is_none() {
                self.prefixes.insert(p, ns);
            }
        }
    }

    fn view(&self, (s, p, o): Key) -> TripleRef<'_> {
        TripleRef { subject: self.term(s), predicate: self.term(p), object: self.term(o) }
    }

    /// All triples in storage order (not canonical; see [`Graph::sorted_triples`]).
    pub fn iter(&self) -> impl Iterator<Item = TripleRef<'_>> + '_ {
        self.spo.iter().map(move |k| self.view(*k))
    }

    /// Triples sorted by term order.
    pub fn sorted_triples(&self) -> Vec<Triple> {
        let mut all: Vec<Triple> = self.iter().map(|t| t.to_triple()).collect();
        all.sort();
        all
    }

    pub(crate) fn ids_matching(
        &self,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> Vec<Key> {
        fn scan(set: &BTreeSet<Key>, a: Option<TermId>, b: Option<TermId>) -> impl Iterator<Item = Key> + '_ {
            let (lo, hi) = match (a, b) {
                (Some(a), Some(b)) => ((a, b, 0), (a, b, TermId::MAX)),
                (Some(a), None) => ((a, 0, 0), (a, TermId::MAX, TermId::MAX)),
                _ => ((0, 0, 0), (TermId::MAX, TermId::MAX, TermId::MAX)),
            };
            set.range((Bound::Included(lo), Bound::Included(hi))).copied()
        }
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.spo.contains(&(s, p, o)) {
                    alloc::vec![(s, p, o)]
                } else {
                    Vec::new()
                }
            }
            (Some(_), _, None) => scan(&self.spo, s, p).collect(),
            (None, Some(_), _) => scan(&self.pos, p, o).map(|(p, o, s)| (s, p, o)).collect(),
            (_, None, Some(_)) => scan(&self.osp, o, s).map(|(o, s, p)| (s, p, o)).collect(),
            (None, None, None) => self.spo.iter().copied().collect(),
        }
    }

    /// Triples matching a pattern; `None` is a wildcard.
    pub fn matching<'a>(
        &'a self,
        subject: Option<&Term>,
        predicate: Option<&Iri>,
        object: Option<&Term>,
    ) -> Vec<TripleRef<'a>> {
        let lookup = |t: Option<&Term>| match t {
            None => Some(None),
            Some(t) => self.id_of(t).map(Some),
        };
        let pred_term = predicate.map(|p| Term::Iri(p.clone()));
        let (Some(s), Some(p), Some(o)) = (lookup(subject), lookup(pred_term.as_ref()), lookup(object)) else {
            return Vec::new();
        };
        self.ids_matching(s, p, o).into_iter().map(|k| self.view(k)).collect()
    }

    /// Objects of `(subject, predicate, ?)`.
    pub fn objects<'a>(&'a self, subject: &Term, predicate: &Iri) -> Vec<&'a Term> {
        self.matching(Some(subject), Some(predicate), None).into_iter().map(|t| t.object).collect()
    }

    /// Subjects of `(?, predicate, object)`.
    pub fn subjects<'a>(&'a self, predicate: &Iri, object: &Term) -> Vec<&'a Term> {
        self.matching(None, Some(predicate), Some(object)).into_iter().map(|t| t.subject).collect()
    }

    /// Distinct subjects, sorted.
    pub fn subject_terms(&self) -> BTreeSet<&Term> {
        self.spo.iter().map(|(s, _, _)| self.term(*s)).collect()
    }

    pub fn has_subject(&self, term: &Term) -> bool {
        self.id_of(term)
            .is_some_and(|id| self.spo.range((id, 0, 0)..=(id, TermId::MAX, TermId::MAX)).next().is_some())
    }

    /// `rdf:type` objects of a node.
    pub fn types_of<'a>(&'a self, node: &Term) -> Vec<&'a Term> {
        self.objects(node, &crate::term::iri(rdf::TYPE))
    }

    /// Instances of a class.
    pub fn instances_of<'a>(&'a self, class: &Iri) -> Vec<&'a Term> {
        self.subjects(&crate::term::iri(rdf::TYPE), &Term::Iri(class.clone()))
    }

    pub fn stats(&self) -> GraphStats {
        let mut class_histogram: BTreeMap<Term, usize> = BTreeMap::new();
        let mut predicate_histogram: BTreeMap<Iri, usize> = BTreeMap::new();
        let type_id = self.id_of(&Term::Iri(crate::term::iri(rdf::TYPE)));
        for &(_, p, o) in &self.spo {
            if Some(p) == type_id {
                *class_histogram.entry(self.term(o).clone()).or_default() += 1;
            }
            let pred = self.term(p).as_iri().expect("predicate is always an IRI").clone();
            *predicate_histogram.entry(pred).or_default() += 1;
        }
        GraphStats {
            classes: class_histogram.len(),
            properties: predicate_histogram.len(),
            triples: self.len(),
            class_histogram,
            predicate_histogram,
        }
    }
}

impl PartialEq for Graph {
    /// Set equality of triples; prefixes and base are presentation only.
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().all(|t| other.contains(&t.to_triple()))
    }
}

impl Eq for Graph {}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        for t in iter {
            g.insert(t);
        }
        g
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

/// Class/property counts as reported by VoID.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphStats {
    /// Distinct objects of `rdf:type`.
    pub classes: usize,
    /// Distinct predicates.
    pub properties: usize,
    pub triples: usize,
    pub class_histogram: BTreeMap<Term, usize>,
    pub predicate_histogram: BTreeMap<Iri, usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Literal;

    fn i(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn set_semantics() {
        let mut g = Graph::new();
        let t = Triple::new(i("http://e/s"), i("http://e/p"), Literal::string("o"));
        assert!(g.insert(t.clone()));
        assert!(!g.insert(t));
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn language_tag_distinguishes_triples() {
        let mut g = Graph::new();
        g.insert(Triple::new(i("http://e/s"), i("http://e/p"), Literal::lang("o", "en").unwrap()));
        g.insert(Triple::new(i("http://e/s"), i("http://e/p"), Literal::lang("o", "es").unwrap()));
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn stats_counts_classes_and_properties() {
        let g = Graph::new();
        let s = g.stats();
        assert_eq!((s.classes, s.properties), (0, 0));

        let mut g = Graph::new();
        let s = i("http://e/s");
        g.insert(Triple::new(s.clone(), i(rdf::TYPE), i("http://e/C")));
        g.insert(Triple::new(s.clone(), i("http://e/p"), Literal::string("a")));
        g.insert(Triple::new(s, i("http://e/q"), Literal::string("b")));
        let st = g.stats();
        assert_eq!((st.classes, st.properties), (1, 3));
    }

    #[test]
    fn pattern_lookup_uses_every_permutation() {
        let mut g = Graph::new();
        for n in 0..5 {
            let s = i(&alloc::format!("http://e/s{n}"));
            g.insert(Triple::new(s.clone(), i("http://e/p"), i("http://e/o")));
            g.insert(Triple::new(s, i("http://e/q"), Literal::integer(n)));
        }
        let o = Term::Iri(i("http://e/o"));
        assert_eq!(g.matching(None, None, Some(&o)).len(), 5);
        assert_eq!(g.matching(None, Some(&i("http://e/q")), None).len(), 5);
        let s0 = Term::Iri(i("http://e/s0"));
        assert_eq!(g.matching(Some(&s0), None, None).len(), 2);
        assert_eq!(g.matching(Some(&s0), None, Some(&o)).len(), 1);
        assert_eq!(g.matching(None, None, None).len(), 10);
        assert!(g.remove(&Triple::new(i("http://e/s0"), i("http://e/p"), i("http://e/o"))));
        assert_eq!(g.matching(None, None, Some(&o)).len(), 4);
    }
}
