//! Canonical N-Triples export and blank-node-aware graph isomorphism.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::graph::Graph;
use crate::term::{BlankNode, Subject, Term, Triple};

/// FNV-1a, 64 bit.
#[derive(Clone, Copy)]
pub(crate) struct Fnv(u64);

impl Fnv {
    pub(crate) fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    pub(crate) fn bytes(mut self, data: &[u8]) -> Self {
        for b in data {
            self.0 ^= u64::from(*b);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
        self
    }

    pub(crate) fn u64(self, v: u64) -> Self {
        self.bytes(&v.to_le_bytes())
    }

    pub(crate) fn finish(self) -> u64 {
        self.0
    }
}

fn term_hash(term: &Term, colors: &BTreeMap<BlankNode, u64>) -> u64 {
    match term {
        Term::BlankNode(b) => Fnv::new().bytes(b"_").u64(colors[b]).finish(),
        other => Fnv::new().bytes(format!("{other}").as_bytes()).finish(),
    }
}

/// Iterative colour refinement of blank nodes by their neighbourhoods.
fn refine(graph: &Graph) -> BTreeMap<BlankNode, u64> {
    let mut colors: BTreeMap<BlankNode, u64> = BTreeMap::new();
    let mut incident: BTreeMap<BlankNode, Vec<Triple>> = BTreeMap::new();
    for t in graph.iter() {
        let t = t.to_triple();
        if let Subject::BlankNode(b) = &t.subject {
            colors.insert(b.clone(), 0);
            incident.entry(b.clone()).or_default().push(t.clone());
        }
        if let Term::BlankNode(b) = &t.object {
            colors.insert(b.clone(), 0);
            if !matches!(&t.subject, Subject::BlankNode(s) if s == b) {
                incident.entry(b.clone()).or_default().push(t.clone());
            }
        }
    }
    let mut classes = 1usize;
    for _ in 0..=colors.len() {
        let mut next = BTreeMap::new();
        for (b, old) in &colors {
            let mut sigs: Vec<u64> = incident
                .get(b)
                .map(|ts| {
                    ts.iter()
                        .map(|t| {
                            let s = Term::from(t.subject.clone());
                            let role = (matches!(&t.subject, Subject::BlankNode(x) if x == b) as u64)
                                | ((matches!(&t.object, Term::BlankNode(x) if x == b) as u64) << 1);
                            Fnv::new()
                                .u64(role)
                                .u64(term_hash(&s, &colors))
                                .bytes(t.predicate.as_str().as_bytes())
                                .u64(term_hash(&t.object, &colors))
                                .finish()
                        })
                        .collect()
                })
                .unwrap_or_default();
            sigs.sort_unstable();
            let mut h = Fnv::new().u64(*old);
            for s in sigs {
                h = h.u64(s);
            }
            next.insert(b.clone(), h.finish());
        }
        let n = next.values().collect::<BTreeSet<_>>().len();
        colors = next;
        if n == classes {
            break;
        }
        classes = n;
    }
    colors
}

fn relabel(t: &Triple, map: &BTreeMap<BlankNode, BlankNode>) -> Triple {
    let subject = match &t.subject {
        Subject::BlankNode(b) => Subject::BlankNode(map[b].clone()),
        s => s.clone(),
    };
    let object = match &t.object {
        Term::BlankNode(b) => Term::BlankNode(map[b].clone()),
        o => o.clone(),
    };
    Triple { subject, predicate: t.predicate.clone(), object }
}

/// Sorted N-Triples, one statement per line, blank nodes relabelled
/// `c0, c1, …` in colour order. Identical graphs give identical text.
pub fn canonical_ntriples(graph: &Graph) -> String {
    let colors = refine(graph);
    let mut order: Vec<(&u64, &BlankNode)> = colors.iter().map(|(b, c)| (c, b)).collect();
    order.sort();
    let map: BTreeMap<BlankNode, BlankNode> = order
        .iter()
        .enumerate()
        .map(|(i, (_, b))| ((*b).clone(), BlankNode::new(format!("c{i}")).expect("valid label")))
        .collect();
    let mut lines: Vec<String> = graph
        .iter()
        .map(|t| {
            let t = relabel(&t.to_triple(), &map);
            format!("{t}\n")
        })
        .collect();
    lines.sort();
    lines.concat()
}

/// N-Triples in term order without blank-node relabelling.
pub fn write_ntriples(graph: &Graph) -> String {
    let mut out = String::new();
    for t in graph.sorted_triples() {
        let _ = writeln!(out, "{t}");
    }
    out
}

/// True when the graphs are equal up to blank-node renaming.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let is_ground = |t: &Triple| !matches!(t.subject, Subject::BlankNode(_)) && !t.object.is_blank();
    let (a_ground, a_blank): (Vec<Triple>, Vec<Triple>) =
        a.iter().map(|t| t.to_triple()).partition(is_ground);
    if !a_ground.iter().all(|t| b.contains(t)) {
        return false;
    }
    let b_blank_count = b.iter().filter(|t| !is_ground(&t.to_triple())).count();
    if a_blank.len() != b_blank_count {
        return false;
    }
    if a_blank.is_empty() {
        return true;
    }
    let ca = refine(a);
    let cb = refine(b);
    let hist = |c: &BTreeMap<BlankNode, u64>| {
        let mut h: BTreeMap<u64, usize> = BTreeMap::new();
        for v in c.values() {
            *h.entry(*v).or_default() += 1;
        }
        h
    };
    if hist(&ca) != hist(&cb) {
        return false;
    }
    let mut order: Vec<BlankNode> = ca.keys().cloned().collect();
    let class_size = hist(&ca);
    order.sort_by_key(|n| (class_size[&ca[n]], ca[n]));
    let mut mapping = BTreeMap::new();
    let mut used = BTreeSet::new();
    search(&order, 0, &ca, &cb, &a_blank, b, &mut mapping, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn search(
    order: &[BlankNode],
    depth: usize,
    ca: &BTreeMap<BlankNode, u64>,
    cb: &BTreeMap<BlankNode, u64>,
    a_blank: &[Triple],
    b: &Graph,
    mapping: &mut BTreeMap<BlankNode, BlankNode>,
    used: &mut BTreeSet<BlankNode>,
) -> bool {
    if depth == order.len() {
        return a_blank.iter().all(|t| b.contains(&relabel(t, mapping)));
    }
    let node = &order[depth];
    let candidates: Vec<&BlankNode> =
        cb.iter().filter(|(c, col)| **col == ca[node] && !used.contains(*c)).map(|(c, _)| c).collect();
    for cand in candidates {
        mapping.insert(node.clone(), cand.clone());
        used.insert(cand.clone());
        let consistent = a_blank.iter().all(|t| {
            let mapped = |x: &BlankNode| mapping.contains_key(x);
            let ready = match (&t.subject, &t.object) {
                (Subject::BlankNode(s), Term::BlankNode(o)) => mapped(s) && mapped(o),
                (Subject::BlankNode(s), _) => mapped(s),
                (_, Term::BlankNode(o)) => mapped(o),
                _ => true,
            };
            !ready || b.contains(&relabel(t, mapping))
        });
        if consistent && search(order, depth + 1, ca, cb, a_blank, b, mapping, used) {
            return true;
        }
        mapping.remove(node);
        used.remove(cand);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Iri, Literal};

    fn i(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }
    fn b(s: &str) -> BlankNode {
        BlankNode::new(s).unwrap()
    }

    #[test]
    fn relabelled_blank_nodes_are_isomorphic() {
        let mut g1 = Graph::new();
        g1.insert(Triple::new(b("x"), i("http://e/p"), b("y")));
        g1.insert(Triple::new(b("y"), i("http://e/q"), Literal::string("v")));
        let mut g2 = Graph::new();
        g2.insert(Triple::new(b("m"), i("http://e/p"), b("n")));
        g2.insert(Triple::new(b("n"), i("http://e/q"), Literal::string("v")));
        assert!(isomorphic(&g1, &g2));
        assert_eq!(canonical_ntriples(&g1), canonical_ntriples(&g2));

        let mut g3 = Graph::new();
        g3.insert(Triple::new(b("m"), i("http://e/p"), b("n")));
        g3.insert(Triple::new(b("m"), i("http://e/q"), Literal::string("v")));
        assert!(!isomorphic(&g1, &g3));
    }

    #[test]
    fn symmetric_cycle_needs_backtracking() {
        // two 2-cycles vs one 4-cycle: same colours, not isomorphic
        let p = i("http://e/p");
        let mut g1 = Graph::new();
        for (s, o) in [("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")] {
            g1.insert(Triple::new(b(s), p.clone(), b(o)));
        }
        let mut g2 = Graph::new();
        for (s, o) in [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")] {
            g2.insert(Triple::new(b(s), p.clone(), b(o)));
        }
        assert!(!isomorphic(&g1, &g2));
        let mut g3 = Graph::new();
        for (s, o) in [("w", "x"), ("x", "w"), ("y", "z"), ("z", "y")] {
            g3.insert(Triple::new(b(s), p.clone(), b(o)));
        }
        assert!(isomorphic(&g1, &g3));
    }

    #[test]
    fn canonical_export_is_sorted() {
        let mut g = Graph::new();
        g.insert(Triple::new(i("http://e/z"), i("http://e/p"), Literal::string("1")));
        g.insert(Triple::new(i("http://e/a"), i("http://e/p"), Literal::string("2")));
        let text = canonical_ntriples(&g);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0] < lines[1]);
    }
}
