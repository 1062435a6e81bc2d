//! Disjointness and domain/range checks.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;

use crate::graph::Graph;
use crate::namespace::PrefixMap;
use crate::term::{Iri, Term};

use super::literals::{expand_curie, parse_prefix_line};
use super::AuditError;

const DEFAULT_AXIOMS: &str = include_str!("../../data/axioms.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeKind {
    Class(Iri),
    Resource,
    Literal,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Axioms {
    pub disjoint: Vec<(Iri, Iri)>,
    pub subclass: Vec<(Iri, Iri)>,
    pub domain: BTreeMap<Iri, Iri>,
    pub range: BTreeMap<Iri, RangeKind>,
}

impl Axioms {
    pub fn shipped() -> Self {
        Self::parse(DEFAULT_AXIOMS).expect("shipped axioms")
    }

    pub fn parse(text: &str) -> Result<Self, AuditError> {
        let mut prefixes = PrefixMap::well_known();
        let mut ax = Axioms::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| AuditError::Parse { file: "axioms", line: n + 1, message };
            if let Some(rest) = line.strip_prefix("@prefix") {
                parse_prefix_line(&mut prefixes, rest).map_err(err)?;
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            let [kind, a, b] = cols[..] else {
                return Err(err(format!("expected 3 columns, found {}", cols.len())));
            };
            let x = || expand_curie(&prefixes, a).map_err(err);
            let y = || expand_curie(&prefixes, b).map_err(err);
            match kind {
                "disjoint" => ax.disjoint.push((x()?, y()?)),
                "subclass" => ax.subclass.push((x()?, y()?)),
                "domain" => {
                    ax.domain.insert(x()?, y()?);
                }
                "range" => {
                    let r = match b {
                        "resource" => RangeKind::Resource,
                        "literal" => RangeKind::Literal,
                        _ => RangeKind::Class(y()?),
                    };
                    ax.range.insert(x()?, r);
                }
                other => return Err(err(format!("unknown axiom kind {other:?}"))),
            }
        }
        Ok(ax)
    }

    /// Declared types plus every superclass.
    fn closure<'a>(&self, types: impl IntoIterator<Item = &'a Iri>) -> BTreeSet<Iri> {
        let mut out: BTreeSet<Iri> = types.into_iter().cloned().collect();
        loop {
            let before = out.len();
            for (sub, sup) in &self.subclass {
                if out.contains(sub) {
                    out.insert(sup.clone());
                }
            }
            if out.len() == before {
                return out;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ConsistencyViolation {
    pub kind: &'static str,
    pub subject: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub typed_resources: usize,
    pub class_violations: Vec<ConsistencyViolation>,
    pub checked_triples: usize,
    pub relation_violations: Vec<ConsistencyViolation>,
}

impl ConsistencyReport {
    pub fn class_score(&self) -> f64 {
        let bad: BTreeSet<&str> = self.class_violations.iter().map(|v| v.subject.as_str()).collect();
        ratio_ok(bad.len(), self.typed_resources)
    }

    pub fn relation_score(&self) -> f64 {
        ratio_ok(self.relation_violations.len(), self.checked_triples)
    }
}

fn ratio_ok(bad: usize, total: usize) -> f64 {
    if total == 0 {
        1.0
    } else {
        1.0 - bad as f64 / total as f64
    }
}

fn bare(t: &Term) -> String {
    match t {
        Term::Iri(i) => i.as_str().to_string(),
        other => other.to_string(),
    }
}

pub fn consistency_check(graph: &Graph, axioms: &Axioms) -> ConsistencyReport {
    let mut types: BTreeMap<&Term, BTreeSet<Iri>> = BTreeMap::new();
    let ty = crate::term::iri(crate::namespace::rdf::TYPE);
    for t in graph.matching(None, Some(&ty), None) {
        if let Some(c) = t.object.as_iri() {
            types.entry(t.subject).or_default().insert(c.clone());
        }
    }
    let closed: BTreeMap<&Term, BTreeSet<Iri>> = types.iter().map(|(k, v)| (*k, axioms.closure(v))).collect();
    let mut report = ConsistencyReport { typed_resources: closed.len(), ..Default::default() };

    for (node, classes) in &closed {
        for (a, b) in &axioms.disjoint {
            if classes.contains(a) && classes.contains(b) {
                report.class_violations.push(ConsistencyViolation {
                    kind: "disjoint",
                    subject: bare(node),
                    detail: format!("typed both {} and {}", a.as_str(), b.as_str()),
                });
            }
        }
    }

    for t in graph.iter() {
        let p = t.predicate_iri();
        let domain = axioms.domain.get(p);
        let range = axioms.range.get(p);
        if domain.is_none() && range.is_none() {
            continue;
        }
        report.checked_triples += 1;
        let mut problems = Vec::new();
        if let Some(d) = domain {
            if closed.get(t.subject).is_some_and(|c| !c.contains(d)) {
                problems.push(format!("subject not a {}", d.as_str()));
            }
        }
        match range {
            Some(RangeKind::Literal) if !t.object.is_literal() => problems.push("object must be a literal".into()),
            Some(RangeKind::Resource) if t.object.is_literal() => problems.push("object must be a resource".into()),
            Some(RangeKind::Class(c)) => {
                if t.object.is_literal() {
                    problems.push(format!("literal where a {} is required", c.as_str()));
                } else if closed.get(t.object).is_some_and(|cs| !cs.contains(c)) {
                    problems.push(format!("object not a {}", c.as_str()));
                }
            }
            _ => {}
        }
        if !problems.is_empty() {
            report.relation_violations.push(ConsistencyViolation {
                kind: "domain-range",
                subject: bare(t.subject),
                detail: format!("{} {}: {}", p.as_str(), bare(t.object), problems.join("; ")),
            });
        }
    }
    report.class_violations.sort();
    report.relation_violations.sort();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{iri, Literal, Triple};

    const BF: &str = "http://id.loc.gov/ontologies/bibframe/";

    fn bf(l: &str) -> Iri {
        iri(&format!("{BF}{l}"))
    }

    fn clean() -> Graph {
        let mut g = Graph::new();
        let ty = iri(crate::namespace::rdf::TYPE);
        let w = iri("http://example.org/1#Work");
        let h = iri("http://example.org/1#Hub240-3");
        let c = iri("http://example.org/1#Contribution100-2");
        let a = iri("http://example.org/1#Agent100-2");
        g.insert(Triple::new(w.clone(), ty.clone(), bf("Work")));
        g.insert(Triple::new(w.clone(), ty.clone(), bf("Text")));
        g.insert(Triple::new(h.clone(), ty.clone(), bf("Hub")));
        g.insert(Triple::new(c.clone(), ty.clone(), bf("Contribution")));
        g.insert(Triple::new(a.clone(), ty.clone(), bf("Person")));
        g.insert(Triple::new(w.clone(), bf("contribution"), c.clone()));
        g.insert(Triple::new(h.clone(), bf("contribution"), c.clone()));
        g.insert(Triple::new(w, bf("expressionOf"), h));
        g.insert(Triple::new(c.clone(), bf("agent"), a));
        g.insert(Triple::new(c, bf("role"), iri("http://id.loc.gov/vocabulary/relators/aut")));
        g
    }

    #[test]
    fn clean_graph() {
        let r = consistency_check(&clean(), &Axioms::shipped());
        assert!(r.class_violations.is_empty() && r.relation_violations.is_empty(), "{r:?}");
        assert_eq!(r.class_score(), 1.0);
        assert_eq!(r.relation_score(), 1.0);
    }

    #[test]
    fn disjoint_types() {
        let mut g = clean();
        g.insert(Triple::new(iri("http://example.org/1#Agent100-2"), iri(crate::namespace::rdf::TYPE), bf("Organization")));
        let r = consistency_check(&g, &Axioms::shipped());
        assert_eq!(r.class_violations.len(), 1);
    }

    #[test]
    fn literal_contribution() {
        let mut g = clean();
        g.insert(Triple::new(iri("http://example.org/1#Work"), bf("contribution"), Literal::string("Stevenson")));
        let r = consistency_check(&g, &Axioms::shipped());
        assert_eq!(r.relation_violations.len(), 1);
        let brute = g
            .iter()
            .filter(|t| t.predicate_iri().as_str() == format!("{BF}contribution") && t.object.is_literal())
            .count();
        assert_eq!(brute, 1);
    }

    #[test]
    fn malformed_axioms() {
        assert!(Axioms::parse("disjoint bf:A").is_err());
        assert!(Axioms::parse("equivalent bf:A bf:B").is_err());
        assert!(Axioms::parse("disjoint zz:A bf:B").is_err());
    }
}
