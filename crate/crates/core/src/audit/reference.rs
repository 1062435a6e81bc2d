//! Reference values for checking the semantic validity of triples.
//!
//! Format: one `iri<TAB>predicate<TAB>expected` line per expectation.
//! Predicates may be CURIEs over the well-known prefixes. `expected` is
//! compared against literal lexical forms and IRI objects.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;

use crate::graph::Graph;
use crate::namespace::PrefixMap;
use crate::term::{Iri, Term};
use crate::text::normalize_label;

use super::literals::expand_curie;
use super::AuditError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expectation {
    pub subject: Iri,
    pub predicate: Iri,
    pub expected: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReferenceSet {
    pub expectations: Vec<Expectation>,
}

impl ReferenceSet {
    pub fn parse(text: &str) -> Result<Self, AuditError> {
        let prefixes = PrefixMap::well_known();
        let mut expectations = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| AuditError::Parse { file: "reference", line: n + 1, message };
            let cols: Vec<&str> = line.split('\t').collect();
            let [s, p, v] = cols.as_slice() else {
                return Err(err(format!("expected 3 tab-separated columns, found {}", cols.len())));
            };
            let subject = Iri::new(s.trim()).map_err(|e| err(e.to_string()))?;
            let predicate = expand_curie(&prefixes, p.trim()).map_err(err)?;
            expectations.push(Expectation { subject, predicate, expected: v.trim().into() });
        }
        if expectations.is_empty() {
            return Err(AuditError::Parse { file: "reference", line: 0, message: "no expectations".into() });
        }
        Ok(ReferenceSet { expectations })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReferenceReport {
    pub checked: usize,
    pub matched: usize,
    pub mismatches: Vec<String>,
}

impl ReferenceReport {
    pub fn score(&self) -> f64 {
        if self.checked == 0 {
            1.0
        } else {
            self.matched as f64 / self.checked as f64
        }
    }
}

/// Literal comparison uses label normalization so terminal punctuation
/// and case do not count as errors.
pub fn semantic_validity(graph: &Graph, reference: &ReferenceSet) -> ReferenceReport {
    let mut report = ReferenceReport::default();
    for e in &reference.expectations {
        report.checked += 1;
        let want = normalize_label(&e.expected);
        let objects = graph.objects(&Term::Iri(e.subject.clone()), &e.predicate);
        let hit = objects.iter().any(|o| match o {
            Term::Literal(l) => normalize_label(l.lexical()) == want,
            Term::Iri(i) => i.as_str() == e.expected,
            Term::BlankNode(_) => false,
        });
        if hit {
            report.matched += 1;
        } else {
            let found: Vec<String> = objects.iter().map(|o| o.to_string()).collect();
            report.mismatches.push(format!(
                "{} {}: expected {:?}, found [{}]",
                e.subject.as_str(),
                e.predicate.as_str(),
                e.expected,
                found.join(", ")
            ));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{iri, Literal, Triple};

    #[test]
    fn diff_against_reference() {
        let mut g = Graph::new();
        let s = iri("http://example.org/1#Agent100-2");
        g.insert(Triple::new(s.clone(), iri(crate::namespace::rdfs::LABEL), Literal::string("Scott, Walter, 1771-1832.")));
        let r = ReferenceSet::parse(
            "http://example.org/1#Agent100-2\trdfs:label\tScott, Walter, 1771-1832\n\
             http://example.org/1#Agent100-2\tschema:birthDate\t1771\n",
        )
        .unwrap();
        let rep = semantic_validity(&g, &r);
        assert_eq!((rep.checked, rep.matched), (2, 1));
        assert_eq!(rep.score(), 0.5);
    }

    #[test]
    fn malformed() {
        assert!(ReferenceSet::parse("http://x/a\trdfs:label\n").is_err());
        assert!(ReferenceSet::parse("").is_err());
    }
}
