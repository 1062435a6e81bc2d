//! Reconciliation against a SPARQL endpoint, plus the bounded parallel
//! driver used for any candidate source.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Duration;

use lodforge_core::enrich::{
    labeled_entities, reconcile_one, sort_candidates, CandidateSource, EntityKind, ExternalEntity, ReconcileOutcome,
    SourceError,
};
use lodforge_core::term::Iri;
use lodforge_core::Graph;
use serde_json::Value;

pub const DEFAULT_LABEL_QUERY: &str = "SELECT ?item ?label ?dates WHERE { \
?item <http://www.w3.org/2000/01/rdf-schema#label> ?label . \
FILTER(STR(?label) = \"{label}\") } LIMIT 50";

pub const DEFAULT_NORMALIZED_QUERY: &str = "SELECT ?item ?label ?dates WHERE { \
?item <http://www.w3.org/2000/01/rdf-schema#label> ?label . \
FILTER(LCASE(STR(?label)) = \"{label}\") } LIMIT 50";

/// Client for the SPARQL protocol with JSON results. Query templates
/// bind `?item`, `?label` and optionally `?dates`; `{label}` is replaced
/// by the escaped search string.
#[derive(Debug, Clone)]
pub struct SparqlSource {
    pub endpoint: String,
    pub label_query: String,
    pub normalized_query: String,
    agent: ureq::Agent,
}

impl SparqlSource {
    pub fn new(endpoint: impl Into<String>, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder().timeout_global(Some(timeout)).build().into();
        SparqlSource {
            endpoint: endpoint.into(),
            label_query: DEFAULT_LABEL_QUERY.into(),
            normalized_query: DEFAULT_NORMALIZED_QUERY.into(),
            agent,
        }
    }

    fn run(&self, template: &str, label: &str) -> Result<Vec<ExternalEntity>, SourceError> {
        let query = template.replace("{label}", &escape_literal(label));
        let mut response = self
            .agent
            .get(&self.endpoint)
            .query("query", &query)
            .header("Accept", "application/sparql-results+json")
            .call()
            .map_err(|e| SourceError(format!("{}: {e}", self.endpoint)))?;
        let body = response
            .body_mut()
            .read_to_string()
            .map_err(|e| SourceError(format!("{}: {e}", self.endpoint)))?;
        parse_results(&body)
    }
}

impl CandidateSource for SparqlSource {
    fn by_label(&self, label: &str) -> Result<Vec<ExternalEntity>, SourceError> {
        self.run(&self.label_query, label)
    }

    fn by_normalized(&self, key: &str) -> Result<Vec<ExternalEntity>, SourceError> {
        self.run(&self.normalized_query, key)
    }
}

fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            _ => out.push(c),
        }
    }
    out
}

/// Entities from a SPARQL JSON results document.
pub fn parse_results(body: &str) -> Result<Vec<ExternalEntity>, SourceError> {
    let bad = |m: &str| SourceError(format!("malformed SPARQL results: {m}"));
    let doc: Value = serde_json::from_str(body).map_err(|e| bad(&e.to_string()))?;
    let bindings = doc
        .pointer("/results/bindings")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("no results.bindings array"))?;
    let value = |b: &Value, var: &str| b.get(var).and_then(|v| v.get("value")).and_then(Value::as_str).map(String::from);
    let mut out = Vec::new();
    for b in bindings {
        let (Some(item), Some(label)) = (value(b, "item"), value(b, "label")) else {
            return Err(bad("binding without ?item or ?label"));
        };
        let iri = Iri::new(item).map_err(|e| bad(&e.to_string()))?;
        out.push(ExternalEntity { iri, label, dates: value(b, "dates").filter(|d| !d.is_empty()) });
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Reconcile with at most `workers` lookups in flight. The result is the
/// same as the sequential run regardless of scheduling.
pub fn reconcile_parallel(
    graph: &Graph,
    kind: EntityKind,
    source: &(dyn CandidateSource + Sync),
    floor: f64,
    workers: usize,
) -> ReconcileOutcome {
    let entities = labeled_entities(graph, kind);
    let next = AtomicUsize::new(0);
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers.clamp(1, entities.len().max(1)))
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::SeqCst);
                        let Some((subject, label)) = entities.get(i) else { break };
                        done.push((subject, reconcile_one(source, subject, label, floor)));
                    }
                    done
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("reconcile worker panicked")).collect()
    });
    let mut out = ReconcileOutcome::default();
    for (subject, result) in results {
        match result {
            Ok(c) => out.candidates.extend(c),
            Err(e) => out.errors.push((subject.as_str().to_owned(), e.0)),
        }
    }
    sort_candidates(&mut out.candidates);
    out.errors.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stub::StubServer;
    use lodforge_core::enrich::{reconcile, FixtureSource};
    use lodforge_core::turtle::parse_turtle;

    const RESULTS: &str = r#"{"head":{"vars":["item","label"]},"results":{"bindings":[{"item":{"type":"uri","value":"http://www.wikidata.org/entity/Q1512"},"label":{"type":"literal","value":"Stevenson, Robert Louis, 1850-1894"}}]}}"#;

    fn agents() -> Graph {
        parse_turtle(
            r#"@prefix bf: <http://id.loc.gov/ontologies/bibframe/> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
<http://example.org/a> a bf:Person ; rdfs:label "Stevenson, Robert Louis, 1850-1894" .
<http://example.org/b> a bf:Person ; rdfs:label "Scott, Walter, 1771-1832" .
<http://example.org/c> a bf:Person ; rdfs:label "Nobody" .
"#,
        )
        .unwrap()
    }

    #[test]
    fn parses_bindings() {
        let e = parse_results(RESULTS).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].iri.as_str(), "http://www.wikidata.org/entity/Q1512");
        assert!(parse_results("{}").is_err());
        assert!(parse_results("not json").is_err());
        assert!(parse_results(r#"{"results":{"bindings":[{"item":{"value":"rel"},"label":{"value":"x"}}]}}"#).is_err());
    }

    #[test]
    fn escapes_quotes() {
        assert_eq!(escape_literal(r#"a "b" \c"#), r#"a \"b\" \\c"#);
    }

    #[test]
    fn endpoint_round_trip() {
        let stub = StubServer::start(&format!("/sparql* 200 {RESULTS}")).unwrap();
        let source = SparqlSource::new(stub.url("sparql"), Duration::from_secs(5));
        let found = source.by_label("Stevenson, Robert Louis, 1850-1894").unwrap();
        assert_eq!(found.len(), 1);
    }

    #[test]
    fn endpoint_failures_are_per_entity() {
        let stub = StubServer::start("/sparql* 200 <html>oops</html>").unwrap();
        let source = SparqlSource::new(stub.url("sparql"), Duration::from_secs(5));
        let out = reconcile_parallel(&agents(), EntityKind::Agent, &source, 0.0, 4);
        assert!(out.candidates.is_empty());
        assert_eq!(out.errors.len(), 3);
        assert_eq!(out.errors[0].0, "http://example.org/a");
    }

    #[test]
    fn parallel_matches_sequential() {
        let fixture = FixtureSource::parse(
            "http://www.wikidata.org/entity/Q1512\tStevenson, Robert Louis, 1850-1894\n\
             http://viaf.org/viaf/1\tstevenson, robert louis\n\
             http://www.wikidata.org/entity/Q79025\tScott, Walter, 1771-1832\n",
        )
        .unwrap();
        let g = agents();
        for workers in [1, 2, 4, 8] {
            assert_eq!(
                reconcile_parallel(&g, EntityKind::Agent, &fixture, 0.0, workers),
                reconcile(&g, EntityKind::Agent, &fixture, 0.0)
            );
        }
    }
}
