//! External link sampling, probing and interlinking rate.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::Graph;
use crate::namespace::rdf;
use crate::term::Term;

/// Result of probing one URL.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeOutcome {
    pub url: String,
    pub status: Option<u16>,
    pub error: Option<String>,
}

impl ProbeOutcome {
    pub fn status(url: &str, status: u16) -> Self {
        ProbeOutcome { url: url.into(), status: Some(status), error: None }
    }

    pub fn failed(url: &str, error: impl Into<String>) -> Self {
        ProbeOutcome { url: url.into(), status: None, error: Some(error.into()) }
    }

    /// 2xx and 3xx count as reachable.
    pub fn is_ok(&self) -> bool {
        self.status.is_some_and(|s| (200..400).contains(&s))
    }
}

/// Probes a batch of URLs; one outcome per input, in input order.
pub trait LinkProber {
    fn probe_all(&self, urls: &[String]) -> Vec<ProbeOutcome>;
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LinkReport {
    pub seed: u64,
    pub sampled: usize,
    pub ok: usize,
    pub rate: f64,
    pub failures: Vec<ProbeOutcome>,
}

/// Host part of an absolute IRI, lowercased.
pub fn host_of(iri: &str) -> Option<String> {
    let rest = iri.split_once("://")?.1;
    let authority = rest.split(['/', '#', '?']).next()?;
    let host = authority.rsplit('@').next()?;
    let host = if host.starts_with('[') { host.split(']').next()?.trim_start_matches('[') } else { host.split(':').next()? };
    (!host.is_empty()).then(|| host.to_ascii_lowercase())
}

/// Domains reserved for documentation and testing; they never resolve.
pub fn is_reserved_host(host: &str) -> bool {
    let h = host.trim_end_matches('.');
    ["example.org", "example.com", "example.net"].iter().any(|d| h == *d || h.ends_with(&alloc::format!(".{d}")))
        || ["example", "test", "invalid", "localhost"].iter().any(|t| h == *t || h.ends_with(&alloc::format!(".{t}")))
}

/// Distinct object IRIs outside `base`, excluding class IRIs reached via
/// `rdf:type`, in sorted order.
pub fn external_object_iris(graph: &Graph, base: &str) -> Vec<String> {
    let ty = rdf::TYPE;
    let set: BTreeSet<&str> = graph
        .iter()
        .filter(|t| t.predicate_iri().as_str() != ty)
        .filter_map(|t| t.object.as_iri())
        .map(|i| i.as_str())
        .filter(|i| !i.starts_with(base))
        .collect();
    set.into_iter().map(String::from).collect()
}

/// Uniform sample without replacement, reproducible from `seed`. The
/// sample keeps the candidates' order.
pub fn seeded_sample<T: Clone>(candidates: &[T], n: usize, seed: u64) -> Vec<T> {
    let k = n.min(candidates.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, candidates.len(), k).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| candidates[i].clone()).collect()
}

pub fn sample_external_iris(graph: &Graph, base: &str, n: usize, seed: u64) -> Vec<String> {
    seeded_sample(&external_object_iris(graph, base), n, seed)
}

/// Probe a sample of external object IRIs; rate = reachable / probed.
pub fn check_links(graph: &Graph, base: &str, sample_size: usize, seed: u64, prober: &dyn LinkProber) -> LinkReport {
    let sample = sample_external_iris(graph, base, sample_size.max(1), seed);
    probe_report(&sample, seed, prober)
}

pub fn probe_report(urls: &[String], seed: u64, prober: &dyn LinkProber) -> LinkReport {
    if urls.is_empty() {
        return LinkReport { seed, rate: 1.0, ..Default::default() };
    }
    let outcomes = prober.probe_all(urls);
    let ok = outcomes.iter().filter(|o| o.is_ok()).count();
    let failures = outcomes.into_iter().filter(|o| !o.is_ok()).collect();
    LinkReport { seed, sampled: urls.len(), ok, rate: ok as f64 / urls.len() as f64, failures }
}

/// Subjects with at least one non-type link to an IRI outside `base`,
/// over all subjects.
pub fn interlinking_rate(graph: &Graph, base: &str) -> (f64, usize, usize) {
    let subjects = graph.subject_terms();
    if subjects.is_empty() {
        return (0.0, 0, 0);
    }
    let linked: BTreeSet<&Term> = graph
        .iter()
        .filter(|t| t.predicate_iri().as_str() != rdf::TYPE)
        .filter(|t| t.object.as_iri().is_some_and(|o| !o.as_str().starts_with(base)))
        .map(|t| t.subject)
        .collect();
    (linked.len() as f64 / subjects.len() as f64, linked.len(), subjects.len())
}

pub(crate) fn describe(o: &ProbeOutcome) -> String {
    match (&o.status, &o.error) {
        (Some(s), _) => alloc::format!("{} -> {s}", o.url),
        (None, Some(e)) => alloc::format!("{} -> {e}", o.url),
        (None, None) => o.url.to_string(),
    }
}
