//! VoID self-description of a dataset.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;

use crate::graph::Graph;
use crate::mapping::Serialization;
use crate::namespace::{dcterms, owl, rdf, rdfs, void, xsd, WELL_KNOWN};
use crate::term::{iri, Iri, Literal, Term, Triple};
use crate::text::is_xsd_date;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PublishError {
    #[error("dataset metadata has no license IRI")]
    MissingLicense,
    #[error("dataset metadata has no title")]
    MissingTitle,
    #[error("modified date {0:?} is not an xsd:date")]
    InvalidDate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct VoidMetadata {
    pub dataset: Option<Iri>,
    pub title: String,
    pub description: Option<String>,
    pub license: Option<Iri>,
    pub publisher: Option<Iri>,
    pub contributors: Vec<Iri>,
    pub sources: Vec<Iri>,
    /// `YYYY-MM-DD`.
    pub modified: Option<String>,
    pub features: Vec<Serialization>,
    pub data_dumps: Vec<Iri>,
    /// Defaults to the smallest work-like subject.
    pub example_resource: Option<Iri>,
}

/// Counts read back from a VoID description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct VoidCounts {
    pub classes: u64,
    pub properties: u64,
    pub triples: u64,
}

impl VoidCounts {
    pub fn of(graph: &Graph) -> Self {
        let stats = graph.stats();
        VoidCounts { classes: stats.classes as u64, properties: stats.properties as u64, triples: stats.triples as u64 }
    }

    /// Counts of the first `void:Dataset` carrying all three.
    pub fn from_void(void_graph: &Graph) -> Option<Self> {
        let read = |node: &Term, p: &str| -> Option<u64> {
            void_graph.objects(node, &iri(p)).first()?.as_literal()?.lexical().parse().ok()
        };
        void_graph.instances_of(&iri(void::DATASET)).into_iter().find_map(|n| {
            Some(VoidCounts { classes: read(n, void::CLASSES)?, properties: read(n, void::PROPERTIES)?, triples: read(n, void::TRIPLES)? })
        })
    }
}

const WORK_CLASSES: [&str; 2] = ["https://schema.org/VideoObject", "http://id.loc.gov/ontologies/bibframe/Work"];
const UNLISTED: [&str; 5] = [rdf::NS, rdfs::NS, xsd::NS, owl::NS, void::NS];

pub fn default_example_resource(graph: &Graph) -> Option<Iri> {
    WORK_CLASSES
        .iter()
        .find_map(|c| graph.instances_of(&iri(c)).into_iter().filter_map(|t| t.as_iri()).min().cloned())
        .or_else(|| graph.subject_terms().into_iter().find_map(|t| t.as_iri().cloned()))
}

/// Well-known vocabularies whose terms appear as predicates or classes.
pub fn vocabularies_in_use(graph: &Graph) -> Vec<Iri> {
    let stats = graph.stats();
    let terms: Vec<&str> = stats
        .predicate_histogram
        .keys()
        .map(|p| p.as_str())
        .chain(stats.class_histogram.keys().filter_map(|c| c.as_iri()).map(|c| c.as_str()))
        .collect();
    let used: BTreeSet<&str> = WELL_KNOWN
        .iter()
        .map(|(_, ns)| *ns)
        .filter(|ns| !UNLISTED.contains(ns))
        .filter(|ns| terms.iter().any(|t| t.starts_with(ns)))
        .collect();
    used.into_iter().map(iri).collect()
}

/// Dataset node with counts computed from `graph`.
pub fn generate_void(graph: &Graph, meta: &VoidMetadata, base: &Iri) -> Result<Graph, PublishError> {
    if meta.license.is_none() {
        return Err(PublishError::MissingLicense);
    }
    if meta.title.trim().is_empty() {
        return Err(PublishError::MissingTitle);
    }
    describe_dataset(graph, meta, base)
}

/// Like [`generate_void`] but title and license are optional. Used when
/// auditing a dataset whose metadata may be incomplete.
pub fn describe_dataset(graph: &Graph, meta: &VoidMetadata, base: &Iri) -> Result<Graph, PublishError> {
    if let Some(d) = &meta.modified {
        if !is_xsd_date(d) {
            return Err(PublishError::InvalidDate(d.clone()));
        }
    }
    let ds = meta.dataset.clone().unwrap_or_else(|| iri(&alloc::format!("{}dataset", base.as_str())));
    let mut g = Graph::new();
    g.prefixes_mut().insert("", base.as_str());
    let mut add = |p: &str, o: Term| {
        g.insert(Triple::new(ds.clone(), iri(p), o));
    };
    add(rdf::TYPE, Term::Iri(iri(void::DATASET)));
    if !meta.title.trim().is_empty() {
        add(dcterms::TITLE, Term::Literal(Literal::string(meta.title.clone())));
    }
    if let Some(d) = &meta.description {
        add(dcterms::DESCRIPTION, Term::Literal(Literal::string(d.clone())));
    }
    if let Some(l) = &meta.license {
        add(dcterms::LICENSE, Term::Iri(l.clone()));
    }
    if let Some(p) = &meta.publisher {
        add(dcterms::PUBLISHER, Term::Iri(p.clone()));
    }
    for c in &meta.contributors {
        add(dcterms::CONTRIBUTOR, Term::Iri(c.clone()));
    }
    for s in &meta.sources {
        add(dcterms::SOURCE, Term::Iri(s.clone()));
    }
    if let Some(d) = &meta.modified {
        add(dcterms::MODIFIED, Term::Literal(Literal::typed(d.clone(), iri(xsd::DATE))));
    }
    for f in &meta.features {
        add(void::FEATURE, Term::Iri(iri(f.format_iri())));
    }
    for d in &meta.data_dumps {
        add(void::DATA_DUMP, Term::Iri(d.clone()));
    }
    for v in vocabularies_in_use(graph) {
        add(void::VOCABULARY, Term::Iri(v));
    }
    let counts = VoidCounts::of(graph);
    add(void::CLASSES, Term::Literal(Literal::integer(counts.classes as i64)));
    add(void::PROPERTIES, Term::Literal(Literal::integer(counts.properties as i64)));
    add(void::TRIPLES, Term::Literal(Literal::integer(counts.triples as i64)));
    if let Some(ex) = meta.example_resource.clone().or_else(|| default_example_resource(graph)) {
        add(void::EXAMPLE_RESOURCE, Term::Iri(ex));
    }
    Ok(g)
}
