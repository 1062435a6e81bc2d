//! Record → RDF transformation driven by declarative rule sets.
//!
//! Two profiles ship with the crate: MARC records become BIBFRAME Works,
//! Instances and their satellite nodes under hash IRIs; Dublin Core
//! records become Schema.org resources under path-pattern IRIs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;
use thiserror::Error;

use crate::enrich::Vocabularies;
use crate::graph::Graph;
use crate::ingest::{DcRecord, MarcRecord, SourceRecord};
use crate::term::{Iri, Triple};
use crate::text::encode_path_segment;

mod dc;
mod marc;
pub mod rules;

pub use rules::{Handler, Profile, Rule, RuleSet, Selector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("rule set line {line}: {message}")]
    Rule { line: usize, message: String },
    #[error("invalid mapping configuration: {0}")]
    Config(String),
    #[error("record {ordinal} has no value for identifier field {field}")]
    MissingId { ordinal: usize, field: String },
    #[error("record id is empty")]
    EmptyRecordId,
    #[error("{kind} IRIs {expectation}")]
    Position { kind: String, expectation: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Serialization {
    #[default]
    Turtle,
    RdfXml,
    NTriples,
}

impl core::str::FromStr for Serialization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "turtle" | "ttl" => Ok(Serialization::Turtle),
            "rdfxml" | "rdf/xml" | "xml" | "rdf" => Ok(Serialization::RdfXml),
            "ntriples" | "nt" | "n-triples" => Ok(Serialization::NTriples),
            other => Err(format!("unknown serialization {other:?}")),
        }
    }
}

impl Serialization {
    pub fn extension(self) -> &'static str {
        match self {
            Serialization::Turtle => "ttl",
            Serialization::RdfXml => "rdf",
            Serialization::NTriples => "nt",
        }
    }

    pub fn media_type(self) -> &'static str {
        match self {
            Serialization::Turtle => "text/turtle",
            Serialization::RdfXml => "application/rdf+xml",
            Serialization::NTriples => "application/n-triples",
        }
    }

    /// Format IRI used by `void:feature`.
    pub fn format_iri(self) -> &'static str {
        match self {
            Serialization::Turtle => "http://www.w3.org/ns/formats/Turtle",
            Serialization::RdfXml => "http://www.w3.org/ns/formats/RDF_XML",
            Serialization::NTriples => "http://www.w3.org/ns/formats/N-Triples",
        }
    }
}

#[derive(Debug, Clone)]
pub struct MappingConfig {
    base_uri: Iri,
    /// `001` or `tag$code`.
    pub id_field: String,
    pub serialization: Serialization,
    dc_url_patterns: BTreeMap<String, String>,
    /// Whether control fields take part in field positions.
    pub ordinal_counts_control_fields: bool,
    /// `xsd:date` stamped on admin metadata; omitted when unset.
    pub admin_date: Option<String>,
    /// Fallback for `bf:source` when a record has no 003.
    pub admin_source: String,
    pub marc_rules: RuleSet,
    pub dc_rules: RuleSet,
    pub vocabularies: Vocabularies,
}

impl Default for MappingConfig {
    fn default() -> Self {
        let dc_url_patterns = [
            ("film", "film/{id}"),
            ("author", "author/{id}"),
            ("location", "location/{id}"),
            ("organisation", "organisation/{id}"),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
        MappingConfig {
            base_uri: crate::term::iri("http://example.org/"),
            id_field: "001".into(),
            serialization: Serialization::Turtle,
            dc_url_patterns,
            ordinal_counts_control_fields: true,
            admin_date: None,
            admin_source: "local catalogue".into(),
            marc_rules: RuleSet::default_marc(),
            dc_rules: RuleSet::default_dc(),
            vocabularies: Vocabularies::shipped(),
        }
    }
}

impl MappingConfig {
    pub fn base_uri(&self) -> &Iri {
        &self.base_uri
    }

    /// Base must be absolute and end with `/`.
    pub fn set_base_uri(&mut self, base: &str) -> Result<(), MappingError> {
        let iri = Iri::new(base).map_err(|e| MappingError::Config(e.to_string()))?;
        if !base.ends_with('/') {
            return Err(MappingError::Config(format!("base IRI {base:?} must end with '/'")));
        }
        self.base_uri = iri;
        Ok(())
    }

    pub fn with_base_uri(mut self, base: &str) -> Result<Self, MappingError> {
        self.set_base_uri(base)?;
        Ok(self)
    }

    pub fn dc_url_patterns(&self) -> &BTreeMap<String, String> {
        &self.dc_url_patterns
    }

    /// Templates are relative to the base and hold exactly one `{id}`.
    pub fn set_dc_url_pattern(&mut self, kind: &str, template: &str) -> Result<(), MappingError> {
        if template.matches("{id}").count() != 1 || template.matches('{').count() != 1 {
            return Err(MappingError::Config(format!("pattern {template:?} must contain exactly one {{id}}")));
        }
        self.dc_url_patterns.insert(kind.into(), template.into());
        Ok(())
    }

    /// `{base}{template}` with the placeholder replaced by an already safe segment.
    pub fn pattern_iri(&self, kind: &str, segment: &str) -> Option<Iri> {
        let template = self.dc_url_patterns.get(kind)?;
        Iri::new(format!("{}{}", self.base_uri.as_str(), template.replace("{id}", segment))).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WarningCategory {
    MissingId,
    SynthesizedId,
    UriEncoding,
    Vocabulary,
    Relator,
    EmptyValue,
    UnknownElement,
    AdminDate,
}

impl WarningCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            WarningCategory::MissingId => "missing-id",
            WarningCategory::SynthesizedId => "synthesized-id",
            WarningCategory::UriEncoding => "uri-encoding",
            WarningCategory::Vocabulary => "vocabulary",
            WarningCategory::Relator => "relator",
            WarningCategory::EmptyValue => "empty-value",
            WarningCategory::UnknownElement => "unknown-element",
            WarningCategory::AdminDate => "admin-date",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub record: String,
    pub category: WarningCategory,
    pub message: String,
}

/// Triples from one record plus the warnings raised on the way.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Fragment {
    pub triples: Vec<Triple>,
    pub warnings: Vec<Warning>,
}

impl Fragment {
    pub fn to_graph(&self) -> Graph {
        self.triples.iter().cloned().collect()
    }
}

/// Hash IRI for a record-scoped node. Work and Instance take no position;
/// every other kind requires one. The record id is percent-encoded when it
/// holds characters that cannot appear in a path; the second value reports
/// whether that happened.
pub fn mint_uri(
    config: &MappingConfig,
    kind: &str,
    record_id: &str,
    position: Option<(&str, u32)>,
) -> Result<(Iri, bool), MappingError> {
    if record_id.is_empty() {
        return Err(MappingError::EmptyRecordId);
    }
    if kind.is_empty() || !kind.bytes().all(|b| b.is_ascii_alphanumeric()) {
        return Err(MappingError::Config(format!("invalid node kind {kind:?}")));
    }
    let (id, encoded) = encode_path_segment(record_id);
    let whole = matches!(kind, "Work" | "Instance");
    let fragment = match (whole, position) {
        (true, None) => kind.to_string(),
        (false, Some((tag, ordinal))) => format!("{kind}{tag}-{ordinal}"),
        (true, Some(_)) => return Err(MappingError::Position { kind: kind.into(), expectation: "take no field position" }),
        (false, None) => return Err(MappingError::Position { kind: kind.into(), expectation: "require a field position" }),
    };
    let iri = Iri::new(format!("{}{}#{}", config.base_uri.as_str(), id, fragment)).map_err(|e| MappingError::Config(e.to_string()))?;
    Ok((iri, encoded))
}

pub fn transform_marc_record(record: &MarcRecord, config: &MappingConfig) -> Result<Fragment, MappingError> {
    marc::transform(record, config, 0)
}

pub fn transform_dc_record(record: &DcRecord, config: &MappingConfig) -> Fragment {
    dc::transform(record, config)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TransformReport {
    pub processed: usize,
    pub emitted: usize,
    pub skipped: usize,
    pub warnings: Vec<Warning>,
    pub errors: Vec<String>,
}

impl TransformReport {
    pub fn warning_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for w in &self.warnings {
            *out.entry(w.category.as_str()).or_default() += 1;
        }
        out
    }
}

/// Incremental dump transform; feed records one at a time.
#[derive(Debug)]
pub struct Transformer<'c> {
    config: &'c MappingConfig,
    graph: Graph,
    report: TransformReport,
}

impl<'c> Transformer<'c> {
    pub fn new(config: &'c MappingConfig) -> Self {
        Transformer { config, graph: Graph::new(), report: TransformReport::default() }
    }

    pub fn add_marc(&mut self, record: &MarcRecord) {
        self.report.processed += 1;
        match marc::transform(record, self.config, self.report.processed) {
            Ok(f) => self.accept(f),
            Err(e) => {
                self.report.skipped += 1;
                self.report.warnings.push(Warning {
                    record: format!("#{}", self.report.processed),
                    category: WarningCategory::MissingId,
                    message: e.to_string(),
                });
                self.report.errors.push(e.to_string());
            }
        }
    }

    pub fn add_dc(&mut self, record: &DcRecord) {
        self.report.processed += 1;
        let f = dc::transform(record, self.config);
        self.accept(f);
    }

    pub fn add(&mut self, record: &SourceRecord) {
        match record {
            SourceRecord::Marc(r) => self.add_marc(r),
            SourceRecord::Dc(r) => self.add_dc(r),
        }
    }

    /// Count a record that failed before reaching the mapper.
    pub fn record_skip(&mut self, message: String) {
        self.report.processed += 1;
        self.report.skipped += 1;
        self.report.errors.push(message);
    }

    fn accept(&mut self, fragment: Fragment) {
        self.report.emitted += 1;
        self.graph.extend(fragment.triples);
        self.report.warnings.extend(fragment.warnings);
    }

    pub fn finish(self) -> (Graph, TransformReport) {
        (self.graph, self.report)
    }
}

/// Union of all record fragments. Record-level failures are counted, never fatal.
pub fn transform_dump<'a>(
    records: impl IntoIterator<Item = &'a SourceRecord>,
    config: &MappingConfig,
) -> (Graph, TransformReport) {
    let mut t = Transformer::new(config);
    for r in records {
        t.add(r);
    }
    t.finish()
}
