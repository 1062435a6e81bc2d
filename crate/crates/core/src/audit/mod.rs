//! Quality audit: a fixed catalogue of criteria grouped by dimension, each
//! scored by exactly one evaluator.

pub mod completeness;
pub mod consistency;
pub mod duplicates;
pub mod links;
pub mod literals;
pub mod reference;
pub mod shapes;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::canon::isomorphic;
use crate::enrich::label_predicates;
use crate::graph::Graph;
use crate::mapping::{MappingConfig, Serialization};
use crate::namespace::{dcterms, owl, prov, rdf, rdfs, void};
use crate::term::{iri, Iri, Term, Triple};
use crate::turtle::{parse_turtle, to_turtle};

pub use completeness::{completeness, CompletenessReport, GoldStandard};
pub use consistency::{consistency_check, Axioms, ConsistencyReport};
pub use duplicates::{detect_duplicate_agents, Cluster, DuplicateReport};
pub use links::{check_links, interlinking_rate, LinkProber, LinkReport, ProbeOutcome};
pub use literals::{syntactic_validity_literals, LiteralReport, LiteralRules};
pub use reference::{semantic_validity, ReferenceSet};
pub use shapes::{mine_shapes, to_shex, validate_shapes, ConformanceReport, ShapeSet};

#[derive(Debug, thiserror::Error)]
pub enum AuditError {
    #[error("{file} line {line}: {message}")]
    Parse { file: &'static str, line: usize, message: String },
    #[error("audit configuration: {0}")]
    Config(String),
    #[error("cannot audit an empty graph")]
    EmptyGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dimension {
    Accuracy,
    Trustworthiness,
    Consistency,
    Relevancy,
    Completeness,
    Timeliness,
    EaseOfUnderstanding,
    Interoperability,
    Accessibility,
    Licensing,
    Interlinking,
}

impl Dimension {
    pub const ALL: [Dimension; 11] = [
        Dimension::Accuracy,
        Dimension::Trustworthiness,
        Dimension::Consistency,
        Dimension::Relevancy,
        Dimension::Completeness,
        Dimension::Timeliness,
        Dimension::EaseOfUnderstanding,
        Dimension::Interoperability,
        Dimension::Accessibility,
        Dimension::Licensing,
        Dimension::Interlinking,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Dimension::Accuracy => "Accuracy",
            Dimension::Trustworthiness => "Trustworthiness",
            Dimension::Consistency => "Consistency",
            Dimension::Relevancy => "Relevancy",
            Dimension::Completeness => "Completeness",
            Dimension::Timeliness => "Timeliness",
            Dimension::EaseOfUnderstanding => "Ease of understanding",
            Dimension::Interoperability => "Interoperability",
            Dimension::Accessibility => "Accessibility",
            Dimension::Licensing => "Licensing",
            Dimension::Interlinking => "Interlinking",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EvaluatorKind {
    Automatic,
    Network,
    Assisted,
    Declared,
}

impl EvaluatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EvaluatorKind::Automatic => "AUTOMATIC",
            EvaluatorKind::Network => "NETWORK",
            EvaluatorKind::Assisted => "ASSISTED",
            EvaluatorKind::Declared => "DECLARED",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriterionSpec {
    pub id: &'static str,
    pub dimension: Dimension,
    pub label: &'static str,
    pub kind: EvaluatorKind,
}

const fn spec(id: &'static str, dimension: Dimension, label: &'static str, kind: EvaluatorKind) -> CriterionSpec {
    CriterionSpec { id, dimension, label, kind }
}

use Dimension as D;
use EvaluatorKind as K;

pub const CATALOGUE: [CriterionSpec; 35] = [
    spec("accuracy.syntactic_validity_documents", D::Accuracy, "Syntactic validity of RDF documents", K::Automatic),
    spec("accuracy.syntactic_validity_literals", D::Accuracy, "Syntactic validity of literals", K::Automatic),
    spec("accuracy.semantic_validity_triples", D::Accuracy, "Semantic validity of triples", K::Assisted),
    spec("accuracy.duplicate_check", D::Accuracy, "Check of duplicate entities", K::Automatic),
    spec("trustworthiness.dataset_level", D::Trustworthiness, "On dataset level", K::Automatic),
    spec("trustworthiness.statement_level", D::Trustworthiness, "On statement level", K::Automatic),
    spec("trustworthiness.unknown_values", D::Trustworthiness, "Using unknown and empty values", K::Automatic),
    spec(
        "consistency.schema_restrictions_insertion",
        D::Consistency,
        "Consistency of schema restrictions during insertion of new statements",
        K::Declared,
    ),
    spec("consistency.class_constraints", D::Consistency, "Consistency of statements with respect to class constraints", K::Automatic),
    spec(
        "consistency.relation_constraints",
        D::Consistency,
        "Consistency of statements with respect to relations constraints",
        K::Automatic,
    ),
    spec("relevancy.ranking", D::Relevancy, "Creating a ranking of statements", K::Declared),
    spec("completeness.schema", D::Completeness, "Schema completeness", K::Assisted),
    spec("completeness.column", D::Completeness, "Column completeness", K::Assisted),
    spec("completeness.population", D::Completeness, "Population completeness", K::Assisted),
    spec("timeliness.frequency", D::Timeliness, "Frequency", K::Automatic),
    spec("timeliness.validity_period", D::Timeliness, "Specification of the validity period of statements", K::Automatic),
    spec(
        "timeliness.modification_date_statements",
        D::Timeliness,
        "Specification of the modification date of statements",
        K::Automatic,
    ),
    spec("ease_of_understanding.description_of_resources", D::EaseOfUnderstanding, "Description of resources", K::Automatic),
    spec("ease_of_understanding.multilingual_labels", D::EaseOfUnderstanding, "Labels in multiple languages", K::Automatic),
    spec("ease_of_understanding.understandable_serialization", D::EaseOfUnderstanding, "Understandable RDF serialization", K::Automatic),
    spec("ease_of_understanding.self_describing_uris", D::EaseOfUnderstanding, "Self-describing URIs", K::Automatic),
    spec("interoperability.avoid_blank_nodes", D::Interoperability, "Avoiding blank nodes and RDF reification", K::Automatic),
    spec("interoperability.several_formats", D::Interoperability, "Provisioning of several serialization formats", K::Automatic),
    spec("interoperability.external_vocabulary", D::Interoperability, "Using external vocabulary", K::Automatic),
    spec("interoperability.proprietary_vocabulary", D::Interoperability, "Interoperability of proprietary vocabulary", K::Automatic),
    spec("accessibility.dereferencing", D::Accessibility, "Dereferencing possibility of resources", K::Network),
    spec("accessibility.repository_availability", D::Accessibility, "Availability of the repository", K::Network),
    spec("accessibility.sparql_endpoint", D::Accessibility, "Availability of a public SPARQL endpoint", K::Declared),
    spec("accessibility.rdf_export", D::Accessibility, "Provisioning of an RDF export", K::Automatic),
    spec("accessibility.content_negotiation", D::Accessibility, "Support of content negotiation", K::Declared),
    spec("accessibility.html_links", D::Accessibility, "Linking HTML sites to RDF serializations", K::Declared),
    spec("accessibility.metadata", D::Accessibility, "Provisioning of metadata", K::Automatic),
    spec("licensing.machine_readable", D::Licensing, "Provisioning machine-readable licensing information", K::Automatic),
    spec("interlinking.sameas_rate", D::Interlinking, "Interlinking via owl:sameAs", K::Automatic),
    spec("interlinking.external_uri_validity", D::Interlinking, "Validity of external URIs", K::Network),
];

pub fn criterion_spec(id: &str) -> Option<&'static CriterionSpec> {
    CATALOGUE.iter().find(|c| c.id == id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Scored,
    /// Network evaluator without a network budget.
    Skipped,
    /// Assisted evaluator without its input.
    NotEvaluated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: String,
    pub dimension: Dimension,
    pub label: String,
    pub kind: EvaluatorKind,
    pub status: Status,
    pub score: Option<f64>,
    pub evidence: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rollup {
    pub dimension: Dimension,
    pub evaluated: usize,
    pub score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub criteria: Vec<Criterion>,
    pub rollups: Vec<Rollup>,
    pub config: BTreeMap<String, String>,
    pub seeds: BTreeMap<String, u64>,
}

impl QualityReport {
    pub fn get(&self, id: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.id == id)
    }

    pub fn score(&self, id: &str) -> Option<f64> {
        self.get(id).and_then(|c| c.score)
    }

    /// Plain-text table, one row per criterion, dimension named on the
    /// first row of its group.
    pub fn to_text_table(&self) -> String {
        let dim_w = Dimension::ALL.iter().map(|d| d.label().len()).max().unwrap_or(0);
        let crit_w = self.criteria.iter().map(|c| c.label.len()).max().unwrap_or(0).max("Criterion".len());
        let mut out = String::new();
        let _ = writeln!(out, "{:dim_w$}  {:crit_w$}  {:10}  Score", "Dimension", "Criterion", "Kind");
        let _ = writeln!(out, "{}", "-".repeat(dim_w + crit_w + 21));
        let mut last = None;
        for c in &self.criteria {
            let dim = if last == Some(c.dimension) { "" } else { c.dimension.label() };
            last = Some(c.dimension);
            let score = match (c.status, c.score) {
                (Status::Scored, Some(s)) => format_score(s),
                (Status::Skipped, _) => "skipped".into(),
                _ => "n/e".into(),
            };
            let _ = writeln!(out, "{:dim_w$}  {:crit_w$}  {:10}  {}", dim, c.label, c.kind.as_str(), score);
        }
        out
    }
}

/// Up to three decimals, trailing zeros dropped.
pub fn format_score(s: f64) -> String {
    let mut t = format!("{s:.3}");
    while t.contains('.') && (t.ends_with('0') || t.ends_with('.')) {
        t.pop();
    }
    t
}

/// Recognizes minted resource IRIs: `{base}{id}#{Kind}`,
/// `{base}{id}#{Kind}{tag}-{n}` and `{base}{template}` with `{id}` filled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UriPatterns {
    pub base: String,
    pub templates: Vec<String>,
}

impl UriPatterns {
    pub fn from_mapping(config: &MappingConfig) -> Self {
        UriPatterns {
            base: config.base_uri().as_str().into(),
            templates: config.dc_url_patterns().values().cloned().collect(),
        }
    }

    pub fn matches(&self, iri: &str) -> bool {
        let Some(rest) = iri.strip_prefix(self.base.as_str()) else { return false };
        let segment_ok = |s: &str| !s.is_empty() && !s.contains(['/', '#', '?']);
        if let Some((id, frag)) = rest.split_once('#') {
            return segment_ok(id) && fragment_ok(frag);
        }
        self.templates.iter().any(|t| {
            let (pre, post) = t.split_once("{id}").unwrap_or((t, ""));
            rest.strip_prefix(pre).and_then(|r| r.strip_suffix(post)).is_some_and(segment_ok)
        })
    }
}

fn fragment_ok(frag: &str) -> bool {
    let kind_len = frag.bytes().take_while(|b| b.is_ascii_alphabetic()).count();
    if kind_len == 0 || !frag.as_bytes()[0].is_ascii_uppercase() {
        return false;
    }
    let pos = &frag[kind_len..];
    if pos.is_empty() {
        return true;
    }
    match pos.split_once('-') {
        Some((tag, n)) => {
            !tag.is_empty()
                && tag.bytes().all(|b| b.is_ascii_alphanumeric())
                && !n.is_empty()
                && n.bytes().all(|b| b.is_ascii_digit())
        }
        None => false,
    }
}

#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub base_uri: String,
    pub uri_patterns: UriPatterns,
    /// Serializations the dataset is published in.
    pub formats: Vec<Serialization>,
    /// Scores for DECLARED criteria; absent ids score 0.
    pub declared: BTreeMap<String, f64>,
    pub literal_rules: LiteralRules,
    pub axioms: Axioms,
    /// Object IRI prefixes that mark explicit unknown or empty values.
    pub unknown_value_markers: Vec<String>,
    pub link_sample_size: usize,
    pub resource_sample_size: usize,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 20_221_109;

impl AuditConfig {
    pub fn from_mapping(mapping: &MappingConfig) -> Self {
        AuditConfig {
            base_uri: mapping.base_uri().as_str().into(),
            uri_patterns: UriPatterns::from_mapping(mapping),
            formats: alloc::vec![mapping.serialization],
            declared: BTreeMap::new(),
            literal_rules: LiteralRules::default(),
            axioms: Axioms::shipped(),
            unknown_value_markers: alloc::vec![
                "http://www.wikidata.org/prop/novalue/".into(),
                "http://www.wikidata.org/.well-known/genid/".into(),
            ],
            link_sample_size: 500,
            resource_sample_size: 100,
            seed: DEFAULT_SEED,
        }
    }

    /// Record a score for a DECLARED criterion.
    pub fn declare(&mut self, id: &str, score: f64) -> Result<(), AuditError> {
        match criterion_spec(id) {
            Some(c) if c.kind == EvaluatorKind::Declared => {}
            Some(_) => return Err(AuditError::Config(format!("{id} is not a declared criterion"))),
            None => return Err(AuditError::Config(format!("unknown criterion {id}"))),
        }
        if !(0.0..=1.0).contains(&score) {
            return Err(AuditError::Config(format!("score for {id} must lie in [0, 1]")));
        }
        self.declared.insert(id.into(), score);
        Ok(())
    }
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self::from_mapping(&MappingConfig::default())
    }
}

/// Optional inputs; absent ones leave their criteria unscored.
#[derive(Default, Clone, Copy)]
pub struct AuditInputs<'a> {
    /// Dataset self-description (VoID).
    pub metadata: Option<&'a Graph>,
    pub gold: Option<&'a GoldStandard>,
    pub reference: Option<&'a ReferenceSet>,
    /// Network access; `None` skips NETWORK criteria that need probing.
    pub prober: Option<&'a dyn LinkProber>,
}

const MAX_EVIDENCE: usize = 10;

struct Builder {
    criteria: BTreeMap<&'static str, Criterion>,
}

impl Builder {
    fn set(&mut self, id: &'static str, status: Status, score: Option<f64>, evidence: Vec<String>) {
        let spec = criterion_spec(id).expect("catalogue id");
        let mut evidence = evidence;
        if evidence.len() > MAX_EVIDENCE {
            let extra = evidence.len() - MAX_EVIDENCE;
            evidence.truncate(MAX_EVIDENCE);
            evidence.push(format!("... {extra} more"));
        }
        let score = score.map(|s| s.clamp(0.0, 1.0));
        self.criteria.insert(
            id,
            Criterion { id: id.into(), dimension: spec.dimension, label: spec.label.into(), kind: spec.kind, status, score, evidence },
        );
    }

    fn scored(&mut self, id: &'static str, score: f64, evidence: Vec<String>) {
        self.set(id, Status::Scored, Some(score), evidence);
    }

    fn binary(&mut self, id: &'static str, present: bool, evidence: Vec<String>) {
        self.scored(id, if present { 1.0 } else { 0.0 }, evidence);
    }
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        1.0
    } else {
        n as f64 / d as f64
    }
}

/// Dataset nodes (`void:Dataset` instances) across the metadata and data graphs.
fn dataset_nodes<'a>(graphs: &[&'a Graph]) -> Vec<(&'a Graph, &'a Term)> {
    let class = iri(void::DATASET);
    graphs.iter().flat_map(|g| g.instances_of(&class).into_iter().map(move |n| (*g, n))).collect()
}

fn dataset_objects<'a>(datasets: &[(&'a Graph, &'a Term)], predicate: &str) -> Vec<&'a Term> {
    let p = iri(predicate);
    datasets.iter().flat_map(|(g, n)| g.objects(n, &p)).collect()
}

/// Subjects of reified statements.
fn statement_nodes(graph: &Graph) -> BTreeSet<&Term> {
    let mut nodes: BTreeSet<&Term> = graph.instances_of(&iri(rdf::STATEMENT)).into_iter().collect();
    for p in [rdf::SUBJECT, rdf::PREDICATE, rdf::OBJECT] {
        nodes.extend(graph.matching(None, Some(&iri(p)), None).into_iter().map(|t| t.subject));
    }
    nodes
}

fn has_statement_property(graph: &Graph, statements: &BTreeSet<&Term>, predicates: &[&str]) -> Vec<String> {
    let mut hits = Vec::new();
    for p in predicates {
        let p = iri(p);
        for t in graph.matching(None, Some(&p), None) {
            if statements.contains(t.subject) {
                hits.push(format!("{} {}", t.subject, p.as_str()));
            }
        }
    }
    hits
}

/// Triples describing one subject.
fn describe(graph: &Graph, subject: &Term) -> Graph {
    let mut g = Graph::new();
    for t in graph.matching(Some(subject), None, None) {
        g.insert(t.to_triple());
    }
    g
}

fn document_part(iri: &str) -> &str {
    iri.split('#').next().unwrap_or(iri)
}

fn reserved(url: &str) -> bool {
    links::host_of(url).is_some_and(|h| links::is_reserved_host(&h))
}

/// Probe `urls`, short-circuiting to 0 when every host is a reserved
/// documentation domain.
fn network_criterion(b: &mut Builder, id: &'static str, urls: Vec<String>, seed: u64, prober: Option<&dyn LinkProber>) {
    if urls.is_empty() {
        b.scored(id, 0.0, alloc::vec!["no resolvable URLs".into()]);
        return;
    }
    if urls.iter().all(|u| reserved(u)) {
        let evidence = urls.iter().take(3).map(|u| format!("{u}: reserved domain, never resolves")).collect();
        b.scored(id, 0.0, evidence);
        return;
    }
    match prober {
        Some(p) => {
            let report = links::probe_report(&urls, seed, p);
            b.scored(id, report.rate, report.failures.iter().map(links::describe).collect());
        }
        None => b.set(id, Status::Skipped, None, alloc::vec!["network access not granted".into()]),
    }
}

pub fn evaluate(graph: &Graph, config: &AuditConfig, inputs: AuditInputs<'_>) -> Result<QualityReport, AuditError> {
    if graph.is_empty() {
        return Err(AuditError::EmptyGraph);
    }
    let mut b = Builder { criteria: BTreeMap::new() };
    let base = config.base_uri.as_str();
    let labels = label_predicates();
    let stats = graph.stats();
    let iri_subjects: Vec<&Term> = graph.subject_terms().into_iter().filter(|s| s.as_iri().is_some()).collect();
    let mut graphs: Vec<&Graph> = Vec::new();
    graphs.extend(inputs.metadata);
    graphs.push(graph);
    let datasets = dataset_nodes(&graphs);
    let statements = statement_nodes(graph);

    // Accuracy
    let sample = links::seeded_sample(&iri_subjects, config.resource_sample_size, config.seed);
    let mut bad = Vec::new();
    for s in &sample {
        let doc = describe(graph, s);
        let ok = parse_turtle(&to_turtle(&doc)).is_ok_and(|back| isomorphic(&doc, &back));
        if !ok {
            bad.push(s.to_string());
        }
    }
    b.scored("accuracy.syntactic_validity_documents", ratio(sample.len() - bad.len(), sample.len()), bad);

    let lit = syntactic_validity_literals(graph, &config.literal_rules);
    let ev = lit.violations.iter().map(|v| format!("{} {} {:?}", v.subject, v.predicate, v.lexical)).collect();
    b.scored("accuracy.syntactic_validity_literals", lit.score(), ev);

    match inputs.reference {
        Some(r) => {
            let rep = semantic_validity(graph, r);
            b.scored("accuracy.semantic_validity_triples", rep.score(), rep.mismatches.clone());
        }
        None => b.set("accuracy.semantic_validity_triples", Status::NotEvaluated, None, alloc::vec!["no reference file".into()]),
    }

    let dup = detect_duplicate_agents(graph);
    let mut ev: Vec<String> = dup
        .clusters
        .iter()
        .map(|c| format!("agent cluster {:?} ({} IRIs): {}", c.key, c.members.len(), c.members.join(" ")))
        .collect();
    ev.extend(dup.hub_clusters.iter().map(|c| format!("hub cluster {:?} ({} IRIs)", c.key, c.members.len())));
    b.scored("accuracy.duplicate_check", dup.score(), ev);

    // Trustworthiness
    let provenance: Vec<String> = [dcterms::SOURCE, dcterms::PUBLISHER]
        .iter()
        .flat_map(|p| dataset_objects(&datasets, p))
        .map(|o| o.to_string())
        .collect();
    b.binary("trustworthiness.dataset_level", !provenance.is_empty(), provenance);

    let prov_hits: Vec<String> = graph
        .iter()
        .filter(|t| t.predicate_iri().starts_with(prov::NS) || statements.contains(t.subject))
        .take(MAX_EVIDENCE)
        .map(|t| format!("{} {}", t.subject, t.predicate_iri().as_str()))
        .collect();
    b.binary("trustworthiness.statement_level", !prov_hits.is_empty(), prov_hits);

    let markers: Vec<String> = graph
        .iter()
        .filter_map(|t| t.object.as_iri())
        .filter(|o| config.unknown_value_markers.iter().any(|m| o.starts_with(m)))
        .take(MAX_EVIDENCE)
        .map(|o| o.as_str().to_string())
        .collect();
    b.binary("trustworthiness.unknown_values", !markers.is_empty(), markers);

    // Consistency and relevancy
    for spec in CATALOGUE.iter().filter(|c| c.kind == EvaluatorKind::Declared) {
        let score = config.declared.get(spec.id).copied().unwrap_or(0.0);
        b.scored(spec.id, score, alloc::vec![format!("declared {}", format_score(score))]);
    }
    let cons = consistency_check(graph, &config.axioms);
    let ev = cons.class_violations.iter().map(|v| format!("{}: {}", v.subject, v.detail)).collect();
    b.scored("consistency.class_constraints", cons.class_score(), ev);
    let ev = cons.relation_violations.iter().map(|v| format!("{}: {}", v.subject, v.detail)).collect();
    b.scored("consistency.relation_constraints", cons.relation_score(), ev);

    // Completeness
    match inputs.gold {
        Some(gold) => {
            let c = completeness(graph, gold);
            b.scored("completeness.schema", c.schema, c.schema_missing.clone());
            let mut ev: Vec<String> = c
                .columns
                .iter()
                .map(|e| format!("{}.{}: {}/{}", e.pattern, e.property, e.bearing, e.instances))
                .collect();
            ev.extend(c.excluded_patterns.iter().map(|p| format!("{p}: no instances, excluded")));
            match c.column {
                Some(s) => b.scored("completeness.column", s, ev),
                None => b.set("completeness.column", Status::NotEvaluated, None, ev),
            }
            match c.population {
                Some(s) => b.scored("completeness.population", s, c.population_missing.iter().map(|l| format!("missing {l}")).collect()),
                None => b.set("completeness.population", Status::NotEvaluated, None, alloc::vec!["gold population is empty".into()]),
            }
        }
        None => {
            for id in ["completeness.schema", "completeness.column", "completeness.population"] {
                b.set(id, Status::NotEvaluated, None, alloc::vec!["no gold standard".into()]);
            }
        }
    }

    // Timeliness
    let modified: Vec<String> = dataset_objects(&datasets, dcterms::MODIFIED).iter().map(|o| o.to_string()).collect();
    let stamps = has_statement_property(
        graph,
        &statements,
        &[dcterms::MODIFIED, "http://purl.org/dc/terms/created", "http://www.w3.org/ns/prov#generatedAtTime"],
    );
    let freq = if modified.is_empty() { 0.0 } else { 0.5 } + if stamps.is_empty() { 0.0 } else { 0.5 };
    let mut ev: Vec<String> = modified.iter().map(|m| format!("dataset modified {m}")).collect();
    ev.extend(stamps);
    b.scored("timeliness.frequency", freq, ev);
    let validity = has_statement_property(
        graph,
        &statements,
        &[
            "http://purl.org/dc/terms/valid",
            "https://schema.org/validFrom",
            "https://schema.org/validThrough",
            "http://www.w3.org/ns/prov#invalidatedAtTime",
        ],
    );
    b.binary("timeliness.validity_period", !validity.is_empty(), validity);
    let mods = has_statement_property(graph, &statements, &[dcterms::MODIFIED]);
    b.binary("timeliness.modification_date_statements", !mods.is_empty(), mods);

    // Ease of understanding
    let title = iri(dcterms::TITLE);
    let unlabeled: Vec<String> = iri_subjects
        .iter()
        .filter(|s| !labels.iter().chain([&title]).any(|p| !graph.objects(s, p).is_empty()))
        .map(|s| s.to_string())
        .collect();
    b.scored(
        "ease_of_understanding.description_of_resources",
        ratio(iri_subjects.len() - unlabeled.len(), iri_subjects.len()),
        unlabeled,
    );
    let langs: BTreeSet<&str> = graph
        .iter()
        .filter(|t| labels.contains(t.predicate_iri()) || t.predicate_iri() == &title)
        .filter_map(|t| t.object.as_literal().and_then(|l| l.language()))
        .collect();
    b.binary(
        "ease_of_understanding.multilingual_labels",
        langs.len() >= 2,
        alloc::vec![format!("label languages: [{}]", langs.into_iter().collect::<Vec<_>>().join(", "))],
    );
    let readable = config.formats.iter().any(|f| matches!(f, Serialization::Turtle | Serialization::NTriples));
    let names: Vec<String> = config.formats.iter().map(|f| f.extension().to_string()).collect();
    b.binary("ease_of_understanding.understandable_serialization", readable, alloc::vec![format!("formats: {}", names.join(", "))]);
    let opaque: Vec<String> =
        iri_subjects.iter().filter_map(|s| s.as_iri()).filter(|i| !config.uri_patterns.matches(i.as_str())).map(|i| i.as_str().to_string()).collect();
    b.scored(
        "ease_of_understanding.self_describing_uris",
        ratio(iri_subjects.len() - opaque.len(), iri_subjects.len()),
        opaque,
    );

    // Interoperability
    let reif: BTreeSet<&str> = [rdf::SUBJECT, rdf::PREDICATE, rdf::OBJECT].into_iter().collect();
    let offending: Vec<Triple> = graph
        .iter()
        .filter(|t| {
            t.subject.is_blank()
                || t.object.is_blank()
                || reif.contains(t.predicate_iri().as_str())
                || (t.predicate_iri().as_str() == rdf::TYPE && t.object.as_iri().is_some_and(|o| o.as_str() == rdf::STATEMENT))
        })
        .map(|t| t.to_triple())
        .collect();
    b.scored(
        "interoperability.avoid_blank_nodes",
        1.0 - offending.len() as f64 / graph.len() as f64,
        offending.iter().map(|t| format!("{} {} {}", t.subject, t.predicate, t.object)).collect(),
    );
    let distinct: BTreeSet<&str> = config.formats.iter().map(|f| f.extension()).collect();
    b.scored("interoperability.several_formats", (distinct.len() as f64 / 2.0).min(1.0), alloc::vec![format!("{} format(s)", distinct.len())]);
    let local_preds: Vec<&Iri> = stats.predicate_histogram.keys().filter(|p| p.starts_with(base)).collect();
    let local_triples: usize = local_preds.iter().map(|p| stats.predicate_histogram[*p]).sum();
    b.scored(
        "interoperability.external_vocabulary",
        1.0 - local_triples as f64 / graph.len() as f64,
        local_preds.iter().map(|p| format!("local predicate {}", p.as_str())).collect(),
    );
    let mut local_terms: BTreeSet<&Iri> = local_preds.iter().copied().collect();
    local_terms.extend(stats.class_histogram.keys().filter_map(|c| c.as_iri()).filter(|c| c.starts_with(base)));
    let mapping_preds = [owl::EQUIVALENT_CLASS, owl::EQUIVALENT_PROPERTY, rdfs::SUB_CLASS_OF, rdfs::SUB_PROPERTY_OF].map(iri);
    let unmapped: Vec<String> = local_terms
        .iter()
        .filter(|t| {
            let node = Term::Iri((**t).clone());
            !graphs.iter().any(|g| {
                mapping_preds.iter().any(|p| g.objects(&node, p).iter().any(|o| o.as_iri().is_some_and(|o| !o.starts_with(base))))
            })
        })
        .map(|t| t.as_str().to_string())
        .collect();
    b.scored(
        "interoperability.proprietary_vocabulary",
        ratio(local_terms.len() - unmapped.len(), local_terms.len()),
        unmapped,
    );

    // Accessibility
    let docs: Vec<String> = iri_subjects
        .iter()
        .filter_map(|s| s.as_iri())
        .map(|i| document_part(i.as_str()).to_string())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let docs = links::seeded_sample(&docs, config.resource_sample_size, config.seed);
    network_criterion(&mut b, "accessibility.dereferencing", docs, config.seed, inputs.prober);
    let dumps: Vec<String> = dataset_objects(&datasets, void::DATA_DUMP).iter().filter_map(|o| o.as_iri()).map(|i| i.as_str().to_string()).collect();
    let repo = if dumps.is_empty() { alloc::vec![base.to_string()] } else { dumps.clone() };
    network_criterion(&mut b, "accessibility.repository_availability", repo, config.seed, inputs.prober);
    b.binary("accessibility.rdf_export", !dumps.is_empty(), dumps);
    let ds: Vec<String> = datasets.iter().map(|(_, n)| n.to_string()).collect();
    b.binary("accessibility.metadata", !ds.is_empty(), ds);

    // Licensing
    let licenses = dataset_objects(&datasets, dcterms::LICENSE);
    let ev = licenses.iter().map(|l| l.to_string()).collect();
    b.binary("licensing.machine_readable", licenses.iter().any(|l| l.as_iri().is_some()), ev);

    // Interlinking
    let (rate, linked, total) = interlinking_rate(graph, base);
    b.scored("interlinking.sameas_rate", rate, alloc::vec![format!("{linked} of {total} subjects linked")]);
    match inputs.prober {
        Some(p) => {
            let r = check_links(graph, base, config.link_sample_size, config.seed, p);
            let mut ev = alloc::vec![format!("{} of {} sampled URLs reachable", r.ok, r.sampled)];
            ev.extend(r.failures.iter().map(links::describe));
            b.scored("interlinking.external_uri_validity", r.rate, ev);
        }
        None => b.set("interlinking.external_uri_validity", Status::Skipped, None, alloc::vec!["network access not granted".into()]),
    }

    let mut criteria = Vec::with_capacity(CATALOGUE.len());
    for spec in &CATALOGUE {
        criteria.push(b.criteria.remove(spec.id).expect("every catalogue criterion is evaluated"));
    }
    debug_assert!(b.criteria.is_empty());
    let rollups = Dimension::ALL
        .iter()
        .map(|&d| {
            let scores: Vec<f64> = criteria.iter().filter(|c| c.dimension == d).filter_map(|c| c.score).collect();
            let score = (!scores.is_empty()).then(|| scores.iter().sum::<f64>() / scores.len() as f64);
            Rollup { dimension: d, evaluated: scores.len(), score }
        })
        .collect();

    let mut echo = BTreeMap::new();
    echo.insert("base_uri".into(), config.base_uri.clone());
    let fmts: Vec<&str> = config.formats.iter().map(|f| f.extension()).collect();
    echo.insert("formats".into(), fmts.join(","));
    echo.insert("link_sample_size".into(), config.link_sample_size.to_string());
    echo.insert("resource_sample_size".into(), config.resource_sample_size.to_string());
    echo.insert("network".into(), inputs.prober.is_some().to_string());
    echo.insert("gold".into(), inputs.gold.is_some().to_string());
    echo.insert("reference".into(), inputs.reference.is_some().to_string());
    echo.insert("metadata".into(), inputs.metadata.is_some().to_string());
    for (k, v) in &config.declared {
        echo.insert(format!("declared.{k}"), format_score(*v));
    }
    let mut seeds = BTreeMap::new();
    seeds.insert("link_sample".into(), config.seed);
    seeds.insert("resource_sample".into(), config.seed);
    Ok(QualityReport { criteria, rollups, config: echo, seeds })
}

#[cfg(test)]
mod tests;
