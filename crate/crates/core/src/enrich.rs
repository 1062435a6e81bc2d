//! Controlled-vocabulary resolution and label-based reconciliation.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::namespace::{bf, foaf, owl, rdfs, schema, skos};
use crate::term::{iri, Iri, Term, Triple};
use crate::text::{match_key, split_life_dates};

const LANGUAGES_TSV: &str = include_str!("../data/languages.tsv");
const GEOGRAPHIC_AREAS_TSV: &str = include_str!("../data/geographic_areas.tsv");
const RELATORS_TSV: &str = include_str!("../data/relators.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("empty {0} code")]
    Empty(&'static str),
    #[error("{table} code {code:?} contains whitespace")]
    Whitespace { table: &'static str, code: String },
    #[error("unknown {table} code {code:?}")]
    Unknown { table: &'static str, code: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnrichError {
    #[error("{table} line {line}: {message}")]
    Table { table: &'static str, line: usize, message: String },
    #[error("acceptance line {line}: {message}")]
    Acceptance { line: usize, message: String },
    #[error("fixture line {line}: {message}")]
    Fixture { line: usize, message: String },
    #[error("accepted candidates refer to subjects absent from the graph: {}", .0.join(", "))]
    MissingSubjects(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum VocabularyName {
    Languages,
    GeographicAreas,
    Relators,
}

impl VocabularyName {
    pub fn as_str(self) -> &'static str {
        match self {
            VocabularyName::Languages => "languages",
            VocabularyName::GeographicAreas => "geographicAreas",
            VocabularyName::Relators => "relators",
        }
    }

    pub fn base(self) -> String {
        format!("http://id.loc.gov/vocabulary/{}/", self.as_str())
    }
}

/// Code → label table for one vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabularyTable {
    pub name: VocabularyName,
    entries: BTreeMap<String, String>,
}

impl VocabularyTable {
    /// Parse `code<TAB>label` lines; `#` starts a comment.
    pub fn parse(name: VocabularyName, text: &str) -> Result<Self, EnrichError> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| EnrichError::Table { table: name.as_str(), line: n + 1, message };
            let (code, label) = line.split_once('\t').unwrap_or((line, ""));
            if code.is_empty() || code.chars().any(char::is_whitespace) {
                return Err(err(format!("invalid code {code:?}")));
            }
            if entries.insert(code.to_owned(), label.trim().to_owned()).is_some() {
                return Err(err(format!("duplicate code {code:?}")));
            }
        }
        Ok(VocabularyTable { name, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn label(&self, code: &str) -> Option<&str> {
        self.entries.get(code).map(String::as_str)
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iri_for(&self, code: &str) -> Option<Iri> {
        self.entries.contains_key(code).then(|| iri(&format!("{}{}", self.name.base(), code)))
    }
}

/// Outcome of a relator lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelatorResolution {
    Iri(Iri),
    /// Not in the table; the mapper keeps the original text.
    Text(String),
}

/// The three shipped tables.
#[derive(Debug, Clone)]
pub struct Vocabularies {
    pub languages: VocabularyTable,
    pub geographic_areas: VocabularyTable,
    pub relators: VocabularyTable,
}

impl Default for Vocabularies {
    fn default() -> Self {
        Self::shipped()
    }
}

fn clean_code(table: &'static str, code: &str) -> Result<String, Rejection> {
    let trimmed = code.trim();
    if trimmed.is_empty() {
        return Err(Rejection::Empty(table));
    }
    if trimmed.chars().any(char::is_whitespace) || trimmed.contains("%20") || trimmed.contains("%09") {
        return Err(Rejection::Whitespace { table, code: code.to_owned() });
    }
    Ok(trimmed.to_lowercase())
}

impl Vocabularies {
    pub fn shipped() -> Self {
        Vocabularies {
            languages: VocabularyTable::parse(VocabularyName::Languages, LANGUAGES_TSV).expect("shipped languages table"),
            geographic_areas: VocabularyTable::parse(VocabularyName::GeographicAreas, GEOGRAPHIC_AREAS_TSV)
                .expect("shipped geographic table"),
            relators: VocabularyTable::parse(VocabularyName::Relators, RELATORS_TSV).expect("shipped relator table"),
        }
    }

    /// MARC language code → IRI, only for codes present in the table.
    pub fn resolve_language(&self, code: &str) -> Result<Iri, Rejection> {
        let c = clean_code("language", code)?;
        self.languages.iri_for(&c).ok_or(Rejection::Unknown { table: "language", code: code.to_owned() })
    }

    /// MARC geographic area code (trailing hyphen padding allowed) → IRI.
    pub fn resolve_geographic_area(&self, code: &str) -> Result<Iri, Rejection> {
        let c = clean_code("geographic area", code)?;
        let stripped = c.trim_end_matches('-');
        self.geographic_areas
            .iri_for(stripped)
            .ok_or(Rejection::Unknown { table: "geographic area", code: code.to_owned() })
    }

    /// Relator term or code → IRI, or the cleaned text when unmapped.
    pub fn resolve_relator(&self, term: &str) -> RelatorResolution {
        let cleaned = crate::text::trim_terminal(term).to_lowercase();
        if self.relators.label(&cleaned).is_some() {
            return RelatorResolution::Iri(self.relators.iri_for(&cleaned).expect("present"));
        }
        match self.relators.entries.iter().find(|(_, label)| **label == cleaned) {
            Some((code, _)) => RelatorResolution::Iri(self.relators.iri_for(code).expect("present")),
            None => RelatorResolution::Text(crate::text::trim_terminal(term).to_owned()),
        }
    }
}

/// A record from an external knowledge base.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExternalEntity {
    pub iri: Iri,
    pub label: String,
    /// Life dates when known separately from the label.
    pub dates: Option<String>,
}

impl ExternalEntity {
    fn effective_dates(&self) -> Option<String> {
        self.dates.clone().or_else(|| split_life_dates(&self.label).1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct SourceError(pub String);

/// Lookup interface shared by the endpoint client and the fixture file.
pub trait CandidateSource {
    /// Entities whose label equals `label` exactly.
    fn by_label(&self, label: &str) -> Result<Vec<ExternalEntity>, SourceError>;
    /// Entities whose [`match_key`] equals `key`.
    fn by_normalized(&self, key: &str) -> Result<Vec<ExternalEntity>, SourceError>;
}

/// In-memory source read from `iri<TAB>label[<TAB>dates]` lines.
#[derive(Debug, Clone, Default)]
pub struct FixtureSource {
    entries: Vec<ExternalEntity>,
}

impl FixtureSource {
    pub fn new(entries: Vec<ExternalEntity>) -> Self {
        FixtureSource { entries }
    }

    pub fn parse(text: &str) -> Result<Self, EnrichError> {
        let mut entries = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let err = |message: String| EnrichError::Fixture { line: n + 1, message };
            let iri_text = cols.next().unwrap_or_default().trim();
            let label = cols.next().ok_or_else(|| err("missing label column".into()))?.trim();
            let dates = cols.next().map(str::trim).filter(|d| !d.is_empty()).map(String::from);
            let iri = Iri::new(iri_text).map_err(|e| err(e.to_string()))?;
            entries.push(ExternalEntity { iri, label: label.into(), dates });
        }
        Ok(FixtureSource { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl CandidateSource for FixtureSource {
    fn by_label(&self, label: &str) -> Result<Vec<ExternalEntity>, SourceError> {
        Ok(self.entries.iter().filter(|e| e.label == label).cloned().collect())
    }

    fn by_normalized(&self, key: &str) -> Result<Vec<ExternalEntity>, SourceError> {
        Ok(self.entries.iter().filter(|e| match_key(&e.label) == key).cloned().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconciliationCandidate {
    pub source: Iri,
    pub external: Iri,
    pub label: String,
    pub score: f64,
    pub evidence: Vec<String>,
}

pub const SCORE_EXACT_WITH_DATES: f64 = 1.0;
pub const SCORE_EXACT: f64 = 0.7;
pub const SCORE_NORMALIZED: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityKind {
    Agent,
    Place,
    Work,
    Topic,
}

impl EntityKind {
    pub fn classes(self) -> Vec<Iri> {
        let names: &[(&str, &str)] = match self {
            EntityKind::Agent => &[
                (bf::NS, "Agent"),
                (bf::NS, "Person"),
                (bf::NS, "Organization"),
                (bf::NS, "Family"),
                (bf::NS, "Meeting"),
                (schema::NS, "Person"),
                (schema::NS, "Organization"),
                (foaf::NS, "Person"),
                (foaf::NS, "Agent"),
            ],
            EntityKind::Place => &[(bf::NS, "Place"), (schema::NS, "Place")],
            EntityKind::Work => &[(bf::NS, "Work"), (schema::NS, "VideoObject"), (schema::NS, "CreativeWork")],
            EntityKind::Topic => &[(bf::NS, "Topic"), (skos::NS, "Concept")],
        };
        names.iter().map(|(ns, local)| iri(&format!("{ns}{local}"))).collect()
    }
}

impl core::str::FromStr for EntityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "agent" | "person" => Ok(EntityKind::Agent),
            "place" | "location" => Ok(EntityKind::Place),
            "work" | "film" => Ok(EntityKind::Work),
            "topic" | "subject" => Ok(EntityKind::Topic),
            other => Err(format!("unknown entity kind {other:?}")),
        }
    }
}

/// Predicates that carry a human-readable label.
pub fn label_predicates() -> [Iri; 4] {
    [
        iri(crate::namespace::rdfs::LABEL),
        iri(&format!("{}name", schema::NS)),
        iri(&format!("{}name", foaf::NS)),
        iri(&format!("{}prefLabel", skos::NS)),
    ]
}

/// IRI resources of a kind with their smallest label.
pub fn labeled_entities(graph: &Graph, kind: EntityKind) -> Vec<(Iri, String)> {
    let preds = label_predicates();
    let mut out: BTreeMap<Iri, String> = BTreeMap::new();
    for class in kind.classes() {
        for node in graph.instances_of(&class) {
            let Term::Iri(node_iri) = node else { continue };
            if out.contains_key(node_iri) {
                continue;
            }
            let label = preds
                .iter()
                .flat_map(|p| graph.objects(node, p))
                .filter_map(|o| o.as_literal().map(|l| l.lexical().to_owned()))
                .min();
            if let Some(label) = label {
                out.insert(node_iri.clone(), label);
            }
        }
    }
    out.into_iter().collect()
}

/// Score lookup results for one local label. Entities with conflicting
/// life dates are dropped.
pub fn score_matches(
    local_label: &str,
    exact: &[ExternalEntity],
    normalized: &[ExternalEntity],
) -> Vec<(ExternalEntity, f64, Vec<String>)> {
    let local_dates = split_life_dates(local_label).1;
    let local_key = match_key(local_label);
    let mut best: BTreeMap<Iri, (ExternalEntity, f64, Vec<String>)> = BTreeMap::new();
    let mut offer = |e: &ExternalEntity, score: f64, evidence: Vec<String>| {
        let keep = best.get(&e.iri).is_none_or(|(_, s, _)| score > *s);
        if keep {
            best.insert(e.iri.clone(), (e.clone(), score, evidence));
        }
    };
    for e in exact.iter().filter(|e| e.label == local_label) {
        let ext_dates = e.effective_dates();
        match (&local_dates, &ext_dates) {
            (Some(a), Some(b)) if a == b => offer(e, SCORE_EXACT_WITH_DATES, alloc::vec!["label".into(), "dates".into()]),
            (Some(_), Some(_)) => {}
            _ => offer(e, SCORE_EXACT, alloc::vec!["label".into()]),
        }
    }
    for e in normalized.iter().filter(|e| match_key(&e.label) == local_key) {
        let conflict = matches!((&local_dates, e.effective_dates()), (Some(a), Some(b)) if *a != b);
        if !conflict {
            offer(e, SCORE_NORMALIZED, alloc::vec!["normalized-label".into()]);
        }
    }
    best.into_values().collect()
}

/// Deterministic order: subject, score descending, external IRI.
pub fn sort_candidates(candidates: &mut [ReconciliationCandidate]) {
    candidates.sort_by(|a, b| {
        a.source
            .cmp(&b.source)
            .then(b.score.partial_cmp(&a.score).unwrap_or(core::cmp::Ordering::Equal))
            .then_with(|| a.external.cmp(&b.external))
    });
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReconcileOutcome {
    pub candidates: Vec<ReconciliationCandidate>,
    /// Per-entity lookup failures: (subject IRI, message).
    pub errors: Vec<(String, String)>,
}

/// Candidates for one labeled entity, or the lookup error.
pub fn reconcile_one(
    source: &dyn CandidateSource,
    subject: &Iri,
    label: &str,
    floor: f64,
) -> Result<Vec<ReconciliationCandidate>, SourceError> {
    let exact = source.by_label(label)?;
    let normalized = source.by_normalized(&match_key(label))?;
    Ok(score_matches(label, &exact, &normalized)
        .into_iter()
        .filter(|(_, score, _)| *score >= floor)
        .map(|(e, score, evidence)| ReconciliationCandidate {
            source: subject.clone(),
            external: e.iri,
            label: e.label,
            score,
            evidence,
        })
        .collect())
}

/// Generate candidates for every labeled resource of `kind`. Read-only on
/// the graph; lookup failures are recorded and processing continues.
pub fn reconcile(graph: &Graph, kind: EntityKind, source: &dyn CandidateSource, floor: f64) -> ReconcileOutcome {
    let mut out = ReconcileOutcome::default();
    for (subject, label) in labeled_entities(graph, kind) {
        match reconcile_one(source, &subject, &label, floor) {
            Ok(c) => out.candidates.extend(c),
            Err(e) => out.errors.push((subject.into_string(), e.0)),
        }
    }
    sort_candidates(&mut out.candidates);
    out
}

/// Candidates eligible for automatic acceptance (top score only).
pub fn auto_accepted(candidates: &[ReconciliationCandidate]) -> Vec<(Iri, Iri)> {
    candidates
        .iter()
        .filter(|c| c.score >= SCORE_EXACT_WITH_DATES)
        .map(|c| (c.source.clone(), c.external.clone()))
        .collect()
}

/// Parse an acceptance file: one `subject external` pair per line.
pub fn parse_acceptance(text: &str) -> Result<Vec<(Iri, Iri)>, EnrichError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| EnrichError::Acceptance { line: n + 1, message };
        let strip = |s: &str| s.trim_start_matches('<').trim_end_matches('>').to_owned();
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 2 {
            return Err(err(format!("expected 2 columns, found {}", cols.len())));
        }
        let s = Iri::new(strip(cols[0])).map_err(|e| err(e.to_string()))?;
        let o = Iri::new(strip(cols[1])).map_err(|e| err(e.to_string()))?;
        out.push((s, o));
    }
    Ok(out)
}

/// Add one `owl:sameAs` triple per accepted pair. Fails without changing
/// the graph when a subject is absent. Returns the number of new triples.
pub fn apply_sameas(graph: &mut Graph, accepted: &[(Iri, Iri)]) -> Result<usize, EnrichError> {
    let missing: BTreeSet<String> = accepted
        .iter()
        .filter(|(s, _)| !graph.has_subject(&Term::Iri(s.clone())))
        .map(|(s, _)| s.as_str().to_owned())
        .collect();
    if !missing.is_empty() {
        return Err(EnrichError::MissingSubjects(missing.into_iter().collect()));
    }
    let same_as = iri(owl::SAME_AS);
    Ok(accepted.iter().filter(|(s, o)| graph.insert(Triple::new(s.clone(), same_as.clone(), o.clone()))).count())
}

/// Label predicate used when reconciled resources need a readable name.
pub fn rdfs_label() -> Iri {
    iri(rdfs::LABEL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Literal;
    use alloc::vec;
    use proptest::prelude::*;

    fn v() -> Vocabularies {
        Vocabularies::shipped()
    }

    #[test]
    fn languages() {
        assert_eq!(v().resolve_language("spa").unwrap().as_str(), "http://id.loc.gov/vocabulary/languages/spa");
        assert_eq!(v().resolve_language(" SPA ").unwrap().as_str(), "http://id.loc.gov/vocabulary/languages/spa");
        assert!(matches!(v().resolve_language("d"), Err(Rejection::Unknown { .. })));
        assert!(matches!(v().resolve_language(""), Err(Rejection::Empty(_))));
        assert!(matches!(v().resolve_language("s pa"), Err(Rejection::Whitespace { .. })));
    }

    #[test]
    fn geographic_areas() {
        let g = v();
        assert_eq!(g.resolve_geographic_area("e-uk-st").unwrap().as_str(), "http://id.loc.gov/vocabulary/geographicAreas/e-uk-st");
        assert_eq!(g.resolve_geographic_area("e-uk---").unwrap().as_str(), "http://id.loc.gov/vocabulary/geographicAreas/e-uk");
        assert!(matches!(g.resolve_geographic_area("e-uk- st"), Err(Rejection::Whitespace { .. })));
        assert!(matches!(g.resolve_geographic_area("e-uk-%20st"), Err(Rejection::Whitespace { .. })));
        assert!(matches!(g.resolve_geographic_area("zz-fake"), Err(Rejection::Unknown { .. })));
    }

    #[test]
    fn relators() {
        let g = v();
        assert_eq!(g.relators.len(), 15);
        assert_eq!(g.resolve_relator("author"), RelatorResolution::Iri(iri("http://id.loc.gov/vocabulary/relators/aut")));
        assert_eq!(g.resolve_relator("Author."), RelatorResolution::Iri(iri("http://id.loc.gov/vocabulary/relators/aut")));
        assert_eq!(g.resolve_relator("ctb"), RelatorResolution::Iri(iri("http://id.loc.gov/vocabulary/relators/ctb")));
        for unmapped in ["translator", "illustrator", "printer", "honoree", "presenter", "auhtor"] {
            assert_eq!(g.resolve_relator(unmapped), RelatorResolution::Text(unmapped.into()));
        }
    }

    #[test]
    fn table_validation() {
        assert!(VocabularyTable::parse(VocabularyName::Languages, "eng\tEnglish\neng\tAgain\n").is_err());
        assert!(VocabularyTable::parse(VocabularyName::Languages, "e ng\tEnglish\n").is_err());
    }

    fn ent(i: &str, label: &str) -> ExternalEntity {
        ExternalEntity { iri: iri(i), label: label.into(), dates: None }
    }

    fn agent_graph(label: &str) -> Graph {
        let mut g = Graph::new();
        let a = iri("http://example.org/1#Agent100-2");
        g.insert(Triple::new(a.clone(), iri(crate::namespace::rdf::TYPE), iri(&format!("{}Agent", bf::NS))));
        g.insert(Triple::new(a, rdfs_label(), Literal::string(label)));
        g
    }

    #[test]
    fn reconciliation_ladder() {
        let label = "Stevenson, Robert Louis, 1850-1894";
        let src = FixtureSource::new(vec![
            ent("http://viaf.org/viaf/1", label),
            ent("http://www.wikidata.org/entity/Q1512", "Stevenson, Robert Louis"),
        ]);
        let out = reconcile(&agent_graph(label), EntityKind::Agent, &src, SCORE_NORMALIZED);
        let scores: Vec<(String, f64)> = out.candidates.iter().map(|c| (c.external.as_str().to_owned(), c.score)).collect();
        assert_eq!(scores, vec![("http://viaf.org/viaf/1".into(), 1.0), ("http://www.wikidata.org/entity/Q1512".into(), 0.4)]);

        let absent = reconcile(&agent_graph("Nobody"), EntityKind::Agent, &src, 0.0);
        assert!(absent.candidates.is_empty());

        let twins = FixtureSource::new(vec![ent("http://e/b", "Scott, Walter"), ent("http://e/a", "Scott, Walter")]);
        let out = reconcile(&agent_graph("Scott, Walter"), EntityKind::Agent, &twins, 0.4);
        let iris: Vec<&str> = out.candidates.iter().map(|c| c.external.as_str()).collect();
        assert_eq!(iris, ["http://e/a", "http://e/b"]);
        assert!(out.candidates.iter().all(|c| c.score == SCORE_EXACT));
    }

    #[test]
    fn conflicting_dates_dropped() {
        let src = FixtureSource::new(vec![ent("http://e/x", "Burns, Robert, 1759-1796"), ent("http://e/y", "burns, robert, 1800-1850")]);
        let out = reconcile(&agent_graph("Burns, Robert, 1759-1796"), EntityKind::Agent, &src, 0.0);
        assert_eq!(out.candidates.len(), 1);
        assert_eq!(out.candidates[0].external.as_str(), "http://e/x");
    }

    #[test]
    fn floor_filters() {
        let src = FixtureSource::new(vec![ent("http://e/x", "SCOTT, WALTER")]);
        assert!(reconcile(&agent_graph("Scott, Walter"), EntityKind::Agent, &src, 0.5).candidates.is_empty());
        assert_eq!(reconcile(&agent_graph("Scott, Walter"), EntityKind::Agent, &src, 0.4).candidates.len(), 1);
    }

    #[test]
    fn fixture_parsing() {
        let src = FixtureSource::parse("# comment\nhttp://e/x\tScott, Walter\t1771-1832\n").unwrap();
        assert_eq!(src.len(), 1);
        assert!(FixtureSource::parse("not an iri\tx\n").is_err());
    }

    #[test]
    fn sameas_application() {
        let mut g = agent_graph("x");
        let before = g.clone();
        assert_eq!(apply_sameas(&mut g, &[]).unwrap(), 0);
        assert_eq!(g, before);
        let pair = (iri("http://example.org/1#Agent100-2"), iri("http://viaf.org/viaf/1"));
        assert_eq!(apply_sameas(&mut g, core::slice::from_ref(&pair)).unwrap(), 1);
        assert_eq!(g.len(), before.len() + 1);
        let once = g.clone();
        apply_sameas(&mut g, &[pair]).unwrap();
        assert_eq!(g, once);
        let err = apply_sameas(&mut g, &[(iri("http://example.org/none"), iri("http://viaf.org/viaf/2"))]).unwrap_err();
        assert!(err.to_string().contains("http://example.org/none"));
    }

    #[test]
    fn acceptance_file() {
        let pairs = parse_acceptance("<http://e/a> <http://w/1>\n# c\nhttp://e/b http://w/2\n").unwrap();
        assert_eq!(pairs.len(), 2);
        assert!(parse_acceptance("http://e/a\n").is_err());
    }

    proptest! {
        #[test]
        fn resolution_never_synthesizes(code in "\\PC{0,8}") {
            if let Ok(i) = v().resolve_language(&code) {
                let local = i.as_str().rsplit('/').next().unwrap();
                prop_assert!(v().languages.label(local).is_some());
            }
            if let Ok(i) = v().resolve_geographic_area(&code) {
                let local = i.as_str().rsplit('/').next().unwrap();
                prop_assert!(v().geographic_areas.label(local).is_some());
            }
        }

        #[test]
        fn scores_monotone(name in "[A-Z][a-z]{2,8}, [A-Z][a-z]{2,8}", dates in proptest::option::of("1[6-9][0-9]{2}-1[6-9][0-9]{2}")) {
            let label = match &dates { Some(d) => format!("{name}, {d}"), None => name.clone() };
            let e = ent("http://e/x", &label);
            let scored = score_matches(&label, core::slice::from_ref(&e), core::slice::from_ref(&e));
            prop_assert_eq!(scored.len(), 1);
            let expected = if dates.is_some() { SCORE_EXACT_WITH_DATES } else { SCORE_EXACT };
            prop_assert_eq!(scored[0].1, expected);
            prop_assert!(SCORE_EXACT_WITH_DATES >= SCORE_EXACT && SCORE_EXACT >= SCORE_NORMALIZED);
        }
    }
}
