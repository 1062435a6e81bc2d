//! Schema, column and population completeness against a gold standard.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;

use crate::enrich::label_predicates;
use crate::graph::Graph;
use crate::namespace::{owl, PrefixMap};
use crate::term::{iri, Iri, Term};
use crate::text::{match_key, uninvert_name};

use super::literals::{expand_curie, parse_prefix_line};
use super::AuditError;

const DEFAULT_GOLD: &str = include_str!("../../data/gold.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldProperty {
    pub name: String,
    pub predicates: Vec<Iri>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldPattern {
    pub name: String,
    pub classes: Vec<Iri>,
    pub properties: Vec<GoldProperty>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PopulationEntry {
    pub label: String,
    pub external: Option<Iri>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GoldStandard {
    pub patterns: Vec<GoldPattern>,
    pub population: Vec<PopulationEntry>,
}

impl GoldStandard {
    /// Shipped patterns with an empty population list.
    pub fn shipped() -> Self {
        Self::parse(DEFAULT_GOLD).expect("shipped gold standard")
    }

    pub fn parse(text: &str) -> Result<Self, AuditError> {
        let mut prefixes = PrefixMap::well_known();
        let mut gold = GoldStandard::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |message: String| AuditError::Parse { file: "gold standard", line: n + 1, message };
            if let Some(rest) = line.trim().strip_prefix("@prefix") {
                parse_prefix_line(&mut prefixes, rest).map_err(err)?;
                continue;
            }
            if let Some(rest) = line.strip_prefix("population\t") {
                let mut cols = rest.split('\t');
                let label = cols.next().unwrap_or_default().trim();
                if label.is_empty() {
                    return Err(err("population label is empty".into()));
                }
                let external = match cols.next().map(str::trim).filter(|s| !s.is_empty()) {
                    Some(i) => Some(Iri::new(i).map_err(|e| err(e.to_string()))?),
                    None => None,
                };
                gold.population.push(PopulationEntry { label: label.into(), external });
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            let expand_all = |items: &[&str]| -> Result<Vec<Iri>, AuditError> {
                items.iter().map(|c| expand_curie(&prefixes, c).map_err(err)).collect()
            };
            match cols.as_slice() {
                ["pattern", name, classes @ ..] if !classes.is_empty() => {
                    let classes = expand_all(classes)?;
                    gold.patterns.push(GoldPattern { name: (*name).into(), classes, properties: Vec::new() });
                }
                ["property", pattern, name, preds @ ..] if !preds.is_empty() => {
                    let predicates = expand_all(preds)?;
                    let p = gold
                        .patterns
                        .iter_mut()
                        .find(|p| p.name == *pattern)
                        .ok_or_else(|| err(format!("property for undeclared pattern {pattern:?}")))?;
                    p.properties.push(GoldProperty { name: (*name).into(), predicates });
                }
                _ => return Err(err(format!("unrecognized line {:?}", line.trim()))),
            }
        }
        if gold.patterns.is_empty() && gold.population.is_empty() {
            return Err(AuditError::Parse { file: "gold standard", line: 0, message: "no patterns or population".into() });
        }
        Ok(gold)
    }

    /// Add population entries from a tab-separated `label[<TAB>iri]` list.
    pub fn with_population(mut self, text: &str) -> Result<Self, AuditError> {
        let mut wrapped = String::new();
        for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
            wrapped.push_str("population\t");
            wrapped.push_str(line);
            wrapped.push('\n');
        }
        self.population.extend(GoldStandard::parse(&wrapped)?.population);
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnEntry {
    pub pattern: String,
    pub property: String,
    pub instances: usize,
    pub bearing: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CompletenessReport {
    pub schema: f64,
    pub schema_missing: Vec<String>,
    /// `None` when no gold class has instances.
    pub column: Option<f64>,
    pub columns: Vec<ColumnEntry>,
    pub excluded_patterns: Vec<String>,
    /// `None` when the gold population is empty.
    pub population: Option<f64>,
    pub population_missing: Vec<String>,
}

fn instances<'a>(graph: &'a Graph, classes: &[Iri]) -> BTreeSet<&'a Term> {
    classes.iter().flat_map(|c| graph.instances_of(c)).collect()
}

pub fn completeness(graph: &Graph, gold: &GoldStandard) -> CompletenessReport {
    let stats = graph.stats();
    let mut report = CompletenessReport::default();

    let mut items = 0usize;
    let mut present = 0usize;
    for p in &gold.patterns {
        items += 1;
        if p.classes.iter().any(|c| stats.class_histogram.contains_key(&Term::Iri(c.clone()))) {
            present += 1;
        } else {
            report.schema_missing.push(format!("class {}", p.name));
        }
        for prop in &p.properties {
            items += 1;
            if prop.predicates.iter().any(|q| stats.predicate_histogram.contains_key(q)) {
                present += 1;
            } else {
                report.schema_missing.push(format!("property {}.{}", p.name, prop.name));
            }
        }
    }
    report.schema = if items == 0 { 1.0 } else { present as f64 / items as f64 };

    let mut ratios = Vec::new();
    for p in &gold.patterns {
        let nodes = instances(graph, &p.classes);
        if nodes.is_empty() {
            report.excluded_patterns.push(p.name.clone());
            continue;
        }
        for prop in &p.properties {
            let bearing = nodes.iter().filter(|n| prop.predicates.iter().any(|q| !graph.objects(n, q).is_empty())).count();
            ratios.push(bearing as f64 / nodes.len() as f64);
            report.columns.push(ColumnEntry {
                pattern: p.name.clone(),
                property: prop.name.clone(),
                instances: nodes.len(),
                bearing,
            });
        }
    }
    if !ratios.is_empty() {
        report.column = Some(ratios.iter().sum::<f64>() / ratios.len() as f64);
    }

    if !gold.population.is_empty() {
        let labels = label_predicates();
        let mut keys: BTreeSet<String> = BTreeSet::new();
        for t in graph.iter().filter(|t| labels.contains(t.predicate_iri())) {
            if let Some(l) = t.object.as_literal() {
                keys.insert(match_key(l.lexical()));
                let (name, _) = crate::text::split_life_dates(l.lexical());
                keys.insert(match_key(&uninvert_name(&name)));
            }
        }
        let same_as = iri(owl::SAME_AS);
        let linked: BTreeSet<&str> = graph.matching(None, Some(&same_as), None).iter().filter_map(|t| t.object.as_iri()).map(|i| i.as_str()).collect();
        let mut matched = 0;
        for e in &gold.population {
            let by_link = e.external.as_ref().is_some_and(|x| linked.contains(x.as_str()));
            if by_link || keys.contains(&match_key(&e.label)) {
                matched += 1;
            } else {
                report.population_missing.push(e.label.clone());
            }
        }
        report.population = Some(matched as f64 / gold.population.len() as f64);
    }
    report
}
