//! Potential duplicate agents and hubs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;

use crate::enrich::{label_predicates, EntityKind};
use crate::graph::Graph;
use crate::namespace::bf;
use crate::term::{iri, Term};
use crate::text::{normalize_label, split_life_dates};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cluster {
    /// Normalized name shared by the members.
    pub key: String,
    pub dates: Option<String>,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DuplicateReport {
    pub labelled_agents: usize,
    pub clusters: Vec<Cluster>,
    /// Hubs sharing a uniform title; reported as evidence only.
    pub hub_clusters: Vec<Cluster>,
}

impl DuplicateReport {
    pub fn clustered(&self) -> usize {
        self.clusters.iter().map(|c| c.members.len()).sum()
    }

    /// 1 − clustered / labelled; 1 when there are no labelled agents.
    pub fn score(&self) -> f64 {
        if self.labelled_agents == 0 {
            1.0
        } else {
            1.0 - self.clustered() as f64 / self.labelled_agents as f64
        }
    }
}

fn labelled(graph: &Graph, nodes: &BTreeSet<&Term>) -> Vec<(String, String)> {
    let preds = label_predicates();
    nodes
        .iter()
        .filter(|n| !n.is_literal())
        .filter_map(|n| {
            let label = preds
                .iter()
                .flat_map(|p| graph.objects(n, p))
                .filter_map(|o| o.as_literal().map(|l| l.lexical().to_string()))
                .min()?;
            Some((n.to_string().trim_start_matches('<').trim_end_matches('>').to_string(), label))
        })
        .collect()
}

/// Group by normalized name, then by life dates. Undated members join the
/// single dated group when there is exactly one; otherwise they form their
/// own group.
fn cluster(entries: Vec<(String, String)>) -> Vec<Cluster> {
    let mut by_name: BTreeMap<String, BTreeMap<Option<String>, Vec<String>>> = BTreeMap::new();
    for (node, label) in entries {
        let (name, dates) = split_life_dates(&label);
        by_name.entry(normalize_label(&name)).or_default().entry(dates).or_default().push(node);
    }
    let mut out = Vec::new();
    for (key, mut groups) in by_name {
        let dated = groups.keys().filter(|d| d.is_some()).count();
        if dated == 1 {
            if let Some(undated) = groups.remove(&None) {
                groups.values_mut().next().expect("one dated group").extend(undated);
            }
        }
        for (dates, mut members) in groups {
            if members.len() >= 2 {
                members.sort();
                members.dedup();
                out.push(Cluster { key: key.clone(), dates, members });
            }
        }
    }
    out.sort();
    out
}

pub fn detect_duplicate_agents(graph: &Graph) -> DuplicateReport {
    let mut agents: BTreeSet<&Term> = BTreeSet::new();
    for class in EntityKind::Agent.classes() {
        agents.extend(graph.instances_of(&class));
    }
    let entries = labelled(graph, &agents);
    let hubs: BTreeSet<&Term> = graph.instances_of(&iri(&alloc::format!("{}Hub", bf::NS))).into_iter().collect();
    DuplicateReport { labelled_agents: entries.len(), clusters: cluster(entries), hub_clusters: cluster(labelled(graph, &hubs)) }
}
