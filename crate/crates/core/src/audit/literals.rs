//! Syntactic validity of literals against per-predicate rules.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use regex_automata::meta::Regex;
use serde::Serialize;

use crate::graph::Graph;
use crate::namespace::PrefixMap;
use crate::term::{Iri, Term};
use crate::text::trim_terminal;

use super::AuditError;

const DEFAULT_RULES: &str = include_str!("../../data/literal_rules.txt");
const RELATOR_TERMS: &str = include_str!("../../data/relator_terms.txt");

#[derive(Debug, Clone)]
enum Check {
    Regex(Regex, String),
    Terms(BTreeSet<String>),
}

#[derive(Debug, Clone)]
pub struct LiteralRule {
    pub class: Option<Iri>,
    pub predicate: Iri,
    check: Check,
}

impl LiteralRule {
    pub fn accepts(&self, lexical: &str) -> bool {
        match &self.check {
            Check::Regex(re, _) => re.is_match(lexical),
            Check::Terms(terms) => terms.contains(&trim_terminal(lexical).to_lowercase()),
        }
    }

    pub fn describe(&self) -> String {
        match &self.check {
            Check::Regex(_, p) => format!("/{p}/"),
            Check::Terms(t) => format!("one of {} terms", t.len()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LiteralRules {
    pub rules: Vec<LiteralRule>,
}

impl Default for LiteralRules {
    fn default() -> Self {
        Self::parse(DEFAULT_RULES).expect("shipped literal rules")
    }
}

pub(crate) fn expand_curie(prefixes: &PrefixMap, text: &str) -> Result<Iri, String> {
    if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return Iri::new(inner).map_err(|e| e.to_string());
    }
    match prefixes.expand(text) {
        Some(r) => r.map_err(|e| e.to_string()),
        None => Err(format!("unknown prefix in {text:?}")),
    }
}

/// Parse an `@prefix name: <ns>` line into the map.
pub(crate) fn parse_prefix_line(prefixes: &mut PrefixMap, rest: &str) -> Result<(), String> {
    let rest = rest.trim().trim_end_matches('.').trim();
    let (name, ns) = rest.split_once(char::is_whitespace).ok_or("malformed @prefix")?;
    let name = name.strip_suffix(':').ok_or("prefix name must end with ':'")?;
    let ns = ns.trim().strip_prefix('<').and_then(|n| n.strip_suffix('>')).ok_or("namespace must be <...>")?;
    prefixes.insert(name, ns);
    Ok(())
}

/// First `n` whitespace-separated columns and the trimmed remainder.
pub(crate) fn split_columns(line: &str, n: usize) -> (Vec<&str>, &str) {
    let mut cols = Vec::new();
    let mut rest = line.trim_start();
    while cols.len() < n && !rest.is_empty() {
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        cols.push(&rest[..end]);
        rest = rest[end..].trim_start();
    }
    (cols, rest.trim_end())
}

pub fn relator_terms() -> BTreeSet<String> {
    RELATOR_TERMS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

impl LiteralRules {
    pub fn parse(text: &str) -> Result<Self, AuditError> {
        let mut prefixes = PrefixMap::well_known();
        let mut rules = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| AuditError::Parse { file: "literal rules", line: n + 1, message };
            if let Some(rest) = line.strip_prefix("@prefix") {
                parse_prefix_line(&mut prefixes, rest).map_err(err)?;
                continue;
            }
            let (head, pattern) = split_columns(line, 3);
            let [class, pred, kind] = head[..] else {
                return Err(err("expected: class predicate kind pattern".into()));
            };
            if pattern.is_empty() {
                return Err(err("missing pattern".into()));
            }
            let class = match class {
                "*" => None,
                c => Some(expand_curie(&prefixes, c).map_err(err)?),
            };
            let predicate = expand_curie(&prefixes, pred).map_err(err)?;
            let check = match kind {
                "regex" => Check::Regex(
                    crate::query::eval::compile_regex(pattern, "").map_err(|e| err(e.to_string()))?,
                    pattern.to_string(),
                ),
                "terms" if pattern == "relator-terms" => Check::Terms(relator_terms()),
                "terms" => return Err(err(format!("unknown term list {pattern:?}"))),
                other => return Err(err(format!("unknown rule kind {other:?}"))),
            };
            rules.push(LiteralRule { class, predicate, check });
        }
        Ok(LiteralRules { rules })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiteralViolation {
    pub subject: String,
    pub predicate: String,
    pub lexical: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LiteralReport {
    pub checked: usize,
    pub valid: usize,
    pub violations: Vec<LiteralViolation>,
}

impl LiteralReport {
    /// Micro-averaged over literal instances; 1 when nothing was checked.
    pub fn score(&self) -> f64 {
        if self.checked == 0 {
            1.0
        } else {
            self.valid as f64 / self.checked as f64
        }
    }
}

/// Each literal is checked once per rule that selects it.
pub fn syntactic_validity_literals(graph: &Graph, rules: &LiteralRules) -> LiteralReport {
    let mut report = LiteralReport::default();
    for rule in &rules.rules {
        let mut hits: Vec<(String, String)> = graph
            .matching(None, Some(&rule.predicate), None)
            .into_iter()
            .filter(|t| match &rule.class {
                None => true,
                Some(c) => graph.types_of(t.subject).iter().any(|ty| ty.as_iri() == Some(c)),
            })
            .filter_map(|t| match t.object {
                Term::Literal(l) => Some((t.subject.to_string(), l.lexical().to_string())),
                _ => None,
            })
            .collect();
        hits.sort();
        for (subject, lexical) in hits {
            report.checked += 1;
            if rule.accepts(&lexical) {
                report.valid += 1;
            } else {
                report.violations.push(LiteralViolation {
                    subject: subject.trim_start_matches('<').trim_end_matches('>').to_string(),
                    predicate: rule.predicate.as_str().to_string(),
                    lexical,
                });
            }
        }
    }
    report
}
