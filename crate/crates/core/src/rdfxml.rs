//! RDF/XML writer. Parsing needs an XML reader and lives in the std crate.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use thiserror::Error;

use crate::graph::Graph;
use crate::namespace::rdf;
use crate::term::{Subject, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RdfXmlError {
    #[error("predicate <{0}> has no XML-name local part and cannot be written as RDF/XML")]
    UnsplittablePredicate(String),
    #[error("character U+{0:04X} cannot be represented in XML 1.0")]
    InvalidXmlChar(u32),
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || (!c.is_ascii() && c.is_alphabetic())
}

fn is_name_char(c: char) -> bool {
    is_name_start(c) || c.is_ascii_digit() || matches!(c, '-' | '.') || (!c.is_ascii() && c.is_alphanumeric())
}

pub(crate) fn is_ncname(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_name_start) && chars.all(is_name_char)
}

/// Split a predicate into (namespace, local) with an NCName local part,
/// taking the longest valid local suffix.
fn split_predicate(iri: &str) -> Option<(&str, &str)> {
    let mut best = None;
    for (i, c) in iri.char_indices().rev() {
        if !is_name_char(c) {
            break;
        }
        if is_name_start(c) {
            best = Some(i);
        }
    }
    let i = best?;
    if i == 0 {
        return None;
    }
    Some((&iri[..i], &iri[i..]))
}

fn escape(out: &mut String, s: &str, attribute: bool) -> Result<(), RdfXmlError> {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' if attribute => out.push_str("&quot;"),
            '\r' => out.push_str("&#13;"),
            '\t' | '\n' if attribute => {
                let _ = write!(out, "&#{};", c as u32);
            }
            c if (c as u32) < 0x20 && !matches!(c, '\t' | '\n') => {
                return Err(RdfXmlError::InvalidXmlChar(c as u32));
            }
            '\u{FFFE}' | '\u{FFFF}' => return Err(RdfXmlError::InvalidXmlChar(c as u32)),
            c => out.push(c),
        }
    }
    Ok(())
}

/// Serialize as RDF/XML with one `rdf:Description` per subject.
pub fn to_rdfxml(graph: &Graph) -> Result<String, RdfXmlError> {
    let prefixes = graph.prefixes();
    let mut ns_to_prefix: BTreeMap<String, String> = BTreeMap::new();
    ns_to_prefix.insert(rdf::NS.to_string(), "rdf".to_string());
    let mut by_subject: BTreeMap<Subject, Vec<(String, Term)>> = BTreeMap::new();
    let mut generated = 0usize;
    for t in graph.sorted_triples() {
        let pred = t.predicate.as_str();
        let (ns, local) =
            split_predicate(pred).ok_or_else(|| RdfXmlError::UnsplittablePredicate(pred.to_string()))?;
        if !ns_to_prefix.contains_key(ns) {
            let known = prefixes.iter().find(|(p, n)| *n == ns && is_ncname(p) && !p.starts_with("xml"));
            let prefix = match known {
                Some((p, _)) if !ns_to_prefix.values().any(|v| v == p) => p.to_string(),
                _ => loop {
                    generated += 1;
                    let candidate = format!("ns{generated}");
                    if !ns_to_prefix.values().any(|v| *v == candidate) {
                        break candidate;
                    }
                },
            };
            ns_to_prefix.insert(ns.to_string(), prefix);
        }
        let qname = format!("{}:{}", ns_to_prefix[ns], local);
        by_subject.entry(t.subject).or_default().push((qname, t.object));
    }

    let mut out = String::from("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<rdf:RDF");
    let mut decls: Vec<(&String, &String)> = ns_to_prefix.iter().map(|(ns, p)| (p, ns)).collect();
    decls.sort();
    for (p, ns) in decls {
        let _ = write!(out, "\n    xmlns:{p}=\"");
        escape(&mut out, ns, true)?;
        out.push('"');
    }
    if by_subject.is_empty() {
        out.push_str("/>\n");
        return Ok(out);
    }
    out.push_str(">\n");
    for (subject, props) in by_subject {
        match &subject {
            Subject::Iri(i) => {
                out.push_str("  <rdf:Description rdf:about=\"");
                escape(&mut out, i.as_str(), true)?;
                out.push_str("\">\n");
            }
            Subject::BlankNode(b) => {
                let _ = writeln!(out, "  <rdf:Description rdf:nodeID=\"{}\">", b.label());
            }
        }
        for (qname, object) in props {
            let _ = write!(out, "    <{qname}");
            match object {
                Term::Iri(i) => {
                    out.push_str(" rdf:resource=\"");
                    escape(&mut out, i.as_str(), true)?;
                    out.push_str("\"/>\n");
                }
                Term::BlankNode(b) => {
                    let _ = writeln!(out, " rdf:nodeID=\"{}\"/>", b.label());
                }
                Term::Literal(l) => {
                    if let Some(lang) = l.language() {
                        let _ = write!(out, " xml:lang=\"{lang}\"");
                    } else if let Some(dt) = l.datatype() {
                        out.push_str(" rdf:datatype=\"");
                        escape(&mut out, dt.as_str(), true)?;
                        out.push('"');
                    }
                    out.push('>');
                    escape(&mut out, l.lexical(), false)?;
                    let _ = writeln!(out, "</{qname}>");
                }
            }
        }
        out.push_str("  </rdf:Description>\n");
    }
    out.push_str("</rdf:RDF>\n");
    Ok(out)
}
