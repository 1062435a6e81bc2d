//! RDF terms: IRIs, blank nodes, literals and triples.

use alloc::borrow::ToOwned;
use alloc::string::{String, ToString};
use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::namespace::xsd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("relative or scheme-less IRI: {0}")]
    RelativeIri(String),
    #[error("IRI contains forbidden character {ch:?}: {iri}")]
    IriCharacter { iri: String, ch: char },
    #[error("invalid blank node label: {0}")]
    BlankNodeLabel(String),
    #[error("invalid language tag: {0}")]
    LanguageTag(String),
    #[error("literal cannot be a subject")]
    LiteralSubject,
}

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        if scheme_len(&value).is_none() {
            return Err(TermError::RelativeIri(value));
        }
        if let Some(ch) = value.chars().find(|c| is_forbidden_iri_char(*c)) {
            return Err(TermError::IriCharacter { iri: value, ch });
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Namespace part: everything up to and including the last `#` or `/`.
    pub fn namespace(&self) -> &str {
        let split = self.0.rfind(['#', '/']).map(|i| i + 1).unwrap_or(self.0.len());
        &self.0[..split]
    }

    pub fn local_name(&self) -> &str {
        &self.0[self.namespace().len()..]
    }

    pub fn starts_with(&self, prefix: &str) -> bool {
        self.0.starts_with(prefix)
    }
}

impl TryFrom<String> for Iri {
    type Error = TermError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::new(value)
    }
}

impl From<Iri> for String {
    fn from(iri: Iri) -> Self {
        iri.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

/// Length of a leading `scheme:` when present.
pub(crate) fn scheme_len(s: &str) -> Option<usize> {
    let mut chars = s.char_indices();
    match chars.next() {
        Some((_, c)) if c.is_ascii_alphabetic() => {}
        _ => return None,
    }
    for (i, c) in chars {
        if c == ':' {
            return Some(i);
        }
        if !(c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
            return None;
        }
    }
    None
}

pub(crate) fn is_forbidden_iri_char(c: char) -> bool {
    c.is_control() || c.is_whitespace() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        let valid = !label.is_empty()
            && label
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
            && label.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
            && !label.ends_with('.');
        if valid {
            Ok(BlankNode(label))
        } else {
            Err(TermError::BlankNodeLabel(label))
        }
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// A literal. Plain strings carry neither datatype nor language; an explicit
/// `xsd:string` datatype is normalized away so equality stays syntactic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    lexical: String,
    datatype: Option<Iri>,
    language: Option<String>,
}

impl Literal {
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal { lexical: lexical.into(), datatype: None, language: None }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        let datatype = if datatype.as_str() == xsd::STRING { None } else { Some(datatype) };
        Literal { lexical: lexical.into(), datatype, language: None }
    }

    pub fn lang(lexical: impl Into<String>, tag: &str) -> Result<Self, TermError> {
        if !is_valid_lang_tag(tag) {
            return Err(TermError::LanguageTag(tag.to_owned()));
        }
        Ok(Literal { lexical: lexical.into(), datatype: None, language: Some(tag.to_ascii_lowercase()) })
    }

    pub fn integer(value: i64) -> Self {
        Literal::typed(value.to_string(), Iri(xsd::INTEGER.to_owned()))
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }

    /// Datatype IRI string, with `xsd:string` / `rdf:langString` filled in.
    pub fn datatype_str(&self) -> &str {
        match (&self.datatype, &self.language) {
            (Some(dt), _) => dt.as_str(),
            (None, Some(_)) => crate::namespace::rdf::LANG_STRING,
            (None, None) => xsd::STRING,
        }
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

pub(crate) fn is_valid_lang_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first = parts.next().unwrap_or("");
    if first.is_empty() || first.len() > 8 || !first.chars().all(|c| c.is_ascii_alphabetic()) {
        return false;
    }
    parts.all(|p| !p.is_empty() && p.len() <= 8 && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        write_escaped(f, &self.lexical)?;
        f.write_str("\"")?;
        if let Some(lang) = &self.language {
            write!(f, "@{lang}")
        } else if let Some(dt) = &self.datatype {
            write!(f, "^^{dt}")
        } else {
            Ok(())
        }
    }
}

/// N-Triples string escaping.
pub(crate) fn write_escaped(out: &mut impl fmt::Write, s: &str) -> fmt::Result {
    for c in s.chars() {
        match c {
            '"' => out.write_str("\\\"")?,
            '\\' => out.write_str("\\\\")?,
            '\n' => out.write_str("\\n")?,
            '\r' => out.write_str("\\r")?,
            '\t' => out.write_str("\\t")?,
            c if (c as u32) < 0x20 || c as u32 == 0x7f => write!(out, "\\u{:04X}", c as u32)?,
            c => out.write_char(c)?,
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    Iri(Iri),
    BlankNode(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => i.fmt(f),
            Term::BlankNode(b) => b.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Self {
        Term::Iri(i)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::BlankNode(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

/// Subject position: IRI or blank node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Subject {
    Iri(Iri),
    BlankNode(BlankNode),
}

impl Subject {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Subject::Iri(i) => Some(i),
            Subject::BlankNode(_) => None,
        }
    }
}

impl From<Iri> for Subject {
    fn from(i: Iri) -> Self {
        Subject::Iri(i)
    }
}

impl From<BlankNode> for Subject {
    fn from(b: BlankNode) -> Self {
        Subject::BlankNode(b)
    }
}

impl From<Subject> for Term {
    fn from(s: Subject) -> Self {
        match s {
            Subject::Iri(i) => Term::Iri(i),
            Subject::BlankNode(b) => Term::BlankNode(b),
        }
    }
}

impl TryFrom<Term> for Subject {
    type Error = TermError;
    fn try_from(t: Term) -> Result<Self, Self::Error> {
        match t {
            Term::Iri(i) => Ok(Subject::Iri(i)),
            Term::BlankNode(b) => Ok(Subject::BlankNode(b)),
            Term::Literal(_) => Err(TermError::LiteralSubject),
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Iri(i) => i.fmt(f),
            Subject::BlankNode(b) => b.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub subject: Subject,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Subject>, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple { subject: subject.into(), predicate, object: object.into() }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// Resolve an IRI reference against a base (RFC 3986 section 5.2).
pub fn resolve_iri(base: &Iri, reference: &str) -> Result<Iri, TermError> {
    if scheme_len(reference).is_some() {
        return Iri::new(reference);
    }
    let (b_scheme, b_rest) = split_scheme(base.as_str());
    let (b_auth, b_path, b_query) = split_hier(b_rest);
    let (r_frag_less, fragment) = match reference.split_once('#') {
        Some((a, f)) => (a, Some(f)),
        None => (reference, None),
    };
    let (r_path_full, r_query) = match r_frag_less.split_once('?') {
        Some((a, q)) => (a, Some(q)),
        None => (r_frag_less, None),
    };
    let mut out = String::from(b_scheme);
    out.push(':');
    if let Some(rest) = r_path_full.strip_prefix("//") {
        out.push_str("//");
        let (auth, path) = match rest.find('/') {
            Some(i) => (&rest[..i], &rest[i..]),
            None => (rest, ""),
        };
        out.push_str(auth);
        out.push_str(&remove_dot_segments(path));
        push_query_fragment(&mut out, r_query, fragment);
        return Iri::new(out);
    }
    if let Some(a) = b_auth {
        out.push_str("//");
        out.push_str(a);
    }
    if r_path_full.is_empty() {
        out.push_str(b_path);
        push_query_fragment(&mut out, r_query.or(b_query), fragment);
    } else {
        let merged = if r_path_full.starts_with('/') {
            String::from(r_path_full)
        } else if b_auth.is_some() && b_path.is_empty() {
            alloc::format!("/{r_path_full}")
        } else {
            let dir = &b_path[..b_path.rfind('/').map(|i| i + 1).unwrap_or(0)];
            alloc::format!("{dir}{r_path_full}")
        };
        out.push_str(&remove_dot_segments(&merged));
        push_query_fragment(&mut out, r_query, fragment);
    }
    Iri::new(out)
}

fn push_query_fragment(out: &mut String, query: Option<&str>, fragment: Option<&str>) {
    if let Some(q) = query {
        out.push('?');
        out.push_str(q);
    }
    if let Some(f) = fragment {
        out.push('#');
        out.push_str(f);
    }
}

fn split_scheme(s: &str) -> (&str, &str) {
    let n = scheme_len(s).unwrap_or(0);
    (&s[..n], &s[n + 1..])
}

/// (authority, path, query) of a hierarchical part, fragment dropped.
fn split_hier(rest: &str) -> (Option<&str>, &str, Option<&str>) {
    let rest = rest.split('#').next().unwrap_or("");
    let (rest, query) = match rest.split_once('?') {
        Some((a, q)) => (a, Some(q)),
        None => (rest, None),
    };
    if let Some(r) = rest.strip_prefix("//") {
        match r.find('/') {
            Some(i) => (Some(&r[..i]), &r[i..], query),
            None => (Some(r), "", query),
        }
    } else {
        (None, rest, query)
    }
}

fn remove_dot_segments(path: &str) -> String {
    let mut output: alloc::vec::Vec<&str> = alloc::vec::Vec::new();
    let absolute = path.starts_with('/');
    let segments: alloc::vec::Vec<&str> = path.split('/').collect();
    let last = segments.len().saturating_sub(1);
    let mut trailing_slash = false;
    for (idx, seg) in segments.iter().enumerate() {
        if idx == 0 && absolute {
            continue;
        }
        match *seg {
            "." => trailing_slash = idx == last,
            ".." => {
                output.pop();
                trailing_slash = idx == last;
            }
            s => {
                output.push(s);
                trailing_slash = false;
            }
        }
    }
    let mut out = String::new();
    if absolute {
        out.push('/');
    }
    out.push_str(&output.join("/"));
    if trailing_slash && !out.ends_with('/') {
        out.push('/');
    }
    out
}

/// Shorthand for IRIs known to be valid (vocabulary constants).
pub(crate) fn iri(s: &str) -> Iri {
    Iri(s.to_owned())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_iri_is_rejected() {
        assert_eq!(Iri::new("film/0001"), Err(TermError::RelativeIri("film/0001".into())));
        assert!(Iri::new("http://example.org/film/0001").is_ok());
        assert!(matches!(Iri::new("http://x/a b"), Err(TermError::IriCharacter { ch: ' ', .. })));
    }

    #[test]
    fn parenthesised_record_ids_are_valid_iris() {
        assert!(Iri::new("http://example.org/(filmRef)0002#Instance").is_ok());
    }

    #[test]
    fn xsd_string_is_normalized() {
        let a = Literal::typed("x", Iri::new(xsd::STRING).unwrap());
        assert_eq!(a, Literal::string("x"));
    }

    #[test]
    fn language_tags_are_lowercased_and_distinct_from_plain() {
        let en = Literal::lang("hi", "EN").unwrap();
        assert_eq!(en.language(), Some("en"));
        assert_ne!(Term::from(en), Term::from(Literal::string("hi")));
        assert!(Literal::lang("x", "e n").is_err());
    }

    #[test]
    fn namespace_split() {
        let i = Iri::new("http://id.loc.gov/ontologies/bibframe/Work").unwrap();
        assert_eq!(i.namespace(), "http://id.loc.gov/ontologies/bibframe/");
        assert_eq!(i.local_name(), "Work");
        let h = Iri::new("http://www.w3.org/2000/01/rdf-schema#label").unwrap();
        assert_eq!(h.local_name(), "label");
    }

    #[test]
    fn reference_resolution() {
        let base = Iri::new("http://a/b/c/d;p?q").unwrap();
        let cases = [
            ("g", "http://a/b/c/g"),
            ("./g", "http://a/b/c/g"),
            ("g/", "http://a/b/c/g/"),
            ("/g", "http://a/g"),
            ("//g", "http://g"),
            ("?y", "http://a/b/c/d;p?y"),
            ("#s", "http://a/b/c/d;p?q#s"),
            ("..", "http://a/b/"),
            ("../g", "http://a/b/g"),
            ("../../g", "http://a/g"),
            ("", "http://a/b/c/d;p?q"),
            ("film/0001", "http://a/b/c/film/0001"),
        ];
        for (r, want) in cases {
            assert_eq!(resolve_iri(&base, r).unwrap().as_str(), want, "{r}");
        }
    }

    #[test]
    fn ntriples_escaping() {
        let l = Literal::string("a \"b\"\n\\");
        assert_eq!(l.to_string(), "\"a \\\"b\\\"\\n\\\\\"");
    }
}
