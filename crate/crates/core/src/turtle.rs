//! Turtle writer and parser. The parser also accepts N-Triples.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use thiserror::Error;

use crate::graph::Graph;
use crate::namespace::{rdf, xsd, PrefixMap};
use crate::term::{resolve_iri, write_escaped, BlankNode, Iri, Literal, Subject, Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("turtle syntax error at line {line}, column {column}: {message}")]
pub struct TurtleError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn is_pn_local(local: &str) -> bool {
    if local.is_empty() {
        return true;
    }
    let first = local.chars().next().unwrap_or(' ');
    let last = local.chars().last().unwrap_or(' ');
    (first.is_ascii_alphanumeric() || first == '_')
        && last != '.'
        && local.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn write_iri(out: &mut String, iri: &str, prefixes: &PrefixMap) {
    match prefixes.compact(iri) {
        Some((p, local)) if is_pn_local(local) => {
            let _ = write!(out, "{p}:{local}");
        }
        _ => {
            let _ = write!(out, "<{iri}>");
        }
    }
}

fn is_integer_lexical(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn is_decimal_lexical(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    match body.split_once('.') {
        Some((int, frac)) => {
            int.bytes().all(|b| b.is_ascii_digit()) && !frac.is_empty() && frac.bytes().all(|b| b.is_ascii_digit())
        }
        None => false,
    }
}

fn write_term(out: &mut String, term: &Term, prefixes: &PrefixMap) {
    match term {
        Term::Iri(i) => write_iri(out, i.as_str(), prefixes),
        Term::BlankNode(b) => {
            let _ = write!(out, "{b}");
        }
        Term::Literal(l) => write_literal(out, l, prefixes),
    }
}

fn write_literal(out: &mut String, l: &Literal, prefixes: &PrefixMap) {
    let lex = l.lexical();
    match l.datatype().map(Iri::as_str) {
        Some(xsd::INTEGER) if is_integer_lexical(lex) => return out.push_str(lex),
        Some(xsd::DECIMAL) if is_decimal_lexical(lex) => return out.push_str(lex),
        Some(xsd::BOOLEAN) if lex == "true" || lex == "false" => return out.push_str(lex),
        _ => {}
    }
    out.push('"');
    let _ = write_escaped(out, lex);
    out.push('"');
    if let Some(lang) = l.language() {
        let _ = write!(out, "@{lang}");
    } else if let Some(dt) = l.datatype() {
        out.push_str("^^");
        write_iri(out, dt.as_str(), prefixes);
    }
}

/// Serialize a graph: the full prefix block, then one subject block per
/// subject in term order, `rdf:type` first.
pub fn to_turtle(graph: &Graph) -> String {
    let prefixes = graph.prefixes();
    let mut out = String::new();
    for (p, ns) in prefixes.iter() {
        let _ = writeln!(out, "@prefix {p}: <{ns}> .");
    }
    let mut by_subject: BTreeMap<Subject, BTreeMap<(bool, Iri), Vec<Term>>> = BTreeMap::new();
    for t in graph.sorted_triples() {
        let is_not_type = t.predicate.as_str() != rdf::TYPE;
        by_subject.entry(t.subject).or_default().entry((is_not_type, t.predicate)).or_default().push(t.object);
    }
    for (subject, preds) in by_subject {
        out.push('\n');
        write_term(&mut out, &subject.into(), prefixes);
        let n_preds = preds.len();
        for (pi, ((is_not_type, pred), objects)) in preds.into_iter().enumerate() {
            out.push_str(if pi == 0 { " " } else { "    " });
            if is_not_type {
                write_iri(&mut out, pred.as_str(), prefixes);
            } else {
                out.push('a');
            }
            let n_obj = objects.len();
            for (oi, o) in objects.iter().enumerate() {
                out.push(' ');
                write_term(&mut out, o, prefixes);
                if oi + 1 < n_obj {
                    out.push_str(",\n       ");
                }
            }
            out.push_str(if pi + 1 < n_preds { " ;\n" } else { " .\n" });
        }
    }
    out
}

/// Parse Turtle (or N-Triples) text into a graph. Declared prefixes and the
/// base are recorded on the returned graph.
pub fn parse_turtle(text: &str) -> Result<Graph, TurtleError> {
    parse_turtle_with_base(text, None)
}

pub fn parse_turtle_with_base(text: &str, base: Option<Iri>) -> Result<Graph, TurtleError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
        prefixes: PrefixMap::new(),
        base,
        bnodes: BTreeMap::new(),
        next_bnode: 0,
        graph: Graph::bare(),
    };
    parser.document()?;
    let mut graph = parser.graph;
    *graph.prefixes_mut() = parser.prefixes;
    graph.set_base(parser.base);
    Ok(graph)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    prefixes: PrefixMap,
    base: Option<Iri>,
    bnodes: BTreeMap<String, BlankNode>,
    next_bnode: usize,
    graph: Graph,
}

impl Parser {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, TurtleError> {
        Err(TurtleError { line: self.line, column: self.column, message: message.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<(), TurtleError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.err(format!("expected '{want}', found '{c}'")),
            None => self.err(format!("expected '{want}', found end of input")),
        }
    }

    fn starts_with_keyword(&self, kw: &str, case_insensitive: bool) -> bool {
        let n = kw.chars().count();
        let got: String = self.chars.iter().skip(self.pos).take(n).collect();
        let matches = if case_insensitive { got.eq_ignore_ascii_case(kw) } else { got == kw };
        matches && self.chars.get(self.pos + n).is_none_or(|c| c.is_whitespace() || *c == '<' || *c == '#')
    }

    fn advance(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn document(&mut self) -> Result<(), TurtleError> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            if self.starts_with_keyword("@prefix", false) {
                self.advance(7);
                self.prefix_decl()?;
                self.expect('.')?;
            } else if self.starts_with_keyword("@base", false) {
                self.advance(5);
                self.base_decl()?;
                self.expect('.')?;
            } else if self.starts_with_keyword("PREFIX", true) {
                self.advance(6);
                self.prefix_decl()?;
            } else if self.starts_with_keyword("BASE", true) {
                self.advance(4);
                self.base_decl()?;
            } else {
                self.triples()?;
                self.expect('.')?;
            }
        }
    }

    fn prefix_decl(&mut self) -> Result<(), TurtleError> {
        self.skip_ws();
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                prefix.push(c);
                self.bump();
            } else {
                return self.err(format!("invalid character '{c}' in prefix name"));
            }
        }
        self.expect(':')?;
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.prefixes.insert(&prefix, iri.as_str());
        Ok(())
    }

    fn base_decl(&mut self) -> Result<(), TurtleError> {
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.base = Some(iri);
        Ok(())
    }

    fn triples(&mut self) -> Result<(), TurtleError> {
        self.skip_ws();
        if self.peek() == Some('[') {
            let subject = self.blank_node_property_list()?;
            self.skip_ws();
            if self.peek() != Some('.') {
                self.predicate_object_list(&subject)?;
            }
            return Ok(());
        }
        let subject = match self.peek() {
            Some('(') => self.collection()?,
            _ => self.iri_or_blank()?,
        };
        let subject = match Subject::try_from(subject) {
            Ok(s) => s,
            Err(_) => return self.err("literal in subject position"),
        };
        self.predicate_object_list(&subject)
    }

    fn predicate_object_list(&mut self, subject: &Subject) -> Result<(), TurtleError> {
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            loop {
                self.skip_ws();
                let object = self.object()?;
                self.graph.insert(Triple::new(subject.clone(), predicate.clone(), object));
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.') | Some(']') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, TurtleError> {
        if self.peek() == Some('a') && self.peek_at(1).is_none_or(|c| c.is_whitespace() || c == '<' || c == '"') {
            self.bump();
            return Ok(crate::term::iri(rdf::TYPE));
        }
        match self.iri_or_blank()? {
            Term::Iri(i) => Ok(i),
            _ => self.err("predicate must be an IRI"),
        }
    }

    fn object(&mut self) -> Result<Term, TurtleError> {
        match self.peek() {
            Some('[') => Ok(self.blank_node_property_list()?.into()),
            Some('(') => self.collection(),
            Some('"') | Some('\'') => self.rdf_literal(),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => self.numeric(),
            _ if self.starts_with_keyword_boundary("true") => {
                self.advance(4);
                Ok(Literal::typed("true", crate::term::iri(xsd::BOOLEAN)).into())
            }
            _ if self.starts_with_keyword_boundary("false") => {
                self.advance(5);
                Ok(Literal::typed("false", crate::term::iri(xsd::BOOLEAN)).into())
            }
            _ => self.iri_or_blank(),
        }
    }

    fn starts_with_keyword_boundary(&self, kw: &str) -> bool {
        let n = kw.len();
        let got: String = self.chars.iter().skip(self.pos).take(n).collect();
        got == kw && self.chars.get(self.pos + n).is_none_or(|c| !(c.is_alphanumeric() || matches!(c, ':' | '_' | '-')))
    }

    fn fresh_bnode(&mut self) -> BlankNode {
        let label = format!("b{}", self.next_bnode);
        self.next_bnode += 1;
        BlankNode::new(label).expect("generated label")
    }

    fn blank_node_property_list(&mut self) -> Result<Subject, TurtleError> {
        self.expect('[')?;
        let node = Subject::BlankNode(self.fresh_bnode());
        self.skip_ws();
        if self.peek() != Some(']') {
            self.predicate_object_list(&node)?;
        }
        self.expect(']')?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term, TurtleError> {
        self.expect('(')?;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.bump();
                    break;
                }
                None => return self.err("unterminated collection"),
                _ => items.push(self.object()?),
            }
        }
        let mut head = Term::Iri(crate::term::iri(rdf::NIL));
        for item in items.into_iter().rev() {
            let node = self.fresh_bnode();
            self.graph.insert(Triple::new(node.clone(), crate::term::iri(rdf::FIRST), item));
            self.graph.insert(Triple::new(node.clone(), crate::term::iri(rdf::REST), head));
            head = Term::BlankNode(node);
        }
        Ok(head)
    }

    fn iri_or_blank(&mut self) -> Result<Term, TurtleError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.peek_at(1) == Some(':') => {
                self.advance(2);
                let mut label = String::new();
                while let Some(c) = self.peek() {
                    if c.is_alphanumeric() || matches!(c, '_' | '-') || (c == '.' && self.peek_at(1).is_some_and(|n| n.is_alphanumeric() || matches!(n, '_' | '-' | '.'))) {
                        label.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if label.is_empty() {
                    return self.err("empty blank node label");
                }
                let next = self.bnodes.len();
                let node = self
                    .bnodes
                    .entry(label)
                    .or_insert_with(|| BlankNode::new(format!("n{next}")).expect("generated label"))
                    .clone();
                Ok(Term::BlankNode(node))
            }
            Some(_) => Ok(Term::Iri(self.prefixed_name()?)),
            None => self.err("unexpected end of input"),
        }
    }

    fn iri_ref(&mut self) -> Result<Iri, TurtleError> {
        self.expect('<')?;
        let mut raw = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => {
                    let c = self.unicode_escape()?;
                    raw.push(c);
                }
                Some(c) if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return self.err(format!("illegal character {c:?} in IRI"));
                }
                Some(c) => raw.push(c),
                None => return self.err("unterminated IRI"),
            }
        }
        self.resolve(&raw)
    }

    fn resolve(&self, raw: &str) -> Result<Iri, TurtleError> {
        if crate::term::scheme_len(raw).is_some() {
            return Iri::new(raw).or_else(|e| self.err(e.to_string()));
        }
        match &self.base {
            Some(base) => resolve_iri(base, raw).or_else(|e| self.err(e.to_string())),
            None => self.err(format!("relative IRI <{raw}> without a base")),
        }
    }

    fn unicode_escape(&mut self) -> Result<char, TurtleError> {
        let len = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return self.err("invalid escape in IRI"),
        };
        self.hex_char(len)
    }

    fn hex_char(&mut self, len: usize) -> Result<char, TurtleError> {
        let mut v = 0u32;
        for _ in 0..len {
            match self.bump().and_then(|c| c.to_digit(16)) {
                Some(d) => v = v * 16 + d,
                None => return self.err("invalid hex digit in escape"),
            }
        }
        match char::from_u32(v) {
            Some(c) => Ok(c),
            None => self.err("escape is not a valid code point"),
        }
    }

    fn prefixed_name(&mut self) -> Result<Iri, TurtleError> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                prefix.push(c);
                self.bump();
            } else {
                return self.err(format!("unexpected character '{c}'"));
            }
        }
        if self.peek() != Some(':') {
            return self.err(format!("expected prefixed name, found '{prefix}'"));
        }
        self.bump();
        let mut local = String::new();
        while let Some(c) = self.peek() {
            let dot_inside = c == '.'
                && self.peek_at(1).is_some_and(|n| n.is_alphanumeric() || matches!(n, '_' | '-' | ':' | '%' | '.'));
            if c.is_alphanumeric() || matches!(c, '_' | '-' | ':') || dot_inside {
                local.push(c);
                self.bump();
            } else if c == '%' {
                local.push(c);
                self.bump();
                for _ in 0..2 {
                    match self.bump() {
                        Some(h) if h.is_ascii_hexdigit() => local.push(h),
                        _ => return self.err("invalid percent escape in local name"),
                    }
                }
            } else if c == '\\' {
                self.bump();
                match self.bump() {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => local.push(e),
                    _ => return self.err("invalid escape in local name"),
                }
            } else {
                break;
            }
        }
        let Some(ns) = self.prefixes.get(&prefix) else {
            return self.err(format!("undeclared prefix '{prefix}:'"));
        };
        let full = format!("{ns}{local}");
        Iri::new(full).or_else(|e| self.err(e.to_string()))
    }

    fn rdf_literal(&mut self) -> Result<Term, TurtleError> {
        let lexical = self.string()?;
        match self.peek() {
            Some('@') => {
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        tag.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Literal::lang(lexical, &tag).map(Term::Literal).or_else(|e| self.err(e.to_string()))
            }
            Some('^') if self.peek_at(1) == Some('^') => {
                self.advance(2);
                let dt = match self.iri_or_blank()? {
                    Term::Iri(i) => i,
                    _ => return self.err("datatype must be an IRI"),
                };
                Ok(Literal::typed(lexical, dt).into())
            }
            _ => Ok(Literal::string(lexical).into()),
        }
    }

    fn string(&mut self) -> Result<String, TurtleError> {
        let quote = self.bump().expect("caller checked quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.advance(2);
        }
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return self.err("unterminated string"),
                Some(c) if c == quote => {
                    if !long {
                        return Ok(out);
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        self.advance(2);
                        // up to two extra quotes may precede the closing triple
                        while self.peek() == Some(quote) {
                            out.push(quote);
                            self.bump();
                        }
                        return Ok(out);
                    }
                    out.push(c);
                }
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_char(4)?,
                        Some('U') => self.hex_char(8)?,
                        _ => return self.err("invalid string escape"),
                    };
                    out.push(c);
                }
                Some('\n') | Some('\r') if !long => return self.err("newline in short string"),
                Some(c) => out.push(c),
            }
        }
    }

    fn numeric(&mut self) -> Result<Term, TurtleError> {
        let mut lex = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            lex.push(c);
            self.bump();
        }
        let mut digits = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            lex.push(c);
            self.bump();
            digits += 1;
        }
        let mut datatype = xsd::INTEGER;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            lex.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                lex.push(c);
                self.bump();
                digits += 1;
            }
            datatype = xsd::DECIMAL;
        }
        if digits == 0 {
            return self.err("malformed number");
        }
        if let Some(e @ ('e' | 'E')) = self.peek() {
            lex.push(e);
            self.bump();
            if let Some(c @ ('+' | '-')) = self.peek() {
                lex.push(c);
                self.bump();
            }
            let mut exp_digits = 0;
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                lex.push(c);
                self.bump();
                exp_digits += 1;
            }
            if exp_digits == 0 {
                return self.err("malformed exponent");
            }
            datatype = xsd::DOUBLE;
        }
        Ok(Literal::typed(lex, crate::term::iri(datatype)).into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_is_prefix_block_only() {
        let g = Graph::new();
        let text = to_turtle(&g);
        assert!(text.lines().all(|l| l.starts_with("@prefix")));
        assert_eq!(parse_turtle(&text).unwrap().len(), 0);
    }

    #[test]
    fn shorthand_and_escapes_round_trip() {
        let text = r#"
            @prefix ex: <http://e/> .
            ex:s ex:p 42, -1.5, true, "multi\nline \"q\"", 'single'@en-GB, """long "quoted" text""" ;
                 ex:q [ ex:r ex:o ] ;
                 ex:list ( 1 2 ) .
        "#;
        let g = parse_turtle(text).unwrap();
        // 6 objects of ex:p, 2 for the property list, 1 + 2x2 for the collection
        assert_eq!(g.len(), 6 + 2 + 5);
        let back = parse_turtle(&to_turtle(&g)).unwrap();
        assert!(crate::canon::isomorphic(&g, &back));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_turtle("@prefix ex: <http://e/> .\nex:s ex:p .").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.column >= 10);
        let err = parse_turtle("<rel> <http://e/p> <http://e/o> .").unwrap_err();
        assert!(err.message.contains("relative"));
    }

    #[test]
    fn base_resolution() {
        let g = parse_turtle("@base <http://example.org/> .\n<film/0001> <p> <#x> .").unwrap();
        let t = &g.sorted_triples()[0];
        assert_eq!(t.subject.as_iri().unwrap().as_str(), "http://example.org/film/0001");
        assert_eq!(t.predicate.as_str(), "http://example.org/p");
    }

    #[test]
    fn trailing_semicolon_and_dotted_local_names() {
        let g = parse_turtle("@prefix : <http://e/> .\n:a :b :c.d ;\n :n 7.\n").unwrap();
        let objs: Vec<String> = g.sorted_triples().iter().map(|t| t.object.to_string()).collect();
        assert!(objs.contains(&"<http://e/c.d>".to_string()));
        assert!(objs.iter().any(|o| o.starts_with("\"7\"")));
    }

    #[test]
    fn ntriples_is_accepted() {
        let nt = "<http://e/s> <http://e/p> \"x\\u00e9\"@fr .\n_:a <http://e/p> <http://e/o> .\n";
        let g = parse_turtle(nt).unwrap();
        assert_eq!(g.len(), 2);
    }
}
