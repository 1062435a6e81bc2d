use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Comparison, Count, Filter, Having, OrderKey, PatternTerm, Projection, Query, QueryError, TriplePattern};
use crate::namespace::{rdf, xsd, PrefixMap};
use crate::term::{iri, resolve_iri, Iri, Literal, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Var(String),
    IriRef(String),
    PName(String),
    Str(String),
    LangTag(String),
    Number(String),
    Word(String),
    DoubleCaret,
    Punct(&'static str),
}

struct Token {
    tok: Tok,
    offset: usize,
}

fn syntax<T>(offset: usize, message: impl Into<String>) -> Result<T, QueryError> {
    Err(QueryError::Syntax { offset, message: message.into() })
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<Token>, QueryError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let at = |i: usize| bytes.get(i).map(|(_, c)| *c);
    let off = |i: usize| bytes.get(i).map_or(text.len(), |(o, _)| *o);
    while i < bytes.len() {
        let c = bytes[i].1;
        let start = off(i);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            while i < bytes.len() && bytes[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if (c == '?' || c == '$') && at(i + 1).is_some_and(is_name_char) {
            let mut j = i + 1;
            while at(j).is_some_and(is_name_char) {
                j += 1;
            }
            let name = text[off(i + 1)..off(j)].to_string();
            i = j;
            Tok::Var(name)
        } else if c == '<' && looks_like_iri(&bytes[i + 1..]) {
            let mut j = i + 1;
            while at(j) != Some('>') {
                j += 1;
            }
            let value = text[off(i + 1)..off(j)].to_string();
            i = j + 1;
            Tok::IriRef(value)
        } else if c == '"' || c == '\'' {
            let long = at(i + 1) == Some(c) && at(i + 2) == Some(c);
            let mut j = if long { i + 3 } else { i + 1 };
            let mut value = String::new();
            loop {
                match at(j) {
                    None => return syntax(start, "unterminated string"),
                    Some(q) if q == c && (!long || (at(j + 1) == Some(c) && at(j + 2) == Some(c))) => {
                        j += if long { 3 } else { 1 };
                        break;
                    }
                    Some('\n') | Some('\r') if !long => return syntax(off(j), "newline in string"),
                    Some('\\') => {
                        let e = at(j + 1).ok_or(QueryError::Syntax { offset: off(j), message: "dangling escape".into() })?;
                        value.push(match e {
                            'n' => '\n',
                            't' => '\t',
                            'r' => '\r',
                            'b' => '\u{8}',
                            'f' => '\u{c}',
                            '"' | '\'' | '\\' => e,
                            _ => return syntax(off(j), format!("unknown escape \\{e}")),
                        });
                        j += 2;
                    }
                    Some(ch) => {
                        value.push(ch);
                        j += 1;
                    }
                }
            }
            i = j;
            Tok::Str(value)
        } else if c == '@' {
            let mut j = i + 1;
            while at(j).is_some_and(|c| c.is_ascii_alphanumeric() || c == '-') {
                j += 1;
            }
            let tag = text[off(i + 1)..off(j)].to_string();
            i = j;
            Tok::LangTag(tag)
        } else if c.is_ascii_digit() || ((c == '-' || c == '+') && at(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut j = i + 1;
            while at(j).is_some_and(|d| d.is_ascii_digit() || d == '.') {
                if at(j) == Some('.') && !at(j + 1).is_some_and(|d| d.is_ascii_digit()) {
                    break;
                }
                j += 1;
            }
            let n = text[start..off(j)].to_string();
            i = j;
            Tok::Number(n)
        } else if is_name_char(c) || c == ':' {
            let mut j = i;
            while at(j).is_some_and(|c| is_name_char(c) || matches!(c, ':' | '-' | '.' | '%')) {
                j += 1;
            }
            while j > i && at(j - 1) == Some('.') {
                j -= 1;
            }
            let word = text[start..off(j)].to_string();
            i = j;
            if word.contains(':') {
                Tok::PName(word)
            } else {
                Tok::Word(word)
            }
        } else {
            let two: String = bytes[i..].iter().take(2).map(|(_, c)| *c).collect();
            let p: &'static str = match two.as_str() {
                "^^" => {
                    i += 2;
                    out.push(Token { tok: Tok::DoubleCaret, offset: start });
                    continue;
                }
                "!=" => "!=",
                ">=" => ">=",
                "<=" => "<=",
                "&&" => "&&",
                "||" => "||",
                _ => match c {
                    '{' => "{",
                    '}' => "}",
                    '(' => "(",
                    ')' => ")",
                    '[' => "[",
                    ']' => "]",
                    '.' => ".",
                    ';' => ";",
                    ',' => ",",
                    '*' => "*",
                    '=' => "=",
                    '<' => "<",
                    '>' => ">",
                    '!' => "!",
                    '/' => "/",
                    '|' => "|",
                    '^' => "^",
                    '+' => "+",
                    '?' => "?",
                    '-' => "-",
                    _ => return syntax(start, format!("unexpected character '{c}'")),
                },
            };
            i += p.chars().count();
            Tok::Punct(p)
        };
        out.push(Token { tok, offset: start });
    }
    Ok(out)
}

fn looks_like_iri(rest: &[(usize, char)]) -> bool {
    for (_, c) in rest {
        match c {
            '>' => return true,
            c if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}') => return false,
            _ => {}
        }
    }
    false
}

const UNSUPPORTED_KEYWORDS: &[&str] =
    &["OPTIONAL", "UNION", "MINUS", "BIND", "VALUES", "SERVICE", "GRAPH", "EXISTS", "NOT", "OFFSET", "FROM"];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
    prefixes: PrefixMap,
    base: Option<Iri>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.offset)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, QueryError> {
        syntax(self.offset(), message)
    }

    fn is_word(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(kw))
    }

    fn eat_word(&mut self, kw: &str) -> bool {
        if self.is_word(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, kw: &str) -> Result<(), QueryError> {
        if self.eat_word(kw) {
            Ok(())
        } else {
            self.fail(format!("expected {kw}"))
        }
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), QueryError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.fail(format!("expected '{p}'"))
        }
    }

    fn check_unsupported(&self) -> Result<(), QueryError> {
        if let Some(Tok::Word(w)) = self.peek() {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED_KEYWORDS.contains(&upper.as_str()) {
                return Err(QueryError::Unsupported(upper));
            }
        }
        Ok(())
    }

    fn var(&mut self) -> Result<String, QueryError> {
        match self.next() {
            Some(Tok::Var(v)) => Ok(v),
            _ => {
                self.pos -= 1;
                self.fail("expected a variable")
            }
        }
    }

    fn iri_from_ref(&self, value: &str) -> Result<Iri, QueryError> {
        let r = match &self.base {
            Some(b) => resolve_iri(b, value),
            None => Iri::new(value),
        };
        r.map_err(|e| QueryError::Syntax { offset: self.offset(), message: e.to_string() })
    }

    fn iri_from_pname(&self, pname: &str) -> Result<Iri, QueryError> {
        match self.prefixes.expand(pname) {
            Some(Ok(i)) => Ok(i),
            Some(Err(e)) => self.fail(e.to_string()),
            None => self.fail(format!("undeclared prefix in {pname}")),
        }
    }

    fn prologue(&mut self) -> Result<(), QueryError> {
        loop {
            if self.eat_word("PREFIX") {
                let prefix = match self.next() {
                    Some(Tok::PName(p)) if p.ends_with(':') && p.matches(':').count() == 1 => p,
                    _ => {
                        self.pos -= 1;
                        return self.fail("expected a prefix name ending in ':'");
                    }
                };
                let ns = match self.next() {
                    Some(Tok::IriRef(v)) => self.iri_from_ref(&v)?,
                    _ => {
                        self.pos -= 1;
                        return self.fail("expected a namespace IRI");
                    }
                };
                self.prefixes.insert(&prefix[..prefix.len() - 1], ns.as_str());
            } else if self.eat_word("BASE") {
                match self.next() {
                    Some(Tok::IriRef(v)) => self.base = Some(self.iri_from_ref(&v)?),
                    _ => {
                        self.pos -= 1;
                        return self.fail("expected a base IRI");
                    }
                }
            } else {
                return Ok(());
            }
        }
    }

    fn count(&mut self) -> Result<(bool, Option<String>), QueryError> {
        self.expect_word("COUNT")?;
        self.expect_punct("(")?;
        let distinct = self.eat_word("DISTINCT");
        let var = if self.eat_punct("*") { None } else { Some(self.var()?) };
        self.expect_punct(")")?;
        Ok((distinct, var))
    }

    fn projection(&mut self, q: &mut Query) -> Result<bool, QueryError> {
        if self.eat_punct("*") {
            return Ok(true);
        }
        loop {
            match self.peek() {
                Some(Tok::Var(_)) => {
                    let v = self.var()?;
                    q.projection.push(Projection::Var(v));
                }
                Some(Tok::Punct("(")) => {
                    self.pos += 1;
                    if !self.is_word("COUNT") {
                        return match self.peek() {
                            Some(Tok::Word(w)) => Err(QueryError::Unsupported(format!("aggregate {}", w.to_ascii_uppercase()))),
                            _ => self.fail("expected COUNT"),
                        };
                    }
                    let (distinct, var) = self.count()?;
                    self.expect_word("AS")?;
                    let alias = self.var()?;
                    self.expect_punct(")")?;
                    q.projection.push(Projection::Count(Count { distinct, var, alias }));
                }
                _ => break,
            }
        }
        if q.projection.is_empty() {
            return self.fail("empty projection");
        }
        Ok(false)
    }

    fn pattern_term(&mut self, position: &str) -> Result<PatternTerm, QueryError> {
        let offset = self.offset();
        let t = match self.next() {
            Some(Tok::Var(v)) => return Ok(PatternTerm::Var(v)),
            Some(Tok::IriRef(v)) => Term::Iri(self.iri_from_ref(&v)?),
            Some(Tok::PName(p)) if p.starts_with("_:") => {
                return Err(QueryError::Unsupported("blank node in pattern".into()));
            }
            Some(Tok::PName(p)) => Term::Iri(self.iri_from_pname(&p)?),
            Some(Tok::Word(w)) if w == "a" && position == "predicate" => Term::Iri(iri(rdf::TYPE)),
            Some(Tok::Punct("[")) => return Err(QueryError::Unsupported("blank node in pattern".into())),
            Some(Tok::Punct("(")) if position == "object" => {
                return Err(QueryError::Unsupported("collection in pattern".into()));
            }
            Some(tok) if position != "predicate" => {
                self.pos -= 1;
                let _ = tok;
                self.literal()?
            }
            _ => return syntax(offset, format!("expected {position}")),
        };
        Ok(PatternTerm::Term(t))
    }

    fn literal(&mut self) -> Result<Term, QueryError> {
        let offset = self.offset();
        match self.next() {
            Some(Tok::Str(s)) => match self.peek() {
                Some(Tok::LangTag(_)) => {
                    let Some(Tok::LangTag(tag)) = self.next() else { unreachable!() };
                    Literal::lang(s, &tag)
                        .map(Term::Literal)
                        .map_err(|e| QueryError::Syntax { offset, message: e.to_string() })
                }
                Some(Tok::DoubleCaret) => {
                    self.pos += 1;
                    let dt = match self.next() {
                        Some(Tok::IriRef(v)) => self.iri_from_ref(&v)?,
                        Some(Tok::PName(p)) => self.iri_from_pname(&p)?,
                        _ => return syntax(offset, "expected a datatype IRI"),
                    };
                    Ok(Term::Literal(Literal::typed(s, dt)))
                }
                _ => Ok(Term::Literal(Literal::string(s))),
            },
            Some(Tok::Number(n)) => {
                let dt = if n.contains('.') { xsd::DECIMAL } else { xsd::INTEGER };
                Ok(Term::Literal(Literal::typed(n, iri(dt))))
            }
            Some(Tok::Word(w)) if w == "true" || w == "false" => Ok(Term::Literal(Literal::typed(w, iri(xsd::BOOLEAN)))),
            Some(Tok::IriRef(v)) => Ok(Term::Iri(self.iri_from_ref(&v)?)),
            Some(Tok::PName(p)) => Ok(Term::Iri(self.iri_from_pname(&p)?)),
            _ => syntax(offset, "expected a term"),
        }
    }

    fn reject_path(&self) -> Result<(), QueryError> {
        if let Some(Tok::Punct(p)) = self.peek() {
            if matches!(*p, "/" | "|" | "^" | "*" | "+" | "?") {
                return Err(QueryError::Unsupported("property path".into()));
            }
        }
        Ok(())
    }

    fn triples_block(&mut self, q: &mut Query) -> Result<(), QueryError> {
        let subject = self.pattern_term("subject")?;
        loop {
            if self.is_punct("!") || self.is_punct("^") || self.is_punct("(") {
                return Err(QueryError::Unsupported("property path".into()));
            }
            let predicate = self.pattern_term("predicate")?;
            self.reject_path()?;
            loop {
                let object = self.pattern_term("object")?;
                q.patterns.push(TriplePattern { subject: subject.clone(), predicate: predicate.clone(), object });
                if !self.eat_punct(",") {
                    break;
                }
            }
            if !self.eat_punct(";") {
                return Ok(());
            }
            while self.eat_punct(";") {}
            if self.is_punct(".") || self.is_punct("}") {
                return Ok(());
            }
        }
    }

    fn filter(&mut self, q: &mut Query) -> Result<(), QueryError> {
        let parenthesised = self.eat_punct("(");
        if self.eat_word("regex") {
            self.expect_punct("(")?;
            let on_str = self.eat_word("str");
            if on_str {
                self.expect_punct("(")?;
            }
            let var = self.var()?;
            if on_str {
                self.expect_punct(")")?;
            }
            self.expect_punct(",")?;
            let pattern = match self.next() {
                Some(Tok::Str(s)) => s,
                _ => {
                    self.pos -= 1;
                    return self.fail("expected a pattern string");
                }
            };
            let flags = if self.eat_punct(",") {
                match self.next() {
                    Some(Tok::Str(s)) => s,
                    _ => {
                        self.pos -= 1;
                        return self.fail("expected a flags string");
                    }
                }
            } else {
                String::new()
            };
            if let Some(bad) = flags.chars().find(|c| !matches!(c, 'i' | 'm' | 's' | 'x')) {
                return Err(QueryError::Regex { pattern, message: format!("unknown flag '{bad}'") });
            }
            self.expect_punct(")")?;
            super::eval::compile_regex(&pattern, &flags)?;
            q.filters.push(Filter::Regex { var, pattern, flags, on_str });
        } else if parenthesised && matches!(self.peek(), Some(Tok::Var(_))) {
            let var = self.var()?;
            let negated = if self.eat_punct("=") {
                false
            } else if self.eat_punct("!=") {
                true
            } else {
                return match self.peek() {
                    Some(Tok::Punct(p)) => Err(QueryError::Unsupported(format!("filter operator {p}"))),
                    _ => self.fail("expected '=' or '!='"),
                };
            };
            let value = self.literal()?;
            q.filters.push(Filter::Equals { var, value, negated });
        } else {
            return match self.peek() {
                Some(Tok::Word(w)) => Err(QueryError::Unsupported(format!("filter function {w}"))),
                _ => Err(QueryError::Unsupported("filter expression".into())),
            };
        }
        if self.is_punct("&&") || self.is_punct("||") {
            return Err(QueryError::Unsupported("compound filter expression".into()));
        }
        if parenthesised {
            self.expect_punct(")")?;
        }
        Ok(())
    }

    fn group(&mut self, q: &mut Query) -> Result<(), QueryError> {
        self.expect_punct("{")?;
        loop {
            self.check_unsupported()?;
            if self.eat_punct("}") {
                return Ok(());
            }
            if self.eat_punct(".") {
                continue;
            }
            if self.is_punct("{") {
                return Err(QueryError::Unsupported("nested group".into()));
            }
            if self.eat_word("FILTER") {
                self.filter(q)?;
                continue;
            }
            if self.peek().is_none() {
                return self.fail("unterminated group");
            }
            self.triples_block(q)?;
            if !self.is_punct(".") && !self.is_punct("}") && !self.is_word("FILTER") {
                self.check_unsupported()?;
                self.reject_path()?;
                return self.fail("expected '.' or '}'");
            }
        }
    }

    fn modifiers(&mut self, q: &mut Query) -> Result<(), QueryError> {
        if self.eat_word("GROUP") {
            self.expect_word("BY")?;
            while let Some(Tok::Var(_)) = self.peek() {
                let v = self.var()?;
                q.group_by.push(v);
            }
            if q.group_by.is_empty() {
                return self.fail("expected GROUP BY variables");
            }
        }
        if self.eat_word("HAVING") {
            self.expect_punct("(")?;
            let alias = if self.is_word("COUNT") {
                let (distinct, var) = self.count()?;
                let found = q.projection.iter().find_map(|p| match p {
                    Projection::Count(c) if c.distinct == distinct && c.var == var => Some(c.alias.clone()),
                    _ => None,
                });
                found.ok_or_else(|| QueryError::Unsupported("HAVING aggregate not in projection".into()))?
            } else {
                self.var()?
            };
            let comparison = match self.next() {
                Some(Tok::Punct(">")) => Comparison::Gt,
                Some(Tok::Punct(">=")) => Comparison::Ge,
                Some(Tok::Punct("<")) => Comparison::Lt,
                Some(Tok::Punct("<=")) => Comparison::Le,
                Some(Tok::Punct("=")) => Comparison::Eq,
                Some(Tok::Punct("!=")) => Comparison::Ne,
                _ => {
                    self.pos -= 1;
                    return self.fail("expected a comparison operator");
                }
            };
            let threshold = match self.next() {
                Some(Tok::Number(n)) => n.parse::<i64>().map_err(|_| QueryError::Syntax {
                    offset: self.offset(),
                    message: format!("HAVING threshold {n} is not an integer"),
                })?,
                _ => {
                    self.pos -= 1;
                    return self.fail("expected an integer threshold");
                }
            };
            self.expect_punct(")")?;
            q.having = Some(Having { alias, comparison, threshold });
        }
        if self.eat_word("ORDER") {
            self.expect_word("BY")?;
            loop {
                let descending = if self.eat_word("DESC") {
                    true
                } else if self.eat_word("ASC") {
                    false
                } else if let Some(Tok::Var(_)) = self.peek() {
                    let name = self.var()?;
                    q.order_by.push(OrderKey { name, descending: false });
                    continue;
                } else {
                    break;
                };
                self.expect_punct("(")?;
                let name = self.var()?;
                self.expect_punct(")")?;
                q.order_by.push(OrderKey { name, descending });
            }
            if q.order_by.is_empty() {
                return self.fail("expected ORDER BY keys");
            }
        }
        self.check_unsupported()?;
        if self.eat_word("LIMIT") {
            match self.next() {
                Some(Tok::Number(n)) => {
                    q.limit = Some(n.parse().map_err(|_| QueryError::Syntax {
                        offset: self.offset(),
                        message: format!("invalid LIMIT {n}"),
                    })?)
                }
                _ => {
                    self.pos -= 1;
                    return self.fail("expected a LIMIT count");
                }
            }
        }
        self.check_unsupported()?;
        Ok(())
    }
}

/// Parse a SELECT query. Well-known prefixes (rdf, rdfs, owl, bf, schema,
/// ...) are predeclared.
pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let mut p = Parser { tokens: lex(text)?, pos: 0, end: text.len(), prefixes: PrefixMap::well_known(), base: None };
    p.prologue()?;
    for form in ["ASK", "CONSTRUCT", "DESCRIBE"] {
        if p.is_word(form) {
            return Err(QueryError::Unsupported(format!("{form} query form")));
        }
    }
    p.expect_word("SELECT")?;
    let mut q = Query { distinct: p.eat_word("DISTINCT") || p.eat_word("REDUCED"), ..Default::default() };
    let star = p.projection(&mut q)?;
    p.check_unsupported()?;
    p.eat_word("WHERE");
    p.group(&mut q)?;
    p.modifiers(&mut q)?;
    if p.peek().is_some() {
        return p.fail("unexpected trailing input");
    }
    if star {
        let mut seen = alloc::collections::BTreeSet::new();
        for pat in &q.patterns {
            for v in pat.vars() {
                if seen.insert(v.to_string()) {
                    q.projection.push(Projection::Var(v.to_string()));
                }
            }
        }
    }
    Ok(q)
}
