//! A basic-graph-pattern query engine covering conjunctive triple patterns,
//! regex/equality filters, DISTINCT, COUNT, GROUP BY, HAVING, ORDER BY and
//! LIMIT. Queries are written in the matching subset of SPARQL syntax.

pub(crate) mod eval;
mod parse;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::term::Term;

pub use eval::QueryResult;
pub use parse::parse_query;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("query syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unsupported construct: {0}")]
    Unsupported(String),
    #[error("variable ?{0} is not bound by any triple pattern")]
    UnboundVariable(String),
    #[error("?{0} must appear in GROUP BY when aggregates are projected")]
    NotGrouped(String),
    #[error("invalid regular expression {pattern:?}: {message}")]
    Regex { pattern: String, message: String },
    #[error("HAVING/ORDER BY refers to unknown name ?{0}")]
    UnknownName(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternTerm {
    Var(String),
    Term(Term),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(name.into())
    }

    fn as_var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: impl Into<PatternTerm>, predicate: impl Into<PatternTerm>, object: impl Into<PatternTerm>) -> Self {
        TriplePattern { subject: subject.into(), predicate: predicate.into(), object: object.into() }
    }

    fn vars(&self) -> impl Iterator<Item = &str> {
        [&self.subject, &self.predicate, &self.object].into_iter().filter_map(PatternTerm::as_var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Filter {
    /// `regex(?var, pattern, flags)`; `on_str` is `regex(str(?var), …)`,
    /// which also matches IRIs by their string form.
    Regex { var: String, pattern: String, flags: String, on_str: bool },
    Equals { var: String, value: Term, negated: bool },
}

impl Filter {
    fn var(&self) -> &str {
        match self {
            Filter::Regex { var, .. } | Filter::Equals { var, .. } => var,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Count {
    pub distinct: bool,
    /// `None` counts solutions (`COUNT(*)`).
    pub var: Option<String>,
    pub alias: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    Var(String),
    Count(Count),
}

impl Projection {
    pub fn name(&self) -> &str {
        match self {
            Projection::Var(v) => v,
            Projection::Count(c) => &c.alias,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
    Ne,
}

impl Comparison {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Comparison::Gt => lhs > rhs,
            Comparison::Ge => lhs >= rhs,
            Comparison::Lt => lhs < rhs,
            Comparison::Le => lhs <= rhs,
            Comparison::Eq => lhs == rhs,
            Comparison::Ne => lhs != rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Having {
    pub alias: String,
    pub comparison: Comparison,
    pub threshold: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderKey {
    pub name: String,
    pub descending: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Query {
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<Filter>,
    pub projection: Vec<Projection>,
    pub distinct: bool,
    pub group_by: Vec<String>,
    pub having: Option<Having>,
    pub order_by: Vec<OrderKey>,
    pub limit: Option<usize>,
}

impl Query {
    pub fn select(vars: &[&str]) -> Self {
        Query { projection: vars.iter().map(|v| Projection::Var((*v).into())).collect(), ..Default::default() }
    }

    pub fn pattern(mut self, p: TriplePattern) -> Self {
        self.patterns.push(p);
        self
    }

    pub fn filter(mut self, f: Filter) -> Self {
        self.filters.push(f);
        self
    }

    pub fn pattern_vars(&self) -> BTreeSet<&str> {
        self.patterns.iter().flat_map(TriplePattern::vars).collect()
    }

    pub fn has_aggregate(&self) -> bool {
        self.projection.iter().any(|p| matches!(p, Projection::Count(_)))
    }

    /// Check that every referenced variable is bound by a pattern and that
    /// aggregate queries are well formed.
    pub fn validate(&self) -> Result<(), QueryError> {
        let bound = self.pattern_vars();
        let check = |v: &str| if bound.contains(v) { Ok(()) } else { Err(QueryError::UnboundVariable(v.into())) };
        for p in &self.projection {
            match p {
                Projection::Var(v) => check(v)?,
                Projection::Count(c) => {
                    if let Some(v) = &c.var {
                        check(v)?;
                    }
                }
            }
        }
        for f in &self.filters {
            check(f.var())?;
        }
        for g in &self.group_by {
            check(g)?;
        }
        let aggregated = self.has_aggregate() || !self.group_by.is_empty();
        if aggregated {
            for p in &self.projection {
                if let Projection::Var(v) = p {
                    if !self.group_by.iter().any(|g| g == v) {
                        return Err(QueryError::NotGrouped(v.clone()));
                    }
                }
            }
        }
        let names: BTreeSet<&str> = self.projection.iter().map(Projection::name).collect();
        if let Some(h) = &self.having {
            let is_count = self.projection.iter().any(|p| matches!(p, Projection::Count(c) if c.alias == h.alias));
            if !is_count {
                return Err(QueryError::UnknownName(h.alias.clone()));
            }
        }
        for k in &self.order_by {
            let known = names.contains(k.name.as_str()) || (!aggregated && bound.contains(k.name.as_str()));
            if !known {
                return Err(QueryError::UnknownName(k.name.clone()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => write!(f, "?{v}"),
            PatternTerm::Term(t) => write!(f, "{t}"),
        }
    }
}

/// Evaluate a query against a graph.
pub fn execute(graph: &crate::graph::Graph, query: &Query) -> Result<QueryResult, QueryError> {
    query.validate()?;
    eval::evaluate(graph, query)
}
