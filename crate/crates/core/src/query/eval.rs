use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use regex_automata::meta::Regex;
use regex_automata::util::syntax;
use serde::Serialize;

use super::{Filter, PatternTerm, Projection, Query, QueryError};
use crate::graph::{Graph, TermId};
use crate::namespace::xsd;
use crate::term::{Literal, Term};

type Row = Vec<Option<Term>>;
type OrderKeys = Vec<Option<Term>>;

/// Tabular query output. Unbound cells are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<Term>>>,
}

impl QueryResult {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Column values of one row by name.
    pub fn get(&self, row: usize, column: &str) -> Option<&Term> {
        let idx = self.columns.iter().position(|c| c == column)?;
        self.rows.get(row)?.get(idx)?.as_ref()
    }

    /// Plain-text table: IRIs bare, literals by lexical form.
    pub fn to_table(&self) -> String {
        let cell = |t: &Option<Term>| match t {
            None => String::new(),
            Some(Term::Iri(i)) => i.as_str().to_string(),
            Some(Term::BlankNode(b)) => b.to_string(),
            Some(Term::Literal(l)) => l.lexical().to_string(),
        };
        let body: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count() + 1).collect();
        for r in &body {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| {
                    let pad = w.saturating_sub(c.chars().count());
                    let mut s = c.clone();
                    s.extend(core::iter::repeat_n(' ', pad));
                    s
                })
                .collect();
            out.push_str(parts.join(" | ").trim_end());
            out.push('\n');
        };
        let header: Vec<String> = self.columns.iter().map(|c| alloc::format!("?{c}")).collect();
        line(&mut out, &header);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&rule.join("-+-"));
        out.push('\n');
        for r in &body {
            line(&mut out, r);
        }
        out
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Var(usize),
    Const(TermId),
}

struct CompiledFilter {
    var: usize,
    test: FilterTest,
}

enum FilterTest {
    Regex { regex: Regex, on_str: bool },
    Equals { value: Option<TermId>, negated: bool },
}

pub(crate) fn compile_regex(pattern: &str, flags: &str) -> Result<Regex, QueryError> {
    let config = syntax::Config::new()
        .case_insensitive(flags.contains('i'))
        .multi_line(flags.contains('m'))
        .dot_matches_new_line(flags.contains('s'))
        .ignore_whitespace(flags.contains('x'));
    Regex::builder()
        .syntax(config)
        .build(pattern)
        .map_err(|e| QueryError::Regex { pattern: pattern.into(), message: e.to_string() })
}

fn numeric_value(t: &Term) -> Option<f64> {
    let l = t.as_literal()?;
    match l.datatype()?.as_str() {
        xsd::INTEGER | xsd::DECIMAL | xsd::DOUBLE | "http://www.w3.org/2001/XMLSchema#int"
        | "http://www.w3.org/2001/XMLSchema#long" | "http://www.w3.org/2001/XMLSchema#float" => {
            l.lexical().parse::<f64>().ok()
        }
        _ => None,
    }
}

/// Ordering used for ORDER BY: unbound first, numerics by value, otherwise
/// term order.
pub(crate) fn compare_cells(a: &Option<Term>, b: &Option<Term>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => match (numeric_value(x), numeric_value(y)) {
            (Some(p), Some(q)) => p.partial_cmp(&q).unwrap_or(Ordering::Equal).then_with(|| x.cmp(y)),
            _ => x.cmp(y),
        },
    }
}

pub(crate) fn evaluate(graph: &Graph, query: &Query) -> Result<QueryResult, QueryError> {
    let columns: Vec<String> = query.projection.iter().map(|p| p.name().to_string()).collect();
    let empty = || QueryResult { columns: columns.clone(), rows: Vec::new() };

    let mut var_index: BTreeMap<String, usize> = BTreeMap::new();
    for p in &query.patterns {
        for v in p.vars() {
            let n = var_index.len();
            var_index.entry(v.to_string()).or_insert(n);
        }
    }
    let n_vars = var_index.len();

    let mut compiled: Vec<[Slot; 3]> = Vec::new();
    for p in &query.patterns {
        let mut slots = [Slot::Var(0); 3];
        for (slot, pt) in slots.iter_mut().zip([&p.subject, &p.predicate, &p.object]) {
            *slot = match pt {
                PatternTerm::Var(v) => Slot::Var(var_index[v.as_str()]),
                PatternTerm::Term(t) => match graph.id_of(t) {
                    Some(id) => Slot::Const(id),
                    None => return Ok(empty()),
                },
            };
        }
        compiled.push(slots);
    }

    let mut filters = Vec::new();
    for f in &query.filters {
        let var = var_index[f.var()];
        let test = match f {
            Filter::Regex { pattern, flags, on_str, .. } => {
                FilterTest::Regex { regex: compile_regex(pattern, flags)?, on_str: *on_str }
            }
            Filter::Equals { value, negated, .. } => FilterTest::Equals { value: graph.id_of(value), negated: *negated },
        };
        filters.push(CompiledFilter { var, test });
    }

    // Greedy join order: most constrained pattern first.
    let mut order = Vec::new();
    let mut bound = vec![false; n_vars];
    let mut remaining: Vec<usize> = (0..compiled.len()).collect();
    while !remaining.is_empty() {
        let score = |i: usize| {
            compiled[i]
                .iter()
                .filter(|s| match s {
                    Slot::Const(_) => true,
                    Slot::Var(v) => bound[*v],
                })
                .count()
        };
        let (pos, &best) = remaining
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| score(**a).cmp(&score(**b)).then(b.cmp(a)))
            .expect("non-empty");
        remaining.remove(pos);
        for s in compiled[best] {
            if let Slot::Var(v) = s {
                bound[v] = true;
            }
        }
        order.push(best);
    }
    // Filters run right after the step that binds their variable.
    let mut filters_at: Vec<Vec<usize>> = vec![Vec::new(); order.len().max(1)];
    let mut seen = vec![false; n_vars];
    let mut bound_at = vec![0usize; n_vars];
    for (step, &pi) in order.iter().enumerate() {
        for s in compiled[pi] {
            if let Slot::Var(v) = s {
                if !seen[v] {
                    seen[v] = true;
                    bound_at[v] = step;
                }
            }
        }
    }
    for (fi, f) in filters.iter().enumerate() {
        filters_at[bound_at[f.var]].push(fi);
    }

    let mut solutions: Vec<Vec<Option<TermId>>> = Vec::new();
    if !order.is_empty() {
        let mut binding = vec![None; n_vars];
        join(graph, &compiled, &order, &filters, &filters_at, 0, &mut binding, &mut solutions);
    }

    let to_term = |id: Option<TermId>| id.map(|i| graph.term(i).clone());
    let aggregated = query.has_aggregate() || !query.group_by.is_empty();

    let mut rows: Vec<(Row, OrderKeys)> = Vec::new();
    if aggregated {
        if solutions.is_empty() {
            return Ok(empty());
        }
        let group_idx: Vec<usize> = query.group_by.iter().map(|g| var_index[g.as_str()]).collect();
        let mut groups: BTreeMap<Vec<Option<TermId>>, Vec<usize>> = BTreeMap::new();
        for (i, s) in solutions.iter().enumerate() {
            groups.entry(group_idx.iter().map(|g| s[*g]).collect()).or_default().push(i);
        }
        for (key, members) in groups {
            let mut counts: BTreeMap<&str, i64> = BTreeMap::new();
            for p in &query.projection {
                if let Projection::Count(c) = p {
                    let n = match (&c.var, c.distinct) {
                        (Some(v), false) => members.iter().filter(|m| solutions[**m][var_index[v.as_str()]].is_some()).count(),
                        (Some(v), true) => members
                            .iter()
                            .filter_map(|m| solutions[*m][var_index[v.as_str()]])
                            .collect::<BTreeSet<_>>()
                            .len(),
                        (None, false) => members.len(),
                        (None, true) => members.iter().map(|m| &solutions[*m]).collect::<BTreeSet<_>>().len(),
                    };
                    counts.insert(c.alias.as_str(), n as i64);
                }
            }
            if let Some(h) = &query.having {
                if !h.comparison.holds(counts[h.alias.as_str()], h.threshold) {
                    continue;
                }
            }
            let cell = |name: &str| -> Option<Term> {
                if let Some(n) = counts.get(name) {
                    return Some(Term::Literal(Literal::integer(*n)));
                }
                let gi = query.group_by.iter().position(|g| g == name)?;
                to_term(key[gi])
            };
            let out: Vec<Option<Term>> = query.projection.iter().map(|p| cell(p.name())).collect();
            let keys: Vec<Option<Term>> = query.order_by.iter().map(|k| cell(&k.name)).collect();
            rows.push((out, keys));
        }
    } else {
        for s in &solutions {
            let cell = |name: &str| var_index.get(name).and_then(|i| to_term(s[*i]));
            let out = query.projection.iter().map(|p| cell(p.name())).collect();
            let keys = query.order_by.iter().map(|k| cell(&k.name)).collect();
            rows.push((out, keys));
        }
    }

    let canonical = |a: &Vec<Option<Term>>, b: &Vec<Option<Term>>| {
        a.iter().zip(b).map(|(x, y)| compare_cells(x, y)).find(|o| *o != Ordering::Equal).unwrap_or(Ordering::Equal)
    };
    rows.sort_by(|(oa, ka), (ob, kb)| {
        for ((x, y), key) in ka.iter().zip(kb).zip(&query.order_by) {
            let o = compare_cells(x, y);
            let o = if key.descending { o.reverse() } else { o };
            if o != Ordering::Equal {
                return o;
            }
        }
        canonical(oa, ob)
    });
    let mut out_rows: Vec<Vec<Option<Term>>> = Vec::with_capacity(rows.len());
    let mut seen_rows: BTreeSet<Vec<Option<Term>>> = BTreeSet::new();
    for (row, _) in rows {
        if query.distinct && !seen_rows.insert(row.clone()) {
            continue;
        }
        out_rows.push(row);
        if query.limit.is_some_and(|l| out_rows.len() >= l) {
            break;
        }
    }
    if query.limit == Some(0) {
        out_rows.clear();
    }
    Ok(QueryResult { columns, rows: out_rows })
}

#[allow(clippy::too_many_arguments)]
fn join(
    graph: &Graph,
    compiled: &[[Slot; 3]],
    order: &[usize],
    filters: &[CompiledFilter],
    filters_at: &[Vec<usize>],
    step: usize,
    binding: &mut Vec<Option<TermId>>,
    out: &mut Vec<Vec<Option<TermId>>>,
) {
    if step == order.len() {
        out.push(binding.clone());
        return;
    }
    let slots = compiled[order[step]];
    let lookup = |s: Slot, b: &[Option<TermId>]| match s {
        Slot::Const(id) => Some(id),
        Slot::Var(v) => b[v],
    };
    let (s, p, o) = (lookup(slots[0], binding), lookup(slots[1], binding), lookup(slots[2], binding));
    for (ts, tp, to) in graph.ids_matching(s, p, o) {
        let mut newly = Vec::new();
        let mut ok = true;
        for (slot, value) in slots.iter().zip([ts, tp, to]) {
            if let Slot::Var(v) = slot {
                match binding[*v] {
                    Some(existing) if existing != value => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        binding[*v] = Some(value);
                        newly.push(*v);
                    }
                }
            }
        }
        if ok && filters_at[step].iter().all(|fi| passes(graph, &filters[*fi], binding)) {
            join(graph, compiled, order, filters, filters_at, step + 1, binding, out);
        }
        for v in newly {
            binding[v] = None;
        }
    }
}

fn passes(graph: &Graph, filter: &CompiledFilter, binding: &[Option<TermId>]) -> bool {
    let Some(id) = binding[filter.var] else { return false };
    match &filter.test {
        FilterTest::Equals { value, negated } => (Some(id) == *value) != *negated,
        FilterTest::Regex { regex, on_str } => match graph.term(id) {
            Term::Literal(l) => regex.is_match(l.lexical()),
            Term::Iri(i) if *on_str => regex.is_match(i.as_str()),
            _ => false,
        },
    }
}
