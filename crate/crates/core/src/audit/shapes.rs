//! Shape mining from instance data and validation against mined shapes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use serde::Serialize;

use crate::graph::Graph;
use crate::namespace::{rdf, xsd, PrefixMap};
use crate::term::{iri, Iri, Term};

/// Minimum support for an optional declaration.
pub const DEFAULT_FLOOR: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "iri", rename_all = "kebab-case")]
pub enum ObjectKind {
    /// Object typed with this class.
    Class(Iri),
    /// Literal with this datatype.
    Datatype(Iri),
    /// Any IRI or blank node.
    Resource,
    /// `rdf:type` value.
    Value(Iri),
}

impl ObjectKind {
    fn matches(&self, graph: &Graph, object: &Term) -> bool {
        match self {
            ObjectKind::Class(c) => !object.is_literal() && graph.types_of(object).iter().any(|t| t.as_iri() == Some(c)),
            ObjectKind::Datatype(d) => object.as_literal().is_some_and(|l| l.datatype_str() == d.as_str()),
            ObjectKind::Resource => !object.is_literal(),
            ObjectKind::Value(v) => object.as_iri() == Some(v),
        }
    }
}

/// Candidate kinds an object can satisfy.
fn kinds_of(graph: &Graph, object: &Term) -> Vec<ObjectKind> {
    match object {
        Term::Literal(l) => alloc::vec![ObjectKind::Datatype(iri(l.datatype_str()))],
        _ => {
            let mut out: Vec<ObjectKind> =
                graph.types_of(object).into_iter().filter_map(|t| t.as_iri()).map(|c| ObjectKind::Class(c.clone())).collect();
            out.push(ObjectKind::Resource);
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Declaration {
    pub predicate: Iri,
    pub object: ObjectKind,
    pub required: bool,
    /// Fraction of the class's instances with at least one matching object.
    pub support: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Shape {
    pub class: Iri,
    pub instances: usize,
    pub declarations: Vec<Declaration>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ShapeSet {
    pub threshold: f64,
    pub shapes: Vec<Shape>,
}

/// One shape per class with instances. For each predicate the object kind
/// with the highest instance support wins (classes beat the generic
/// resource kind on ties); `rdf:type` yields one declaration per class value.
pub fn mine_shapes(graph: &Graph, threshold: f64) -> ShapeSet {
    mine_shapes_with_floor(graph, threshold, DEFAULT_FLOOR)
}

pub fn mine_shapes_with_floor(graph: &Graph, threshold: f64, floor: f64) -> ShapeSet {
    let threshold = threshold.clamp(f64::MIN_POSITIVE, 1.0);
    let ty = iri(rdf::TYPE);
    let mut classes: BTreeMap<Iri, BTreeSet<&Term>> = BTreeMap::new();
    for t in graph.matching(None, Some(&ty), None) {
        if let Some(c) = t.object.as_iri() {
            classes.entry(c.clone()).or_default().insert(t.subject);
        }
    }
    let mut shapes = Vec::new();
    for (class, nodes) in classes {
        let n = nodes.len() as f64;
        // predicate -> kind -> instances having such an object
        let mut support: BTreeMap<Iri, BTreeMap<ObjectKind, usize>> = BTreeMap::new();
        for node in &nodes {
            let mut seen: BTreeSet<(Iri, ObjectKind)> = BTreeSet::new();
            for t in graph.matching(Some(node), None, None) {
                let p = t.predicate_iri().clone();
                let kinds = if p == ty {
                    t.object.as_iri().map(|c| alloc::vec![ObjectKind::Value(c.clone())]).unwrap_or_default()
                } else {
                    kinds_of(graph, t.object)
                };
                for k in kinds {
                    seen.insert((p.clone(), k));
                }
            }
            for (p, k) in seen {
                *support.entry(p).or_default().entry(k).or_default() += 1;
            }
        }
        let mut declarations = Vec::new();
        for (predicate, kinds) in support {
            let chosen: Vec<(ObjectKind, usize)> = if predicate == ty {
                kinds.into_iter().collect()
            } else {
                let best = kinds
                    .into_iter()
                    .max_by(|(ka, a), (kb, b)| {
                        a.cmp(b)
                            .then_with(|| matches!(kb, ObjectKind::Resource).cmp(&matches!(ka, ObjectKind::Resource)))
                            .then_with(|| kb.cmp(ka))
                    })
                    .expect("at least one kind");
                alloc::vec![best]
            };
            for (object, count) in chosen {
                let s = count as f64 / n;
                if s >= threshold || s >= floor {
                    declarations.push(Declaration { predicate: predicate.clone(), object, required: s >= threshold, support: s });
                }
            }
        }
        shapes.push(Shape { class, instances: nodes.len(), declarations });
    }
    ShapeSet { threshold, shapes }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeResult {
    pub node: String,
    pub shape: String,
    pub violated: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConformanceReport {
    pub checked: usize,
    pub conforming: usize,
    pub nonconforming: Vec<NodeResult>,
    pub warnings: Vec<String>,
}

impl ConformanceReport {
    pub fn rate(&self) -> f64 {
        if self.checked == 0 {
            1.0
        } else {
            self.conforming as f64 / self.checked as f64
        }
    }
}

fn declaration_text(d: &Declaration) -> String {
    let kind = match &d.object {
        ObjectKind::Class(c) => format!("@{}", c.as_str()),
        ObjectKind::Datatype(c) => c.as_str().to_string(),
        ObjectKind::Resource => "IRI".into(),
        ObjectKind::Value(v) => format!("[{}]", v.as_str()),
    };
    format!("{} {}", d.predicate.as_str(), kind)
}

/// A node conforms to its class's shape when every required declaration
/// has at least one object of the declared kind.
pub fn validate_shapes(graph: &Graph, shapes: &ShapeSet) -> ConformanceReport {
    let mut report = ConformanceReport::default();
    for shape in &shapes.shapes {
        let nodes = graph.instances_of(&shape.class);
        if nodes.is_empty() {
            report.warnings.push(format!("shape for {} has no instances; skipped", shape.class.as_str()));
            continue;
        }
        let mut sorted: Vec<&Term> = nodes;
        sorted.sort();
        sorted.dedup();
        for node in sorted {
            report.checked += 1;
            let violated: Vec<String> = shape
                .declarations
                .iter()
                .filter(|d| d.required)
                .filter(|d| !graph.objects(node, &d.predicate).into_iter().any(|o| d.object.matches(graph, o)))
                .map(declaration_text)
                .collect();
            if violated.is_empty() {
                report.conforming += 1;
            } else {
                report.nonconforming.push(NodeResult {
                    node: node.to_string().trim_start_matches('<').trim_end_matches('>').into(),
                    shape: shape.class.as_str().into(),
                    violated,
                });
            }
        }
    }
    report
}

fn compact(prefixes: &PrefixMap, i: &Iri) -> String {
    match prefixes.compact(i.as_str()) {
        Some((p, l)) => format!("{p}:{l}"),
        None => format!("<{}>", i.as_str()),
    }
}

/// ShEx compact syntax. Required declarations carry no cardinality mark
/// (exactly one or more is not distinguished); optional ones carry `?`.
pub fn to_shex(shapes: &ShapeSet) -> String {
    let prefixes = PrefixMap::well_known();
    let mut out = String::new();
    for (p, ns) in prefixes.iter() {
        let _ = writeln!(out, "PREFIX {p}: <{ns}>");
    }
    let _ = writeln!(out, "PREFIX shape: <urn:lodforge:shape:>");
    for shape in &shapes.shapes {
        let name = shape_name(&shape.class);
        let _ = writeln!(out, "\nshape:{name} {{");
        let n = shape.declarations.len();
        for (i, d) in shape.declarations.iter().enumerate() {
            let object = match &d.object {
                ObjectKind::Class(c) => format!("@shape:{}", shape_name(c)),
                ObjectKind::Datatype(dt) if dt.as_str() == xsd::STRING => "xsd:string".into(),
                ObjectKind::Datatype(dt) => compact(&prefixes, dt),
                ObjectKind::Resource => "IRI".into(),
                ObjectKind::Value(v) => format!("[{}]", compact(&prefixes, v)),
            };
            let card = if d.required { "" } else { " ?" };
            let sep = if i + 1 < n { " ;" } else { "" };
            let _ = writeln!(out, "   {}  {object}{card}{sep}  # support {:.3}", compact(&prefixes, &d.predicate), d.support);
        }
        let _ = writeln!(out, "}}");
    }
    out
}

fn shape_name(class: &Iri) -> String {
    let prefixes = PrefixMap::well_known();
    match prefixes.compact(class.as_str()) {
        Some((p, l)) if !l.is_empty() => format!("{p}_{l}"),
        _ => crate::text::slug(class.as_str()).replace('%', "_"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Literal, Triple};
    use proptest::prelude::*;

    const FOAF: &str = "http://xmlns.com/foaf/0.1/";
    const SCHEMA: &str = "https://schema.org/";

    fn person(g: &mut Graph, i: usize, with_name: bool) {
        let s = iri(&format!("http://example.org/author/p{i}"));
        g.insert(Triple::new(s.clone(), iri(rdf::TYPE), iri(&format!("{FOAF}Person"))));
        g.insert(Triple::new(s.clone(), iri(rdf::TYPE), iri(&format!("{SCHEMA}Person"))));
        if with_name {
            g.insert(Triple::new(s.clone(), iri(&format!("{FOAF}name")), Literal::string("X")));
        }
        g.insert(Triple::new(s, iri(&format!("{SCHEMA}name")), Literal::string("X")));
    }

    fn decl<'a>(s: &'a ShapeSet, class: &str, pred: &str) -> Option<&'a Declaration> {
        s.shapes.iter().find(|sh| sh.class.as_str() == class)?.declarations.iter().find(|d| d.predicate.as_str() == pred)
    }

    #[test]
    fn person_shape() {
        let mut g = Graph::new();
        for i in 0..3 {
            person(&mut g, i, true);
        }
        let s = mine_shapes(&g, 1.0);
        let name = decl(&s, &format!("{FOAF}Person"), &format!("{FOAF}name")).unwrap();
        assert!(name.required);
        assert_eq!(name.object, ObjectKind::Datatype(iri(xsd::STRING)));
        let types: Vec<&Declaration> = s.shapes[0].declarations.iter().filter(|d| d.predicate.as_str() == rdf::TYPE).collect();
        assert_eq!(types.len(), 2);
        let shex = to_shex(&s);
        assert!(shex.contains("rdf:type  [foaf:Person]"));
        assert!(shex.contains("foaf:name  xsd:string"));
    }

    #[test]
    fn single_instance_all_required() {
        let mut g = Graph::new();
        person(&mut g, 0, true);
        let s = mine_shapes(&g, 1.0);
        assert!(s.shapes.iter().all(|sh| sh.declarations.iter().all(|d| d.required)));
    }

    #[test]
    fn seven_of_ten_optional() {
        let mut g = Graph::new();
        for i in 0..10 {
            person(&mut g, i, i < 7);
        }
        let s = mine_shapes(&g, 0.8);
        let d = decl(&s, &format!("{FOAF}Person"), &format!("{FOAF}name")).unwrap();
        assert!(!d.required);
        assert!((d.support - 0.7).abs() < 1e-12);
    }

    #[test]
    fn missing_required() {
        let mut g = Graph::new();
        for i in 0..3 {
            person(&mut g, i, true);
        }
        let s = mine_shapes(&g, 1.0);
        g.remove(&Triple::new(iri("http://example.org/author/p1"), iri(&format!("{FOAF}name")), Literal::string("X")));
        let r = validate_shapes(&g, &s);
        assert_eq!(r.nonconforming.len(), 2);
        assert!(r.nonconforming.iter().all(|n| n.violated == [format!("{FOAF}name {}", xsd::STRING)]));
        let empty = validate_shapes(&Graph::new(), &s);
        assert_eq!(empty.warnings.len(), 2);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        let node = (0u8..6).prop_map(|i| iri(&format!("http://example.org/n{i}")));
        let class = (0u8..3).prop_map(|i| iri(&format!("http://example.org/C{i}")));
        let pred = (0u8..3).prop_map(|i| iri(&format!("http://example.org/p{i}")));
        let object = prop_oneof![
            (0u8..6).prop_map(|i| Term::Iri(iri(&format!("http://example.org/n{i}")))),
            "[a-c]{1,2}".prop_map(|s| Term::Literal(Literal::string(s))),
            (0i64..5).prop_map(|i| Term::Literal(Literal::integer(i))),
            Just(Term::Literal(Literal::lang("x", "en").unwrap())),
        ];
        let typing = proptest::collection::vec((node.clone(), class), 0..10);
        let edges = proptest::collection::vec((node, pred, object), 0..25);
        (typing, edges).prop_map(|(ts, es)| {
            let mut g = Graph::new();
            for (n, c) in ts {
                g.insert(Triple::new(n, iri(rdf::TYPE), c));
            }
            for (s, p, o) in es {
                g.insert(Triple::new(s, p, o));
            }
            g
        })
    }

    /// Conformance by direct recount of the definition.
    fn brute_rate(g: &Graph, s: &ShapeSet) -> f64 {
        let mut checked = 0;
        let mut ok = 0;
        for sh in &s.shapes {
            let nodes: BTreeSet<&Term> = g.iter().filter(|t| t.predicate_iri().as_str() == rdf::TYPE && t.object.as_iri() == Some(&sh.class)).map(|t| t.subject).collect();
            for n in nodes {
                checked += 1;
                let good = sh.declarations.iter().filter(|d| d.required).all(|d| {
                    g.iter().any(|t| t.subject == n && t.predicate_iri() == &d.predicate && d.object.matches(g, t.object))
                });
                ok += usize::from(good);
            }
        }
        if checked == 0 { 1.0 } else { ok as f64 / checked as f64 }
    }

    proptest! {
        #[test]
        fn fixpoint(g in arb_graph()) {
            let s = mine_shapes(&g, 1.0);
            let r = validate_shapes(&g, &s);
            prop_assert_eq!(r.rate(), 1.0);
            for sh in &s.shapes {
                for d in &sh.declarations {
                    prop_assert!(d.support > 0.0 && d.support <= 1.0);
                    prop_assert!(!d.required || d.support >= s.threshold);
                }
            }
        }

        #[test]
        fn validation_matches_brute_force(mine in arb_graph(), check in arb_graph(), t in 0.3f64..1.0) {
            let s = mine_shapes(&mine, t);
            let r = validate_shapes(&check, &s);
            prop_assert!((r.rate() - brute_rate(&check, &s)).abs() < 1e-12);
        }
    }
}
