//! RDF/XML parser covering node and property elements, typed nodes,
//! property attributes, `rdf:parseType="Resource"`, `rdf:li`, `xml:lang`
//! and `xml:base`.

use lodforge_core::namespace::rdf;
use lodforge_core::term::{resolve_iri, BlankNode, Iri, Literal, Subject, Term, Triple};
use lodforge_core::Graph;
use quick_xml::events::Event;
use quick_xml::name::ResolveResult;
use quick_xml::reader::NsReader;

const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";

#[derive(Debug, thiserror::Error)]
pub enum RdfXmlParseError {
    #[error("XML error at byte {offset}: {message}")]
    Xml { offset: u64, message: String },
    #[error("{0}")]
    Rdf(String),
}

#[derive(Debug)]
struct Element {
    ns: String,
    local: String,
    attrs: Vec<(String, String, String)>,
    children: Vec<Node>,
}

#[derive(Debug)]
enum Node {
    Element(Element),
    Text(String),
}

impl Element {
    fn is_rdf(&self, local: &str) -> bool {
        self.ns == rdf::NS && self.local == local
    }

    fn iri(&self) -> String {
        format!("{}{}", self.ns, self.local)
    }

    fn attr(&self, ns: &str, local: &str) -> Option<&str> {
        self.attrs.iter().find(|(n, l, _)| n == ns && l == local).map(|(_, _, v)| v.as_str())
    }

    fn elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(|c| match c {
            Node::Element(e) => Some(e),
            Node::Text(_) => None,
        })
    }

    fn text(&self) -> String {
        self.children
            .iter()
            .filter_map(|c| match c {
                Node::Text(t) => Some(t.as_str()),
                Node::Element(_) => None,
            })
            .collect()
    }
}

fn xml_err(reader: &NsReader<&[u8]>, e: impl ToString) -> RdfXmlParseError {
    RdfXmlParseError::Xml { offset: reader.error_position(), message: e.to_string() }
}

fn read_tree(text: &str) -> Result<Element, RdfXmlParseError> {
    let mut reader = NsReader::from_str(text);
    reader.config_mut().trim_text(false);
    let mut stack: Vec<Element> = Vec::new();
    let mut root = None;
    loop {
        let (res, event) = match reader.read_resolved_event() {
            Ok(x) => x,
            Err(e) => return Err(RdfXmlParseError::Xml { offset: reader.error_position(), message: e.to_string() }),
        };
        let ns = match res {
            ResolveResult::Bound(n) => String::from_utf8_lossy(n.as_ref()).into_owned(),
            _ => String::new(),
        };
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let local = String::from_utf8_lossy(e.local_name().as_ref()).into_owned();
                let mut attrs = Vec::new();
                for a in e.attributes() {
                    let a = a.map_err(|err| xml_err(&reader, err))?;
                    let key = a.key;
                    if key.as_namespace_binding().is_some() {
                        continue;
                    }
                    let (r, l) = reader.resolve_attribute(key);
                    let ans = match r {
                        ResolveResult::Bound(n) => String::from_utf8_lossy(n.as_ref()).into_owned(),
                        _ if key.prefix().is_some_and(|p| p.as_ref() == b"xml") => XML_NS.into(),
                        _ => String::new(),
                    };
                    let value = a.unescape_value().map_err(|err| xml_err(&reader, err))?.into_owned();
                    attrs.push((ans, String::from_utf8_lossy(l.as_ref()).into_owned(), value));
                }
                let el = Element { ns, local, attrs, children: Vec::new() };
                if matches!(event, Event::Empty(_)) {
                    match stack.last_mut() {
                        Some(p) => p.children.push(Node::Element(el)),
                        None => root = Some(el),
                    }
                } else {
                    stack.push(el);
                }
            }
            Event::End(_) => {
                let el = stack.pop().expect("balanced by the reader");
                match stack.last_mut() {
                    Some(p) => p.children.push(Node::Element(el)),
                    None => root = Some(el),
                }
            }
            Event::Text(t) => {
                if let Some(p) = stack.last_mut() {
                    p.children.push(Node::Text(t.unescape().map_err(|e| xml_err(&reader, e))?.into_owned()));
                }
            }
            Event::CData(c) => {
                if let Some(p) = stack.last_mut() {
                    p.children.push(Node::Text(String::from_utf8_lossy(&c).into_owned()));
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if !stack.is_empty() {
        return Err(RdfXmlParseError::Xml { offset: reader.buffer_position(), message: "unexpected end of input".into() });
    }
    root.ok_or_else(|| RdfXmlParseError::Rdf("document has no root element".into()))
}

#[derive(Clone)]
struct Scope {
    base: Option<Iri>,
    lang: Option<String>,
}

struct Parser {
    graph: Graph,
    generated: usize,
}

fn rdf_err(msg: impl Into<String>) -> RdfXmlParseError {
    RdfXmlParseError::Rdf(msg.into())
}

impl Parser {
    fn fresh(&mut self) -> Subject {
        self.generated += 1;
        Subject::BlankNode(BlankNode::new(format!("genid{}", self.generated)).expect("valid label"))
    }

    fn resolve(&self, scope: &Scope, reference: &str) -> Result<Iri, RdfXmlParseError> {
        match &scope.base {
            Some(b) => resolve_iri(b, reference),
            None => Iri::new(reference),
        }
        .map_err(|e| rdf_err(format!("bad IRI {reference:?}: {e}")))
    }

    fn scope_for(&self, el: &Element, outer: &Scope) -> Result<Scope, RdfXmlParseError> {
        let mut s = outer.clone();
        if let Some(b) = el.attr(XML_NS, "base") {
            s.base = Some(self.resolve(outer, b)?);
        }
        if let Some(l) = el.attr(XML_NS, "lang") {
            s.lang = (!l.is_empty()).then(|| l.to_string());
        }
        Ok(s)
    }

    fn literal(&self, scope: &Scope, text: String, datatype: Option<&str>) -> Result<Literal, RdfXmlParseError> {
        match (datatype, &scope.lang) {
            (Some(dt), _) => Ok(Literal::typed(text, self.resolve(scope, dt)?)),
            (None, Some(l)) => Literal::lang(text, l).map_err(|e| rdf_err(e.to_string())),
            (None, None) => Ok(Literal::string(text)),
        }
    }

    fn add(&mut self, s: &Subject, p: Iri, o: Term) {
        self.graph.insert(Triple::new(s.clone(), p, o));
    }

    fn node(&mut self, el: &Element, outer: &Scope) -> Result<Subject, RdfXmlParseError> {
        let scope = self.scope_for(el, outer)?;
        let subject = if let Some(about) = el.attr(rdf::NS, "about") {
            Subject::Iri(self.resolve(&scope, about)?)
        } else if let Some(id) = el.attr(rdf::NS, "ID") {
            Subject::Iri(self.resolve(&scope, &format!("#{id}"))?)
        } else if let Some(n) = el.attr(rdf::NS, "nodeID") {
            Subject::BlankNode(BlankNode::new(n).map_err(|e| rdf_err(e.to_string()))?)
        } else {
            self.fresh()
        };
        if !el.is_rdf("Description") {
            let class = Iri::new(el.iri()).map_err(|e| rdf_err(e.to_string()))?;
            self.add(&subject, lodforge_core::term::Iri::new(rdf::TYPE).expect("constant"), Term::Iri(class));
        }
        self.property_attributes(el, &scope, &subject)?;
        self.properties(el, &scope, &subject)?;
        Ok(subject)
    }

    fn property_attributes(&mut self, el: &Element, scope: &Scope, subject: &Subject) -> Result<(), RdfXmlParseError> {
        for (ns, local, value) in &el.attrs {
            if ns == XML_NS || ns.is_empty() {
                continue;
            }
            if ns == rdf::NS {
                match local.as_str() {
                    "type" => {
                        let o = self.resolve(scope, value)?;
                        self.add(subject, Iri::new(rdf::TYPE).expect("constant"), Term::Iri(o));
                    }
                    "about" | "ID" | "nodeID" | "resource" | "datatype" | "parseType" => {}
                    other => return Err(rdf_err(format!("unsupported attribute rdf:{other}"))),
                }
                continue;
            }
            let p = Iri::new(format!("{ns}{local}")).map_err(|e| rdf_err(e.to_string()))?;
            let lit = self.literal(scope, value.clone(), None)?;
            self.add(subject, p, Term::Literal(lit));
        }
        Ok(())
    }

    fn properties(&mut self, el: &Element, scope: &Scope, subject: &Subject) -> Result<(), RdfXmlParseError> {
        let mut li = 0;
        for prop in el.elements() {
            let pscope = self.scope_for(prop, scope)?;
            let predicate = if prop.is_rdf("li") {
                li += 1;
                Iri::new(format!("{}_{li}", rdf::NS))
            } else {
                Iri::new(prop.iri())
            }
            .map_err(|e| rdf_err(e.to_string()))?;
            let object = self.property_object(prop, &pscope)?;
            self.add(subject, predicate, object);
        }
        Ok(())
    }

    fn property_object(&mut self, prop: &Element, scope: &Scope) -> Result<Term, RdfXmlParseError> {
        if let Some(pt) = prop.attr(rdf::NS, "parseType") {
            if pt != "Resource" {
                return Err(rdf_err(format!("rdf:parseType={pt:?} is not supported")));
            }
            let node = self.fresh();
            self.properties(prop, scope, &node)?;
            return Ok(node.into());
        }
        let children: Vec<&Element> = prop.elements().collect();
        match children.as_slice() {
            [] => {}
            [one] => {
                if prop.text().trim().is_empty() {
                    return Ok(self.node(one, scope)?.into());
                }
                return Err(rdf_err(format!("property {} mixes text and elements", prop.iri())));
            }
            _ => return Err(rdf_err(format!("property {} has several node elements", prop.iri()))),
        }
        let has_prop_attrs = prop.attrs.iter().any(|(ns, l, _)| {
            !ns.is_empty() && ns != XML_NS && !(ns == rdf::NS && matches!(l.as_str(), "resource" | "nodeID" | "datatype" | "ID"))
        });
        let target = if let Some(r) = prop.attr(rdf::NS, "resource") {
            Some(Subject::Iri(self.resolve(scope, r)?))
        } else if let Some(n) = prop.attr(rdf::NS, "nodeID") {
            Some(Subject::BlankNode(BlankNode::new(n).map_err(|e| rdf_err(e.to_string()))?))
        } else if has_prop_attrs {
            Some(self.fresh())
        } else {
            None
        };
        match target {
            Some(t) => {
                self.property_attributes(prop, scope, &t)?;
                Ok(t.into())
            }
            None => Ok(Term::Literal(self.literal(scope, prop.text(), prop.attr(rdf::NS, "datatype"))?)),
        }
    }
}

pub fn parse_rdfxml(text: &str, base: Option<Iri>) -> Result<Graph, RdfXmlParseError> {
    let root = read_tree(text)?;
    let mut p = Parser { graph: Graph::new(), generated: 0 };
    let scope = Scope { base, lang: None };
    if root.is_rdf("RDF") {
        let scope = p.scope_for(&root, &scope)?;
        for node in root.elements() {
            p.node(node, &scope)?;
        }
    } else {
        p.node(&root, &scope)?;
    }
    Ok(p.graph)
}
