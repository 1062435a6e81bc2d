//! Vocabulary namespaces and the prefix map used by the serializers.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};

use crate::term::{Iri, TermError};

pub mod rdf {
    pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
    pub const STATEMENT: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Statement";
    pub const SUBJECT: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#subject";
    pub const PREDICATE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#predicate";
    pub const OBJECT: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#object";
    pub const FIRST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
    pub const REST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
    pub const NIL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
}

pub mod rdfs {
    pub const NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
    pub const SUB_CLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    pub const SUB_PROPERTY_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
}

pub mod xsd {
    pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const DATE: &str = "http://www.w3.org/2001/XMLSchema#date";
    pub const G_YEAR: &str = "http://www.w3.org/2001/XMLSchema#gYear";
}

pub mod owl {
    pub const NS: &str = "http://www.w3.org/2002/07/owl#";
    pub const SAME_AS: &str = "http://www.w3.org/2002/07/owl#sameAs";
    pub const EQUIVALENT_CLASS: &str = "http://www.w3.org/2002/07/owl#equivalentClass";
    pub const EQUIVALENT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#equivalentProperty";
}

pub mod bf {
    pub const NS: &str = "http://id.loc.gov/ontologies/bibframe/";
}

pub mod bflc {
    pub const NS: &str = "http://id.loc.gov/ontologies/bflc/";
}

pub mod schema {
    pub const NS: &str = "https://schema.org/";
}

pub mod dcterms {
    pub const NS: &str = "http://purl.org/dc/terms/";
    pub const TITLE: &str = "http://purl.org/dc/terms/title";
    pub const DESCRIPTION: &str = "http://purl.org/dc/terms/description";
    pub const LICENSE: &str = "http://purl.org/dc/terms/license";
    pub const PUBLISHER: &str = "http://purl.org/dc/terms/publisher";
    pub const CONTRIBUTOR: &str = "http://purl.org/dc/terms/contributor";
    pub const SOURCE: &str = "http://purl.org/dc/terms/source";
    pub const MODIFIED: &str = "http://purl.org/dc/terms/modified";
}

pub mod dc {
    pub const NS: &str = "http://purl.org/dc/elements/1.1/";
}

pub mod void {
    pub const NS: &str = "http://rdfs.org/ns/void#";
    pub const DATASET: &str = "http://rdfs.org/ns/void#Dataset";
    pub const FEATURE: &str = "http://rdfs.org/ns/void#feature";
    pub const DATA_DUMP: &str = "http://rdfs.org/ns/void#dataDump";
    pub const VOCABULARY: &str = "http://rdfs.org/ns/void#vocabulary";
    pub const CLASSES: &str = "http://rdfs.org/ns/void#classes";
    pub const PROPERTIES: &str = "http://rdfs.org/ns/void#properties";
    pub const TRIPLES: &str = "http://rdfs.org/ns/void#triples";
    pub const EXAMPLE_RESOURCE: &str = "http://rdfs.org/ns/void#exampleResource";
}

pub mod foaf {
    pub const NS: &str = "http://xmlns.com/foaf/0.1/";
}

pub mod edm {
    pub const NS: &str = "http://www.europeana.eu/schemas/edm/";
}

pub mod skos {
    pub const NS: &str = "http://www.w3.org/2004/02/skos/core#";
}

pub mod prov {
    pub const NS: &str = "http://www.w3.org/ns/prov#";
}

/// Prefixes every fresh graph starts with.
pub const WELL_KNOWN: &[(&str, &str)] = &[
    ("rdf", rdf::NS),
    ("rdfs", rdfs::NS),
    ("xsd", xsd::NS),
    ("owl", owl::NS),
    ("bf", bf::NS),
    ("bflc", bflc::NS),
    ("schema", schema::NS),
    ("dcterms", dcterms::NS),
    ("dc", dc::NS),
    ("void", void::NS),
    ("foaf", foaf::NS),
    ("edm", edm::NS),
    ("skos", skos::NS),
    ("prov", prov::NS),
];

/// Ordered prefix → namespace map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: BTreeMap<String, String>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn well_known() -> Self {
        let mut map = Self::new();
        for (p, ns) in WELL_KNOWN {
            map.insert(p, ns);
        }
        map
    }

    pub fn insert(&mut self, prefix: &str, namespace: &str) {
        self.entries.insert(prefix.to_string(), namespace.to_string());
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.entries.get(prefix).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(p, n)| (p.as_str(), n.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Expand `prefix:local`; strings already in `<...>` form are taken verbatim.
    pub fn expand(&self, curie: &str) -> Option<Result<Iri, TermError>> {
        if let Some(inner) = curie.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
            return Some(Iri::new(inner));
        }
        let (prefix, local) = curie.split_once(':')?;
        let ns = self.get(prefix)?;
        let mut full = String::with_capacity(ns.len() + local.len());
        full.push_str(ns);
        full.push_str(local);
        Some(Iri::new(full))
    }

    /// Longest namespace match whose remainder is a usable local name.
    pub fn compact<'a>(&'a self, iri: &'a str) -> Option<(&'a str, &'a str)> {
        self.entries
            .iter()
            .filter(|(_, ns)| iri.starts_with(ns.as_str()))
            .max_by_key(|(_, ns)| ns.len())
            .map(|(p, ns)| (p.as_str(), &iri[ns.len()..]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_and_compact() {
        let map = PrefixMap::well_known();
        let iri = map.expand("void:triples").unwrap().unwrap();
        assert_eq!(iri.as_str(), void::TRIPLES);
        assert_eq!(map.compact(void::TRIPLES), Some(("void", "triples")));
        assert!(map.expand("nope:x").is_none());
        assert_eq!(map.expand("<http://a/b>").unwrap().unwrap().as_str(), "http://a/b");
    }
}
