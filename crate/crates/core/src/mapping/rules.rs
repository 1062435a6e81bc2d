//! Declarative rule sets loaded from plain-text tables.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::namespace::PrefixMap;
use crate::term::Iri;

use super::MappingError;

const MARC_RULES: &str = include_str!("../../data/marc_rules.txt");
const DC_RULES: &str = include_str!("../../data/dc_rules.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Marc,
    DublinCore,
}

/// Which part of a source record a rule reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    /// Whole data field, or a DC element name (`*` for the record itself).
    Field(String),
    Subfield(String, char),
    /// Character positions of a control field, inclusive.
    Positions(String, usize, usize),
}

impl Selector {
    pub fn tag(&self) -> &str {
        match self {
            Selector::Field(t) | Selector::Subfield(t, _) | Selector::Positions(t, _, _) => t,
        }
    }

    fn parse(text: &str, profile: Profile) -> Result<Self, String> {
        if profile == Profile::DublinCore {
            return Ok(Selector::Field(text.into()));
        }
        if let Some((tag, code)) = text.split_once('$') {
            let mut chars = code.chars();
            return match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(Selector::Subfield(tag.into(), c)),
                _ => Err(format!("bad subfield selector {text:?}")),
            };
        }
        if let Some((tag, range)) = text.split_once('/') {
            let (a, b) = range.split_once('-').unwrap_or((range, range));
            let (Ok(a), Ok(b)) = (a.parse::<usize>(), b.parse::<usize>()) else {
                return Err(format!("bad position selector {text:?}"));
            };
            if a > b {
                return Err(format!("empty position range in {text:?}"));
            }
            return Ok(Selector::Positions(tag.into(), a, b));
        }
        if text.len() == 3 && text.bytes().all(|b| b.is_ascii_alphanumeric()) {
            Ok(Selector::Field(text.into()))
        } else {
            Err(format!("bad tag {text:?}"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Handler {
    Title,
    Contribution,
    Hub,
    Language,
    Geographic,
    OriginDate,
    Provision,
    Subject,
    Identifier,
    Item,
    Literal,
    Constant,
    Name,
    Creator,
    Coverage,
    Entity,
    Date,
    Rights,
}

impl Handler {
    fn parse(name: &str, profile: Profile) -> Option<Self> {
        use Handler::*;
        let h = match name {
            "title" => Title,
            "contribution" => Contribution,
            "hub" => Hub,
            "language" => Language,
            "geographic" => Geographic,
            "origin-date" => OriginDate,
            "provision" => Provision,
            "subject" => Subject,
            "identifier" => Identifier,
            "item" => Item,
            "literal" => Literal,
            "constant" => Constant,
            "name" => Name,
            "creator" => Creator,
            "coverage" => Coverage,
            "entity" => Entity,
            "date" => Date,
            "rights" => Rights,
            _ => return None,
        };
        let marc = matches!(
            h,
            Title | Contribution | Hub | Language | Geographic | OriginDate | Provision | Subject | Identifier | Item | Literal
        );
        let dc = matches!(h, Constant | Name | Creator | Coverage | Entity | Date | Rights | Literal);
        match profile {
            Profile::Marc if marc => Some(h),
            Profile::DublinCore if dc => Some(h),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub selector: Selector,
    pub handler: Handler,
    pub class: Option<Iri>,
    pub predicate: Iri,
    pub options: BTreeMap<String, String>,
    prefixes: PrefixMap,
}

impl Rule {
    pub fn option(&self, key: &str) -> Option<&str> {
        self.options.get(key).map(String::as_str)
    }

    /// An option holding a CURIE or IRI, expanded with the file's prefixes.
    pub fn iri_option(&self, key: &str) -> Option<Iri> {
        self.option(key).and_then(|v| expand(&self.prefixes, v).ok())
    }

    pub fn codes(&self, default: &str) -> Vec<char> {
        self.option("codes").unwrap_or(default).chars().collect()
    }

    pub fn flag(&self, key: &str) -> bool {
        self.option(key) == Some("true")
    }
}

fn expand(prefixes: &PrefixMap, text: &str) -> Result<Iri, String> {
    if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return Iri::new(inner).map_err(|e| e.to_string());
    }
    match prefixes.expand(text) {
        Some(r) => r.map_err(|e| e.to_string()),
        None => Err(format!("unknown prefix in {text:?}")),
    }
}

/// Ordered rules for one source profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub profile: Profile,
    pub rules: Vec<Rule>,
}

impl RuleSet {
    pub fn default_marc() -> Self {
        Self::parse(Profile::Marc, MARC_RULES).expect("shipped MARC rule set")
    }

    pub fn default_dc() -> Self {
        Self::parse(Profile::DublinCore, DC_RULES).expect("shipped DC rule set")
    }

    pub fn parse(profile: Profile, text: &str) -> Result<Self, MappingError> {
        let mut prefixes = PrefixMap::new();
        let mut rules = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| MappingError::Rule { line: n + 1, message };
            if let Some(rest) = line.strip_prefix("@prefix") {
                let rest = rest.trim().trim_end_matches('.').trim();
                let (name, ns) = rest.split_once(char::is_whitespace).ok_or_else(|| err("malformed @prefix".into()))?;
                let name = name.strip_suffix(':').ok_or_else(|| err("prefix name must end with ':'".into()))?;
                let ns = ns.trim();
                let ns = ns.strip_prefix('<').and_then(|n| n.strip_suffix('>')).ok_or_else(|| err("namespace must be <...>".into()))?;
                Iri::new(ns).map_err(|e| err(e.to_string()))?;
                prefixes.insert(name, ns);
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 5 {
                return Err(err(format!("expected 5 columns, found {}", cols.len())));
            }
            let selector = Selector::parse(cols[0], profile).map_err(err)?;
            let handler = Handler::parse(cols[1], profile).ok_or_else(|| err(format!("unknown handler {:?}", cols[1])))?;
            let class = match cols[2] {
                "-" => None,
                c => Some(expand(&prefixes, c).map_err(err)?),
            };
            let predicate = expand(&prefixes, cols[3]).map_err(err)?;
            let mut options = BTreeMap::new();
            if cols[4] != "-" {
                for pair in cols[4].split(',') {
                    let (k, v) = pair.split_once('=').ok_or_else(|| err(format!("option {pair:?} is not key=value")))?;
                    options.insert(k.to_string(), v.to_string());
                }
            }
            rules.push(Rule { selector, handler, class, predicate, options, prefixes: prefixes.clone() });
        }
        let set = RuleSet { profile, rules };
        for rule in &set.rules {
            for key in ["agent", "link", "extra-class", "extra-name", "temporal", "iri"] {
                if let Some(v) = rule.option(key) {
                    expand(&rule.prefixes, v).map_err(|message| MappingError::Rule { line: 0, message })?;
                }
            }
        }
        Ok(set)
    }

    pub fn rules_for<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.iter().filter(move |r| r.selector.tag() == tag)
    }

    /// Classes the rule set can emit.
    pub fn classes(&self) -> BTreeSet<Iri> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            out.extend(r.class.clone());
            for key in ["agent", "extra-class"] {
                out.extend(r.iri_option(key));
            }
        }
        out
    }

    /// Predicates the rule set can emit.
    pub fn predicates(&self) -> BTreeSet<Iri> {
        let mut out: BTreeSet<Iri> = self.rules.iter().map(|r| r.predicate.clone()).collect();
        for r in &self.rules {
            for key in ["link", "extra-name", "temporal", "iri"] {
                out.extend(r.iri_option(key));
            }
        }
        out
    }
}
