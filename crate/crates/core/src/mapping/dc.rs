//! Dublin Core → Schema.org.

use alloc::format;
use alloc::string::{String, ToString};

use crate::ingest::DcRecord;
use crate::namespace::{rdf, schema, xsd};
use crate::term::{iri, Iri, Literal, Term, Triple};
use crate::text::{encode_path_segment, is_gyear, is_xsd_date, slug, split_life_dates};

use super::{Fragment, Handler, MappingConfig, Rule, Warning, WarningCategory};

struct Ctx<'a> {
    config: &'a MappingConfig,
    id: String,
    film: Iri,
    out: Fragment,
}

impl Ctx<'_> {
    fn add(&mut self, s: &Iri, p: Iri, o: impl Into<Term>) {
        self.out.triples.push(Triple::new(s.clone(), p, o));
    }

    fn warn(&mut self, category: WarningCategory, message: String) {
        self.out.warnings.push(Warning { record: self.id.clone(), category, message });
    }

    /// Named resource at a pattern URL, typed and labelled.
    fn entity(&mut self, pattern: &str, name: &str, rule: &Rule) -> Option<Iri> {
        let segment = slug(name);
        if segment.is_empty() {
            return None;
        }
        let Some(node) = self.config.pattern_iri(pattern, &segment) else {
            self.warn(WarningCategory::UriEncoding, format!("no URL pattern for {pattern:?}"));
            return None;
        };
        if let Some(class) = &rule.class {
            self.add(&node, iri(rdf::TYPE), class.clone());
        }
        if let Some(class) = rule.iri_option("extra-class") {
            self.add(&node, iri(rdf::TYPE), class);
        }
        self.add(&node, schema_iri("name"), Literal::string(name));
        if let Some(p) = rule.iri_option("extra-name") {
            self.add(&node, p, Literal::string(name));
        }
        Some(node)
    }
}

fn schema_iri(local: &str) -> Iri {
    iri(&format!("{}{local}", schema::NS))
}

fn date_literal(value: &str) -> Literal {
    if is_xsd_date(value) {
        Literal::typed(value, iri(xsd::DATE))
    } else if is_gyear(value) {
        Literal::typed(value, iri(xsd::G_YEAR))
    } else {
        Literal::string(value)
    }
}

/// `Surname, Forename` with optional life dates.
fn is_personal_name(value: &str) -> bool {
    let (name, _) = split_life_dates(value);
    let mut parts = name.split(',');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) => {
            let ok = |s: &str| {
                let s = s.trim();
                !s.is_empty() && s.split_whitespace().count() <= 4 && s.chars().all(|c| c.is_alphabetic() || " .'-".contains(c))
            };
            ok(a) && ok(b)
        }
        _ => false,
    }
}

/// Years, decades and year ranges.
fn is_temporal(value: &str) -> bool {
    let digits = value.chars().filter(char::is_ascii_digit).count();
    digits >= 4 && value.chars().all(|c| c.is_ascii_digit() || " -/s?c.".contains(c))
}

fn record_id(record: &DcRecord) -> (String, bool) {
    let from_identifier = record
        .get("identifier")
        .iter()
        .filter_map(|v| v.trim().trim_end_matches('/').rsplit('/').next())
        .map(str::trim)
        .find(|s| !s.is_empty());
    match from_identifier {
        Some(id) => (id.to_string(), false),
        None => (format!("{:04}", record.source_ordinal), true),
    }
}

pub(super) fn transform(record: &DcRecord, config: &MappingConfig) -> Fragment {
    let (raw_id, synthesized) = record_id(record);
    let (segment, encoded) = encode_path_segment(&raw_id);
    let film = config.pattern_iri("film", &segment).unwrap_or_else(|| iri(&format!("{}{segment}", config.base_uri().as_str())));
    let mut cx = Ctx { config, id: raw_id.clone(), film: film.clone(), out: Fragment::default() };
    if synthesized {
        cx.warn(WarningCategory::SynthesizedId, format!("no identifier; using {raw_id}"));
    }
    if encoded {
        cx.warn(WarningCategory::UriEncoding, format!("identifier {raw_id:?} percent-encoded"));
    }
    for w in &record.warnings {
        cx.warn(WarningCategory::UnknownElement, w.clone());
    }

    let rules = &config.dc_rules;
    let mut typed = false;
    for rule in rules.rules_for("*") {
        if rule.handler == Handler::Constant {
            if let Some(class) = &rule.class {
                cx.add(&film, iri(rdf::TYPE), class.clone());
                typed = true;
            }
            if let Some(v) = rule.option("value") {
                cx.add(&film, rule.predicate.clone(), Literal::string(v));
            }
        }
    }
    if !typed {
        cx.add(&film, iri(rdf::TYPE), schema_iri("CreativeWork"));
    }

    for (element, values) in &record.elements {
        let matching: alloc::vec::Vec<&Rule> = rules.rules_for(element).collect();
        if matching.is_empty() {
            cx.warn(WarningCategory::UnknownElement, format!("no rule for element {element:?}"));
            continue;
        }
        for value in values {
            let v = value.trim();
            if v.is_empty() {
                continue;
            }
            for rule in &matching {
                apply(&mut cx, rule, v);
            }
        }
    }
    cx.out
}

fn apply(cx: &mut Ctx, rule: &Rule, v: &str) {
    let film = cx.film.clone();
    match rule.handler {
        Handler::Name | Handler::Literal => cx.add(&film, rule.predicate.clone(), Literal::string(v)),
        Handler::Date => cx.add(&film, rule.predicate.clone(), date_literal(v)),
        Handler::Creator => {
            let link = rule.iri_option("link");
            match link.filter(|_| is_personal_name(v)) {
                Some(link) => {
                    if let Some(person) = cx.entity("author", v, rule) {
                        cx.add(&film, link, person);
                    }
                }
                None => cx.add(&film, rule.predicate.clone(), Literal::string(v)),
            }
        }
        Handler::Coverage => match rule.iri_option("temporal").filter(|_| is_temporal(v)) {
            Some(p) => cx.add(&film, p, Literal::string(v)),
            None => {
                if let Some(place) = cx.entity("location", v, rule) {
                    cx.add(&film, rule.predicate.clone(), place);
                }
            }
        },
        Handler::Entity => {
            let pattern = rule.option("pattern").unwrap_or("organisation").to_string();
            if let Some(node) = cx.entity(&pattern, v, rule) {
                cx.add(&film, rule.predicate.clone(), node);
            }
        }
        Handler::Rights => match rule.iri_option("iri").zip(Iri::new(v).ok().filter(|i| i.starts_with("http"))) {
            Some((p, target)) => cx.add(&film, p, target),
            None => cx.add(&film, rule.predicate.clone(), Literal::string(v)),
        },
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn name_shapes() {
        assert!(is_personal_name("Russell, Jim"));
        assert!(is_personal_name("Stevenson, Robert Louis, 1850-1894"));
        assert!(!is_personal_name("Glasgow Corporation Education Department"));
        assert!(!is_personal_name("Films of Scotland, Glasgow, Scotland"));
    }

    #[test]
    fn temporal_shapes() {
        assert!(is_temporal("1950s"));
        assert!(is_temporal("1930-1939"));
        assert!(!is_temporal("Glasgow"));
        assert!(!is_temporal("12"));
    }
}
