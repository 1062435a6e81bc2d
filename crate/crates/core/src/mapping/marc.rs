//! MARC → BIBFRAME.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::enrich::RelatorResolution;
use crate::ingest::{DataField, MarcRecord};
use crate::namespace::{bf, bflc, rdf, rdfs, xsd};
use crate::term::{iri, Iri, Literal, Term, Triple};
use crate::text::{is_gyear, is_xsd_date, trim_terminal};

use super::{mint_uri, Fragment, Handler, MappingConfig, MappingError, Rule, Selector, Warning, WarningCategory};

fn bf_iri(local: &str) -> Iri {
    iri(&format!("{}{local}", bf::NS))
}

struct Ctx<'a> {
    config: &'a MappingConfig,
    record: &'a MarcRecord,
    id: String,
    work: Iri,
    instance: Iri,
    primary: Option<Iri>,
    languages: BTreeSet<String>,
    out: Fragment,
}

impl<'a> Ctx<'a> {
    fn mint(&mut self, kind: &str, tag: &str, ordinal: u32) -> Iri {
        mint_uri(self.config, kind, &self.id, Some((tag, ordinal))).expect("kind and id validated").0
    }

    fn add(&mut self, s: &Iri, p: Iri, o: impl Into<Term>) {
        self.out.triples.push(Triple::new(s.clone(), p, o));
    }

    fn typed(&mut self, s: &Iri, class: &Iri) {
        self.add(s, iri(rdf::TYPE), class.clone());
    }

    fn label(&mut self, s: &Iri, text: &str) {
        self.add(s, iri(rdfs::LABEL), Literal::string(text));
    }

    fn warn(&mut self, category: WarningCategory, message: String) {
        self.out.warnings.push(Warning { record: self.id.clone(), category, message });
    }

    /// Owners named by the rule's `node` option (Work when absent).
    fn owners(&self, rule: &Rule) -> Vec<Iri> {
        match rule.option("node") {
            Some("instance") => alloc::vec![self.instance.clone()],
            Some("both") => alloc::vec![self.work.clone(), self.instance.clone()],
            _ => alloc::vec![self.work.clone()],
        }
    }

    fn fields(&self, rule: &Rule) -> Vec<&'a DataField> {
        let record = self.record;
        match &rule.selector {
            Selector::Field(tag) | Selector::Subfield(tag, _) => record.fields(tag).collect(),
            Selector::Positions(..) => Vec::new(),
        }
    }

    /// Raw values a rule selects: `(value, tag, ordinal)`.
    fn values(&self, rule: &Rule) -> Vec<(String, String, u32)> {
        match &rule.selector {
            Selector::Positions(tag, a, b) => self
                .record
                .control(tag)
                .and_then(|c| {
                    let chars: Vec<char> = c.value.chars().collect();
                    (chars.len() > *b).then(|| (chars[*a..=*b].iter().collect(), c.tag.clone(), c.ordinal))
                })
                .into_iter()
                .collect(),
            Selector::Subfield(tag, code) => self
                .record
                .fields(tag)
                .flat_map(|f| f.subfields_of(*code).map(move |v| (v.to_string(), f.tag.clone(), f.ordinal)))
                .collect(),
            Selector::Field(tag) => self
                .record
                .control(tag)
                .map(|c| (c.value.clone(), c.tag.clone(), c.ordinal))
                .into_iter()
                .collect(),
        }
    }
}

fn date_literal(value: &str) -> Literal {
    if is_gyear(value) {
        Literal::typed(value, iri(xsd::G_YEAR))
    } else if is_xsd_date(value) {
        Literal::typed(value, iri(xsd::DATE))
    } else {
        Literal::string(value)
    }
}

fn clean(value: &str) -> &str {
    trim_terminal(value).trim_start_matches('[').trim_end_matches(']').trim()
}

fn is_fill(value: &str) -> bool {
    value.chars().all(|c| c == ' ' || c == '|' || c == '#')
}

pub(super) fn transform(record: &MarcRecord, config: &MappingConfig, ordinal: usize) -> Result<Fragment, MappingError> {
    let (raw_id, id_tag, id_ordinal) = record
        .identifier(&config.id_field)
        .ok_or_else(|| MappingError::MissingId { ordinal, field: config.id_field.clone() })?;
    let (work, encoded) = mint_uri(config, "Work", raw_id, None)?;
    let (instance, _) = mint_uri(config, "Instance", raw_id, None)?;
    let mut cx = Ctx {
        config,
        record,
        id: raw_id.to_string(),
        work,
        instance,
        primary: None,
        languages: BTreeSet::new(),
        out: Fragment::default(),
    };
    if encoded {
        cx.warn(WarningCategory::UriEncoding, format!("record id {raw_id:?} percent-encoded in IRIs"));
    }

    let (work, instance) = (cx.work.clone(), cx.instance.clone());
    cx.typed(&work, &bf_iri("Work"));
    if let Some(sub) = record.record_type().bibframe_class() {
        cx.typed(&work, &bf_iri(sub));
    }
    cx.typed(&instance, &bf_iri("Instance"));
    cx.add(&work, bf_iri("hasInstance"), instance.clone());
    cx.add(&instance, bf_iri("instanceOf"), work.clone());

    let admin = cx.mint("AdminMetadata", id_tag, id_ordinal);
    cx.typed(&admin, &bf_iri("AdminMetadata"));
    cx.add(&work, bf_iri("adminMetadata"), admin.clone());
    cx.label(&admin, &format!("Administrative metadata for record {raw_id}"));
    let source = record.control("003").map(|c| c.value.trim().to_string()).filter(|s| !s.is_empty());
    let source = source.unwrap_or_else(|| config.admin_source.clone());
    cx.add(&admin, bf_iri("source"), Literal::string(source));
    cx.add(&admin, bf_iri("identifiedBy"), Literal::string(raw_id));
    match &config.admin_date {
        Some(d) if is_xsd_date(d) => cx.add(&admin, bf_iri("generationDate"), Literal::typed(d.as_str(), iri(xsd::DATE))),
        Some(d) => cx.warn(WarningCategory::AdminDate, format!("admin date {d:?} is not an xsd:date; omitted")),
        None => {}
    }

    let rules = &config.marc_rules.rules;
    cx.primary = rules
        .iter()
        .filter(|r| r.handler == Handler::Contribution && r.flag("primary"))
        .flat_map(|r| record.fields(r.selector.tag()).map(|f| (f.tag.clone(), f.ordinal)).collect::<Vec<_>>())
        .min_by_key(|(_, ord)| *ord)
        .map(|(tag, ord)| cx.mint("Contribution", &tag, ord));

    let mut labelled = false;
    for rule in rules {
        match rule.handler {
            Handler::Title => labelled |= title(&mut cx, rule, !labelled),
            Handler::Contribution => contribution(&mut cx, rule),
            Handler::Hub => hub(&mut cx, rule),
            Handler::Language => vocabulary(&mut cx, rule, true),
            Handler::Geographic => vocabulary(&mut cx, rule, false),
            Handler::OriginDate => origin_date(&mut cx, rule),
            Handler::Provision => provision(&mut cx, rule),
            Handler::Subject => subject(&mut cx, rule),
            Handler::Identifier => identifier(&mut cx, rule),
            Handler::Item => item(&mut cx, rule),
            Handler::Literal => literal(&mut cx, rule),
            _ => {}
        }
    }
    if !labelled {
        let fallback = format!("Record {raw_id}");
        cx.label(&work, &fallback);
        cx.label(&instance, &fallback);
    }
    Ok(cx.out)
}

/// Returns whether the Work and Instance received a label.
fn title(cx: &mut Ctx, rule: &Rule, label_owners: bool) -> bool {
    let main_code = rule.option("main").and_then(|c| c.chars().next()).unwrap_or('a');
    let sub_code = rule.option("sub").and_then(|c| c.chars().next());
    let mut labelled = false;
    for f in cx.fields(rule) {
        let main = f.subfield(main_code).map(clean).unwrap_or_default().to_string();
        if main.is_empty() {
            cx.warn(WarningCategory::EmptyValue, format!("{} at position {} has no main title", f.tag, f.ordinal));
            continue;
        }
        let node = cx.mint("Title", &f.tag, f.ordinal);
        if let Some(class) = &rule.class {
            cx.typed(&node, class);
        }
        cx.add(&node, bf_iri("mainTitle"), Literal::string(main.as_str()));
        if let Some(sub) = sub_code.and_then(|c| f.subfield(c)).map(clean).filter(|s| !s.is_empty()) {
            cx.add(&node, bf_iri("subtitle"), Literal::string(sub));
        }
        cx.label(&node, &main);
        for owner in cx.owners(rule) {
            cx.add(&owner, rule.predicate.clone(), node.clone());
            if label_owners && !labelled {
                cx.label(&owner, &main);
            }
        }
        labelled = true;
    }
    labelled
}

fn contribution(cx: &mut Ctx, rule: &Rule) {
    let codes = rule.codes("abcqd");
    let agent_class = rule.iri_option("agent");
    for f in cx.fields(rule) {
        let name = trim_terminal(&f.join(&codes)).to_string();
        if name.is_empty() {
            cx.warn(WarningCategory::EmptyValue, format!("{} at position {} has no name", f.tag, f.ordinal));
            continue;
        }
        let contrib = cx.mint("Contribution", &f.tag, f.ordinal);
        let agent = cx.mint("Agent", &f.tag, f.ordinal);
        if let Some(class) = &rule.class {
            cx.typed(&contrib, class);
        }
        if rule.flag("primary") && cx.primary.as_ref() == Some(&contrib) {
            cx.typed(&contrib, &iri(&format!("{}PrimaryContribution", bflc::NS)));
        }
        cx.label(&contrib, &name);
        cx.add(&cx.work.clone(), rule.predicate.clone(), contrib.clone());
        cx.add(&contrib, bf_iri("agent"), agent.clone());
        cx.typed(&agent, &bf_iri("Agent"));
        if let Some(class) = &agent_class {
            cx.typed(&agent, class);
        }
        cx.label(&agent, &name);

        let terms: Vec<String> = f.subfields_of('e').chain(f.subfields_of('4')).map(|s| s.to_string()).collect();
        let mut role_node: Option<Iri> = None;
        for term in terms {
            if trim_terminal(&term).is_empty() {
                continue;
            }
            match cx.config.vocabularies.resolve_relator(&term) {
                RelatorResolution::Iri(role) => cx.add(&contrib, bf_iri("role"), role),
                RelatorResolution::Text(text) => {
                    cx.warn(WarningCategory::Relator, format!("relator {text:?} not in table; kept as text"));
                    let node = match &role_node {
                        Some(n) => n.clone(),
                        None => {
                            let n = cx.mint("Role", &f.tag, f.ordinal);
                            cx.typed(&n, &bf_iri("Role"));
                            cx.add(&contrib, bf_iri("role"), n.clone());
                            role_node = Some(n.clone());
                            n
                        }
                    };
                    cx.label(&node, &text);
                }
            }
        }
    }
}

fn hub(cx: &mut Ctx, rule: &Rule) {
    let codes = rule.codes("anplkfs");
    for f in cx.fields(rule) {
        let uniform = trim_terminal(&f.join(&codes)).to_string();
        if uniform.is_empty() {
            cx.warn(WarningCategory::EmptyValue, format!("{} at position {} has no uniform title", f.tag, f.ordinal));
            continue;
        }
        let hub = cx.mint("Hub", &f.tag, f.ordinal);
        let title = cx.mint("Title", &f.tag, f.ordinal);
        if let Some(class) = &rule.class {
            cx.typed(&hub, class);
        }
        cx.label(&hub, &uniform);
        cx.add(&hub, bf_iri("title"), title.clone());
        cx.typed(&title, &bf_iri("Title"));
        cx.add(&title, bf_iri("mainTitle"), Literal::string(uniform.as_str()));
        cx.label(&title, &uniform);
        cx.add(&cx.work.clone(), rule.predicate.clone(), hub.clone());
        if let Some(primary) = cx.primary.clone() {
            cx.add(&hub, bf_iri("contribution"), primary);
        }
    }
}

/// Language and geographic codes. Codes outside the tables are dropped
/// with a warning so no malformed vocabulary IRI is ever emitted.
fn vocabulary(cx: &mut Ctx, rule: &Rule, language: bool) {
    let mut codes = Vec::new();
    for (value, tag, ordinal) in cx.values(rule) {
        if is_fill(&value) {
            continue;
        }
        let trimmed = value.trim();
        let chunked = language
            && matches!(rule.selector, Selector::Subfield(..))
            && trimmed.len() > 3
            && trimmed.len() % 3 == 0
            && trimmed.bytes().all(|b| b.is_ascii_alphabetic());
        if chunked {
            codes.extend(trimmed.as_bytes().chunks(3).map(|c| (String::from_utf8_lossy(c).into_owned(), value.clone(), tag.clone(), ordinal)));
        } else {
            codes.push((value.clone(), value, tag, ordinal));
        }
    }
    for (code, raw, tag, ordinal) in codes {
        let resolved = if language {
            cx.config.vocabularies.resolve_language(&code)
        } else {
            cx.config.vocabularies.resolve_geographic_area(&code)
        };
        match resolved {
            Ok(target) => {
                if language && !cx.languages.insert(target.as_str().into()) {
                    continue;
                }
                for owner in cx.owners(rule) {
                    cx.add(&owner, rule.predicate.clone(), target.clone());
                }
            }
            Err(e) => cx.warn(WarningCategory::Vocabulary, format!("{tag} at position {ordinal}: {e} (value {raw:?})")),
        }
    }
}

fn origin_date(cx: &mut Ctx, rule: &Rule) {
    for (value, _, _) in cx.values(rule) {
        if is_fill(&value) {
            continue;
        }
        for owner in cx.owners(rule) {
            cx.add(&owner, rule.predicate.clone(), date_literal(value.trim()));
        }
    }
}

fn provision(cx: &mut Ctx, rule: &Rule) {
    for f in cx.fields(rule) {
        let subclass = match (f.tag.as_str(), f.indicator2) {
            ("264", '0') => "Production",
            ("264", '2') => "Distribution",
            ("264", '3') => "Manufacture",
            ("264", '4') => continue,
            _ => "Publication",
        };
        let summary = trim_terminal(&f.join(&['a', 'b', 'c'])).to_string();
        if summary.is_empty() {
            continue;
        }
        let node = cx.mint("ProvisionActivity", &f.tag, f.ordinal);
        if let Some(class) = &rule.class {
            cx.typed(&node, class);
        }
        cx.typed(&node, &bf_iri(subclass));
        cx.label(&node, &summary);
        for owner in cx.owners(rule) {
            cx.add(&owner, rule.predicate.clone(), node.clone());
        }
        if let Some(place) = f.subfield('a').map(clean).filter(|s| !s.is_empty()) {
            let p = cx.mint("Place", &f.tag, f.ordinal);
            cx.typed(&p, &bf_iri("Place"));
            cx.label(&p, place);
            cx.add(&node, bf_iri("place"), p);
        }
        if let Some(name) = f.subfield('b').map(clean).filter(|s| !s.is_empty()) {
            let a = cx.mint("Agent", &f.tag, f.ordinal);
            cx.typed(&a, &bf_iri("Agent"));
            cx.label(&a, name);
            cx.add(&node, bf_iri("agent"), a);
        }
        if let Some(date) = f.subfield('c').map(clean).filter(|s| !s.is_empty()) {
            cx.add(&node, bf_iri("date"), date_literal(date));
        }
    }
}

fn subject(cx: &mut Ctx, rule: &Rule) {
    let codes = rule.codes("avxyz");
    let Some(class) = rule.class.clone() else { return };
    let kind = class.local_name().to_string();
    for f in cx.fields(rule) {
        let parts: Vec<&str> = f
            .subfields
            .iter()
            .filter(|s| codes.contains(&s.code))
            .map(|s| trim_terminal(&s.value))
            .filter(|s| !s.is_empty())
            .collect();
        if parts.is_empty() {
            continue;
        }
        let label = parts.join("--");
        let node = cx.mint(&kind, &f.tag, f.ordinal);
        cx.typed(&node, &class);
        cx.label(&node, &label);
        for owner in cx.owners(rule) {
            cx.add(&owner, rule.predicate.clone(), node.clone());
        }
    }
}

fn identifier(cx: &mut Ctx, rule: &Rule) {
    let Some(class) = rule.class.clone() else { return };
    let kind = class.local_name().to_string();
    for (value, tag, ordinal) in cx.values(rule) {
        let Some(token) = value.split_whitespace().next() else { continue };
        let node = cx.mint(&kind, &tag, ordinal);
        cx.typed(&node, &class);
        cx.add(&node, iri(&format!("{}value", rdf::NS)), Literal::string(token));
        cx.label(&node, token);
        for owner in cx.owners(rule) {
            cx.add(&owner, rule.predicate.clone(), node.clone());
        }
    }
}

fn item(cx: &mut Ctx, rule: &Rule) {
    let codes = rule.codes("bh");
    for f in cx.fields(rule) {
        let node = cx.mint("Item", &f.tag, f.ordinal);
        if let Some(class) = &rule.class {
            cx.typed(&node, class);
        }
        let label = trim_terminal(&f.join(&codes)).to_string();
        let label = if label.is_empty() { format!("Item of record {}", cx.id) } else { label };
        cx.label(&node, &label);
        cx.add(&cx.instance.clone(), rule.predicate.clone(), node.clone());
        cx.add(&node, bf_iri("itemOf"), cx.instance.clone());
    }
}

fn literal(cx: &mut Ctx, rule: &Rule) {
    for (value, _, _) in cx.values(rule) {
        let v = trim_terminal(&value);
        if v.is_empty() {
            continue;
        }
        for owner in cx.owners(rule) {
            cx.add(&owner, rule.predicate.clone(), Literal::string(v));
        }
    }
}
