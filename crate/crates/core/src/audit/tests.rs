use super::*;
use crate::ingest::DcRecord;
use crate::mapping::transform_dc_record;
use crate::namespace::schema;
use crate::publish::{generate_void, VoidMetadata};
use crate::term::Literal;
use alloc::collections::BTreeSet;
use alloc::vec;
use proptest::prelude::*;

fn film_graph() -> Graph {
    let mut g = Graph::new();
    for (i, title) in ["Glasgow Today", "Seawards the Great Ships", "Highland Doctor"].iter().enumerate() {
        let mut r = DcRecord::new(i + 1);
        r.push("identifier", alloc::format!("https://movingimage.nls.uk/film/{:04}", i + 1));
        r.push("title", *title);
        r.push("creator", "Russell, Jim");
        r.push("coverage", "Glasgow");
        r.push("date", "1950");
        g.extend_from(&transform_dc_record(&r, &MappingConfig::default()).to_graph());
    }
    g
}

fn void_for(g: &Graph) -> Graph {
    let meta = VoidMetadata {
        title: "Films".into(),
        license: Some(iri("https://creativecommons.org/publicdomain/mark/1.0/")),
        publisher: Some(iri("http://example.org/NLS")),
        sources: vec![iri("https://data.nls.uk/data/metadata-collections/moving-image-archive/")],
        modified: Some("2022-11-09".into()),
        features: vec![Serialization::Turtle],
        data_dumps: vec![iri("http://example.org/dump.ttl")],
        ..Default::default()
    };
    generate_void(g, &meta, &iri("http://example.org/")).unwrap()
}

struct AllOk;

impl LinkProber for AllOk {
    fn probe_all(&self, urls: &[String]) -> Vec<ProbeOutcome> {
        urls.iter().map(|u| ProbeOutcome::status(u, 200)).collect()
    }
}

#[test]
fn catalogue_shape() {
    let ids: BTreeSet<&str> = CATALOGUE.iter().map(|c| c.id).collect();
    assert_eq!(ids.len(), 35);
    let dims: BTreeSet<Dimension> = CATALOGUE.iter().map(|c| c.dimension).collect();
    assert_eq!(dims.len(), 11);
    let per_dim: Vec<usize> = Dimension::ALL.iter().map(|d| CATALOGUE.iter().filter(|c| c.dimension == *d).count()).collect();
    assert_eq!(per_dim, [4, 3, 3, 1, 3, 3, 4, 4, 7, 1, 2]);
    for c in &CATALOGUE {
        assert!(c.id.starts_with(|ch: char| ch.is_ascii_lowercase()));
    }
}

#[test]
fn profile_scores() {
    let g = film_graph();
    let v = void_for(&g);
    let report = evaluate(&g, &AuditConfig::default(), AuditInputs { metadata: Some(&v), ..Default::default() }).unwrap();
    assert_eq!(report.criteria.len(), 35);
    let expect = [
        ("accessibility.sparql_endpoint", 0.0),
        ("accessibility.dereferencing", 0.0),
        ("accessibility.content_negotiation", 0.0),
        ("licensing.machine_readable", 1.0),
        ("interoperability.avoid_blank_nodes", 1.0),
        ("accessibility.rdf_export", 1.0),
        ("timeliness.frequency", 0.5),
        ("interoperability.several_formats", 0.5),
        ("trustworthiness.dataset_level", 1.0),
        ("trustworthiness.statement_level", 0.0),
        ("ease_of_understanding.multilingual_labels", 0.0),
        ("ease_of_understanding.self_describing_uris", 1.0),
        ("accuracy.syntactic_validity_documents", 1.0),
        ("consistency.class_constraints", 1.0),
    ];
    for (id, want) in expect {
        assert_eq!(report.score(id), Some(want), "{id}");
    }
    assert_eq!(report.get("completeness.schema").unwrap().status, Status::NotEvaluated);
    assert_eq!(report.get("interlinking.external_uri_validity").unwrap().status, Status::Skipped);
    // Creators without links to external repositories leave the rate at 0.
    assert_eq!(report.score("interlinking.sameas_rate"), Some(0.0));
}

#[test]
fn missing_license_scores_zero() {
    let g = film_graph();
    let report = evaluate(&g, &AuditConfig::default(), AuditInputs::default()).unwrap();
    assert_eq!(report.score("licensing.machine_readable"), Some(0.0));
    assert_eq!(report.score("accessibility.metadata"), Some(0.0));
    assert_eq!(report.score("timeliness.frequency"), Some(0.0));
}

#[test]
fn license_literal_is_not_machine_readable() {
    let g = film_graph();
    let mut v = Graph::new();
    let ds = iri("http://example.org/dataset");
    v.insert(Triple::new(ds.clone(), iri(rdf::TYPE), iri(void::DATASET)));
    v.insert(Triple::new(ds, iri(dcterms::LICENSE), Literal::string("CC0")));
    let report = evaluate(&g, &AuditConfig::default(), AuditInputs { metadata: Some(&v), ..Default::default() }).unwrap();
    assert_eq!(report.score("licensing.machine_readable"), Some(0.0));
}

#[test]
fn empty_graph_rejected() {
    assert!(matches!(evaluate(&Graph::new(), &AuditConfig::default(), AuditInputs::default()), Err(AuditError::EmptyGraph)));
}

#[test]
fn declared_overrides() {
    let mut c = AuditConfig::default();
    c.declare("accessibility.sparql_endpoint", 1.0).unwrap();
    assert!(c.declare("licensing.machine_readable", 1.0).is_err());
    assert!(c.declare("relevancy.ranking", 1.5).is_err());
    assert!(c.declare("nope", 0.0).is_err());
    let report = evaluate(&film_graph(), &c, AuditInputs::default()).unwrap();
    assert_eq!(report.score("accessibility.sparql_endpoint"), Some(1.0));
}

#[test]
fn reserved_base_never_probed() {
    struct Panics;
    impl LinkProber for Panics {
        fn probe_all(&self, urls: &[String]) -> Vec<ProbeOutcome> {
            assert!(urls.iter().all(|u| !u.starts_with("http://example.org/")), "probed {urls:?}");
            urls.iter().map(|u| ProbeOutcome::status(u, 200)).collect()
        }
    }
    let g = film_graph();
    let report = evaluate(&g, &AuditConfig::default(), AuditInputs { prober: Some(&Panics), ..Default::default() }).unwrap();
    assert_eq!(report.score("accessibility.dereferencing"), Some(0.0));
    assert_eq!(report.score("accessibility.repository_availability"), Some(0.0));
    assert_eq!(report.get("interlinking.external_uri_validity").unwrap().status, Status::Scored);
}

#[test]
fn resolvable_base_is_probed() {
    let mapping = MappingConfig::default().with_base_uri("https://data.nls.uk/").unwrap();
    let g = film_graph();
    let mut moved = Graph::new();
    for t in g.iter() {
        let s = t.subject.to_string().replace("http://example.org/", "https://data.nls.uk/");
        let s = iri(s.trim_matches(|c| c == '<' || c == '>'));
        moved.insert(Triple::new(s, t.predicate_iri().clone(), t.object.clone()));
    }
    let config = AuditConfig::from_mapping(&mapping);
    let report = evaluate(&moved, &config, AuditInputs { prober: Some(&AllOk), ..Default::default() }).unwrap();
    assert_eq!(report.score("accessibility.dereferencing"), Some(1.0));
    let none = evaluate(&moved, &config, AuditInputs::default()).unwrap();
    assert_eq!(none.get("accessibility.dereferencing").unwrap().status, Status::Skipped);
}

#[test]
fn blank_nodes_and_reification() {
    let mut g = film_graph();
    let n = g.len();
    let b = crate::term::BlankNode::new("b0").unwrap();
    g.insert(Triple::new(iri("http://example.org/film/0001"), iri("https://schema.org/about"), Term::BlankNode(b)));
    let report = evaluate(&g, &AuditConfig::default(), AuditInputs::default()).unwrap();
    let oracle = 1.0 - 1.0 / (n + 1) as f64;
    assert!((report.score("interoperability.avoid_blank_nodes").unwrap() - oracle).abs() < 1e-12);
}

#[test]
fn statement_level_provenance() {
    let mut g = film_graph();
    let st = iri("http://example.org/st/1");
    g.insert(Triple::new(st.clone(), iri(rdf::TYPE), iri(rdf::STATEMENT)));
    g.insert(Triple::new(st.clone(), iri(dcterms::MODIFIED), Literal::typed("2022-11-09", iri(crate::namespace::xsd::DATE))));
    let v = void_for(&g);
    let r = evaluate(&g, &AuditConfig::default(), AuditInputs { metadata: Some(&v), ..Default::default() }).unwrap();
    assert_eq!(r.score("trustworthiness.statement_level"), Some(1.0));
    assert_eq!(r.score("timeliness.modification_date_statements"), Some(1.0));
    assert_eq!(r.score("timeliness.frequency"), Some(1.0));
}

#[test]
fn multilingual_labels() {
    let mut g = film_graph();
    let f = iri("http://example.org/film/0001");
    g.insert(Triple::new(f.clone(), iri(rdfs::LABEL), Literal::lang("Glasgow Today", "en").unwrap()));
    let one = evaluate(&g, &AuditConfig::default(), AuditInputs::default()).unwrap();
    assert_eq!(one.score("ease_of_understanding.multilingual_labels"), Some(0.0));
    g.insert(Triple::new(f, iri(rdfs::LABEL), Literal::lang("Glaschu an-diugh", "gd").unwrap()));
    let two = evaluate(&g, &AuditConfig::default(), AuditInputs::default()).unwrap();
    assert_eq!(two.score("ease_of_understanding.multilingual_labels"), Some(1.0));
}

#[test]
fn gold_enables_completeness() {
    let g = film_graph();
    let gold = GoldStandard::shipped().with_population("Jim Russell\nNorman McLaren\n").unwrap();
    let r = evaluate(&g, &AuditConfig::default(), AuditInputs { gold: Some(&gold), ..Default::default() }).unwrap();
    assert_eq!(r.score("completeness.population"), Some(0.5));
    let col = r.score("completeness.column").unwrap();
    assert!(col > 0.0 && col < 1.0);
}

#[test]
fn local_vocabulary() {
    let mut g = film_graph();
    let p = iri("http://example.org/ontology/shotOn");
    g.insert(Triple::new(iri("http://example.org/film/0001"), p.clone(), Literal::string("35mm")));
    let r = evaluate(&g, &AuditConfig::default(), AuditInputs::default()).unwrap();
    assert_eq!(r.score("interoperability.proprietary_vocabulary"), Some(0.0));
    let ext = r.score("interoperability.external_vocabulary").unwrap();
    assert!((ext - (1.0 - 1.0 / g.len() as f64)).abs() < 1e-12);
    g.insert(Triple::new(p, iri(rdfs::SUB_PROPERTY_OF), iri("https://schema.org/material")));
    let r = evaluate(&g, &AuditConfig::default(), AuditInputs::default()).unwrap();
    assert_eq!(r.score("interoperability.proprietary_vocabulary"), Some(1.0));
}

#[test]
fn uri_patterns() {
    let p = UriPatterns::from_mapping(&MappingConfig::default());
    assert!(p.matches("http://example.org/9923749153804341#Agent100-12"));
    assert!(p.matches("http://example.org/9944730413804341#Work"));
    assert!(p.matches("http://example.org/(filmRef)0002#Instance"));
    assert!(p.matches("http://example.org/film/0001"));
    assert!(p.matches("http://example.org/location/fort-william"));
    assert!(!p.matches("http://example.org/n123"));
    assert!(!p.matches("http://example.org/9923#agent"));
    assert!(!p.matches("http://example.org/9923#Agent100-"));
    assert!(!p.matches("http://other.org/film/0001"));
}

#[test]
fn text_table_layout() {
    let g = film_graph();
    let r = evaluate(&g, &AuditConfig::default(), AuditInputs::default()).unwrap();
    let t = r.to_text_table();
    let lines: Vec<&str> = t.lines().collect();
    assert_eq!(lines.len(), 37);
    assert!(lines[0].starts_with("Dimension"));
    assert!(lines[2].starts_with("Accuracy"));
    assert!(lines[3].starts_with(' '));
    assert!(t.contains("skipped"));
    assert!(t.contains("n/e"));
    assert_eq!(format_score(0.5), "0.5");
    assert_eq!(format_score(2.0 / 3.0), "0.667");
    assert_eq!(format_score(1.0), "1");
    assert_eq!(format_score(0.0), "0");
}

#[test]
fn rollups_are_means() {
    let g = film_graph();
    let r = evaluate(&g, &AuditConfig::default(), AuditInputs::default()).unwrap();
    for roll in &r.rollups {
        let s: Vec<f64> = r.criteria.iter().filter(|c| c.dimension == roll.dimension).filter_map(|c| c.score).collect();
        assert_eq!(roll.evaluated, s.len());
        if s.is_empty() {
            assert_eq!(roll.score, None);
        } else {
            assert!((roll.score.unwrap() - s.iter().sum::<f64>() / s.len() as f64).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn scores_in_range(
        triples in proptest::collection::vec((0u8..6, 0u8..4, 0u8..8, any::<bool>()), 1..40),
        seed in any::<u64>(),
    ) {
        let mut g = Graph::new();
        for (s, p, o, lit) in triples {
            let subj = iri(&alloc::format!("http://example.org/r{s}#Work"));
            let pred = match p {
                0 => iri(rdf::TYPE),
                1 => iri(rdfs::LABEL),
                2 => iri(owl::SAME_AS),
                _ => iri(&alloc::format!("{}name", schema::NS)),
            };
            let obj: Term = if lit && p != 0 {
                Term::Literal(Literal::string(alloc::format!("v{o}")))
            } else if o % 2 == 0 {
                Term::Iri(iri(&alloc::format!("http://www.wikidata.org/entity/Q{o}")))
            } else {
                Term::Iri(iri(&alloc::format!("http://example.org/r{o}#Work")))
            };
            g.insert(Triple::new(subj, pred, obj));
        }
        let config = AuditConfig { seed, ..AuditConfig::default() };
        let r = evaluate(&g, &config, AuditInputs { prober: Some(&AllOk), ..Default::default() }).unwrap();
        let ids: Vec<&str> = r.criteria.iter().map(|c| c.id.as_str()).collect();
        let want: Vec<&str> = CATALOGUE.iter().map(|c| c.id).collect();
        prop_assert_eq!(ids, want);
        for c in &r.criteria {
            if let Some(s) = c.score {
                prop_assert!((0.0..=1.0).contains(&s), "{} = {}", c.id, s);
            }
            prop_assert_eq!(c.score.is_some(), c.status == Status::Scored);
        }
        let again = evaluate(&g, &config, AuditInputs { prober: Some(&AllOk), ..Default::default() }).unwrap();
        prop_assert_eq!(again, r);
    }
}
