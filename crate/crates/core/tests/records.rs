use lodforge_core::audit::{evaluate, AuditConfig, AuditInputs, CATALOGUE};
use lodforge_core::canon::isomorphic;
use lodforge_core::ingest::{MarcRecord, SourceRecord, Subfield};
use lodforge_core::mapping::{transform_dump, transform_marc_record, MappingConfig};
use lodforge_core::turtle::{parse_turtle, to_turtle};
use lodforge_core::{Graph, Iri, Term};
use proptest::prelude::*;

fn book(id: &str, author: &str, title: &str, extra_contributor: Option<&str>) -> SourceRecord {
    let mut r = MarcRecord::new("00000nam a2200000 i 4500");
    r.push_control("001", id).unwrap();
    r.push_control("008", "850101s1885    stka          000 1 eng d").unwrap();
    r.push_data("100", '1', ' ', vec![Subfield::new('a', author), Subfield::new('e', "author.")]).unwrap();
    r.push_data("245", '1', '0', vec![Subfield::new('a', title)]).unwrap();
    if let Some(c) = extra_contributor {
        r.push_data("700", '1', ' ', vec![Subfield::new('a', c), Subfield::new('e', "illustrator.")]).unwrap();
    }
    SourceRecord::Marc(r)
}

fn config() -> MappingConfig {
    MappingConfig::default().with_base_uri("http://example.org/").unwrap()
}

#[test]
fn dump_is_union_of_record_fragments() {
    let records = [
        book("1001", "Stevenson, Robert Louis", "Kidnapped", None),
        book("1002", "Scott, Walter", "Waverley", Some("Doyle, Richard")),
    ];
    let cfg = config();
    let (graph, report) = transform_dump(&records, &cfg);
    assert_eq!((report.processed, report.emitted, report.skipped), (2, 2, 0));
    let mut union = Graph::new();
    for r in &records {
        let SourceRecord::Marc(m) = r else { unreachable!() };
        union.extend(transform_marc_record(m, &cfg).unwrap().triples);
    }
    assert_eq!(graph, union);
    assert!(graph.has_subject(&Term::Iri(Iri::new("http://example.org/1002#Agent700-5").unwrap())));
}

#[test]
fn mapped_graph_survives_turtle() {
    let records = [book("2001", "Burns, Robert", "Poems, \"chiefly\" in the Scottish dialect", None)];
    let (graph, _) = transform_dump(&records, &config());
    let back = parse_turtle(&to_turtle(&graph)).unwrap();
    assert!(isomorphic(&graph, &back));
}

#[test]
fn audit_reports_every_criterion() {
    let records = [book("3001", "Spark, Muriel", "The Comforters", None)];
    let (graph, _) = transform_dump(&records, &config());
    let report = evaluate(&graph, &AuditConfig::default(), AuditInputs::default()).unwrap();
    assert_eq!(report.criteria.len(), CATALOGUE.len());
}

#[test]
fn audit_rejects_empty_graph() {
    assert!(evaluate(&Graph::new(), &AuditConfig::default(), AuditInputs::default()).is_err());
}

proptest! {
    #[test]
    fn record_order_does_not_matter(
        titles in proptest::collection::vec("[A-Za-z ,.'\"]{1,24}", 1..6),
        rotate in 0usize..6,
    ) {
        let records: Vec<SourceRecord> = titles
            .iter()
            .enumerate()
            .map(|(i, t)| book(&format!("{}", 4000 + i), "Hogg, James", t, (i % 2 == 0).then_some("Cruikshank, George")))
            .collect();
        let mut shuffled = records.clone();
        let n = shuffled.len();
        shuffled.rotate_left(rotate % n);
        shuffled.reverse();
        let cfg = config();
        prop_assert_eq!(transform_dump(&records, &cfg).0, transform_dump(&shuffled, &cfg).0);
    }
}
