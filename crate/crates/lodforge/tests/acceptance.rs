//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::time::{Duration, Instant};

use common::{digests, fixture, lodforge, s, transformed};
use lodforge::config::SourceKind;
use lodforge::dump;
use lodforge::probe::HttpProber;
use lodforge::stub::StubServer;
use lodforge_core::audit::{
    check_links, completeness, detect_duplicate_agents, evaluate, mine_shapes, validate_shapes, AuditConfig,
    AuditInputs, Dimension, EvaluatorKind, GoldStandard, QualityReport, Status, CATALOGUE,
};
use lodforge_core::canon::{canonical_ntriples, isomorphic};
use lodforge_core::enrich::Vocabularies;
use lodforge_core::mapping::Serialization;
use lodforge_core::publish::{generate_void, VoidCounts, VoidMetadata};
use lodforge_core::query::{execute, parse_query};
use lodforge_core::term::{BlankNode, Iri, Literal, Subject, Term, Triple};
use lodforge_core::turtle::parse_turtle;
use lodforge_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

// 1
fn uri_minting() -> Outcome {
    let nbs = transformed("nbs10.xml", SourceKind::Marcxml);
    let film = transformed("filmref.xml", SourceKind::Marcxml);
    let mia = transformed("mia.xml", SourceKind::DublinCore);
    let expected = [
        (&nbs, "http://example.org/9923749153804341#Agent100-12"),
        (&nbs, "http://example.org/9923749153804341#Agent800-28"),
        (&nbs, "http://example.org/15726#Hub240-10"),
        (&nbs, "http://example.org/9944730413804341#Work"),
        (&film, "http://example.org/(filmRef)0002#Instance"),
        (&mia, "http://example.org/film/0001"),
    ];
    for (g, want) in expected {
        ensure(g.has_subject(&Term::Iri(iri(want))), || format!("{want} not minted"))?;
    }
    Ok(format!("{} attested IRIs minted", expected.len()))
}

// 2
fn stevenson_cluster() -> Outcome {
    let g = transformed("stevenson.xml", SourceKind::Marcxml);
    let report = detect_duplicate_agents(&g);
    ensure(report.clusters.len() == 1, || format!("{} clusters", report.clusters.len()))?;
    let got: BTreeSet<&str> = report.clusters[0].members.iter().map(String::as_str).collect();
    let want: BTreeSet<&str> = [
        "http://example.org/9929751083804341#Agent100-9",
        "http://example.org/9923749153804341#Agent100-12",
        "http://example.org/9923749153804341#Agent800-28",
        "http://example.org/9915244463804341#Agent100-13",
        "http://example.org/9944502973804341#Agent100-10",
    ]
    .into();
    ensure(got == want, || format!("cluster {got:?}"))?;
    Ok("one cluster of 5 agent IRIs".into())
}

/// Counts read straight off canonical N-Triples text.
fn scan_counts(nt: &str) -> (u64, u64, u64) {
    let mut classes = BTreeSet::new();
    let mut predicates = BTreeSet::new();
    let mut triples = 0;
    for line in nt.lines().filter(|l| !l.trim().is_empty()) {
        let (_subject, rest) = line.split_once(' ').unwrap();
        let (predicate, rest) = rest.split_once(' ').unwrap();
        let object = rest.strip_suffix(" .").unwrap();
        triples += 1;
        predicates.insert(predicate.to_owned());
        if predicate == "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>" {
            classes.insert(object.to_owned());
        }
    }
    (classes.len() as u64, predicates.len() as u64, triples)
}

const STATED_VOID: &str = r#"@prefix void: <http://rdfs.org/ns/void#> .
@prefix dcterms: <http://purl.org/dc/terms/> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
<http://example.org/dataset> a void:Dataset ;
    dcterms:title "Moving images" ;
    dcterms:license <https://creativecommons.org/publicdomain/mark/1.0/> ;
    dcterms:modified "2022-11-09"^^xsd:date ;
    void:dataDump <http://example.org/dump.ttl> ;
    void:classes 7 ;
    void:properties 23 ;
    void:triples 263476 ;
    void:exampleResource <https://example.org/film/0001> .
"#;

// 3
fn void_counts() -> Outcome {
    let meta = VoidMetadata {
        title: "Fixture".into(),
        license: Some(iri("https://creativecommons.org/publicdomain/zero/1.0/")),
        ..Default::default()
    };
    let graphs = [
        transformed("nbs10.xml", SourceKind::Marcxml),
        transformed("nbs100.xml", SourceKind::Marcxml),
        transformed("stevenson.xml", SourceKind::Marcxml),
        transformed("mia.xml", SourceKind::DublinCore),
        Graph::new(),
    ];
    for g in &graphs {
        let void = generate_void(g, &meta, &iri("http://example.org/")).map_err(|e| e.to_string())?;
        let text = dump::serialize(&void, Serialization::Turtle).map_err(|e| e.to_string())?;
        let back = parse_turtle(&text).map_err(|e| e.to_string())?;
        let c = VoidCounts::from_void(&back).ok_or("no counts in VoID")?;
        let oracle = scan_counts(&canonical_ntriples(g));
        ensure((c.classes, c.properties, c.triples) == oracle, || format!("VoID {c:?} vs scan {oracle:?}"))?;
    }
    let stated = parse_turtle(STATED_VOID).map_err(|e| e.to_string())?;
    for format in [Serialization::Turtle, Serialization::NTriples, Serialization::RdfXml] {
        let text = dump::serialize(&stated, format).map_err(|e| e.to_string())?;
        let back = dump::parse(&text, format, std::path::Path::new("stated")).map_err(|e| e.to_string())?;
        ensure(isomorphic(&stated, &back), || format!("{format:?} round trip changed the description"))?;
        let c = VoidCounts::from_void(&back).ok_or("counts lost")?;
        ensure((c.classes, c.properties, c.triples) == (7, 23, 263_476), || format!("{c:?}"))?;
    }
    Ok(format!("{} fixtures match the scan; 7/23/263476 survive 3 formats", graphs.len()))
}

fn random_graph(rng: &mut ChaCha8Rng, size: usize) -> Graph {
    let mut g = Graph::new();
    for _ in 0..size {
        let s = iri(&format!("http://example.org/s{}", rng.gen_range(0..30)));
        let p = iri(&format!("http://example.org/p{}", rng.gen_range(0..5)));
        let o: Term = if rng.gen_bool(0.5) {
            Term::Iri(iri(&format!("http://example.org/s{}", rng.gen_range(0..30))))
        } else {
            Term::Literal(Literal::string(format!("v{}", rng.gen_range(0..12))))
        };
        g.insert(Triple::new(s, p, o));
    }
    g
}

#[derive(Clone)]
enum Slot {
    Var(&'static str),
    Const(Term),
}

impl Slot {
    fn text(&self) -> String {
        match self {
            Slot::Var(v) => format!("?{v}"),
            Slot::Const(t) => t.to_string(),
        }
    }
}

fn random_slot(rng: &mut ChaCha8Rng, position: usize) -> Slot {
    const VARS: [&str; 3] = ["a", "b", "c"];
    if rng.gen_bool(0.65) {
        return Slot::Var(VARS[rng.gen_range(0..3)]);
    }
    match position {
        1 => Slot::Const(Term::Iri(iri(&format!("http://example.org/p{}", rng.gen_range(0..5))))),
        2 if rng.gen_bool(0.5) => Slot::Const(Term::Literal(Literal::string(format!("v{}", rng.gen_range(0..12))))),
        _ => Slot::Const(Term::Iri(iri(&format!("http://example.org/s{}", rng.gen_range(0..30))))),
    }
}

/// Nested-loop evaluation of a basic graph pattern with an optional
/// substring filter on one variable.
fn brute_force(
    triples: &[Triple],
    patterns: &[[Slot; 3]],
    filter: Option<(&str, &str)>,
    vars: &[&str],
) -> Vec<Vec<String>> {
    fn extend(
        triples: &[Triple],
        patterns: &[[Slot; 3]],
        binding: &BTreeMap<&'static str, Term>,
        out: &mut Vec<BTreeMap<&'static str, Term>>,
    ) {
        let Some((first, rest)) = patterns.split_first() else {
            out.push(binding.clone());
            return;
        };
        for t in triples {
            let values = [Term::from(t.subject.clone()), Term::Iri(t.predicate.clone()), t.object.clone()];
            let mut b = binding.clone();
            let ok = first.iter().zip(values).all(|(slot, value)| match slot {
                Slot::Const(c) => *c == value,
                Slot::Var(v) => match b.get(v) {
                    Some(bound) => *bound == value,
                    None => {
                        b.insert(v, value);
                        true
                    }
                },
            });
            if ok {
                extend(triples, rest, &b, out);
            }
        }
    }
    let mut solutions = Vec::new();
    extend(triples, patterns, &BTreeMap::new(), &mut solutions);
    let text = |t: &Term| match t {
        Term::Iri(i) => i.as_str().to_owned(),
        Term::Literal(l) => l.lexical().to_owned(),
        Term::BlankNode(b) => b.to_string(),
    };
    let mut rows: Vec<Vec<String>> = solutions
        .into_iter()
        .filter(|b| filter.is_none_or(|(v, needle)| b.get(v).is_some_and(|t| text(t).contains(needle))))
        .map(|b| vars.iter().map(|v| b[v].to_string()).collect())
        .collect();
    rows.sort();
    rows
}

// 4
fn query_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cases = 0;
    let mut total_rows = 0;
    while cases < 120 {
        let size = rng.gen_range(0..=1000);
        let g = random_graph(&mut rng, size);
        let triples = g.sorted_triples();
        let n = rng.gen_range(1..=3);
        let patterns: Vec<[Slot; 3]> =
            (0..n).map(|_| [random_slot(&mut rng, 0), random_slot(&mut rng, 1), random_slot(&mut rng, 2)]).collect();
        let vars: Vec<&str> = patterns
            .iter()
            .flatten()
            .filter_map(|s| match s {
                Slot::Var(v) => Some(*v),
                Slot::Const(_) => None,
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if vars.is_empty() {
            continue;
        }
        let filter = rng.gen_bool(0.3).then(|| (vars[rng.gen_range(0..vars.len())], ["1", "3", "s2"][rng.gen_range(0..3)]));
        let body: Vec<String> = patterns.iter().map(|p| format!("{} {} {} .", p[0].text(), p[1].text(), p[2].text())).collect();
        let filter_text = filter.map(|(v, needle)| format!("FILTER regex(str(?{v}), \"{needle}\")")).unwrap_or_default();
        let select: Vec<String> = vars.iter().map(|v| format!("?{v}")).collect();
        let text = format!("SELECT {} WHERE {{ {} {} }}", select.join(" "), body.join(" "), filter_text);
        let q = parse_query(&text).map_err(|e| format!("{text}: {e}"))?;
        let result = execute(&g, &q).map_err(|e| format!("{text}: {e}"))?;
        let mut got: Vec<Vec<String>> = result
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.as_ref().map(|t| t.to_string()).unwrap_or_default()).collect())
            .collect();
        got.sort();
        let want = brute_force(&triples, &patterns, filter, &vars);
        ensure(got == want, || format!("{text}: engine {} rows, oracle {} rows", got.len(), want.len()))?;
        total_rows += want.len();
        cases += 1;
    }
    let run = |dump_graph: &Graph, file: &str| -> Result<usize, String> {
        let q = parse_query(&fs::read_to_string(fixture(file)).unwrap()).map_err(|e| e.to_string())?;
        Ok(execute(dump_graph, &q).map_err(|e| e.to_string())?.len())
    };
    let contributors = run(&transformed("stevenson.xml", SourceKind::Marcxml), "listing_contributors.rq")?;
    ensure(contributors == 5, || format!("contributor query gave {contributors} rows"))?;
    let spanish = run(&transformed("nbs10.xml", SourceKind::Marcxml), "listing_language.rq")?;
    ensure(spanish == 4, || format!("language query gave {spanish} rows"))?;
    Ok(format!("{cases} random pairs agree ({total_rows} rows); listing shapes give 5 and 4 rows"))
}

// 5
fn shape_fixpoint() -> Outcome {
    let mut graphs = vec![
        ("nbs10", transformed("nbs10.xml", SourceKind::Marcxml)),
        ("nbs100", transformed("nbs100.xml", SourceKind::Marcxml)),
        ("stevenson", transformed("stevenson.xml", SourceKind::Marcxml)),
        ("filmref", transformed("filmref.xml", SourceKind::Marcxml)),
        ("mia", transformed("mia.xml", SourceKind::DublinCore)),
    ];
    graphs.push(("completeness", dump::load_dump(&fixture("completeness.ttl")).map_err(|e| e.to_string())?));
    let mut shapes = 0;
    for (name, g) in &graphs {
        let set = mine_shapes(g, 1.0);
        let report = validate_shapes(g, &set);
        ensure(report.rate() == 1.0, || format!("{name}: {} nonconforming nodes", report.nonconforming.len()))?;
        shapes += set.shapes.len();
    }
    Ok(format!("{} fixtures, {shapes} shapes, all conforming", graphs.len()))
}

// 6
fn report_totality() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("bundle");
    let run = lodforge(&["pipeline", "--config", s(&fixture("mia.toml")), "--out", s(&out)]);
    ensure(run.code == 0, || format!("pipeline exit {}: {}", run.code, run.stderr))?;
    let report: QualityReport =
        serde_json::from_str(&fs::read_to_string(out.join("quality.json")).unwrap()).map_err(|e| e.to_string())?;
    let ids: BTreeSet<&str> = report.criteria.iter().map(|c| c.id.as_str()).collect();
    ensure(ids.len() == report.criteria.len(), || "duplicate criterion ids".into())?;
    let catalogue: BTreeSet<&str> = CATALOGUE.iter().map(|c| c.id).collect();
    ensure(ids == catalogue, || "report and catalogue differ".into())?;
    let per_dim: Vec<usize> =
        Dimension::ALL.iter().map(|d| report.criteria.iter().filter(|c| c.dimension == *d).count()).collect();
    ensure(per_dim == [4, 3, 3, 1, 3, 3, 4, 4, 7, 1, 2], || format!("rows per dimension {per_dim:?}"))?;
    let kinds = [EvaluatorKind::Automatic, EvaluatorKind::Network, EvaluatorKind::Assisted, EvaluatorKind::Declared];
    ensure(report.criteria.iter().all(|c| kinds.contains(&c.kind)), || "untagged criterion".into())?;
    for c in &report.criteria {
        if let Some(v) = c.score {
            ensure((0.0..=1.0).contains(&v), || format!("{} = {v}", c.id))?;
        }
        ensure((c.status == Status::Scored) == c.score.is_some(), || format!("{} status/score mismatch", c.id))?;
    }
    let forced = [
        ("accessibility.sparql_endpoint", 0.0),
        ("accessibility.dereferencing", 0.0),
        ("accessibility.content_negotiation", 0.0),
        ("licensing.machine_readable", 1.0),
        ("interoperability.avoid_blank_nodes", 1.0),
        ("accessibility.rdf_export", 1.0),
        ("timeliness.frequency", 0.5),
    ];
    for (id, want) in forced {
        ensure(report.score(id) == Some(want), || format!("{id} = {:?}, expected {want}", report.score(id)))?;
    }
    Ok(format!("{} criteria over 11 dimensions; {} forced scores exact", report.criteria.len(), forced.len()))
}

// 7
fn link_checker() -> Outcome {
    let stub = StubServer::start(&fs::read_to_string(fixture("links.stub")).unwrap()).map_err(|e| e.to_string())?;
    let targets = ["ok/1", "ok/2", "ok/3", "ok/4", "ok/5", "moved/1", "gone/1", "gone/2", "error/1"];
    let mut g = Graph::new();
    for (i, t) in targets.iter().enumerate() {
        g.insert(Triple::new(
            iri(&format!("http://example.org/{i}#Agent100-1")),
            iri("http://www.w3.org/2002/07/owl#sameAs"),
            iri(&stub.url(t)),
        ));
    }
    let prober = HttpProber { workers: 4, timeout: Duration::from_secs(5) };
    let links = check_links(&g, "http://example.org/", 500, 1, &prober);
    ensure(links.sampled == 9, || format!("sampled {}", links.sampled))?;
    ensure((links.rate - 2.0 / 3.0).abs() < 1e-3, || format!("rate {}", links.rate))?;
    let report = evaluate(&g, &AuditConfig::default(), AuditInputs { prober: Some(&prober), ..Default::default() })
        .map_err(|e| e.to_string())?;
    let score = report.score("interlinking.external_uri_validity").unwrap_or(-1.0);
    ensure((score - 2.0 / 3.0).abs() < 1e-3, || format!("report score {score}"))?;

    let v = Vocabularies::shipped();
    ensure(v.resolve_language("d").is_err(), || "language d resolved".into())?;
    ensure(v.resolve_geographic_area("e-uk- st").is_err(), || "e-uk- st resolved".into())?;
    ensure(v.resolve_geographic_area("e-uk-%20st").is_err(), || "e-uk-%20st resolved".into())?;
    ensure(v.resolve_geographic_area("e-uk-st").is_ok(), || "e-uk-st rejected".into())?;
    let nbs = transformed("nbs10.xml", SourceKind::Marcxml);
    let bad = nbs.iter().filter_map(|t| t.object.as_iri()).map(|i| i.as_str()).find(|i| {
        i.ends_with("/languages/d") || (i.contains("/geographicAreas/") && (i.contains(' ') || i.contains("%20")))
    });
    ensure(bad.is_none(), || format!("emitted {bad:?}"))?;
    Ok(format!("rate {:.3} over {} probes; malformed codes never emitted", links.rate, links.sampled))
}

// 8
fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for name in ["a", "b"] {
        let out = tmp.path().join(name);
        let run = lodforge(&["pipeline", "--config", s(&fixture("nbs100.toml")), "--out", s(&out)]);
        ensure(run.code == 0, || format!("pipeline exit {}: {}", run.code, run.stderr))?;
        runs.push(digests(&out));
    }
    ensure(runs[0] == runs[1], || "bundles differ".into())?;
    ensure(runs[0].len() == 7, || format!("{} files", runs[0].len()))?;
    Ok(format!("{} files byte-identical across runs", runs[0].len()))
}

// 9
fn completeness_scores() -> Outcome {
    let g = dump::load_dump(&fixture("completeness.ttl")).map_err(|e| e.to_string())?;
    let gold = GoldStandard::shipped()
        .with_population("Robert Louis Stevenson\nWalter Scott\nMuriel Spark\nRobert Burns\n")
        .map_err(|e| e.to_string())?;
    let r = completeness(&g, &gold);
    // Persons: name 4/4, birth 3/4, death 1/4. Works: title 2/2, date 1/2, author 2/2.
    let hand = (1.0 + 0.75 + 0.25 + 1.0 + 0.5 + 1.0) / 6.0;
    let column = r.column.ok_or("no column score")?;
    ensure((column - hand).abs() < 1e-9, || format!("column {column} vs {hand}"))?;
    ensure(r.population == Some(0.5), || format!("population {:?}", r.population))?;

    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("quality.json");
    let run = lodforge(&[
        "audit",
        "--input",
        s(&fixture("completeness.ttl")),
        "--gold",
        s(&fixture("population.txt")),
        "--out",
        s(&out),
    ]);
    ensure(run.code == 0, || format!("audit exit {}: {}", run.code, run.stderr))?;
    let report: QualityReport = serde_json::from_str(&fs::read_to_string(&out).unwrap()).map_err(|e| e.to_string())?;
    let cli_column = report.score("completeness.column").unwrap_or(-1.0);
    ensure((cli_column - hand).abs() < 1e-9, || format!("cli column {cli_column}"))?;
    ensure(report.score("completeness.population") == Some(0.5), || "cli population".into())?;
    Ok(format!("column {column} (hand {hand}), population 0.5"))
}

fn random_literal(rng: &mut ChaCha8Rng) -> Literal {
    const PIECES: [&str; 10] =
        ["plain", "with \"quotes\"", "back\\slash", "line\nbreak", "tab\there", "Gàidhlig", "<&>", "  padded ", "", "ünïcödé ✓"];
    let text: String = (0..rng.gen_range(1..3)).map(|_| PIECES[rng.gen_range(0..PIECES.len())]).collect();
    match rng.gen_range(0..4) {
        0 => Literal::string(text),
        1 => Literal::lang(text, ["en", "gd", "es-ES"][rng.gen_range(0..3)]).unwrap(),
        2 => Literal::integer(rng.gen_range(-5000..5000)),
        _ => Literal::typed(text, iri("http://example.org/vocab#custom")),
    }
}

fn random_rdf(rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new();
    let blank = |rng: &mut ChaCha8Rng| BlankNode::new(format!("b{}", rng.gen_range(0..6))).unwrap();
    let node = |rng: &mut ChaCha8Rng| iri(&format!("http://example.org/r/{}#N{}", rng.gen_range(0..8), rng.gen_range(0..3)));
    let predicates = [
        "http://example.org/vocab#name",
        "http://purl.org/dc/terms/title",
        "https://schema.org/creator",
        "http://www.w3.org/1999/02/22-rdf-syntax-ns#type",
        "http://id.loc.gov/ontologies/bibframe/mainTitle",
    ];
    for _ in 0..rng.gen_range(0..60) {
        let subject: Subject = if rng.gen_bool(0.2) { blank(rng).into() } else { node(rng).into() };
        let predicate = iri(predicates[rng.gen_range(0..predicates.len())]);
        let object: Term = match rng.gen_range(0..3) {
            0 => node(rng).into(),
            1 => blank(rng).into(),
            _ => random_literal(rng).into(),
        };
        g.insert(Triple::new(subject, predicate, object));
    }
    g
}

// 10
fn serializer_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let graphs: Vec<Graph> = (0..100).map(|_| random_rdf(&mut rng)).collect();
    let mut checked = 0;
    for format in [Serialization::Turtle, Serialization::NTriples, Serialization::RdfXml] {
        for (i, g) in graphs.iter().enumerate() {
            let text = dump::serialize(g, format).map_err(|e| format!("{format:?} graph {i}: {e}"))?;
            let back = dump::parse(&text, format, std::path::Path::new("generated"))
                .map_err(|e| format!("{format:?} graph {i}: {e}"))?;
            ensure(isomorphic(g, &back), || format!("{format:?} graph {i} not isomorphic after round trip"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} round trips, 0 failures"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("URI minting reproduces attested IRIs", Duration::from_secs(1), uri_minting),
        ("duplicate-agent cluster on the 5-record fixture", Duration::from_secs(1), stevenson_cluster),
        ("VoID counts equal the N-Triples scan", Duration::from_secs(5), void_counts),
        ("query engine equals the nested-loop oracle", Duration::from_secs(30), query_engine),
        ("mined shapes validate their own graph", Duration::from_secs(10), shape_fixpoint),
        ("quality report totality and forced scores", Duration::from_secs(30), report_totality),
        ("link checker against the stub server", Duration::from_secs(10), link_checker),
        ("pipeline bundles are byte-identical", Duration::from_secs(60), determinism),
        ("completeness evaluators", Duration::from_secs(5), completeness_scores),
        ("serializer round-trip isomorphism", Duration::from_secs(30), serializer_round_trip),
    ];
    let mut failed = 0;
    for (n, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({elapsed:.2?})", n + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
