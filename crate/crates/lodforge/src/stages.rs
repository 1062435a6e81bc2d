//! Pipeline stages. Each stage reads what the previous one wrote, so the
//! chained run and the stage-by-stage run agree byte for byte.

use std::path::{Path, PathBuf};
use std::time::Duration;

use lodforge_core::audit::{evaluate, AuditError, AuditInputs, GoldStandard, QualityReport, ReferenceSet};
use lodforge_core::enrich::{apply_sameas, auto_accepted, parse_acceptance, FixtureSource, ReconciliationCandidate};
use lodforge_core::ingest::{profile, SourceProfile, SourceRecord};
use lodforge_core::mapping::{MappingConfig, Serialization, TransformReport, Transformer};
use lodforge_core::publish::{describe_dataset, generate_void};
use lodforge_core::term::Iri;
use lodforge_core::Graph;
use serde::Serialize;

use crate::bundle::{dump_file_name, write_bundle, BundleError, BundleInputs};
use crate::config::{ConfigError, PipelineConfig, SourceKind};
use crate::dump::{self, DumpError, DumpManifest};
use crate::ingest::{DcReader, IngestError, MarcXmlReader};
use crate::input::{open, read_text};
use crate::probe::HttpProber;
use crate::sparql::{reconcile_parallel, SparqlSource};

/// Most frequent values kept per field when profiling.
pub const PROFILE_TOP_K: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum StageError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Ingest { path: PathBuf, source: IngestError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Dump(#[from] DumpError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("refusing to overwrite input file {0}")]
    Overwrite(PathBuf),
    #[error("{0}")]
    Fatal(String),
}

impl StageError {
    /// 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            StageError::Config(_) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StageError + '_ {
    move |source| StageError::Io { path: path.to_path_buf(), source }
}

fn read(path: &Path) -> Result<String, StageError> {
    read_text(path).map_err(io_err(path))
}

/// Source records plus the record-level problems met while reading.
#[derive(Debug, Default)]
pub struct Loaded {
    pub records: Vec<SourceRecord>,
    pub errors: Vec<String>,
}

pub fn load_records(cfg: &PipelineConfig, mapping: &MappingConfig) -> Result<Loaded, StageError> {
    if cfg.input.paths.is_empty() {
        return Err(ConfigError::Invalid("no input files given".into()).into());
    }
    let mut out = Loaded::default();
    for path in &cfg.input.paths {
        let reader = open(path).map_err(io_err(path))?;
        let items: Box<dyn Iterator<Item = Result<SourceRecord, IngestError>>> = match cfg.input.source_kind {
            SourceKind::Marcxml => Box::new(
                MarcXmlReader::with_ordinals(reader, mapping.ordinal_counts_control_fields)
                    .map(|r| r.map(SourceRecord::Marc)),
            ),
            SourceKind::DublinCore => {
                let r = match &cfg.input.container {
                    Some(c) => DcReader::with_container(reader, c),
                    None => DcReader::new(reader),
                };
                Box::new(r.map(|r| r.map(SourceRecord::Dc)))
            }
        };
        for item in items {
            match item {
                Ok(r) => out.records.push(r),
                Err(e) if e.is_fatal() => return Err(StageError::Ingest { path: path.clone(), source: e }),
                Err(e) => out.errors.push(format!("{}: {e}", path.display())),
            }
        }
    }
    Ok(out)
}

pub fn analyze(cfg: &PipelineConfig) -> Result<(SourceProfile, Vec<String>), StageError> {
    let mapping = cfg.mapping_config()?;
    let loaded = load_records(cfg, &mapping)?;
    Ok((profile(&loaded.records, PROFILE_TOP_K), loaded.errors))
}

pub fn transform(cfg: &PipelineConfig) -> Result<(Graph, TransformReport), StageError> {
    let mapping = cfg.mapping_config()?;
    let loaded = load_records(cfg, &mapping)?;
    let mut t = Transformer::new(&mapping);
    for r in &loaded.records {
        t.add(r);
    }
    for e in loaded.errors {
        t.record_skip(e);
    }
    Ok(t.finish())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

/// Reconciliation result for one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EnrichOutput {
    pub candidates: Vec<ReconciliationCandidate>,
    pub errors: Vec<(String, String)>,
    pub accepted: Vec<(Iri, Iri)>,
    pub added: usize,
}

pub fn enrichment_configured(cfg: &PipelineConfig) -> bool {
    cfg.enrich.fixture.is_some() || cfg.enrich.endpoint.is_some() || cfg.enrich.accept_file.is_some()
}

/// Generate candidates and add `owl:sameAs` for the accepted ones.
pub fn enrich(cfg: &PipelineConfig, graph: &mut Graph) -> Result<EnrichOutput, StageError> {
    let e = &cfg.enrich;
    let kinds = cfg.entity_kinds()?;
    let fixture;
    let endpoint;
    let source: Option<&(dyn lodforge_core::enrich::CandidateSource + Sync)> = match (&e.fixture, &e.endpoint) {
        (Some(path), _) => {
            fixture = FixtureSource::parse(&read(path)?)
                .map_err(|err| ConfigError::Parse { path: path.clone(), message: err.to_string() })?;
            Some(&fixture)
        }
        (None, Some(url)) => {
            endpoint = SparqlSource::new(url.clone(), Duration::from_secs(e.timeout_secs));
            Some(&endpoint)
        }
        (None, None) if e.accept_file.is_some() => None,
        (None, None) => {
            return Err(ConfigError::Invalid("enrich needs an endpoint, a fixture or an acceptance file".into()).into())
        }
    };
    let mut out = EnrichOutput::default();
    if let Some(source) = source {
        for kind in kinds {
            let r = reconcile_parallel(graph, kind, source, e.floor, e.concurrency);
            out.candidates.extend(r.candidates);
            out.errors.extend(r.errors);
        }
    }
    lodforge_core::enrich::sort_candidates(&mut out.candidates);
    if e.auto_accept {
        out.accepted.extend(auto_accepted(&out.candidates));
    }
    if let Some(path) = &e.accept_file {
        let pairs = parse_acceptance(&read(path)?)
            .map_err(|err| ConfigError::Parse { path: path.clone(), message: err.to_string() })?;
        out.accepted.extend(pairs);
    }
    out.accepted.sort();
    out.accepted.dedup();
    out.added = apply_sameas(graph, &out.accepted).map_err(|err| StageError::Fatal(err.to_string()))?;
    Ok(out)
}

/// VoID for `graph`. `strict` demands the title and license that
/// publication needs.
pub fn void_for(cfg: &PipelineConfig, graph: &Graph, strict: bool) -> Result<Graph, StageError> {
    let mapping = cfg.mapping_config()?;
    let mut meta = cfg.void_metadata_template()?;
    if meta.modified.is_none() {
        meta.modified = Some(chrono::Utc::now().format("%Y-%m-%d").to_string());
    }
    let formats = cfg.formats()?;
    let dump_base = cfg.dump_base(&mapping);
    meta.features = formats.clone();
    for f in &formats {
        let url = format!("{dump_base}{}", dump_file_name(*f));
        meta.data_dumps.push(Iri::new(url).map_err(|e| ConfigError::Invalid(format!("publish.dump_base: {e}")))?);
    }
    let result = if strict {
        generate_void(graph, &meta, mapping.base_uri())
    } else {
        describe_dataset(graph, &meta, mapping.base_uri())
    };
    result.map_err(|e| StageError::Fatal(e.to_string()))
}

/// Gold files merged in order; without patterns the shipped ones apply.
pub fn load_gold(paths: &[PathBuf]) -> Result<Option<GoldStandard>, StageError> {
    if paths.is_empty() {
        return Ok(None);
    }
    let mut gold = GoldStandard { patterns: Vec::new(), population: Vec::new() };
    for p in paths {
        let g = GoldStandard::parse(&read(p)?).map_err(|e| ConfigError::Parse { path: p.clone(), message: e.to_string() })?;
        gold.patterns.extend(g.patterns);
        gold.population.extend(g.population);
    }
    if gold.patterns.is_empty() {
        gold.patterns = GoldStandard::shipped().patterns;
    }
    Ok(Some(gold))
}

pub fn audit(cfg: &PipelineConfig, graph: &Graph) -> Result<QualityReport, StageError> {
    let mapping = cfg.mapping_config()?;
    let config = cfg.audit_config(&mapping)?;
    let metadata = void_for(cfg, graph, false)?;
    let gold = load_gold(&cfg.audit.gold)?;
    let reference = match &cfg.audit.reference {
        Some(p) => Some(
            ReferenceSet::parse(&read(p)?).map_err(|e| ConfigError::Parse { path: p.clone(), message: e.to_string() })?,
        ),
        None => None,
    };
    let prober = HttpProber { workers: cfg.enrich.concurrency, timeout: Duration::from_secs(cfg.enrich.timeout_secs) };
    let inputs = AuditInputs {
        metadata: Some(&metadata),
        gold: gold.as_ref(),
        reference: reference.as_ref(),
        prober: cfg.audit.allow_network.then_some(&prober as _),
    };
    evaluate(graph, &config, inputs).map_err(|e| match e {
        AuditError::Config(m) => StageError::Config(ConfigError::Invalid(m)),
        other => StageError::Fatal(other.to_string()),
    })
}

pub fn publish(
    cfg: &PipelineConfig,
    graph: &Graph,
    quality: Option<&QualityReport>,
    transform_json: Option<&str>,
    out: &Path,
) -> Result<Vec<DumpManifest>, StageError> {
    let void = void_for(cfg, graph, true)?;
    let formats = cfg.formats()?;
    let inputs = BundleInputs { graph, void: Some(&void), quality, transform: transform_json, formats: &formats };
    Ok(write_bundle(&inputs, out)?)
}

/// Serialize and parse back, as a stage boundary does.
pub fn through_dump(graph: &Graph, format: Serialization) -> Result<Graph, StageError> {
    let text = dump::serialize(graph, format)?;
    Ok(dump::parse(&text, format, Path::new("<stage>"))?)
}

#[derive(Debug)]
pub struct PipelineOutcome {
    pub transform: TransformReport,
    pub enrich: Option<EnrichOutput>,
    pub dumps: Vec<DumpManifest>,
}

/// All stages in order; reconciliation runs when configured.
pub fn pipeline(cfg: &PipelineConfig, out: &Path) -> Result<PipelineOutcome, StageError> {
    let format = cfg.formats()?[0];
    let (graph, report) = transform(cfg)?;
    let transform_json = to_json(&report);
    let mut graph = through_dump(&graph, format)?;
    let enrich_out = if enrichment_configured(cfg) {
        let r = enrich(cfg, &mut graph)?;
        graph = through_dump(&graph, format)?;
        Some(r)
    } else {
        None
    };
    let quality = audit(cfg, &graph)?;
    let quality: QualityReport =
        serde_json::from_str(&to_json(&quality)).map_err(|e| StageError::Fatal(e.to_string()))?;
    let dumps = publish(cfg, &graph, Some(&quality), Some(&transform_json), out)?;
    Ok(PipelineOutcome { transform: report, enrich: enrich_out, dumps })
}
