//! Command-line surface.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use lodforge_core::audit::QualityReport;
use lodforge_core::query::{execute, parse_query};
use lodforge_core::Graph;

use crate::bundle::{QUALITY_JSON, TRANSFORM_JSON};
use crate::config::{ConfigError, PipelineConfig, SourceKind};
use crate::dump::{format_of, load_dump, write_dump};
use crate::stages::{self, to_json, StageError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FATAL: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_RECORD_ERRORS: u8 = 3;

/// Source file to Linked Open Data pipeline.
#[derive(Debug, Parser)]
#[command(name = "lodforge", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Profile source records (JSON on stdout or --out).
    Analyze(Common),
    /// Map source records to a graph dump plus transform.json beside it.
    Transform(Common),
    /// Reconcile a dump and add accepted owl:sameAs links.
    Enrich(Common),
    /// Score a dump against the quality catalogue.
    Audit(Common),
    /// Write the publication directory from a dump and its reports.
    Publish(Common),
    /// Transform, enrich, audit and publish in one run.
    Pipeline(Common),
    /// Run a query file against a dump.
    Query {
        #[command(flatten)]
        common: Common,
        /// Query file.
        query: PathBuf,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Configuration file (TOML).
    #[arg(long, env = "LODFORGE_CONFIG")]
    pub config: Option<PathBuf>,
    /// Source files, or dumps and reports for later stages.
    #[arg(long)]
    pub input: Vec<PathBuf>,
    /// marcxml or dublin-core.
    #[arg(long)]
    pub source_kind: Option<SourceKind>,
    #[arg(long)]
    pub base_uri: Option<String>,
    /// turtle, ntriples or rdfxml; repeat for several dumps.
    #[arg(long)]
    pub format: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub link_sample: Option<usize>,
    /// Allow HTTP probing during the audit.
    #[arg(long)]
    pub allow_network: bool,
    /// Reconciliation fixture (TSV) used instead of an endpoint.
    #[arg(long)]
    pub fixture: Option<PathBuf>,
    #[arg(long)]
    pub gold: Vec<PathBuf>,
    #[arg(long)]
    pub accept_file: Option<PathBuf>,
    /// Accept candidates with a perfect score.
    #[arg(long)]
    pub auto_accept: bool,
    /// Modified date (YYYY-MM-DD) written to the VoID description.
    #[arg(long)]
    pub pin_modified: Option<String>,
}

impl Common {
    /// Config file merged with the flags; flags win.
    pub fn resolve(&self, takes_sources: bool) -> Result<PipelineConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(p) => PipelineConfig::load(p)?,
            None => PipelineConfig::default(),
        };
        if takes_sources && !self.input.is_empty() {
            cfg.input.paths = self.input.clone();
        }
        if let Some(k) = self.source_kind {
            cfg.input.source_kind = k;
        }
        if let Some(b) = &self.base_uri {
            cfg.mapping.base_uri = Some(b.clone());
        }
        if !self.format.is_empty() {
            cfg.publish.formats = self.format.clone();
        }
        if let Some(o) = &self.out {
            cfg.publish.out = Some(o.clone());
        }
        if let Some(s) = self.seed {
            cfg.audit.seed = s;
        }
        if let Some(n) = self.link_sample {
            cfg.audit.link_sample = n;
        }
        if self.allow_network {
            cfg.audit.allow_network = true;
        }
        if let Some(f) = &self.fixture {
            cfg.enrich.fixture = Some(f.clone());
            cfg.enrich.endpoint = None;
        }
        if !self.gold.is_empty() {
            cfg.audit.gold = self.gold.clone();
        }
        if let Some(a) = &self.accept_file {
            cfg.enrich.accept_file = Some(a.clone());
        }
        if self.auto_accept {
            cfg.enrich.auto_accept = true;
        }
        if let Some(d) = &self.pin_modified {
            cfg.publish.pin_modified = Some(d.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parse arguments and run; returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    match dispatch(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn ensure_parent(path: &Path) -> Result<(), StageError> {
    match path.parent().filter(|p| !p.as_os_str().is_empty()) {
        Some(dir) => fs::create_dir_all(dir).map_err(|source| StageError::Io { path: dir.to_path_buf(), source }),
        None => Ok(()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), StageError> {
    ensure_parent(path)?;
    fs::write(path, text).map_err(|source| StageError::Io { path: path.to_path_buf(), source })
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(a), Ok(b)) => a == b,
        _ => a == b,
    }
}

/// Output paths that would clobber an input are refused.
fn guard(out: &Path, inputs: &[PathBuf]) -> Result<(), StageError> {
    for i in inputs {
        if same_file(out, i) || (out.is_dir() && i.starts_with(out)) {
            return Err(StageError::Overwrite(i.clone()));
        }
    }
    Ok(())
}

fn require_out(cfg: &PipelineConfig) -> Result<PathBuf, StageError> {
    cfg.publish.out.clone().ok_or_else(|| ConfigError::Invalid("--out is required".into()).into())
}

fn single_dump(c: &Common) -> Result<PathBuf, StageError> {
    c.input
        .iter()
        .find(|p| format_of(p).is_some())
        .cloned()
        .ok_or_else(|| ConfigError::Invalid("--input must name a dump (.ttl, .nt or .rdf)".into()).into())
}

fn load(path: &Path) -> Result<Graph, StageError> {
    Ok(load_dump(path)?)
}

/// Artifact given directly or found next to the dump.
fn artifact(c: &Common, dump: &Path, name: &str) -> Option<PathBuf> {
    c.input
        .iter()
        .find(|p| p.file_name().and_then(|n| n.to_str()) == Some(name))
        .cloned()
        .or_else(|| {
            let p = dump.parent()?.join(name);
            p.is_file().then_some(p)
        })
}

fn record_status(errors: usize) -> u8 {
    if errors > 0 {
        EXIT_RECORD_ERRORS
    } else {
        EXIT_OK
    }
}

fn dispatch(command: &Command, stdout: &mut dyn Write) -> Result<u8, StageError> {
    let print = |stdout: &mut dyn Write, text: &str| {
        stdout.write_all(text.as_bytes()).map_err(|source| StageError::Io { path: "<stdout>".into(), source })
    };
    match command {
        Command::Analyze(c) => {
            let cfg = c.resolve(true)?;
            let (profile, errors) = stages::analyze(&cfg)?;
            let json = to_json(&serde_json::json!({ "profile": profile, "record_errors": errors }));
            match &c.out {
                Some(out) => {
                    guard(out, &cfg.input.paths)?;
                    write_file(out, &json)?
                }
                None => print(stdout, &json)?,
            }
            Ok(record_status(errors.len()))
        }
        Command::Transform(c) => {
            let cfg = c.resolve(true)?;
            let out = require_out(&cfg)?;
            guard(&out, &cfg.input.paths)?;
            let format = format_of(&out).unwrap_or(cfg.formats()?[0]);
            let (graph, report) = stages::transform(&cfg)?;
            let report_path = out.with_file_name(TRANSFORM_JSON);
            guard(&report_path, &cfg.input.paths)?;
            ensure_parent(&out)?;
            write_dump(&graph, format, &out)?;
            write_file(&report_path, &to_json(&report))?;
            print(stdout, &format!("{} triples from {} records\n", graph.len(), report.emitted))?;
            Ok(record_status(report.errors.len()))
        }
        Command::Enrich(c) => {
            let cfg = c.resolve(false)?;
            let dump = single_dump(c)?;
            let out = require_out(&cfg)?;
            guard(&out, &c.input)?;
            let mut graph = load(&dump)?;
            let result = stages::enrich(&cfg, &mut graph)?;
            let format = format_of(&out).unwrap_or(cfg.formats()?[0]);
            ensure_parent(&out)?;
            write_dump(&graph, format, &out)?;
            let candidates = out.with_file_name("candidates.json");
            guard(&candidates, &c.input)?;
            write_file(&candidates, &to_json(&result))?;
            print(
                stdout,
                &format!("{} candidates, {} links added, {} lookup errors\n", result.candidates.len(), result.added, result.errors.len()),
            )?;
            Ok(EXIT_OK)
        }
        Command::Audit(c) => {
            let cfg = c.resolve(false)?;
            let dump = single_dump(c)?;
            let graph = load(&dump)?;
            let report = stages::audit(&cfg, &graph)?;
            if let Some(out) = &c.out {
                guard(out, &c.input)?;
                write_file(out, &to_json(&report))?;
            }
            print(stdout, &report.to_text_table())?;
            Ok(EXIT_OK)
        }
        Command::Publish(c) => {
            let cfg = c.resolve(false)?;
            let dump = single_dump(c)?;
            let out = require_out(&cfg)?;
            guard(&out, &c.input)?;
            let graph = load(&dump)?;
            let quality = match artifact(c, &dump, QUALITY_JSON) {
                Some(p) => {
                    let text = fs::read_to_string(&p).map_err(|source| StageError::Io { path: p.clone(), source })?;
                    let r: QualityReport = serde_json::from_str(&text)
                        .map_err(|e| StageError::Fatal(format!("{}: {e}", p.display())))?;
                    Some(r)
                }
                None => None,
            };
            let transform = match artifact(c, &dump, TRANSFORM_JSON) {
                Some(p) => {
                    let text = fs::read_to_string(&p).map_err(|source| StageError::Io { path: p.clone(), source })?;
                    serde_json::from_str::<serde_json::Value>(&text)
                        .map_err(|e| StageError::Fatal(format!("{}: {e}", p.display())))?;
                    Some(text)
                }
                None => None,
            };
            let dumps = stages::publish(&cfg, &graph, quality.as_ref(), transform.as_deref(), &out)?;
            for d in dumps {
                print(stdout, &format!("{} {} triples sha256:{}\n", d.path, d.triples, d.sha256))?;
            }
            Ok(EXIT_OK)
        }
        Command::Pipeline(c) => {
            let cfg = c.resolve(true)?;
            let out = require_out(&cfg)?;
            guard(&out, &cfg.input.paths)?;
            let outcome = stages::pipeline(&cfg, &out)?;
            for d in &outcome.dumps {
                print(stdout, &format!("{} {} triples sha256:{}\n", d.path, d.triples, d.sha256))?;
            }
            Ok(record_status(outcome.transform.errors.len()))
        }
        Command::Query { common, query } => {
            let dump = single_dump(common)?;
            let graph = load(&dump)?;
            let text = fs::read_to_string(query).map_err(|source| StageError::Io { path: query.clone(), source })?;
            let q = parse_query(&text).map_err(|e| StageError::Fatal(format!("{}: {e}", query.display())))?;
            let result = execute(&graph, &q).map_err(|e| StageError::Fatal(e.to_string()))?;
            match &common.out {
                Some(out) => {
                    guard(out, &[dump.clone(), query.clone()])?;
                    write_file(out, &to_json(&result))?
                }
                None => print(stdout, &result.to_table())?,
            }
            Ok(EXIT_OK)
        }
    }
}
