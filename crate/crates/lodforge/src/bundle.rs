//! Publication directory.
//!
//! Layout: one `dump.<ext>` per format, `void.ttl`, `quality.json`,
//! `quality.txt` and `transform.json`. Nothing else is written.

use std::fs;
use std::path::{Path, PathBuf};

use lodforge_core::audit::QualityReport;
use lodforge_core::mapping::Serialization;
use lodforge_core::turtle::to_turtle;
use lodforge_core::Graph;

use crate::dump::{write_dump, DumpError, DumpManifest};

pub const VOID_FILE: &str = "void.ttl";
pub const QUALITY_JSON: &str = "quality.json";
pub const QUALITY_TEXT: &str = "quality.txt";
pub const TRANSFORM_JSON: &str = "transform.json";

pub fn dump_file_name(format: Serialization) -> String {
    format!("dump.{}", format.extension())
}

#[derive(Debug, thiserror::Error)]
pub enum BundleError {
    #[error("missing artifact: {0}")]
    Missing(&'static str),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Dump(#[from] DumpError),
    #[error("{0} exists and is not a publication directory")]
    NotABundle(PathBuf),
    #[error("{0}")]
    Serialize(String),
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> BundleError + '_ {
    move |source| BundleError::Io { path: path.to_path_buf(), source }
}

pub struct BundleInputs<'a> {
    pub graph: &'a Graph,
    pub void: Option<&'a Graph>,
    pub quality: Option<&'a QualityReport>,
    /// Transform report as JSON text; copied verbatim.
    pub transform: Option<&'a str>,
    pub formats: &'a [Serialization],
}

/// True for names the layout allows.
pub fn is_bundle_file(name: &str) -> bool {
    [VOID_FILE, QUALITY_JSON, QUALITY_TEXT, TRANSFORM_JSON].contains(&name)
        || name.strip_prefix("dump.").is_some_and(|ext| ["ttl", "nt", "rdf"].contains(&ext))
}

fn write_all(inputs: &BundleInputs<'_>, dir: &Path) -> Result<Vec<DumpManifest>, BundleError> {
    let void = inputs.void.ok_or(BundleError::Missing("VoID description (void.ttl)"))?;
    let quality = inputs.quality.ok_or(BundleError::Missing("quality report (quality.json)"))?;
    let transform = inputs.transform.ok_or(BundleError::Missing("transform report (transform.json)"))?;
    if inputs.formats.is_empty() {
        return Err(BundleError::Missing("dump format"));
    }
    let mut dumps = Vec::new();
    for &format in inputs.formats {
        let mut m = write_dump(inputs.graph, format, &dir.join(dump_file_name(format)))?;
        m.path = dump_file_name(format);
        dumps.push(m);
    }
    let put = |name: &str, text: &str| {
        let p = dir.join(name);
        fs::write(&p, text).map_err(io(&p))
    };
    put(VOID_FILE, &to_turtle(void))?;
    let json = serde_json::to_string_pretty(quality).map_err(|e| BundleError::Serialize(e.to_string()))?;
    put(QUALITY_JSON, &(json + "\n"))?;
    put(QUALITY_TEXT, &quality.to_text_table())?;
    let mut transform = transform.to_owned();
    if !transform.ends_with('\n') {
        transform.push('\n');
    }
    put(TRANSFORM_JSON, &transform)?;
    Ok(dumps)
}

/// Write the bundle into `out`, replacing an earlier bundle there. On any
/// failure nothing is left behind.
pub fn write_bundle(inputs: &BundleInputs<'_>, out: &Path) -> Result<Vec<DumpManifest>, BundleError> {
    if out.exists() {
        let entries = fs::read_dir(out).map_err(io(out))?;
        for e in entries {
            let e = e.map_err(io(out))?;
            let name = e.file_name();
            if !e.path().is_file() || !name.to_str().is_some_and(is_bundle_file) {
                return Err(BundleError::NotABundle(out.to_path_buf()));
            }
        }
    }
    let name = out.file_name().and_then(|n| n.to_str()).unwrap_or("bundle");
    let parent = out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(parent).map_err(io(parent))?;
    let staging = parent.join(format!(".{name}.staging-{}", std::process::id()));
    if staging.exists() {
        fs::remove_dir_all(&staging).map_err(io(&staging))?;
    }
    fs::create_dir(&staging).map_err(io(&staging))?;
    let result = write_all(inputs, &staging).and_then(|dumps| {
        if out.exists() {
            fs::remove_dir_all(out).map_err(io(out))?;
        }
        fs::rename(&staging, out).map_err(io(out))?;
        Ok(dumps)
    });
    if result.is_err() {
        let _ = fs::remove_dir_all(&staging);
    }
    result
}
