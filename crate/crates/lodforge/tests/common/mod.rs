#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use lodforge::config::{PipelineConfig, SourceKind};
use lodforge::dump::sha256_hex;
use lodforge::stages;
use lodforge_core::Graph;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn config(name: &str) -> PipelineConfig {
    PipelineConfig::load(&fixture(name)).expect("fixture config")
}

/// Graph mapped from one source fixture with default settings.
pub fn transformed(name: &str, kind: SourceKind) -> Graph {
    let mut cfg = PipelineConfig::default();
    cfg.input.paths = vec![fixture(name)];
    cfg.input.source_kind = kind;
    stages::transform(&cfg).expect("fixture transforms").0
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn lodforge(args: &[&str]) -> Run {
    lodforge_env(args, &[])
}

pub fn lodforge_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lodforge"));
    cmd.args(args).env_remove("LODFORGE_CONFIG");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// File name to content digest for every file in `dir`.
pub fn digests(dir: &Path) -> BTreeMap<String, String> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), sha256_hex(&fs::read(e.path()).unwrap()))
        })
        .collect()
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}
