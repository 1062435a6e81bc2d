//! Reading and writing dump files.

use std::fs;
use std::path::{Path, PathBuf};

use lodforge_core::canon::canonical_ntriples;
use lodforge_core::mapping::Serialization;
use lodforge_core::rdfxml::to_rdfxml;
use lodforge_core::turtle::parse_turtle;
use lodforge_core::Graph;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::input::read_text;
use crate::rdfxml::parse_rdfxml;

#[derive(Debug, thiserror::Error)]
pub enum DumpError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Syntax { path: PathBuf, message: String },
    #[error("{path}: cannot tell the serialization from the file name")]
    UnknownFormat { path: PathBuf },
    #[error("{0}")]
    Serialize(String),
}

/// Serialization implied by the extension; a trailing `.gz` is ignored.
pub fn format_of(path: &Path) -> Option<Serialization> {
    let name = path.file_name()?.to_str()?.to_ascii_lowercase();
    let name = name.strip_suffix(".gz").unwrap_or(&name);
    let ext = name.rsplit_once('.')?.1;
    match ext {
        "ttl" => Some(Serialization::Turtle),
        "nt" => Some(Serialization::NTriples),
        "rdf" | "xml" | "owl" => Some(Serialization::RdfXml),
        _ => None,
    }
}

/// Serialized text. N-Triples output is canonical.
pub fn serialize(graph: &Graph, format: Serialization) -> Result<String, DumpError> {
    match format {
        Serialization::Turtle => Ok(lodforge_core::turtle::to_turtle(graph)),
        Serialization::NTriples => Ok(canonical_ntriples(graph)),
        Serialization::RdfXml => to_rdfxml(graph).map_err(|e| DumpError::Serialize(e.to_string())),
    }
}

pub fn parse(text: &str, format: Serialization, path: &Path) -> Result<Graph, DumpError> {
    let syntax = |message: String| DumpError::Syntax { path: path.to_path_buf(), message };
    match format {
        Serialization::Turtle | Serialization::NTriples => parse_turtle(text).map_err(|e| syntax(e.to_string())),
        Serialization::RdfXml => parse_rdfxml(text, None).map_err(|e| syntax(e.to_string())),
    }
}

pub fn load_dump(path: &Path) -> Result<Graph, DumpError> {
    let format = format_of(path).ok_or_else(|| DumpError::UnknownFormat { path: path.to_path_buf() })?;
    let text = read_text(path).map_err(|source| DumpError::Io { path: path.to_path_buf(), source })?;
    parse(&text, format, path)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DumpManifest {
    pub path: String,
    pub format: Serialization,
    pub bytes: u64,
    pub triples: usize,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn write_dump(graph: &Graph, format: Serialization, path: &Path) -> Result<DumpManifest, DumpError> {
    let text = serialize(graph, format)?;
    fs::write(path, &text).map_err(|source| DumpError::Io { path: path.to_path_buf(), source })?;
    Ok(DumpManifest {
        path: path.display().to_string(),
        format,
        bytes: text.len() as u64,
        triples: graph.len(),
        sha256: sha256_hex(text.as_bytes()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use lodforge_core::term::{Iri, Literal, Triple};

    fn sample() -> Graph {
        let mut g = Graph::new();
        for i in 0..5 {
            g.insert(Triple::new(
                Iri::new(format!("http://example.org/{i}#Work")).unwrap(),
                Iri::new("http://www.w3.org/2000/01/rdf-schema#label").unwrap(),
                Literal::string(format!("Work {i}")),
            ));
        }
        g
    }

    #[test]
    fn formats_from_names() {
        assert_eq!(format_of(Path::new("a/dump.ttl")), Some(Serialization::Turtle));
        assert_eq!(format_of(Path::new("dump.nt.gz")), Some(Serialization::NTriples));
        assert_eq!(format_of(Path::new("dump.rdf")), Some(Serialization::RdfXml));
        assert_eq!(format_of(Path::new("dump")), None);
    }

    #[test]
    fn empty_turtle_is_prefixes_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("dump.ttl");
        let m = write_dump(&Graph::new(), Serialization::Turtle, &p).unwrap();
        assert_eq!(m.triples, 0);
        let text = fs::read_to_string(&p).unwrap();
        assert!(text.lines().all(|l| l.starts_with("@prefix")));
    }

    #[test]
    fn stable_digest_and_counts() {
        let dir = tempfile::tempdir().unwrap();
        for format in [Serialization::Turtle, Serialization::NTriples, Serialization::RdfXml] {
            let a = dir.path().join(format!("a.{}", format.extension()));
            let b = dir.path().join(format!("b.{}", format.extension()));
            let ma = write_dump(&sample(), format, &a).unwrap();
            let mb = write_dump(&sample(), format, &b).unwrap();
            assert_eq!(ma.sha256, mb.sha256);
            assert_eq!(ma.triples, 5);
            assert_eq!(load_dump(&a).unwrap(), sample());
        }
        let nt = fs::read_to_string(dir.path().join("a.nt")).unwrap();
        assert_eq!(nt.lines().count(), 5);
    }

    #[test]
    fn io_error_names_path() {
        let err = write_dump(&sample(), Serialization::Turtle, Path::new("/nonexistent/dir/dump.ttl")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/dump.ttl"));
    }
}
