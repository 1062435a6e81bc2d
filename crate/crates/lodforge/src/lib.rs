//! Std companion to `lodforge-core`: file formats, HTTP, configuration,
//! publication bundles and the command-line driver.

pub mod bundle;
pub mod cli;
pub mod config;
pub mod dump;
pub mod ingest;
pub mod input;
pub mod probe;
pub mod rdfxml;
pub mod sparql;
pub mod stages;
pub mod stub;
