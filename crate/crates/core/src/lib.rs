#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod audit;
pub mod canon;
pub mod enrich;
pub mod graph;
pub mod ingest;
pub mod mapping;
pub mod namespace;
pub mod publish;
pub mod query;
pub mod rdfxml;
pub mod term;
pub mod text;
pub mod turtle;

pub use graph::{Graph, GraphStats, TripleRef};
pub use term::{BlankNode, Iri, Literal, Subject, Term, TermError, Triple};
