//! Deductive ontology bases: an OWL Lite subset represented as extensional
//! facts plus a fixed Datalog program, evaluated top-down with tabling, and a
//! query optimizer that combines adaptive sampling with System R estimates.

pub mod analyzer;
pub mod base;
pub mod bench;
pub mod cost;
pub mod engine;
pub mod error;
pub mod executor;
pub mod fixtures;
pub mod frontends;
pub mod optimizer;
pub mod program;
pub mod schema;
pub mod synth;
pub mod syntax;

#[cfg(test)]
mod testutil;

pub use base::OntologyBase;
pub use error::{Error, ParseError, Result};
pub use schema::{Predicate, PredicateKind};
pub use syntax::{Atom, Query, Rule, Term};
