//! Surface syntaxes: `.dob` fact files, conjunctive queries, and the OWL Lite
//! abstract-syntax subset.

mod datalog;
mod lexer;
mod owl;

pub use datalog::{parse_dob, parse_query, render_dob};
pub use owl::{
    parse_owl, parse_owl_documents, translate_owl, ClassParent, OwlDocument, OwlStatement,
    OWL_IMPORTS, OWL_THING,
};
