//! The cars and dealers example, bundled for tests, examples and the CLI.

use crate::base::OntologyBase;
use crate::frontends::{parse_owl_documents, translate_owl};

/// Three ontologies in the OWL abstract syntax: `carsOnt`, and the sources
/// `source1` and `source2` that import it.
pub const CARS_OWL: &str = include_str!("../data/cars.owl");

/// The motivating query, written with the intensional subgoal first.
pub const CARS_QUERY: &str = "q(O) :- areClasses(C,O), isDProperty(traction,C).";

/// The same query with the cheaper subgoal order.
pub const CARS_QUERY_REORDERED: &str = "q(O) :- isDProperty(traction,C), areClasses(C,O).";

/// Translates [`CARS_OWL`] into a base.
pub fn cars_base() -> OntologyBase {
    let docs = parse_owl_documents(CARS_OWL).expect("bundled fixture parses");
    let facts: Vec<_> = docs.iter().flat_map(translate_owl).collect();
    OntologyBase::from_facts(&facts).expect("bundled fixture is extensional")
}
