//! The fixed intensional rule program.

use crate::syntax::{Atom, Rule};

fn a(pred: &str, args: &[&str]) -> Atom {
    Atom::parse_args(pred, args)
}

/// The IOB rules defining the inference semantics of the OWL Lite subset.
///
/// Body atoms are listed in the evaluation order used by the top-down engine.
pub fn builtin_iob_program() -> Vec<Rule> {
    let rules = vec![
        // subclass closure
        (a("areSubClasses", &["C1", "C2"]), vec![a("subClassOf", &["C1", "C2"])]),
        (
            a("areSubClasses", &["C1", "C2"]),
            vec![a("subClassOf", &["C1", "C3"]), a("areSubClasses", &["C3", "C2"])],
        ),
        // import closure
        (a("areImpOntologies", &["O1", "O2"]), vec![a("impOntology", &["O1", "O2"])]),
        (
            a("areImpOntologies", &["O1", "O2"]),
            vec![a("impOntology", &["O1", "O3"]), a("areImpOntologies", &["O3", "O2"])],
        ),
        // classes visible through imports
        (a("areClasses", &["C", "O"]), vec![a("isClass", &["C", "O"])]),
        (
            a("areClasses", &["C", "O1"]),
            vec![a("isClass", &["C", "O2"]), a("areImpOntologies", &["O1", "O2"])],
        ),
        // individuals
        (a("areIndividuals", &["I", "C"]), vec![a("isIndividual", &["I", "C"])]),
        (
            a("areIndividuals", &["I", "C2"]),
            vec![a("isIndividual", &["I", "C1"]), a("areSubClasses", &["C1", "C2"])],
        ),
        (
            a("areIndividuals", &["I", "C"]),
            vec![a("isOProperty", &["P", "C", "R"]), a("areStatements", &["I", "P", "J"])],
        ),
        (
            a("areIndividuals", &["J", "C"]),
            vec![a("isOProperty", &["P", "D", "C"]), a("areStatements", &["I", "P", "J"])],
        ),
        (
            a("areIndividuals", &["I", "C"]),
            vec![a("isDProperty", &["P", "C"]), a("areStatements", &["I", "P", "J"])],
        ),
        (
            a("areIndividuals", &["J", "C"]),
            vec![
                a("isIndividual", &["I", "C1"]),
                a("allValuesFrom", &["C1", "P", "C"]),
                a("areStatements", &["I", "P", "J"]),
            ],
        ),
        // statements, closed under transitive properties
        (a("areStatements", &["I", "P", "J"]), vec![a("isStatement", &["I", "P", "J"])]),
        (
            a("areStatements", &["I", "P", "J"]),
            vec![
                a("isTransitive", &["P"]),
                a("isStatement", &["I", "P", "K"]),
                a("areStatements", &["K", "P", "J"]),
            ],
        ),
    ];
    rules
        .into_iter()
        .map(|(head, body)| Rule::new(head, body).expect("built-in rules are safe"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{Predicate, PredicateKind};
    use std::collections::{BTreeMap, BTreeSet};

    fn rule_text(r: &Rule) -> String {
        r.to_string()
    }

    #[test]
    fn contains_subclass_rules() {
        let texts: Vec<String> = builtin_iob_program().iter().map(rule_text).collect();
        assert!(texts.contains(&"areSubClasses(C1,C2) :- subClassOf(C1,C2).".to_string()));
        assert!(texts.contains(
            &"areSubClasses(C1,C2) :- subClassOf(C1,C3), areSubClasses(C3,C2).".to_string()
        ));
    }

    #[test]
    fn rule_counts_per_head() {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for r in builtin_iob_program() {
            *counts.entry(r.head.predicate.clone()).or_default() += 1;
        }
        assert_eq!(counts["areSubClasses"], 2);
        assert_eq!(counts["areImpOntologies"], 2);
        assert_eq!(counts["areClasses"], 2);
        assert_eq!(counts["areIndividuals"], 6);
        assert_eq!(counts["areStatements"], 2);
    }

    #[test]
    fn every_rule_is_safe_and_well_typed() {
        for r in builtin_iob_program() {
            r.check_safety().unwrap();
            assert_eq!(r.head.builtin().unwrap().kind(), PredicateKind::Iob);
            for b in &r.body {
                b.builtin().unwrap();
            }
        }
        // every IOB predicate is defined
        let heads: BTreeSet<_> = builtin_iob_program()
            .iter()
            .map(|r| r.head.builtin().unwrap())
            .collect();
        assert_eq!(heads, Predicate::iob().collect());
    }

    #[test]
    fn recursion_only_through_closures() {
        // self-recursive heads
        let recursive: BTreeSet<String> = builtin_iob_program()
            .into_iter()
            .filter(|r| r.body.iter().any(|b| b.predicate == r.head.predicate))
            .map(|r| r.head.predicate)
            .collect();
        let expected: BTreeSet<String> = ["areSubClasses", "areImpOntologies", "areStatements"]
            .into_iter()
            .map(String::from)
            .collect();
        assert_eq!(recursive, expected);
    }
}
