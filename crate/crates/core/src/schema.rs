//! Built-in predicate schema of the OWL Lite subset.
//!
//! The schema is closed: ten extensional predicates hold the translated
//! ontology statements and five intensional predicates carry the inference
//! semantics. Every predicate also records, per argument, which ontology
//! domain its values are drawn from; the analyzer uses this to size sampling
//! partitions.

use std::fmt;

/// Whether a predicate is stored (extensional) or derived by rules (intensional).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredicateKind {
    Eob,
    Iob,
}

impl fmt::Display for PredicateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredicateKind::Eob => f.write_str("EOB"),
            PredicateKind::Iob => f.write_str("IOB"),
        }
    }
}

/// The set an argument's values range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArgDomain {
    Ontology,
    Class,
    Property,
    Individual,
    /// Objects of `isStatement` facts.
    Value,
}

impl fmt::Display for ArgDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArgDomain::Ontology => "ontology",
            ArgDomain::Class => "class",
            ArgDomain::Property => "property",
            ArgDomain::Individual => "individual",
            ArgDomain::Value => "value",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    IsOntology,
    ImpOntology,
    IsClass,
    IsOProperty,
    IsDProperty,
    IsTransitive,
    SubClassOf,
    AllValuesFrom,
    IsIndividual,
    IsStatement,
    AreSubClasses,
    AreImpOntologies,
    AreClasses,
    AreIndividuals,
    AreStatements,
}

/// Static description of one built-in predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredicateSchema {
    pub name: &'static str,
    pub kind: PredicateKind,
    pub arg_domains: &'static [ArgDomain],
}

impl PredicateSchema {
    pub fn arity(&self) -> usize {
        self.arg_domains.len()
    }
}

use ArgDomain::*;

impl Predicate {
    pub const ALL: [Predicate; 15] = [
        Predicate::IsOntology,
        Predicate::ImpOntology,
        Predicate::IsClass,
        Predicate::IsOProperty,
        Predicate::IsDProperty,
        Predicate::IsTransitive,
        Predicate::SubClassOf,
        Predicate::AllValuesFrom,
        Predicate::IsIndividual,
        Predicate::IsStatement,
        Predicate::AreSubClasses,
        Predicate::AreImpOntologies,
        Predicate::AreClasses,
        Predicate::AreIndividuals,
        Predicate::AreStatements,
    ];

    pub const EOB_COUNT: usize = 10;

    pub fn schema(self) -> PredicateSchema {
        let (name, kind, arg_domains): (&'static str, PredicateKind, &'static [ArgDomain]) =
            match self {
                Predicate::IsOntology => ("isOntology", PredicateKind::Eob, &[Ontology]),
                Predicate::ImpOntology => {
                    ("impOntology", PredicateKind::Eob, &[Ontology, Ontology])
                }
                Predicate::IsClass => ("isClass", PredicateKind::Eob, &[Class, Ontology]),
                Predicate::IsOProperty => {
                    ("isOProperty", PredicateKind::Eob, &[Property, Class, Class])
                }
                Predicate::IsDProperty => ("isDProperty", PredicateKind::Eob, &[Property, Class]),
                Predicate::IsTransitive => ("isTransitive", PredicateKind::Eob, &[Property]),
                Predicate::SubClassOf => ("subClassOf", PredicateKind::Eob, &[Class, Class]),
                Predicate::AllValuesFrom => {
                    ("allValuesFrom", PredicateKind::Eob, &[Class, Property, Class])
                }
                Predicate::IsIndividual => {
                    ("isIndividual", PredicateKind::Eob, &[Individual, Class])
                }
                Predicate::IsStatement => {
                    ("isStatement", PredicateKind::Eob, &[Individual, Property, Value])
                }
                Predicate::AreSubClasses => ("areSubClasses", PredicateKind::Iob, &[Class, Class]),
                Predicate::AreImpOntologies => {
                    ("areImpOntologies", PredicateKind::Iob, &[Ontology, Ontology])
                }
                Predicate::AreClasses => ("areClasses", PredicateKind::Iob, &[Class, Ontology]),
                Predicate::AreIndividuals => {
                    ("areIndividuals", PredicateKind::Iob, &[Individual, Class])
                }
                Predicate::AreStatements => {
                    ("areStatements", PredicateKind::Iob, &[Individual, Property, Value])
                }
            };
        PredicateSchema {
            name,
            kind,
            arg_domains,
        }
    }

    pub fn name(self) -> &'static str {
        self.schema().name
    }

    pub fn arity(self) -> usize {
        self.schema().arity()
    }

    pub fn kind(self) -> PredicateKind {
        self.schema().kind
    }

    pub fn is_eob(self) -> bool {
        self.kind() == PredicateKind::Eob
    }

    pub fn arg_domains(self) -> &'static [ArgDomain] {
        self.schema().arg_domains
    }

    /// Dense index; EOB predicates occupy `0..EOB_COUNT`.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Looks up a built-in by its surface name. `AllValuesFrom` is accepted as
    /// an alias of `allValuesFrom`.
    pub fn from_name(name: &str) -> Option<Predicate> {
        if name == "AllValuesFrom" {
            return Some(Predicate::AllValuesFrom);
        }
        Predicate::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn eob() -> impl Iterator<Item = Predicate> {
        Predicate::ALL.into_iter().filter(|p| p.is_eob())
    }

    pub fn iob() -> impl Iterator<Item = Predicate> {
        Predicate::ALL.into_iter().filter(|p| !p.is_eob())
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
