//! OWL Lite subset in functional abstract syntax, and its translation to EOB
//! facts.
//!
//! ```text
//! Ontology(carsOnt)
//! imports base
//! Class(suv partial vehicle)
//! Class(c1 partial restriction(p allValuesFrom(c2)))
//! ObjectProperty(sells domain(dealer) range(vehicle))
//! DatatypeProperty(price domain(vehicle))
//! Property(ancestorOf Transitive)
//! Individual(s123 type(suv) value(soldBy d1))
//! ```
//!
//! Keywords are matched case-insensitively. Each `Ontology(...)` header opens a
//! new document; statements before the first header are an error.

use std::collections::HashMap;

use indexmap::IndexSet;

use crate::error::{ParseError, ParseErrorKind};
use crate::syntax::{Atom, Term};

use super::lexer::{tokenize, Cursor, Tok};

pub const OWL_THING: &str = "owl:Thing";
pub const OWL_IMPORTS: &str = "owl:imports";

/// Known OWL constructs outside the supported subset.
const UNSUPPORTED: &[&str] = &[
    "complementOf",
    "unionOf",
    "intersectionOf",
    "oneOf",
    "someValuesFrom",
    "hasValue",
    "cardinality",
    "minCardinality",
    "maxCardinality",
    "EquivalentClasses",
    "EquivalentProperties",
    "DisjointClasses",
    "SubPropertyOf",
    "SameIndividual",
    "DifferentIndividuals",
    "AllDifferent",
    "inverseOf",
    "Functional",
    "InverseFunctional",
    "Symmetric",
    "EnumeratedClass",
    "complete",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassParent {
    Named(String),
    AllValuesFrom { property: String, class: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OwlStatement {
    /// `Class(name partial parents...)`; `Thing` parents are dropped.
    Class { name: String, parents: Vec<ClassParent> },
    ObjectProperty {
        name: String,
        domain: Option<String>,
        range: Option<String>,
    },
    DatatypeProperty { name: String, domain: Option<String> },
    Transitive { property: String },
    IndividualType { individual: String, class: String },
    IndividualValue {
        individual: String,
        property: String,
        value: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwlDocument {
    pub ontology: String,
    pub imports: Vec<String>,
    pub statements: Vec<OwlStatement>,
}

fn is_thing(s: &str) -> bool {
    s == "Thing" || s == OWL_THING
}

fn kw(word: &str, keyword: &str) -> bool {
    word.eq_ignore_ascii_case(keyword)
}

fn unsupported(line: usize, column: usize, what: &str) -> ParseError {
    ParseError::new(line, column, ParseErrorKind::Unsupported(what.to_owned()))
}

fn check_supported(word: &str, (line, column): (usize, usize)) -> Result<(), ParseError> {
    match UNSUPPORTED.iter().find(|u| kw(word, u)) {
        Some(u) => Err(unsupported(line, column, u)),
        None => Ok(()),
    }
}

fn name(cur: &mut Cursor) -> Result<String, ParseError> {
    let loc = cur.loc();
    match cur.next().map(|t| &t.tok) {
        Some(Tok::Word(w)) => {
            check_supported(w, loc)?;
            Ok(w.clone())
        }
        Some(Tok::Uri(s)) | Some(Tok::Quoted(s)) => Ok(s.clone()),
        _ => Err(cur_err(loc, "expected a name")),
    }
}

fn cur_err((line, column): (usize, usize), msg: &str) -> ParseError {
    ParseError::new(line, column, ParseErrorKind::Syntax(msg.to_owned()))
}

fn peek_word<'t>(cur: &Cursor<'t>) -> Option<&'t str> {
    match cur.peek().map(|t| &t.tok) {
        Some(Tok::Word(w)) => Some(w.as_str()),
        _ => None,
    }
}

/// `keyword ( name )`
fn wrapped(cur: &mut Cursor) -> Result<String, ParseError> {
    cur.expect(&Tok::LParen, "'('")?;
    let n = name(cur)?;
    cur.expect(&Tok::RParen, "')'")?;
    Ok(n)
}

#[derive(Default)]
struct PropertyShape {
    domain: Option<String>,
    range: Option<String>,
}

struct DocBuilder {
    doc: OwlDocument,
    properties: HashMap<String, PropertyShape>,
}

impl DocBuilder {
    fn set_shape(
        &mut self,
        prop: &str,
        domain: Option<&String>,
        range: Option<&String>,
        loc: (usize, usize),
    ) -> Result<(), ParseError> {
        let shape = self.properties.entry(prop.to_owned()).or_default();
        for (slot, new, what) in [(&mut shape.domain, domain, "domain"), (&mut shape.range, range, "range")] {
            if let Some(new) = new {
                match slot {
                    Some(old) if old != new => {
                        return Err(unsupported(
                            loc.0,
                            loc.1,
                            &format!("{what} class intersection for property {prop}"),
                        ))
                    }
                    _ => *slot = Some(new.clone()),
                }
            }
        }
        Ok(())
    }
}

/// Parses a file that may hold several ontologies.
pub fn parse_owl_documents(text: &str) -> Result<Vec<OwlDocument>, ParseError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks);
    let mut docs: Vec<DocBuilder> = Vec::new();
    while !cur.at_end() {
        let loc = cur.loc();
        let head = match cur.next().map(|t| &t.tok) {
            Some(Tok::Word(w)) => w.clone(),
            _ => return Err(cur_err(loc, "expected an OWL construct")),
        };
        check_supported(&head, loc)?;
        if kw(&head, "Ontology") {
            let ontology = wrapped(&mut cur)?;
            docs.push(DocBuilder {
                doc: OwlDocument {
                    ontology,
                    imports: Vec::new(),
                    statements: Vec::new(),
                },
                properties: HashMap::new(),
            });
            continue;
        }
        let Some(b) = docs.last_mut() else {
            return Err(cur_err(loc, "statement before any Ontology(...) header"));
        };
        if kw(&head, "imports") {
            let target = if cur.peek().is_some_and(|t| t.tok == Tok::LParen) {
                wrapped(&mut cur)?
            } else {
                name(&mut cur)?
            };
            b.doc.imports.push(target);
        } else if kw(&head, "Class") {
            parse_class(&mut cur, &mut b.doc)?;
        } else if kw(&head, "ObjectProperty") {
            cur.expect(&Tok::LParen, "'('")?;
            let prop = name(&mut cur)?;
            let (mut domain, mut range, mut transitive) = (None, None, false);
            while let Some(w) = peek_word(&cur) {
                let wloc = cur.loc();
                cur.next();
                if kw(w, "domain") {
                    let d = wrapped(&mut cur)?;
                    if domain.replace(d.clone()).is_some_and(|old| old != d) {
                        return Err(unsupported(wloc.0, wloc.1, &format!("domain class intersection for property {prop}")));
                    }
                } else if kw(w, "range") {
                    let r = wrapped(&mut cur)?;
                    if range.replace(r.clone()).is_some_and(|old| old != r) {
                        return Err(unsupported(wloc.0, wloc.1, &format!("range class intersection for property {prop}")));
                    }
                } else if kw(w, "Transitive") {
                    transitive = true;
                } else {
                    check_supported(w, wloc)?;
                    return Err(cur_err(wloc, &format!("unexpected {w} in ObjectProperty")));
                }
            }
            cur.expect(&Tok::RParen, "')'")?;
            b.set_shape(&prop, domain.as_ref(), range.as_ref(), loc)?;
            b.doc.statements.push(OwlStatement::ObjectProperty {
                name: prop.clone(),
                domain,
                range,
            });
            if transitive {
                b.doc.statements.push(OwlStatement::Transitive { property: prop });
            }
        } else if kw(&head, "DatatypeProperty") || kw(&head, "DataProperty") {
            cur.expect(&Tok::LParen, "'('")?;
            let prop = name(&mut cur)?;
            let mut domain = None;
            while let Some(w) = peek_word(&cur) {
                let wloc = cur.loc();
                cur.next();
                if kw(w, "domain") {
                    let d = wrapped(&mut cur)?;
                    if domain.replace(d.clone()).is_some_and(|old| old != d) {
                        return Err(unsupported(wloc.0, wloc.1, &format!("domain class intersection for property {prop}")));
                    }
                } else if kw(w, "range") {
                    return Err(unsupported(wloc.0, wloc.1, "datatype property range"));
                } else {
                    check_supported(w, wloc)?;
                    return Err(cur_err(wloc, &format!("unexpected {w} in DatatypeProperty")));
                }
            }
            cur.expect(&Tok::RParen, "')'")?;
            b.set_shape(&prop, domain.as_ref(), None, loc)?;
            b.doc.statements.push(OwlStatement::DatatypeProperty { name: prop, domain });
        } else if kw(&head, "Property") {
            cur.expect(&Tok::LParen, "'('")?;
            let prop = name(&mut cur)?;
            let wloc = cur.loc();
            match peek_word(&cur) {
                Some(w) if kw(w, "Transitive") => {
                    cur.next();
                }
                Some(w) => {
                    check_supported(w, wloc)?;
                    return Err(cur_err(wloc, "expected Transitive"));
                }
                None => return Err(cur_err(wloc, "expected Transitive")),
            }
            cur.expect(&Tok::RParen, "')'")?;
            b.doc.statements.push(OwlStatement::Transitive { property: prop });
        } else if kw(&head, "Individual") {
            cur.expect(&Tok::LParen, "'('")?;
            let ind = name(&mut cur)?;
            while let Some(w) = peek_word(&cur) {
                let wloc = cur.loc();
                cur.next();
                if kw(w, "type") {
                    let class = wrapped(&mut cur)?;
                    b.doc.statements.push(OwlStatement::IndividualType {
                        individual: ind.clone(),
                        class,
                    });
                } else if kw(w, "value") {
                    cur.expect(&Tok::LParen, "'('")?;
                    let property = name(&mut cur)?;
                    let value = name(&mut cur)?;
                    cur.expect(&Tok::RParen, "')'")?;
                    b.doc.statements.push(OwlStatement::IndividualValue {
                        individual: ind.clone(),
                        property,
                        value,
                    });
                } else {
                    check_supported(w, wloc)?;
                    return Err(cur_err(wloc, &format!("unexpected {w} in Individual")));
                }
            }
            cur.expect(&Tok::RParen, "')'")?;
        } else {
            return Err(cur_err(loc, &format!("unknown construct {head}")));
        }
    }
    Ok(docs.into_iter().map(|b| b.doc).collect())
}

fn parse_class(cur: &mut Cursor, doc: &mut OwlDocument) -> Result<(), ParseError> {
    cur.expect(&Tok::LParen, "'('")?;
    let class = name(cur)?;
    let mut parents = Vec::new();
    if !cur.eat(&Tok::RParen) {
        let mloc = cur.loc();
        match peek_word(cur) {
            Some(w) if kw(w, "partial") => {
                cur.next();
            }
            Some(w) => {
                check_supported(w, mloc)?;
                return Err(cur_err(mloc, "expected 'partial'"));
            }
            None => return Err(cur_err(mloc, "expected 'partial'")),
        }
        while !cur.eat(&Tok::RParen) {
            let ploc = cur.loc();
            let parent = name(cur)?;
            if kw(&parent, "restriction") {
                cur.expect(&Tok::LParen, "'('")?;
                let property = name(cur)?;
                let rloc = cur.loc();
                match peek_word(cur) {
                    Some(w) if kw(w, "allValuesFrom") => {
                        cur.next();
                    }
                    Some(w) => {
                        check_supported(w, rloc)?;
                        return Err(cur_err(rloc, "expected allValuesFrom"));
                    }
                    None => return Err(cur_err(rloc, "expected allValuesFrom")),
                }
                let target = wrapped(cur)?;
                cur.expect(&Tok::RParen, "')'")?;
                parents.push(ClassParent::AllValuesFrom {
                    property,
                    class: target,
                });
            } else if cur.peek().is_some_and(|t| t.tok == Tok::LParen) {
                return Err(cur_err(ploc, &format!("unexpected {parent}(...) in Class")));
            } else if !is_thing(&parent) {
                parents.push(ClassParent::Named(parent));
            }
        }
    }
    doc.statements.push(OwlStatement::Class {
        name: class,
        parents,
    });
    Ok(())
}

/// Parses a single-ontology document.
pub fn parse_owl(text: &str) -> Result<OwlDocument, ParseError> {
    let mut docs = parse_owl_documents(text)?;
    match docs.len() {
        1 => Ok(docs.pop().expect("one")),
        0 => Err(ParseError::new(1, 1, ParseErrorKind::Syntax("missing Ontology(...) header".into()))),
        _ => Err(ParseError::new(
            1,
            1,
            ParseErrorKind::Syntax("several ontologies; use parse_owl_documents".into()),
        )),
    }
}

fn fact(pred: &str, args: &[&str]) -> Atom {
    Atom::new(pred, args.iter().map(|a| Term::constant(*a)).collect())
}

/// Maps a document to EOB facts, in first-emitted order without duplicates.
pub fn translate_owl(doc: &OwlDocument) -> Vec<Atom> {
    let o = doc.ontology.as_str();
    let mut out: IndexSet<Atom> = IndexSet::new();
    out.insert(fact("isOntology", &[o]));
    for i in &doc.imports {
        out.insert(fact("impOntology", &[o, i]));
    }
    // merged object property shapes
    let mut shapes: HashMap<&str, (Option<&str>, Option<&str>)> = HashMap::new();
    for s in &doc.statements {
        if let OwlStatement::ObjectProperty { name, domain, range } = s {
            let e = shapes.entry(name).or_default();
            e.0 = e.0.or(domain.as_deref());
            e.1 = e.1.or(range.as_deref());
        }
    }
    for s in &doc.statements {
        match s {
            OwlStatement::Class { name, parents } => {
                out.insert(fact("isClass", &[name, o]));
                for p in parents {
                    match p {
                        ClassParent::Named(c) => out.insert(fact("subClassOf", &[name, c])),
                        ClassParent::AllValuesFrom { property, class } => {
                            out.insert(fact("allValuesFrom", &[name, property, class]))
                        }
                    };
                }
            }
            OwlStatement::ObjectProperty { name, .. } => {
                let (d, r) = shapes[name.as_str()];
                out.insert(fact(
                    "isOProperty",
                    &[name, d.unwrap_or(OWL_THING), r.unwrap_or(OWL_THING)],
                ));
            }
            OwlStatement::DatatypeProperty { name, domain } => {
                out.insert(fact("isDProperty", &[name, domain.as_deref().unwrap_or(OWL_THING)]));
            }
            OwlStatement::Transitive { property } => {
                out.insert(fact("isTransitive", &[property]));
            }
            OwlStatement::IndividualType { individual, class } => {
                out.insert(fact("isIndividual", &[individual, class]));
            }
            OwlStatement::IndividualValue {
                individual,
                property,
                value,
            } => {
                if property == OWL_IMPORTS {
                    out.insert(fact("impOntology", &[individual, value]));
                } else {
                    out.insert(fact("isStatement", &[individual, property, value]));
                }
            }
        }
    }
    out.into_iter().collect()
}
