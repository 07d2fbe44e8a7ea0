//! Datalog surface syntax: terms, atoms, rules and conjunctive queries.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::schema::Predicate;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn constant(s: impl Into<String>) -> Term {
        Term::Const(s.into())
    }

    pub fn var(s: impl Into<String>) -> Term {
        Term::Var(s.into())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn text(&self) -> &str {
        match self {
            Term::Const(s) | Term::Var(s) => s,
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

/// True when `s` can be written without quotes as a constant.
pub fn is_bare_constant(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    let rest: Vec<char> = chars.collect();
    if rest.last() == Some(&'.') || rest.last() == Some(&':') {
        return false;
    }
    rest.iter()
        .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | ':' | '.'))
}

/// True when `s` is a well-formed variable name.
pub fn is_variable_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_uppercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn write_constant(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    if is_bare_constant(s) {
        f.write_str(s)
    } else {
        f.write_char('"')?;
        for c in s.chars() {
            match c {
                '"' => f.write_str("\\\"")?,
                '\\' => f.write_str("\\\\")?,
                '\n' => f.write_str("\\n")?,
                _ => f.write_char(c)?,
            }
        }
        f.write_char('"')
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write_constant(f, c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    /// Builds an atom from surface tokens: uppercase-initial tokens become
    /// variables, everything else constants.
    pub fn parse_args(predicate: &str, args: &[&str]) -> Atom {
        Atom::new(
            predicate,
            args.iter()
                .map(|a| {
                    if is_variable_name(a) {
                        Term::var(*a)
                    } else {
                        Term::constant(*a)
                    }
                })
                .collect(),
        )
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_var())
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Term::as_var)
    }

    /// Resolves the predicate against the built-in schema and checks arity.
    pub fn builtin(&self) -> Result<Predicate> {
        let pred = Predicate::from_name(&self.predicate)
            .ok_or_else(|| Error::UnknownPredicate(self.predicate.clone()))?;
        if pred.arity() != self.args.len() {
            return Err(Error::ArityMismatch {
                atom: self.to_string(),
                expected: pred.arity(),
                found: self.args.len(),
            });
        }
        Ok(pred)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if self.args.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

fn body_vars(body: &[Atom]) -> BTreeSet<&str> {
    body.iter().flat_map(|a| a.variables()).collect()
}

/// A safe, negation-free Horn rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<Atom>,
}

impl Rule {
    pub fn new(head: Atom, body: Vec<Atom>) -> Result<Rule> {
        let rule = Rule { head, body };
        rule.check_safety()?;
        Ok(rule)
    }

    pub fn check_safety(&self) -> Result<()> {
        if self.body.is_empty() {
            return Err(Error::Unsafe(format!("rule {self} has an empty body")));
        }
        let bound = body_vars(&self.body);
        if let Some(v) = self.head.variables().find(|v| !bound.contains(v)) {
            return Err(Error::Unsafe(format!(
                "head variable {v} of rule {self} does not occur in the body"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :- ", self.head)?;
        for (i, a) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(".")
    }
}

/// A conjunctive query over built-in predicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Query {
    pub head: Atom,
    pub body: Vec<Atom>,
}

impl Query {
    /// Validates safety and that every body atom is a built-in with the right arity.
    pub fn new(head: Atom, body: Vec<Atom>) -> Result<Query> {
        if body.is_empty() {
            return Err(Error::EmptyBody);
        }
        for atom in &body {
            atom.builtin()?;
        }
        let bound = body_vars(&body);
        if let Some(v) = head.variables().find(|v| !bound.contains(v)) {
            return Err(Error::Unsafe(format!(
                "head variable {v} does not occur in the query body"
            )));
        }
        Ok(Query { head, body })
    }

    /// Same query with the body atoms rearranged; `order` lists original indices.
    pub fn reordered(&self, order: &[usize]) -> Query {
        Query {
            head: self.head.clone(),
            body: order.iter().map(|&i| self.body[i].clone()).collect(),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:-", self.head)?;
        for (i, a) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(".")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_quoting() {
        assert!(is_bare_constant("owl:Thing"));
        assert!(is_bare_constant("carsOnt"));
        assert!(!is_bare_constant("Vehicle"));
        assert!(!is_bare_constant("http://x/y"));
        assert!(!is_bare_constant("a."));
        assert_eq!(Term::constant("has space").to_string(), "\"has space\"");
        assert_eq!(Term::constant("q\"x").to_string(), "\"q\\\"x\"");
    }

    #[test]
    fn rule_safety() {
        let head = Atom::parse_args("areSubClasses", &["C1", "C2"]);
        let ok = Rule::new(head.clone(), vec![Atom::parse_args("subClassOf", &["C1", "C2"])]);
        assert!(ok.is_ok());
        let bad = Rule::new(head.clone(), vec![Atom::parse_args("subClassOf", &["C1", "C3"])]);
        assert!(matches!(bad, Err(Error::Unsafe(_))));
        assert!(matches!(Rule::new(head, vec![]), Err(Error::Unsafe(_))));
    }

    #[test]
    fn query_checks_builtins_and_safety() {
        let head = Atom::parse_args("q", &["Z"]);
        let body = vec![Atom::parse_args("isClass", &["C", "O"])];
        assert!(matches!(Query::new(head, body.clone()), Err(Error::Unsafe(_))));
        let head = Atom::parse_args("q", &["C"]);
        assert!(Query::new(head.clone(), body).is_ok());
        let body = vec![Atom::parse_args("isClass", &["C"])];
        assert!(matches!(Query::new(head.clone(), body), Err(Error::ArityMismatch { .. })));
        let body = vec![Atom::parse_args("nope", &["C"])];
        assert!(matches!(Query::new(head, body), Err(Error::UnknownPredicate(_))));
    }

    #[test]
    fn display_round_trips_visually() {
        let q = Query::new(
            Atom::parse_args("q", &["O"]),
            vec![
                Atom::parse_args("areClasses", &["C", "O"]),
                Atom::parse_args("isDProperty", &["traction", "C"]),
            ],
        )
        .unwrap();
        assert_eq!(q.to_string(), "q(O):-areClasses(C,O),isDProperty(traction,C).");
    }
}
