//! `.dob` fact files and conjunctive query text.

use crate::error::{ParseError, ParseErrorKind};
use crate::schema::Predicate;
use crate::syntax::{is_variable_name, Atom, Query, Term};

use super::lexer::{tokenize, Cursor, Tok};

fn parse_term(cur: &mut Cursor) -> Result<Term, ParseError> {
    let (line, column) = cur.loc();
    match cur.next().map(|t| &t.tok) {
        Some(Tok::Quoted(s)) | Some(Tok::Uri(s)) => Ok(Term::Const(s.clone())),
        Some(Tok::Word(w)) => {
            if is_variable_name(w) {
                Ok(Term::Var(w.clone()))
            } else if w.starts_with(|c: char| c.is_ascii_lowercase() || c.is_ascii_digit()) {
                Ok(Term::Const(w.clone()))
            } else {
                Err(ParseError::new(
                    line,
                    column,
                    ParseErrorKind::Syntax(format!("malformed identifier {w}")),
                ))
            }
        }
        _ => Err(ParseError::new(
            line,
            column,
            ParseErrorKind::Syntax("expected a term".into()),
        )),
    }
}

/// Parses `name(t1,...,tn)` (or a bare `name`) and returns it with its location.
pub(crate) fn parse_atom(cur: &mut Cursor) -> Result<(Atom, (usize, usize)), ParseError> {
    let loc = cur.loc();
    let name = match cur.next().map(|t| &t.tok) {
        Some(Tok::Word(w)) => w.clone(),
        _ => return Err(ParseError::new(loc.0, loc.1, ParseErrorKind::Syntax("expected a predicate name".into()))),
    };
    let mut args = Vec::new();
    if cur.eat(&Tok::LParen) {
        loop {
            args.push(parse_term(cur)?);
            if cur.eat(&Tok::Comma) {
                continue;
            }
            cur.expect(&Tok::RParen, "',' or ')'")?;
            break;
        }
    }
    Ok((Atom::new(name, args), loc))
}

fn check_builtin(atom: &Atom, (line, column): (usize, usize)) -> Result<Predicate, ParseError> {
    let pred = Predicate::from_name(&atom.predicate).ok_or_else(|| {
        ParseError::new(line, column, ParseErrorKind::UnknownPredicate(atom.predicate.clone()))
    })?;
    if pred.arity() != atom.args.len() {
        return Err(ParseError::new(
            line,
            column,
            ParseErrorKind::ArityMismatch {
                predicate: atom.predicate.clone(),
                expected: pred.arity(),
                found: atom.args.len(),
            },
        ));
    }
    Ok(pred)
}

/// Parses a `.dob` document: one `pred(c1,...,cn).` fact per line, `%`
/// comments and blank lines ignored.
pub fn parse_dob(text: &str) -> Result<Vec<Atom>, ParseError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks);
    let mut facts = Vec::new();
    while !cur.at_end() {
        let (mut atom, loc) = parse_atom(&mut cur)?;
        let pred = check_builtin(&atom, loc)?;
        if !pred.is_eob() {
            return Err(ParseError::new(loc.0, loc.1, ParseErrorKind::NotExtensional(atom.predicate)));
        }
        if let Some(v) = atom.variables().next() {
            return Err(ParseError::new(loc.0, loc.1, ParseErrorKind::VariableInFact(v.to_owned())));
        }
        // normalize the AllValuesFrom spelling
        atom.predicate = pred.name().to_owned();
        cur.expect(&Tok::Dot, "'.' after fact")?;
        facts.push(atom);
    }
    Ok(facts)
}

/// Serializes facts in `.dob` form; the inverse of [`parse_dob`].
pub fn render_dob(facts: &[Atom]) -> String {
    let mut out = String::new();
    for f in facts {
        out.push_str(&f.to_string());
        out.push_str(".\n");
    }
    out
}

/// Parses `head :- atom, ..., atom.` (the final `.` is optional).
pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks);
    let (head, head_loc) = parse_atom(&mut cur)?;
    cur.expect(&Tok::Turnstile, "':-'")?;
    let mut body = Vec::new();
    loop {
        let (mut atom, loc) = parse_atom(&mut cur)?;
        let pred = check_builtin(&atom, loc)?;
        atom.predicate = pred.name().to_owned();
        body.push(atom);
        if cur.eat(&Tok::Comma) {
            continue;
        }
        break;
    }
    cur.eat(&Tok::Dot);
    if !cur.at_end() {
        return Err(cur.error("unexpected input after query"));
    }
    let bound: std::collections::BTreeSet<&str> = body.iter().flat_map(|a| a.variables()).collect();
    if let Some(v) = head.variables().find(|v| !bound.contains(v)) {
        return Err(ParseError::new(
            head_loc.0,
            head_loc.1,
            ParseErrorKind::Unsafe(format!("head variable {v} does not occur in the body")),
        ));
    }
    Ok(Query { head, body })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_fact() {
        assert_eq!(
            parse_dob("isClass(vehicle,carsOnt).").unwrap(),
            vec![Atom::parse_args("isClass", &["vehicle", "carsOnt"])]
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        assert!(parse_dob("% comment\n").unwrap().is_empty());
        assert!(parse_dob("\n\n   \n").unwrap().is_empty());
        let facts = parse_dob("% header\nisOntology(a). % trailing\n\nisOntology(b).\n").unwrap();
        assert_eq!(facts.len(), 2);
    }

    #[test]
    fn fact_errors_carry_location() {
        let e = parse_dob("isOntology(a).\n  isClass(X,carsOnt).").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::VariableInFact("X".into()));
        assert_eq!((e.location.line, e.location.column), (2, 3));
        let e = parse_dob("isKlass(a,b).").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnknownPredicate(_)));
        let e = parse_dob("areClasses(a,b).").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::NotExtensional(_)));
        let e = parse_dob("isClass(a).").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::ArityMismatch { .. }));
        let e = parse_dob("isClass(a,b)").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn capital_all_values_from_is_normalized() {
        let facts = parse_dob("AllValuesFrom(c,p,d).").unwrap();
        assert_eq!(facts[0].predicate, "allValuesFrom");
    }

    #[test]
    fn motivating_query() {
        let q = parse_query("q(O):-areClasses(C,O),isDProperty(traction,C).").unwrap();
        assert_eq!(q.head, Atom::parse_args("q", &["O"]));
        assert_eq!(
            q.body,
            vec![
                Atom::parse_args("areClasses", &["C", "O"]),
                Atom::parse_args("isDProperty", &["traction", "C"]),
            ]
        );
    }

    #[test]
    fn query_errors() {
        let e = parse_query("q(Z):-isClass(C,O).").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Unsafe(_)));
        let e = parse_query("q(C):-nope(C).").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnknownPredicate(_)));
        assert!(parse_query("q(C) isClass(C,o).").is_err());
        assert!(parse_query("q(C):-isClass(C,o). extra").is_err());
    }

    #[test]
    fn query_constants() {
        let q = parse_query("q(C):-isClass(C,carsOnt).").unwrap();
        assert_eq!(q.body[0].args[1], Term::constant("carsOnt"));
        let q = parse_query("q(C) :- isClass(C, \"http://x/o\")").unwrap();
        assert_eq!(q.body[0].args[1], Term::constant("http://x/o"));
    }

    fn constant() -> impl Strategy<Value = String> {
        prop_oneof![
            "[a-z][A-Za-z0-9_]{0,6}(:[a-z0-9]{1,4})?",
            "[ -~]{1,8}",
        ]
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(
            facts in prop::collection::vec((0usize..10, constant(), constant(), constant()), 0..20)
        ) {
            let atoms: Vec<Atom> = facts
                .into_iter()
                .map(|(p, a, b, c)| {
                    let pred = Predicate::eob().nth(p).unwrap();
                    let vals = [a, b, c];
                    Atom::new(pred.name(), vals[..pred.arity()].iter().map(|v| Term::constant(v.clone())).collect())
                })
                .collect();
            prop_assert_eq!(parse_dob(&render_dob(&atoms)).unwrap(), atoms);
        }
    }
}
