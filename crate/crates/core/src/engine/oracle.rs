use std::collections::{BTreeSet, HashMap};

use crate::base::{ConstId, OntologyBase};
use crate::program::builtin_iob_program;
use crate::schema::Predicate;
use crate::syntax::{Atom, Term};

type Env<'r> = HashMap<&'r str, ConstId>;

fn matches<'r>(env: &Env<'r>, args: &'r [Term], tuple: &[ConstId], base: &OntologyBase) -> Option<Env<'r>> {
    let mut out = env.clone();
    for (term, &value) in args.iter().zip(tuple) {
        match term {
            Term::Const(c) => {
                if base.lookup_constant(c) != Some(value) {
                    return None;
                }
            }
            Term::Var(v) => match out.get(v.as_str()) {
                Some(&x) if x != value => return None,
                Some(_) => {}
                None => {
                    out.insert(v.as_str(), value);
                }
            },
        }
    }
    Some(out)
}

/// Naive bottom-up fixpoint of the IOB program over the base's facts.
///
/// Returns the derived IOB facts only. Uses plain nested-loop scans with no
/// indexes or tabling; it exists to check the top-down engine.
pub fn bottom_up_oracle(base: &OntologyBase) -> BTreeSet<Atom> {
    let rules = builtin_iob_program();
    let mut model: HashMap<Predicate, BTreeSet<Vec<ConstId>>> = HashMap::new();
    for p in Predicate::eob() {
        model.insert(p, base.tuples(p).map(<[ConstId]>::to_vec).collect());
    }
    for p in Predicate::iob() {
        model.insert(p, BTreeSet::new());
    }
    loop {
        let mut derived: Vec<(Predicate, Vec<ConstId>)> = Vec::new();
        for rule in &rules {
            let mut envs: Vec<Env> = vec![Env::new()];
            for atom in &rule.body {
                let pred = Predicate::from_name(&atom.predicate).expect("built-in");
                let mut next = Vec::new();
                for env in &envs {
                    for tuple in &model[&pred] {
                        if let Some(e) = matches(env, &atom.args, tuple, base) {
                            next.push(e);
                        }
                    }
                }
                envs = next;
            }
            let head = Predicate::from_name(&rule.head.predicate).expect("built-in");
            for env in envs {
                let tuple = rule
                    .head
                    .args
                    .iter()
                    .map(|t| env[t.text()])
                    .collect::<Vec<_>>();
                derived.push((head, tuple));
            }
        }
        let mut changed = false;
        for (p, t) in derived {
            changed |= model.get_mut(&p).expect("present").insert(t);
        }
        if !changed {
            break;
        }
    }
    Predicate::iob()
        .flat_map(|p| model[&p].iter().map(move |t| (p, t)))
        .map(|(p, t)| base.ground_atom(p, t))
        .collect()
}
