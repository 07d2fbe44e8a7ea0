use super::*;
use crate::fixtures::{cars_base, CARS_QUERY, CARS_QUERY_REORDERED};
use crate::frontends::parse_query;
use crate::testutil::{pool, small_base};
use crate::syntax::Term;
use proptest::prelude::*;

fn atom(pred: &str, args: &[&str]) -> Atom {
    Atom::parse_args(pred, args)
}

fn run(base: &OntologyBase, a: &Atom) -> EvaluationResult {
    solve(base, a, &mut MemoTable::new()).unwrap()
}

fn sequence(base: &OntologyBase, text: &str) -> (Vec<Substitution>, Counters, VarTable) {
    let q = parse_query(text).unwrap();
    let body = CompiledBody::compile(base, &q.body).unwrap();
    let (rows, c) = solve_sequence(base, &body, &[Substitution::empty(0)], &mut MemoTable::new()).unwrap();
    (rows, c, body.vars)
}

#[test]
fn cars_are_classes_has_twelve_answers() {
    let base = cars_base();
    let r = run(&base, &atom("areClasses", &["C", "O"]));
    assert_eq!(r.answers.len(), 12);
    for o in ["carsOnt", "source1", "source2"] {
        let n = r.answers.iter().filter(|a| a.args[1].text() == o).count();
        assert_eq!(n, 4, "{o}");
    }
}

#[test]
fn cars_are_classes_matches_oracle_and_counts_relevant_facts() {
    let base = cars_base();
    let oracle = bottom_up_oracle(&base);
    let r = run(&base, &atom("areClasses", &["C", "O"]));
    let expected: BTreeSet<Atom> = oracle.iter().filter(|a| a.predicate == "areClasses").cloned().collect();
    assert_eq!(r.answers.iter().cloned().collect::<BTreeSet<_>>(), expected);
    // the relevant subprogram derives areClasses and areImpOntologies facts
    let relevant = oracle
        .iter()
        .filter(|a| a.predicate == "areClasses" || a.predicate == "areImpOntologies")
        .count() as u64;
    assert_eq!(r.inferred_fact_count, relevant);
    assert_eq!(r.inferred_fact_count, 14);
}

#[test]
fn eob_atom_infers_nothing() {
    let base = cars_base();
    let r = run(&base, &atom("isDProperty", &["traction", "C"]));
    assert_eq!(r.answers, vec![atom("isDProperty", &["traction", "suv"])]);
    assert_eq!(r.inferred_fact_count, 0);
    assert_eq!(r.eob_access_count, 1);
}

#[test]
fn subclass_chain_closure() {
    let mut base = OntologyBase::new();
    base.insert(Predicate::SubClassOf, &["a", "b"]).unwrap();
    base.insert(Predicate::SubClassOf, &["b", "c"]).unwrap();
    let got: BTreeSet<Atom> = run(&base, &atom("areSubClasses", &["C1", "C2"])).answers.into_iter().collect();
    let want: BTreeSet<Atom> = [["a", "b"], ["b", "c"], ["a", "c"]]
        .iter()
        .map(|p| atom("areSubClasses", p))
        .collect();
    assert_eq!(got, want);
}

#[test]
fn cyclic_subclass_terminates() {
    let mut base = OntologyBase::new();
    base.insert(Predicate::SubClassOf, &["a", "b"]).unwrap();
    base.insert(Predicate::SubClassOf, &["b", "a"]).unwrap();
    for q in [["C1", "C2"], ["a", "C2"], ["C1", "a"], ["a", "a"]] {
        let got = run(&base, &atom("areSubClasses", &q)).answers;
        let oracle: Vec<Atom> = bottom_up_oracle(&base)
            .into_iter()
            .filter(|f| f.predicate == "areSubClasses")
            .filter(|f| q.iter().zip(&f.args).all(|(p, t)| p.starts_with(char::is_uppercase) || *p == t.text()))
            .collect();
        assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), oracle.into_iter().collect());
    }
}

#[test]
fn cyclic_imports_terminate() {
    let mut base = OntologyBase::new();
    for (a, b) in [("o1", "o2"), ("o2", "o3"), ("o3", "o1")] {
        base.insert(Predicate::ImpOntology, &[a, b]).unwrap();
    }
    base.insert(Predicate::IsClass, &["c", "o1"]).unwrap();
    let r = run(&base, &atom("areClasses", &["c", "O"]));
    assert_eq!(r.answers.len(), 3);
}

#[test]
fn transitive_statements() {
    let mut base = OntologyBase::new();
    base.insert(Predicate::IsTransitive, &["partOf"]).unwrap();
    base.insert(Predicate::IsStatement, &["a", "partOf", "b"]).unwrap();
    base.insert(Predicate::IsStatement, &["b", "partOf", "c"]).unwrap();
    base.insert(Predicate::IsStatement, &["x", "near", "a"]).unwrap();
    base.insert(Predicate::IsStatement, &["a", "near", "y"]).unwrap();
    let r = run(&base, &atom("areStatements", &["I", "P", "J"]));
    assert_eq!(r.answers.len(), 5);
    assert!(r.answers.contains(&atom("areStatements", &["a", "partOf", "c"])));
    assert!(!r.answers.contains(&atom("areStatements", &["x", "near", "y"])));
}

#[test]
fn oracle_on_cars_contains_inherited_individuals() {
    let o = bottom_up_oracle(&cars_base());
    assert!(o.contains(&atom("areIndividuals", &["s123", "suv"])));
    assert!(o.contains(&atom("areIndividuals", &["s123", "vehicle"])));
    assert!(bottom_up_oracle(&OntologyBase::new()).is_empty());
}

#[test]
fn shared_memo_second_call_is_free() {
    let base = cars_base();
    let mut memo = MemoTable::new();
    let a = atom("areClasses", &["C", "O"]);
    let first = solve(&base, &a, &mut memo).unwrap();
    let second = solve(&base, &a, &mut memo).unwrap();
    assert_eq!(first.answers, second.answers);
    assert!(first.inferred_fact_count > 0);
    assert_eq!(second.inferred_fact_count, 0);
    assert_eq!(second.eob_access_count, 0);
}

#[test]
fn cars_sequence_binds_three_ontologies() {
    let base = cars_base();
    let (rows, _, vars) = sequence(&base, CARS_QUERY_REORDERED);
    let o = vars.get("O").unwrap();
    let got: BTreeSet<&str> = rows.iter().map(|r| base.name(r.get(o).unwrap())).collect();
    assert_eq!(got, ["carsOnt", "source1", "source2"].into_iter().collect());
}

#[test]
fn cars_written_order_costs_more() {
    let base = cars_base();
    let (rows_q, q, _) = sequence(&base, CARS_QUERY);
    let (rows_r, r, _) = sequence(&base, CARS_QUERY_REORDERED);
    assert_eq!(rows_q.len(), rows_r.len());
    assert!(q.total() > r.total(), "{q:?} vs {r:?}");
    // q: areClasses(C,O) free (14 inferred, 12 eob) then 12 probes of
    // isDProperty(traction,C) of which 3 hit.
    assert_eq!(q, Counters { inferred: 14, eob_access: 15 });
    // q': one isDProperty hit, then areClasses(suv,O): 3 inferred, and the
    // import closure of each ontology.
    assert_eq!(r.total(), 12);
}

#[test]
fn isolated_probes_pay_for_shared_subcalls() {
    let base = cars_base();
    for text in [CARS_QUERY, CARS_QUERY_REORDERED] {
        let q = parse_query(text).unwrap();
        let body = CompiledBody::compile(&base, &q.body).unwrap();
        let start = [Substitution::empty(0)];
        let (shared_rows, shared) = solve_sequence(&base, &body, &start, &mut MemoTable::new()).unwrap();
        let (rows, isolated) = solve_sequence_isolated(&base, &body, &start).unwrap();
        assert_eq!(rows, shared_rows);
        // each subgoal is probed at most once per distinct row here, so the scopes agree
        assert_eq!(isolated, shared);
    }
    // areClasses(C,O) per class re-derives the import closure every probe
    let (_, shared, _) = sequence(&base, "q(O) :- isClass(C,X), areClasses(C,O).");
    let q = parse_query("q(O) :- isClass(C,X), areClasses(C,O).").unwrap();
    let body = CompiledBody::compile(&base, &q.body).unwrap();
    let (_, isolated) = solve_sequence_isolated(&base, &body, &[Substitution::empty(0)]).unwrap();
    assert!(isolated.inferred > shared.inferred, "{isolated:?} vs {shared:?}");
}

#[test]
fn empty_relation_short_circuits() {
    let base = OntologyBase::new();
    let (rows, c, _) = sequence(&base, "q(X) :- isTransitive(X), areStatements(X,X,X).");
    assert!(rows.is_empty());
    assert_eq!(c, Counters::default());
}

#[test]
fn unknown_query_constant_matches_nothing() {
    let base = cars_base();
    assert!(run(&base, &atom("isClass", &["C", "noSuchOnt"])).answers.is_empty());
    assert!(run(&base, &atom("areClasses", &["C", "noSuchOnt"])).answers.is_empty());
}

#[test]
fn table_limit_is_enforced() {
    let base = cars_base();
    let err = solve(&base, &atom("areClasses", &["C", "O"]), &mut MemoTable::with_limit(1)).unwrap_err();
    assert!(matches!(err, Error::ResourceExhausted { limit: 1 }));
}

#[test]
fn unknown_predicate_is_rejected() {
    let base = cars_base();
    assert!(matches!(
        solve(&base, &atom("noSuch", &["X"]), &mut MemoTable::new()),
        Err(Error::UnknownPredicate(_))
    ));
}

fn pattern_atom(pred: Predicate, mask: u32, consts: &[&str]) -> Atom {
    let args = (0..pred.arity())
        .map(|i| {
            if mask & (1 << i) != 0 {
                Term::constant(consts[i])
            } else {
                Term::var(format!("X{i}"))
            }
        })
        .collect();
    Atom::new(pred.name(), args)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn top_down_matches_oracle(base in small_base(), mask in 0u32..8, picks in prop::array::uniform3(0usize..8)) {
        let oracle = bottom_up_oracle(&base);
        for pred in Predicate::iob() {
            let consts: Vec<&str> = pred
                .arg_domains()
                .iter()
                .zip(picks)
                .map(|(d, i)| pool(*d)[i % pool(*d).len()])
                .collect();
            let a = pattern_atom(pred, mask, &consts);
            let got: BTreeSet<Atom> = run(&base, &a).answers.into_iter().collect();
            let want: BTreeSet<Atom> = oracle
                .iter()
                .filter(|f| f.predicate == pred.name())
                .filter(|f| a.args.iter().zip(&f.args).all(|(p, t)| p.is_var() || p == t))
                .cloned()
                .collect();
            prop_assert_eq!(got, want, "{}", a);
        }
    }

    #[test]
    fn answers_are_sorted_and_unique(base in small_base()) {
        for pred in Predicate::ALL {
            let r = run(&base, &pattern_atom(pred, 0, &[]));
            let ids: Vec<Vec<ConstId>> = r
                .answers
                .iter()
                .map(|a| a.args.iter().map(|t| base.lookup_constant(t.text()).unwrap()).collect())
                .collect();
            prop_assert!(ids.windows(2).all(|w| w[0] < w[1]));
            if pred.is_eob() {
                prop_assert_eq!(r.inferred_fact_count, 0);
            }
        }
    }

    #[test]
    fn body_order_does_not_change_answers(base in small_base(), perm in Just(()).prop_perturb(|_, mut rng| {
        let mut v = vec![0usize, 1, 2];
        for i in (1..3).rev() { v.swap(i, (rng.next_u32() as usize) % (i + 1)); }
        v
    })) {
        let text = "q(I,C) :- areIndividuals(I,C), areSubClasses(C,D), areClasses(D,O).";
        let q = parse_query(text).unwrap();
        let project = |order: &[usize]| {
            let qq = q.reordered(order);
            let body = CompiledBody::compile(&base, &qq.body).unwrap();
            let (rows, _) = solve_sequence(&base, &body, &[Substitution::empty(0)], &mut MemoTable::new()).unwrap();
            let (i, c) = (body.vars.get("I").unwrap(), body.vars.get("C").unwrap());
            rows.iter().map(|r| (r.get(i), r.get(c))).collect::<BTreeSet<_>>()
        };
        prop_assert_eq!(project(&[0, 1, 2]), project(&perm));
    }

    #[test]
    fn repeated_call_with_shared_memo_adds_nothing(base in small_base(), p in 0usize..5) {
        let pred = Predicate::iob().nth(p).unwrap();
        let a = pattern_atom(pred, 0, &[]);
        let mut memo = MemoTable::new();
        let first = solve(&base, &a, &mut memo).unwrap();
        let second = solve(&base, &a, &mut memo).unwrap();
        prop_assert_eq!(first.answers, second.answers);
        prop_assert_eq!(second.inferred_fact_count, 0);
    }
}
