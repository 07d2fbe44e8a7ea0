//! Acceptance suite. Runs each criterion, prints one PASS/FAIL line per
//! criterion, and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dobs_core::analyzer::{adaptive_sample, BindingPattern, Metric, SamplingConfig};
use dobs_core::bench::{run_correlation, run_ratio, BenchOptions, CorpusEntry};
use dobs_core::cost::JoinStrategy;
use dobs_core::engine::{bottom_up_oracle, solve, MemoTable};
use dobs_core::executor::{execute_all_strategies, execute_order, MemoScope};
use dobs_core::fixtures::{cars_base, CARS_QUERY};
use dobs_core::frontends::parse_query;
use dobs_core::optimizer::{exhaustive_best, optimize};
use dobs_core::schema::{ArgDomain, Predicate};
use dobs_core::synth::{generate_corpus, generate_synthetic, SynthConfig};
use dobs_core::{Atom, OntologyBase, Term};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn all_strategies() -> Vec<JoinStrategy> {
    JoinStrategy::all(4)
}

fn criterion_1() -> Outcome {
    let base = cars_base();
    let q = parse_query(CARS_QUERY).unwrap();
    let want = ["q(carsOnt)", "q(source1)", "q(source2)"];
    let mut bad = Vec::new();
    for order in (0..q.body.len()).permutations(q.body.len()) {
        let qq = q.reordered(&order);
        for (s, r) in execute_all_strategies(&base, &qq, &all_strategies()).unwrap() {
            let got: Vec<String> = r.answers.iter().map(Atom::to_string).collect();
            if got != want {
                bad.push(format!("{order:?}/{s}: {got:?}"));
            }
        }
    }
    let answers = solve(&base, &Atom::parse_args("areClasses", &["C", "O"]), &mut MemoTable::new())
        .unwrap()
        .answers
        .len();
    outcome(
        bad.is_empty() && answers == 12,
        format!("areClasses(C,O) answers {answers}; mismatches {bad:?}"),
    )
}

fn pool(d: ArgDomain) -> &'static [&'static str] {
    match d {
        ArgDomain::Ontology => &["o1", "o2", "o3", "o4"],
        ArgDomain::Class => &["a", "b", "c", "d", "e", "f", "g"],
        ArgDomain::Property => &["p", "r", "s", "t"],
        ArgDomain::Individual | ArgDomain::Value => &["i", "j", "k", "l", "m", "n"],
    }
}

fn random_base(rng: &mut ChaCha8Rng) -> OntologyBase {
    let eob: Vec<Predicate> = Predicate::eob().collect();
    let n = rng.gen_range(1..=200);
    let mut base = OntologyBase::new();
    for _ in 0..n {
        let pred = *eob.choose(rng).unwrap();
        let args: Vec<&str> = pred.arg_domains().iter().map(|d| *pool(*d).choose(rng).unwrap()).collect();
        base.insert(pred, &args).unwrap();
    }
    base
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for b in 0..100 {
        let base = random_base(&mut rng);
        let oracle = bottom_up_oracle(&base);
        for pred in Predicate::iob() {
            for mask in 0..1u32 << pred.arity() {
                let args: Vec<Term> = pred
                    .arg_domains()
                    .iter()
                    .enumerate()
                    .map(|(i, d)| {
                        if mask & (1 << i) != 0 {
                            Term::constant(*pool(*d).choose(&mut rng).unwrap())
                        } else {
                            Term::var(format!("X{i}"))
                        }
                    })
                    .collect();
                let a = Atom::new(pred.name(), args);
                let got: BTreeSet<Atom> = solve(&base, &a, &mut MemoTable::new()).unwrap().answers.into_iter().collect();
                let want: BTreeSet<Atom> = oracle
                    .iter()
                    .filter(|f| f.predicate == pred.name())
                    .filter(|f| a.args.iter().zip(&f.args).all(|(p, t)| p.is_var() || p == t))
                    .cloned()
                    .collect();
                if got != want {
                    return outcome(false, format!("base {b}: {a} differs from the fixpoint"));
                }
                checked += 1;
            }
        }
    }
    outcome(true, format!("{checked} calls over 100 bases agree with the fixpoint"))
}

fn estimator_base(i: u64) -> OntologyBase {
    let cfg = SynthConfig {
        ontologies: 4 + (i % 3) as usize,
        classes_per_ontology: 6 + (i % 4) as usize,
        subclass_edges: 20 + (i % 5) as usize * 4,
        import_edges: 3 + (i % 4) as usize,
        individuals: 30 + (i % 6) as usize * 5,
        chain_queries: 0,
        star_queries: 0,
        seed: 300 + i,
        ..SynthConfig::default()
    };
    generate_synthetic(&cfg).unwrap().base
}

fn criterion_3() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for pred in [Predicate::AreClasses, Predicate::AreIndividuals] {
        let mut hits = 0;
        let mut runs = 0;
        for i in 0..20 {
            let base = estimator_base(i);
            let exact = bottom_up_oracle(&base).iter().filter(|f| f.predicate == pred.name()).count() as f64;
            for s in 0..10 {
                let cfg = SamplingConfig {
                    seed: 1000 * i + s,
                    ..SamplingConfig::default()
                };
                let run = adaptive_sample(&base, pred, &BindingPattern::free(2), Metric::Cardinality, &cfg).unwrap();
                let estimate = run.mean() * run.n as f64;
                if (estimate - exact).abs() <= 0.2 * exact {
                    hits += 1;
                }
                runs += 1;
            }
        }
        pass &= hits * 10 >= runs * 6;
        details.push(format!("{pred} {hits}/{runs} within 20%"));
    }
    outcome(pass, details.join("; "))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    let mut i = 0;
    while checked < 50 {
        let cfg = SynthConfig {
            chain_queries: 1,
            star_queries: 1,
            subgoals: rng.gen_range(2..=5),
            seed: 400 + i,
            ..SynthConfig::default()
        };
        i += 1;
        let s = generate_synthetic(&cfg).unwrap();
        let cat = dobs_core::analyzer::build_catalog(&s.base, &SamplingConfig::default()).unwrap();
        for q in &s.queries {
            let k = rng.gen_range(1..=3);
            let strategies: Vec<JoinStrategy> = all_strategies().choose_multiple(&mut rng, k).copied().collect();
            let dp = optimize(&q.query, &cat, &strategies).unwrap();
            let ex = exhaustive_best(&q.query, &cat, &strategies).unwrap();
            if dp.estimate.cost != ex.estimate.cost {
                return outcome(
                    false,
                    format!("{}: dp {} vs exhaustive {}", q.query, dp.estimate.cost, ex.estimate.cost),
                );
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} queries, DP minimum equals exhaustive minimum"))
}

fn replication_corpus() -> Vec<CorpusEntry> {
    let cfg = SynthConfig::default();
    generate_corpus(&cfg)
        .unwrap()
        .into_iter()
        .enumerate()
        .map(|(i, s)| CorpusEntry::from_synthetic(format!("base-{i:02}"), s, &SamplingConfig::default()).unwrap())
        .collect()
}

fn criterion_5(corpus: &[CorpusEntry]) -> Outcome {
    let r = run_correlation(corpus, &BenchOptions::default()).unwrap();
    // reported alongside: the same corpus with one memo table per execution
    let shared = run_correlation(
        corpus,
        &BenchOptions {
            memo_scope: MemoScope::Execution,
            ..BenchOptions::default()
        },
    )
    .unwrap();
    let shared = shared.correlation.map_or("undefined".into(), |c| format!("{c:.4}"));
    match r.correlation {
        Some(c) => outcome(
            c >= 0.75,
            format!(
                "r = {c:.4} over {} orderings (reference 0.92); with one memo table per execution r = {shared}",
                r.rows.len()
            ),
        ),
        None => outcome(false, "correlation undefined"),
    }
}

fn criterion_6(corpus: &[CorpusEntry]) -> Outcome {
    let nlj = run_ratio(corpus, &BenchOptions::default()).unwrap();
    let mixed = run_ratio(
        corpus,
        &BenchOptions {
            strategies: all_strategies(),
            ..BenchOptions::default()
        },
    )
    .unwrap();
    let below = nlj.fraction_below(0.10);
    let (m_nlj, m_mixed) = (nlj.mean_ratio_worst().unwrap_or(1.0), mixed.mean_ratio_worst().unwrap_or(1.0));
    outcome(
        below >= 0.5 && m_mixed <= m_nlj,
        format!(
            "{:.0}% of queries below 0.10; mean optimal/worst nlj {m_nlj:.4}, three strategies {m_mixed:.4}",
            below * 100.0
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    let mut i = 0;
    while checked < 50 {
        let cfg = SynthConfig {
            chain_queries: 1,
            star_queries: 1,
            subgoals: rng.gen_range(2..=4),
            seed: 700 + i,
            ..SynthConfig::default()
        };
        i += 1;
        let s = generate_synthetic(&cfg).unwrap();
        for q in &s.queries {
            let mut order: Vec<usize> = (0..q.query.body.len()).collect();
            order.shuffle(&mut rng);
            let qq = q.query.reordered(&order);
            let block = rng.gen_range(1..=8);
            let n = qq.body.len() - 1;
            let answers: Vec<_> = [
                JoinStrategy::NestedLoop,
                JoinStrategy::BlockNestedLoop { block_size: block },
                JoinStrategy::HashJoin,
            ]
            .iter()
            .map(|&st| execute_order(&s.base, &qq, &vec![st; n]).unwrap().answers)
            .collect();
            if answers[0] != answers[1] || answers[0] != answers[2] {
                return outcome(false, format!("{qq}: strategies disagree"));
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} plans, identical answers under all three strategies"))
}

fn run(no: usize, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let took = start.elapsed();
    let pass = o.pass && took <= limit;
    println!(
        "criterion {no}: {} ({:.2}s, limit {}s) {}",
        if pass { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs(),
        o.detail
    );
    pass
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut ok = true;
    ok &= run(1, secs(1), criterion_1);
    ok &= run(2, secs(60), criterion_2);
    ok &= run(3, secs(300), criterion_3);
    ok &= run(4, secs(120), criterion_4);
    let start = Instant::now();
    let corpus = replication_corpus();
    let build = start.elapsed();
    ok &= run(5, secs(600), || {
        let mut o = criterion_5(&corpus);
        o.detail.push_str(&format!(" (catalogs {:.2}s)", build.as_secs_f64()));
        o
    });
    ok &= run(6, secs(900), || criterion_6(&corpus));
    ok &= run(7, secs(120), criterion_7);
    println!(
        "criterion 8: NOTE not reproducible here; the large-ontology correlation (0.62) and the real-ontology \
         correlations (0.96, 0.98, 0.94, 0.92) need ontologies and hardware that are unavailable, and \
         criteria 5 and 6 stand in for them on synthetic corpora"
    );
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
