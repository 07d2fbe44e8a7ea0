use super::*;
use crate::fixtures::cars_base;
use crate::testutil::small_base;
use proptest::prelude::*;

fn cfg(seed: u64) -> SamplingConfig {
    SamplingConfig {
        seed,
        ..SamplingConfig::default()
    }
}

#[test]
fn eob_stats_on_cars() {
    let stats = compute_eob_stats(&cars_base());
    assert_eq!(stats[&Predicate::IsDProperty].cardinality, 3);
    assert_eq!(stats[&Predicate::IsDProperty].n_keys, vec![3, 2]);
    assert_eq!(stats[&Predicate::IsClass].n_keys[1], 1);
    let empty = &stats[&Predicate::IsTransitive];
    assert_eq!((empty.cardinality, empty.n_keys.clone()), (0, vec![0]));
    for s in stats.values() {
        for &k in &s.n_keys {
            assert!(k <= s.cardinality);
            assert!(s.cardinality == 0 || k >= 1);
        }
    }
}

#[test]
fn alpha_values() {
    let a = alpha(&SamplingConfig { d: 0.2, p: 0.7, ..cfg(0) }).unwrap();
    assert!((a - 0.24 / (1.0 - 0.7f64.sqrt())).abs() < 1e-12);
    assert!((a - 1.4694).abs() < 1e-4);
    assert_eq!(alpha(&SamplingConfig { d: 1.0, p: 0.0, ..cfg(0) }).unwrap(), 2.0);
    assert!(alpha(&SamplingConfig { p: 1.0, ..cfg(0) }).is_err());
    assert!(alpha(&SamplingConfig { d: 0.0, ..cfg(0) }).is_err());
    assert!(alpha(&SamplingConfig { k: 0, ..cfg(0) }).is_err());
}

#[test]
fn clt_factor_is_smaller() {
    let plain = alpha(&cfg(0)).unwrap();
    let clt = alpha(&SamplingConfig { clt: true, ..cfg(0) }).unwrap();
    // z = 1.0364 for a two-sided 70% interval
    assert!((clt - 0.24 * 1.036_433_4_f64.powi(2)).abs() < 1e-5);
    assert!(clt < plain);
}

proptest! {
    #[test]
    fn alpha_is_monotone(d in 0.01f64..5.0, p in 0.0f64..0.98, dd in 0.001f64..1.0, dp in 0.001f64..0.01) {
        let a = alpha(&SamplingConfig { d, p, ..cfg(0) }).unwrap();
        let wider = SamplingConfig { d: d + dd, p, ..cfg(0) };
        let surer = SamplingConfig { d, p: p + dp, ..cfg(0) };
        prop_assert!(alpha(&wider).unwrap() > a);
        prop_assert!(alpha(&surer).unwrap() > a);
    }
}

#[test]
fn cars_domain_sizes() {
    let cat = build_catalog(&cars_base(), &cfg(1)).unwrap();
    assert_eq!(domain_size(&cat, Predicate::AreClasses, 0).unwrap(), 4);
    assert_eq!(domain_size(&cat, Predicate::AreClasses, 1).unwrap(), 3);
    assert!(matches!(
        domain_size(&cat, Predicate::AreClasses, 2),
        Err(Error::NoSuchArgument { .. })
    ));
    let empty = build_catalog(&OntologyBase::new(), &cfg(1)).unwrap();
    assert_eq!(*empty.domains(), DomainSizes::default());
}

#[test]
fn partition_prefers_largest_domain() {
    let sizes = DomainSizes {
        ontology: 3,
        class: 4,
        ..DomainSizes::default()
    };
    assert_eq!(partition_arg(Predicate::AreClasses, &sizes), 0);
    let tie = DomainSizes {
        ontology: 4,
        class: 4,
        ..DomainSizes::default()
    };
    assert_eq!(partition_arg(Predicate::AreClasses, &tie), 0);
    assert_eq!(partition_arg(Predicate::AreImpOntologies, &tie), 0);
}

#[test]
fn constant_population_converges_fast() {
    let mut base = OntologyBase::new();
    for i in 0..10 {
        base.insert(Predicate::IsClass, &[&format!("c{i}"), "o"]).unwrap();
    }
    base.insert(Predicate::IsOntology, &["o"]).unwrap();
    let config = cfg(3);
    let run = adaptive_sample(
        &base,
        Predicate::AreClasses,
        &BindingPattern::free(2),
        Metric::Cardinality,
        &config,
    )
    .unwrap();
    assert_eq!(run.n, 10);
    assert_eq!(run.mean(), 1.0);
    assert!(run.m <= alpha(&config).unwrap().ceil() as u64 + config.k as u64);
    assert!(!run.low_confidence);
}

#[test]
fn all_zero_first_stage_is_flagged() {
    let mut base = OntologyBase::new();
    for c in ["a", "b", "c"] {
        base.insert(Predicate::IsClass, &[c, "o"]).unwrap();
    }
    let run = adaptive_sample(
        &base,
        Predicate::AreSubClasses,
        &BindingPattern::free(2),
        Metric::Cardinality,
        &cfg(1),
    )
    .unwrap();
    assert_eq!(run.mean(), 0.0);
    assert!(run.low_confidence);
    assert!(run.m >= 1);
}

#[test]
fn empty_domain_gives_zero_stats() {
    let s = estimate_iob_stats(&OntologyBase::new(), Predicate::AreIndividuals, &cfg(1)).unwrap();
    assert!(s.low_confidence());
    for p in &s.patterns {
        assert_eq!((p.cost, p.cardinality), (0.0, 0.0));
    }
}

#[test]
fn cars_ontology_partitions_hold_four_classes() {
    let base = cars_base();
    let mut sampler = Sampler::new(&base);
    let run = sampler
        .sample(Predicate::AreClasses, &[1], Metric::Cardinality, &cfg(5), 5)
        .unwrap();
    assert_eq!(run.n, 3);
    assert_eq!(run.mean(), 4.0);
    assert_eq!(run.mean() * run.n as f64, 12.0);
}

#[test]
fn cardinality_needs_free_pattern() {
    let err = adaptive_sample(
        &cars_base(),
        Predicate::AreClasses,
        &BindingPattern::from_mask(2, 1),
        Metric::Cardinality,
        &cfg(1),
    );
    assert!(err.is_err());
    assert!(adaptive_sample(&cars_base(), Predicate::IsClass, &BindingPattern::free(2), Metric::Cost, &cfg(1)).is_err());
}

fn run_with(n: u64, m: u64, z: f64) -> SamplingRun {
    SamplingRun {
        n,
        m,
        z,
        b_of_n: 0.0,
        low_confidence: false,
    }
}

#[test]
fn estimates_from_runs() {
    let sizes = DomainSizes {
        ontology: 3,
        class: 5,
        ..DomainSizes::default()
    };
    // card: mean 4 over 3 ontology partitions; cost runs: ff mean 2 over 5,
    // bf mean 7, fb mean 3, bb mean 1
    let s = IobStats::from_runs(
        Predicate::AreClasses,
        1,
        &sizes,
        run_with(3, 2, 8.0),
        vec![run_with(5, 1, 2.0), run_with(5, 1, 7.0), run_with(3, 1, 3.0), run_with(15, 1, 1.0)],
    );
    let ff = BindingPattern::free(2);
    assert_eq!(s.cardinality(&ff), 12.0);
    assert_eq!(s.cost(&ff), 10.0);
    assert_eq!(s.cost(&BindingPattern::from_mask(2, 1)), 7.0);
    assert_eq!(s.distinct, vec![5.0, 3.0]);
    assert_eq!(s.cardinality(&BindingPattern::from_mask(2, 1)), 12.0 / 5.0);
    assert_eq!(s.cardinality(&BindingPattern::from_mask(2, 3)), 12.0 / 15.0);
}

#[test]
fn cars_catalog_covers_schema() {
    let cat = build_catalog(&cars_base(), &cfg(7)).unwrap();
    for p in Predicate::ALL {
        match cat.get(p) {
            PredicateStats::Eob(_) => assert!(p.is_eob()),
            PredicateStats::Iob(s) => {
                assert!(!p.is_eob());
                assert_eq!(s.patterns.len(), 1 << p.arity());
            }
        }
    }
    let ac = cat.iob(Predicate::AreClasses).unwrap();
    assert_eq!(ac.cardinality(&BindingPattern::free(2)), 12.0);
}

#[test]
fn same_seed_same_catalog() {
    let base = cars_base();
    let a = build_catalog(&base, &cfg(9)).unwrap();
    let mut b = build_catalog(&base, &cfg(9)).unwrap();
    b.set_created(a.created() + 100);
    assert_eq!(a, b);
}

#[test]
fn cars_estimate_within_twenty_percent() {
    let base = cars_base();
    let hits = (0..100)
        .filter(|&seed| {
            let s = estimate_iob_stats(&base, Predicate::AreClasses, &cfg(seed)).unwrap();
            (s.cardinality(&BindingPattern::free(2)) - 12.0).abs() <= 0.2 * 12.0
        })
        .count();
    assert!(hits >= 70, "{hits}");
}

#[test]
fn exact_catalog_uses_population_means() {
    let base = cars_base();
    let cat = exact_catalog(&base).unwrap();
    assert!(cat.is_exact());
    let ac = cat.iob(Predicate::AreClasses).unwrap();
    assert_eq!(ac.card_run.m, ac.card_run.n);
    assert_eq!(ac.cardinality(&BindingPattern::free(2)), 12.0);
    // areClasses(c,O) for any class c: 3 inferred, 2 isClass hits, and the
    // import closure of carsOnt (2 inferred, 4 impOntology hits).
    assert_eq!(ac.cost(&BindingPattern::from_mask(2, 1)), 11.0);
}

#[test]
fn catalog_text_round_trip() {
    for cat in [build_catalog(&cars_base(), &cfg(2)).unwrap(), exact_catalog(&cars_base()).unwrap()] {
        let text = cat.to_text();
        assert!(text.starts_with(CATALOG_HEADER));
        let back = StatisticsCatalog::from_text(&text).unwrap();
        assert_eq!(back, cat);
        assert_eq!(back.created(), cat.created());
        assert_eq!(back.to_text(), text);
    }
}

#[test]
fn catalog_text_errors() {
    assert!(StatisticsCatalog::from_text("nope").is_err());
    let text = build_catalog(&cars_base(), &cfg(2)).unwrap().to_text();
    let missing: String = text.lines().filter(|l| !l.starts_with("areClasses | IOB | bf")).map(|l| format!("{l}\n")).collect();
    assert!(matches!(StatisticsCatalog::from_text(&missing), Err(Error::CatalogMiss(_))));
    let garbled = text.replacen("isClass | EOB | ff | 4", "isClass | EOB | ff | x", 1);
    assert!(matches!(
        StatisticsCatalog::from_text(&garbled),
        Err(Error::CatalogFormat { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bound_cardinality_never_exceeds_free(base in small_base(), seed in 0u64..1000) {
        let cat = build_catalog(&base, &cfg(seed)).unwrap();
        for p in Predicate::iob() {
            let s = cat.iob(p).unwrap();
            let free = s.cardinality(&BindingPattern::free(p.arity()));
            for ps in &s.patterns {
                prop_assert!(ps.cardinality <= free);
                prop_assert!(ps.cardinality >= 0.0 && ps.cost >= 0.0);
                prop_assert!(ps.cardinality.is_finite() && ps.cost.is_finite());
            }
        }
        prop_assert_eq!(StatisticsCatalog::from_text(&cat.to_text()).unwrap(), cat.clone());
        // per-predicate runs do not depend on which other predicates are sampled
        let alone = estimate_iob_stats(&base, Predicate::AreIndividuals, &cfg(seed)).unwrap();
        prop_assert_eq!(Some(&alone), cat.iob(Predicate::AreIndividuals));
    }
}
