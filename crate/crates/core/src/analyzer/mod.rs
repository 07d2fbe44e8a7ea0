//! Statistics for the optimizer.
//!
//! Extensional predicates get exact counts. Intensional predicates are
//! estimated by adaptive sampling: the population of valid instantiations is
//! split into `n` partitions by the values of one or more arguments, random
//! partitions are evaluated until the accumulated metric exceeds `α·b(n)`, and
//! the sample mean is scaled back up. `b(n)` is the largest value seen in a
//! first stage of `k` samples.

mod catalog;

pub use catalog::CATALOG_HEADER;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::base::{ConstId, Goal, OntologyBase, Slot};
use crate::engine::{Evaluator, MemoTable};
use crate::error::{Error, Result};
use crate::schema::{ArgDomain, Predicate};

/// Upper bound on joint partitions enumerated by [`exact_catalog`].
pub const EXACT_PARTITION_LIMIT: u64 = 1_000_000;

/// Per-argument bound (`b`) or free (`f`) flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BindingPattern(Vec<bool>);

impl BindingPattern {
    pub fn new(bound: Vec<bool>) -> Self {
        BindingPattern(bound)
    }

    pub fn free(arity: usize) -> Self {
        BindingPattern(vec![false; arity])
    }

    /// Bit `i` of `mask` marks argument `i` bound.
    pub fn from_mask(arity: usize, mask: u32) -> Self {
        BindingPattern((0..arity).map(|i| mask & (1 << i) != 0).collect())
    }

    pub fn mask(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| 1u32 << i)
            .sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_bound(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn is_all_free(&self) -> bool {
        !self.0.iter().any(|b| *b)
    }

    pub fn bound_positions(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i]).collect()
    }

    /// All `2^arity` patterns in mask order.
    pub fn all(arity: usize) -> impl Iterator<Item = BindingPattern> {
        (0..1u32 << arity).map(move |m| BindingPattern::from_mask(arity, m))
    }
}

impl fmt::Display for BindingPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "b" } else { "f" })?;
        }
        Ok(())
    }
}

impl FromStr for BindingPattern {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.chars()
            .map(|c| match c {
                'b' => Ok(true),
                'f' => Ok(false),
                other => Err(format!("bad binding flag {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BindingPattern)
    }
}

/// Exact statistics of a stored predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EobStats {
    pub cardinality: u64,
    /// Distinct constants per argument position.
    pub n_keys: Vec<u64>,
}

pub fn compute_eob_stats(base: &OntologyBase) -> BTreeMap<Predicate, EobStats> {
    Predicate::eob()
        .map(|p| {
            let stats = EobStats {
                cardinality: base.cardinality(p) as u64,
                n_keys: (0..p.arity()).map(|i| base.distinct_count(p, i) as u64).collect(),
            };
            (p, stats)
        })
        .collect()
}

/// Sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    /// Relative error.
    pub d: f64,
    /// Confidence level, `0 <= p < 1`.
    pub p: f64,
    /// First-stage sample count.
    pub k: usize,
    /// Global cap on samples per run; the per-run cap is `min(4n, m_cap)`.
    pub m_cap: usize,
    pub seed: u64,
    /// Use the normal-quantile factor in place of `1/(1-√p)`.
    pub clt: bool,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            d: 0.2,
            p: 0.7,
            k: 7,
            m_cap: 2000,
            seed: 1,
            clt: false,
        }
    }
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.d.is_finite() && self.d > 0.0) {
            return Err(Error::InvalidConfig(format!("d must be positive, got {}", self.d)));
        }
        if !(self.p >= 0.0 && self.p < 1.0) {
            return Err(Error::InvalidConfig(format!("p must be in [0,1), got {}", self.p)));
        }
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        if self.m_cap == 0 {
            return Err(Error::InvalidConfig("m_cap must be at least 1".into()));
        }
        Ok(())
    }

    /// Sample cap for a population of `n` partitions.
    pub fn m_max(&self, n: u64) -> u64 {
        n.saturating_mul(4).min(self.m_cap as u64)
    }
}

/// `α = d(d+1)/(1-√p)`, or `d(d+1)·z²` with `z = Φ⁻¹((1+p)/2)` when the
/// config asks for the normal approximation.
pub fn alpha(config: &SamplingConfig) -> Result<f64> {
    config.validate()?;
    let base = config.d * (config.d + 1.0);
    let factor = if config.clt {
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        let z = normal.inverse_cdf((1.0 + config.p) / 2.0);
        z * z
    } else {
        1.0 / (1.0 - config.p.sqrt())
    };
    Ok(base * factor)
}

/// Outcome of one adaptive sampling run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SamplingRun {
    /// Partition count.
    pub n: u64,
    /// Samples taken (first stage included).
    pub m: u64,
    /// Sum of the sampled metric.
    pub z: f64,
    /// Largest first-stage value.
    pub b_of_n: f64,
    /// Empty domain, or every first-stage sample was zero.
    pub low_confidence: bool,
}

impl SamplingRun {
    pub fn mean(&self) -> f64 {
        if self.m == 0 {
            0.0
        } else {
            self.z / self.m as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Cost,
    Cardinality,
}

/// Sizes of the five argument domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DomainSizes {
    pub ontology: u64,
    pub class: u64,
    pub property: u64,
    pub individual: u64,
    pub value: u64,
}

impl DomainSizes {
    pub fn get(&self, d: ArgDomain) -> u64 {
        match d {
            ArgDomain::Ontology => self.ontology,
            ArgDomain::Class => self.class,
            ArgDomain::Property => self.property,
            ArgDomain::Individual => self.individual,
            ArgDomain::Value => self.value,
        }
    }
}

/// Distinct constants making up each argument domain.
#[derive(Debug, Clone)]
pub struct Domains {
    ontology: Vec<ConstId>,
    class: Vec<ConstId>,
    property: Vec<ConstId>,
    individual: Vec<ConstId>,
    value: Vec<ConstId>,
}

impl Domains {
    /// Ontologies from `isOntology`, classes from `isClass`, properties from
    /// `isOProperty` and `isDProperty`, individuals from `isIndividual`, and
    /// values from the objects of `isStatement`.
    pub fn of(base: &OntologyBase) -> Self {
        let mut property = base.distinct_values(Predicate::IsOProperty, 0);
        for p in base.distinct_values(Predicate::IsDProperty, 0) {
            if !property.contains(&p) {
                property.push(p);
            }
        }
        Domains {
            ontology: base.distinct_values(Predicate::IsOntology, 0),
            class: base.distinct_values(Predicate::IsClass, 0),
            property,
            individual: base.distinct_values(Predicate::IsIndividual, 0),
            value: base.distinct_values(Predicate::IsStatement, 2),
        }
    }

    pub fn values(&self, d: ArgDomain) -> &[ConstId] {
        match d {
            ArgDomain::Ontology => &self.ontology,
            ArgDomain::Class => &self.class,
            ArgDomain::Property => &self.property,
            ArgDomain::Individual => &self.individual,
            ArgDomain::Value => &self.value,
        }
    }

    pub fn sizes(&self) -> DomainSizes {
        DomainSizes {
            ontology: self.ontology.len() as u64,
            class: self.class.len() as u64,
            property: self.property.len() as u64,
            individual: self.individual.len() as u64,
            value: self.value.len() as u64,
        }
    }
}

/// The argument a free pattern is partitioned on: the one with the largest
/// domain, first on ties.
pub fn partition_arg(pred: Predicate, sizes: &DomainSizes) -> usize {
    let doms = pred.arg_domains();
    (0..doms.len())
        .rev()
        .max_by_key(|&i| sizes.get(doms[i]))
        .unwrap_or(0)
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn run_seed(seed: u64, pred: Predicate, pattern: &BindingPattern, metric: Metric) -> u64 {
    let tag = (pred.index() as u64) << 16 | (pattern.mask() as u64) << 1 | (metric == Metric::Cost) as u64;
    splitmix(splitmix(seed) ^ tag)
}

/// Measured size and cost of one instantiated call.
#[derive(Debug, Clone, Copy)]
struct Measure {
    cardinality: u64,
    cost: u64,
}

/// Evaluates instantiated calls against a base, caching by call key.
pub struct Sampler<'a> {
    base: &'a OntologyBase,
    domains: Domains,
    cache: HashMap<(Predicate, Vec<Option<ConstId>>), Measure>,
}

impl<'a> Sampler<'a> {
    pub fn new(base: &'a OntologyBase) -> Self {
        Sampler {
            base,
            domains: Domains::of(base),
            cache: HashMap::new(),
        }
    }

    pub fn domains(&self) -> &Domains {
        &self.domains
    }

    /// Answer count and counter total of `pred` called with `key`, in a fresh
    /// memo table.
    fn measure(&mut self, pred: Predicate, key: Vec<Option<ConstId>>) -> Result<Measure> {
        if let Some(m) = self.cache.get(&(pred, key.clone())) {
            return Ok(*m);
        }
        let args = key
            .iter()
            .enumerate()
            .map(|(i, k)| match k {
                Some(c) => Slot::Const(*c),
                None => Slot::Var(i as u32),
            })
            .collect();
        let goal = Goal { pred, args };
        let mut memo = MemoTable::new();
        let mut ev = Evaluator::new(self.base, &mut memo);
        let answers = ev.solve_goal(&goal, &vec![None; pred.arity()])?;
        let m = Measure {
            cardinality: answers.len() as u64,
            cost: ev.counters().total(),
        };
        self.cache.insert((pred, key), m);
        Ok(m)
    }

    fn metric(&mut self, pred: Predicate, key: Vec<Option<ConstId>>, metric: Metric) -> Result<f64> {
        let m = self.measure(pred, key)?;
        Ok(match metric {
            Metric::Cost => m.cost as f64,
            Metric::Cardinality => m.cardinality as f64,
        })
    }

    fn partition_domains(&self, pred: Predicate, positions: &[usize]) -> Vec<Vec<ConstId>> {
        positions
            .iter()
            .map(|&i| self.domains.values(pred.arg_domains()[i]).to_vec())
            .collect()
    }

    /// Double sampling over the joint partitions of `positions`.
    pub fn sample(
        &mut self,
        pred: Predicate,
        positions: &[usize],
        metric: Metric,
        config: &SamplingConfig,
        seed: u64,
    ) -> Result<SamplingRun> {
        let alpha = alpha(config)?;
        let doms = self.partition_domains(pred, positions);
        let n = doms.iter().fold(1u64, |acc, d| acc.saturating_mul(d.len() as u64));
        if n == 0 {
            return Ok(SamplingRun {
                low_confidence: true,
                ..SamplingRun::default()
            });
        }
        let m_max = config.m_max(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| {
            let mut key = vec![None; pred.arity()];
            for (&pos, dom) in positions.iter().zip(&doms) {
                key[pos] = Some(dom[rng.gen_range(0..dom.len())]);
            }
            key
        };
        let mut run = SamplingRun {
            n,
            ..SamplingRun::default()
        };
        let stage1 = (config.k as u64).min(m_max);
        for _ in 0..stage1 {
            let v = self.metric(pred, draw(&mut rng), metric)?;
            run.z += v;
            run.m += 1;
            run.b_of_n = run.b_of_n.max(v);
        }
        if run.b_of_n == 0.0 {
            run.low_confidence = true;
            return Ok(run);
        }
        while run.z <= alpha * run.b_of_n && run.m < m_max {
            run.z += self.metric(pred, draw(&mut rng), metric)?;
            run.m += 1;
        }
        Ok(run)
    }

    /// Exhaustive counterpart of [`sample`](Self::sample): every joint
    /// partition evaluated once.
    pub fn enumerate(&mut self, pred: Predicate, positions: &[usize], metric: Metric) -> Result<SamplingRun> {
        let doms = self.partition_domains(pred, positions);
        let n = doms.iter().fold(1u64, |acc, d| acc.saturating_mul(d.len() as u64));
        if n > EXACT_PARTITION_LIMIT {
            return Err(Error::InvalidConfig(format!(
                "{pred} has {n} joint partitions, over the exact-statistics limit"
            )));
        }
        let mut run = SamplingRun {
            n,
            low_confidence: n == 0,
            ..SamplingRun::default()
        };
        for idx in 0..n {
            let mut key = vec![None; pred.arity()];
            let mut rest = idx;
            for (&pos, dom) in positions.iter().zip(&doms) {
                key[pos] = Some(dom[(rest % dom.len() as u64) as usize]);
                rest /= dom.len() as u64;
            }
            let v = self.metric(pred, key, metric)?;
            run.z += v;
            run.m += 1;
            run.b_of_n = run.b_of_n.max(v);
        }
        Ok(run)
    }
}

/// One sampling run for `pred` under `pattern`.
///
/// Cardinality runs need the all-free pattern and partition on
/// [`partition_arg`]; cost runs partition on the bound arguments jointly, or on
/// the partition argument when nothing is bound.
pub fn adaptive_sample(
    base: &OntologyBase,
    pred: Predicate,
    pattern: &BindingPattern,
    metric: Metric,
    config: &SamplingConfig,
) -> Result<SamplingRun> {
    check_iob(pred, pattern)?;
    let mut sampler = Sampler::new(base);
    let positions = sample_positions(pred, pattern, metric, &sampler.domains.sizes())?;
    sampler.sample(pred, &positions, metric, config, run_seed(config.seed, pred, pattern, metric))
}

fn check_iob(pred: Predicate, pattern: &BindingPattern) -> Result<()> {
    if pred.is_eob() {
        return Err(Error::InvalidConfig(format!("{pred} is extensional; nothing to sample")));
    }
    if pattern.len() != pred.arity() {
        return Err(Error::InvalidConfig(format!(
            "pattern {pattern} does not fit {pred}/{}",
            pred.arity()
        )));
    }
    Ok(())
}

fn sample_positions(
    pred: Predicate,
    pattern: &BindingPattern,
    metric: Metric,
    sizes: &DomainSizes,
) -> Result<Vec<usize>> {
    if pattern.is_all_free() {
        Ok(vec![partition_arg(pred, sizes)])
    } else if metric == Metric::Cardinality {
        Err(Error::InvalidConfig(
            "cardinality is sampled on the all-free pattern only".into(),
        ))
    } else {
        Ok(pattern.bound_positions())
    }
}

/// Estimates for one binding pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternStats {
    pub pattern: BindingPattern,
    pub cost: f64,
    pub cardinality: f64,
    pub cost_run: SamplingRun,
}

/// Estimated statistics of an intensional predicate.
#[derive(Debug, Clone, PartialEq)]
pub struct IobStats {
    pub predicate: Predicate,
    /// Argument the free pattern is partitioned on.
    pub partition_arg: usize,
    /// Domain size `n` per argument.
    pub domain_sizes: Vec<u64>,
    /// Estimated distinct values per argument, `min(card, n)`.
    pub distinct: Vec<f64>,
    pub card_run: SamplingRun,
    /// Indexed by pattern mask.
    pub patterns: Vec<PatternStats>,
}

impl IobStats {
    /// Assembles estimates from the free-pattern cardinality run and one cost
    /// run per pattern (mask order).
    pub fn from_runs(
        pred: Predicate,
        partition_arg: usize,
        sizes: &DomainSizes,
        card_run: SamplingRun,
        cost_runs: Vec<SamplingRun>,
    ) -> Self {
        let arity = pred.arity();
        let domain_sizes: Vec<u64> = pred.arg_domains().iter().map(|d| sizes.get(*d)).collect();
        let card_free = card_run.mean() * card_run.n as f64;
        let distinct: Vec<f64> = domain_sizes.iter().map(|&n| card_free.min(n as f64)).collect();
        let patterns = cost_runs
            .into_iter()
            .enumerate()
            .map(|(mask, run)| {
                let pattern = BindingPattern::from_mask(arity, mask as u32);
                let cost = if pattern.is_all_free() {
                    run.mean() * run.n as f64
                } else {
                    run.mean()
                };
                let divisor: f64 = pattern
                    .bound_positions()
                    .iter()
                    .map(|&i| distinct[i].max(1.0))
                    .product();
                PatternStats {
                    cardinality: card_free / divisor,
                    pattern,
                    cost,
                    cost_run: run,
                }
            })
            .collect();
        IobStats {
            predicate: pred,
            partition_arg,
            domain_sizes,
            distinct,
            card_run,
            patterns,
        }
    }

    pub fn pattern(&self, pattern: &BindingPattern) -> &PatternStats {
        &self.patterns[pattern.mask() as usize]
    }

    pub fn cost(&self, pattern: &BindingPattern) -> f64 {
        self.pattern(pattern).cost
    }

    pub fn cardinality(&self, pattern: &BindingPattern) -> f64 {
        self.pattern(pattern).cardinality
    }

    /// Any run hit an empty domain or an all-zero first stage.
    pub fn low_confidence(&self) -> bool {
        self.card_run.low_confidence || self.patterns.iter().any(|p| p.cost_run.low_confidence)
    }
}

fn iob_stats_with(
    sampler: &mut Sampler,
    pred: Predicate,
    mut run: impl FnMut(&mut Sampler, &[usize], &BindingPattern, Metric) -> Result<SamplingRun>,
) -> Result<IobStats> {
    let sizes = sampler.domains.sizes();
    let part = partition_arg(pred, &sizes);
    let free = BindingPattern::free(pred.arity());
    let card_run = run(sampler, &[part], &free, Metric::Cardinality)?;
    let mut cost_runs = Vec::new();
    for pattern in BindingPattern::all(pred.arity()) {
        let positions = sample_positions(pred, &pattern, Metric::Cost, &sizes)?;
        cost_runs.push(run(sampler, &positions, &pattern, Metric::Cost)?);
    }
    Ok(IobStats::from_runs(pred, part, &sizes, card_run, cost_runs))
}

fn sampled_stats(sampler: &mut Sampler, pred: Predicate, config: &SamplingConfig) -> Result<IobStats> {
    iob_stats_with(sampler, pred, |s, positions, pattern, metric| {
        s.sample(pred, positions, metric, config, run_seed(config.seed, pred, pattern, metric))
    })
}

/// Sampled statistics for every binding pattern of `pred`.
pub fn estimate_iob_stats(base: &OntologyBase, pred: Predicate, config: &SamplingConfig) -> Result<IobStats> {
    check_iob(pred, &BindingPattern::free(pred.arity()))?;
    config.validate()?;
    sampled_stats(&mut Sampler::new(base), pred, config)
}

/// Statistics of one predicate.
#[derive(Debug, Clone, PartialEq)]
pub enum PredicateStats {
    Eob(EobStats),
    Iob(IobStats),
}

/// Statistics for every schema predicate.
#[derive(Debug, Clone)]
pub struct StatisticsCatalog {
    config: SamplingConfig,
    exact: bool,
    /// Seconds since the Unix epoch.
    created: u64,
    domains: DomainSizes,
    stats: Vec<PredicateStats>,
}

/// Equality ignores the creation time.
impl PartialEq for StatisticsCatalog {
    fn eq(&self, o: &Self) -> bool {
        self.config == o.config && self.exact == o.exact && self.domains == o.domains && self.stats == o.stats
    }
}

fn now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl StatisticsCatalog {
    fn assemble(
        base: &OntologyBase,
        sampler: &mut Sampler,
        config: SamplingConfig,
        exact: bool,
        mut iob: impl FnMut(&mut Sampler, Predicate) -> Result<IobStats>,
    ) -> Result<Self> {
        let mut eob = compute_eob_stats(base);
        let mut stats = Vec::with_capacity(Predicate::ALL.len());
        for p in Predicate::ALL {
            stats.push(if p.is_eob() {
                PredicateStats::Eob(eob.remove(&p).expect("every EOB predicate"))
            } else {
                PredicateStats::Iob(iob(sampler, p)?)
            });
        }
        Ok(StatisticsCatalog {
            config,
            exact,
            created: now(),
            domains: sampler.domains.sizes(),
            stats,
        })
    }

    pub fn config(&self) -> &SamplingConfig {
        &self.config
    }

    /// Built by exhaustive enumeration rather than sampling.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn created(&self) -> u64 {
        self.created
    }

    pub fn set_created(&mut self, secs: u64) {
        self.created = secs;
    }

    pub fn domains(&self) -> &DomainSizes {
        &self.domains
    }

    pub fn get(&self, pred: Predicate) -> &PredicateStats {
        &self.stats[pred.index()]
    }

    pub fn eob(&self, pred: Predicate) -> Option<&EobStats> {
        match self.get(pred) {
            PredicateStats::Eob(s) => Some(s),
            PredicateStats::Iob(_) => None,
        }
    }

    pub fn iob(&self, pred: Predicate) -> Option<&IobStats> {
        match self.get(pred) {
            PredicateStats::Iob(s) => Some(s),
            PredicateStats::Eob(_) => None,
        }
    }

    /// Replaces the statistics of one predicate. The kind must match.
    pub fn set(&mut self, stats: PredicateStats) -> Result<()> {
        let pred = match &stats {
            PredicateStats::Iob(s) => s.predicate,
            PredicateStats::Eob(_) => {
                return Err(Error::InvalidConfig("use set_eob for extensional statistics".into()))
            }
        };
        self.stats[pred.index()] = stats;
        Ok(())
    }

    pub fn set_eob(&mut self, pred: Predicate, stats: EobStats) -> Result<()> {
        if !pred.is_eob() || stats.n_keys.len() != pred.arity() {
            return Err(Error::InvalidConfig(format!("statistics do not fit {pred}")));
        }
        self.stats[pred.index()] = PredicateStats::Eob(stats);
        Ok(())
    }

    pub fn domain_size(&self, pred: Predicate, pos: usize) -> Result<u64> {
        pred.arg_domains()
            .get(pos)
            .map(|d| self.domains.get(*d))
            .ok_or_else(|| Error::NoSuchArgument {
                predicate: pred.name().to_owned(),
                position: pos,
            })
    }
}

/// Size of the instantiation domain of `pred`'s argument `pos` (0-based).
pub fn domain_size(catalog: &StatisticsCatalog, pred: Predicate, pos: usize) -> Result<u64> {
    catalog.domain_size(pred, pos)
}

/// Exact EOB statistics and sampled IOB statistics.
pub fn build_catalog(base: &OntologyBase, config: &SamplingConfig) -> Result<StatisticsCatalog> {
    config.validate()?;
    let mut sampler = Sampler::new(base);
    StatisticsCatalog::assemble(base, &mut sampler, *config, false, |s, p| sampled_stats(s, p, config))
}

/// Like [`build_catalog`] but every partition is evaluated, so IOB means are
/// population means and free cardinalities are exact.
pub fn exact_catalog(base: &OntologyBase) -> Result<StatisticsCatalog> {
    let mut sampler = Sampler::new(base);
    StatisticsCatalog::assemble(base, &mut sampler, SamplingConfig::default(), true, |s, pred| {
        iob_stats_with(s, pred, |s, positions, _, metric| s.enumerate(pred, positions, metric))
    })
}

#[cfg(test)]
mod tests;
