//! Correlation and ratio experiments over a corpus of bases and queries.
//!
//! Actual cost is the engine's counter total. Wall-clock time is recorded
//! only on request and never enters a statistic.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use itertools::Itertools;
use serde::Serialize;

use crate::analyzer::{build_catalog, SamplingConfig, StatisticsCatalog};
use crate::base::OntologyBase;
use crate::cost::JoinStrategy;
use crate::error::{Error, Result};
use crate::executor::{execute_scoped, ExecutionReport, MemoScope};
use crate::frontends::{parse_dob, parse_query, render_dob};
use crate::optimizer::{optimize, Plan, DEFAULT_EXHAUSTIVE_BOUND};
use crate::synth::{Synthetic, SynthConfig};
use crate::syntax::Query;

/// Pearson's r, or `None` when either side has zero variance or the
/// lengths differ.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Lower middle element of the sorted values.
pub fn lower_median(xs: &[u64]) -> Option<u64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_unstable();
    Some(v[(v.len() - 1) / 2])
}

/// One base with its catalog and queries.
#[derive(Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub base: OntologyBase,
    pub catalog: StatisticsCatalog,
    pub queries: Vec<Query>,
}

impl CorpusEntry {
    pub fn from_synthetic(name: impl Into<String>, s: Synthetic, sampling: &SamplingConfig) -> Result<Self> {
        let catalog = build_catalog(&s.base, sampling)?;
        Ok(CorpusEntry {
            name: name.into(),
            base: s.base,
            catalog,
            queries: s.queries.into_iter().map(|q| q.query).collect(),
        })
    }
}

fn entry_name(i: usize) -> String {
    format!("base-{i:02}")
}

/// Writes `synth.toml`, then `base-NN.dob` and `base-NN.queries` per base.
pub fn write_corpus(dir: &Path, config: &SynthConfig, corpus: &[Synthetic]) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("synth.toml"), config.to_toml())?;
    for (i, s) in corpus.iter().enumerate() {
        let name = entry_name(i);
        fs::write(dir.join(format!("{name}.dob")), render_dob(&s.facts))?;
        let mut text = String::new();
        for q in &s.queries {
            text.push_str(&format!("% {}\n{}\n", q.shape, q.query));
        }
        fs::write(dir.join(format!("{name}.queries")), text)?;
    }
    Ok(())
}

/// Reads every `*.dob` in `dir` (sorted by name) with its `.queries` file and
/// builds a sampled catalog for each.
pub fn load_corpus(dir: &Path, sampling: &SamplingConfig) -> Result<Vec<CorpusEntry>> {
    let mut dobs: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "dob"))
        .collect();
    dobs.sort();
    if dobs.is_empty() {
        return Err(Error::InvalidConfig(format!("no .dob files in {}", dir.display())));
    }
    dobs.iter()
        .map(|path| {
            let name = path.file_stem().expect("file").to_string_lossy().into_owned();
            let text = fs::read_to_string(path)?;
            let facts = parse_dob(&text).map_err(|e| e.with_file(path.display().to_string()))?;
            let base = OntologyBase::from_facts(&facts)?;
            let qpath = path.with_extension("queries");
            let qtext = fs::read_to_string(&qpath)?;
            let queries = qtext
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('%'))
                .map(|(i, l)| {
                    parse_query(l).map_err(|mut e| {
                        e.location.line = i + 1;
                        Error::from(e.with_file(qpath.display().to_string()))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let catalog = build_catalog(&base, sampling)?;
            Ok(CorpusEntry {
                name,
                base,
                catalog,
                queries,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub strategies: Vec<JoinStrategy>,
    /// Record wall-clock nanoseconds per execution.
    pub timing: bool,
    pub memo_scope: MemoScope,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            strategies: vec![JoinStrategy::NestedLoop],
            timing: false,
            memo_scope: MemoScope::default(),
        }
    }
}

fn order_text(order: &[usize]) -> String {
    order.iter().join(" ")
}

fn strategies_text(s: &[JoinStrategy]) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s.iter().map(JoinStrategy::short_name).join(" ")
    }
}

fn timed(base: &OntologyBase, plan: &Plan, opts: &BenchOptions) -> Result<(ExecutionReport, Option<u128>)> {
    let start = opts.timing.then(Instant::now);
    let report = execute_scoped(base, plan, opts.memo_scope)?;
    Ok((report, start.map(|s| s.elapsed().as_nanos())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingRow {
    pub base: String,
    pub query: usize,
    pub ordering: usize,
    pub order: String,
    pub strategies: String,
    pub estimated_cost: f64,
    pub actual_cost: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ns: Option<u128>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub rows: Vec<OrderingRow>,
    pub correlation: Option<f64>,
}

/// Every ordering of every query, each with the cheapest enabled strategy
/// per step, paired with its execution cost.
pub fn run_correlation(corpus: &[CorpusEntry], opts: &BenchOptions) -> Result<CorrelationReport> {
    let mut rows = Vec::new();
    for entry in corpus {
        for (qi, q) in entry.queries.iter().enumerate() {
            let n = q.body.len();
            if n > DEFAULT_EXHAUSTIVE_BOUND {
                return Err(Error::TooManySubgoals {
                    len: n,
                    bound: DEFAULT_EXHAUSTIVE_BOUND,
                });
            }
            for (oi, order) in (0..n).permutations(n).enumerate() {
                let plan = Plan::greedy(q, &entry.catalog, order, &opts.strategies)?;
                let (report, wall_ns) = timed(&entry.base, &plan, opts)?;
                rows.push(OrderingRow {
                    base: entry.name.clone(),
                    query: qi,
                    ordering: oi,
                    order: order_text(&plan.order),
                    strategies: strategies_text(&plan.strategies),
                    estimated_cost: plan.estimate.cost,
                    actual_cost: report.actual_cost,
                    wall_ns,
                });
            }
        }
    }
    let est: Vec<f64> = rows.iter().map(|r| r.estimated_cost).collect();
    let act: Vec<f64> = rows.iter().map(|r| r.actual_cost as f64).collect();
    let correlation = pearson(&est, &act);
    Ok(CorrelationReport { rows, correlation })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub base: String,
    pub query: usize,
    /// Orderings times strategy assignments executed.
    pub plans: usize,
    pub optimizer_order: String,
    pub optimizer_strategies: String,
    pub optimizer_actual: u64,
    pub best_actual: u64,
    pub median_actual: u64,
    pub worst_actual: u64,
    pub ratio_worst: Option<f64>,
    pub ratio_median: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    /// Mean optimal/worst ratio over queries where it is defined.
    pub fn mean_ratio_worst(&self) -> Option<f64> {
        let v: Vec<f64> = self.rows.iter().filter_map(|r| r.ratio_worst).collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }

    /// Fraction of queries whose optimal/worst ratio is below `bound`.
    pub fn fraction_below(&self, bound: f64) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        let hits = self.rows.iter().filter(|r| r.ratio_worst.is_some_and(|x| x < bound)).count();
        hits as f64 / self.rows.len() as f64
    }
}

fn ratio(a: u64, b: u64) -> Option<f64> {
    (b > 0).then(|| a as f64 / b as f64)
}

/// Executes every ordering under every assignment of the enabled strategies
/// and compares the optimizer's choice with the worst and median plans.
pub fn run_ratio(corpus: &[CorpusEntry], opts: &BenchOptions) -> Result<RatioReport> {
    let mut rows = Vec::new();
    for entry in corpus {
        for (qi, q) in entry.queries.iter().enumerate() {
            let n = q.body.len();
            if n > DEFAULT_EXHAUSTIVE_BOUND {
                return Err(Error::TooManySubgoals {
                    len: n,
                    bound: DEFAULT_EXHAUSTIVE_BOUND,
                });
            }
            let chosen = optimize(q, &entry.catalog, &opts.strategies)?;
            let assignments: Vec<Vec<JoinStrategy>> = if n == 1 {
                vec![Vec::new()]
            } else {
                (0..n - 1).map(|_| opts.strategies.iter().copied()).multi_cartesian_product().collect()
            };
            let mut costs = Vec::new();
            let mut chosen_actual = None;
            for order in (0..n).permutations(n) {
                for strategies in &assignments {
                    let plan = Plan::new(q, &entry.catalog, order.clone(), strategies.clone())?;
                    let report = execute_scoped(&entry.base, &plan, opts.memo_scope)?;
                    if plan.order == chosen.order && plan.strategies == chosen.strategies {
                        chosen_actual = Some(report.actual_cost);
                    }
                    costs.push(report.actual_cost);
                }
            }
            let optimizer_actual = match chosen_actual {
                Some(c) => c,
                None => execute_scoped(&entry.base, &chosen, opts.memo_scope)?.actual_cost,
            };
            let worst = *costs.iter().max().expect("at least one plan");
            let best = *costs.iter().min().expect("at least one plan");
            let median = lower_median(&costs).expect("at least one plan");
            rows.push(RatioRow {
                base: entry.name.clone(),
                query: qi,
                plans: costs.len(),
                optimizer_order: order_text(&chosen.order),
                optimizer_strategies: strategies_text(&chosen.strategies),
                optimizer_actual,
                best_actual: best,
                median_actual: median,
                worst_actual: worst,
                ratio_worst: ratio(optimizer_actual, worst),
                ratio_median: ratio(optimizer_actual, median),
            });
        }
    }
    Ok(RatioReport { rows })
}

/// Rows as CSV with a header line.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
