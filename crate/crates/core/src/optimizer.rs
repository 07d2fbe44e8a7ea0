//! Join ordering by dynamic programming over subgoal sets.
//!
//! Round one costs every subgoal alone. Each later round extends every kept
//! subplan by one more subgoal, attaching the cheapest enabled join strategy
//! for that step. Subplans over the same subgoal set form an equivalence
//! class; within a class only the (cost, cardinality) Pareto frontier is kept.
//! Because every step's estimate is nondecreasing in the prefix's cost and
//! cardinality, the frontier never loses the cheapest completion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use itertools::Itertools;

use crate::analyzer::StatisticsCatalog;
use crate::cost::{join_estimate, predicate_estimate, prefix_estimates, Estimate, JoinStrategy};
use crate::error::{Error, Result};
use crate::syntax::{Atom, Query};

pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 6;

/// Largest body the subgoal-set bitmask can hold.
pub const MAX_SUBGOALS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub strategies: Vec<JoinStrategy>,
    /// Keep only Pareto-optimal subplans per equivalence class.
    pub prune: bool,
    /// Extend only with subgoals that share a variable with the subplan or
    /// carry a constant, falling back to any subgoal when none does.
    pub require_sideways: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            strategies: vec![JoinStrategy::NestedLoop],
            prune: true,
            require_sideways: false,
        }
    }
}

impl OptimizerConfig {
    pub fn with_strategies(strategies: &[JoinStrategy]) -> Self {
        OptimizerConfig {
            strategies: strategies.to_vec(),
            ..OptimizerConfig::default()
        }
    }
}

/// A left-deep ordering of some of the body's subgoals.
#[derive(Debug, Clone, PartialEq)]
pub struct SubPlan {
    /// Bit `i` set when body atom `i` is covered.
    pub atoms: u64,
    pub order: Vec<usize>,
    /// `strategies[i]` joins `order[i + 1]`.
    pub strategies: Vec<JoinStrategy>,
    pub estimate: Estimate,
}

/// `a` is no worse than `b` in cost and cardinality and better in one.
pub fn dominates(a: &SubPlan, b: &SubPlan) -> Result<bool> {
    if a.atoms != b.atoms {
        return Err(Error::NonEquivalentSubplans);
    }
    let (x, y) = (a.estimate, b.estimate);
    Ok(x.cost <= y.cost
        && x.cardinality <= y.cardinality
        && (x.cost < y.cost || x.cardinality < y.cardinality))
}

/// A complete ordering of a query body.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub query: Query,
    /// Body indices in evaluation order.
    pub order: Vec<usize>,
    pub strategies: Vec<JoinStrategy>,
    pub estimate: Estimate,
    /// Estimate after each step.
    pub prefixes: Vec<Estimate>,
}

impl Plan {
    /// Builds a plan for a fixed order and strategies.
    pub fn new(
        query: &Query,
        catalog: &StatisticsCatalog,
        order: Vec<usize>,
        strategies: Vec<JoinStrategy>,
    ) -> Result<Plan> {
        check_order(query, &order)?;
        let atoms: Vec<Atom> = order.iter().map(|&i| query.body[i].clone()).collect();
        let prefixes = prefix_estimates(catalog, &atoms, &strategies)?;
        Ok(Plan {
            query: query.clone(),
            estimate: *prefixes.last().expect("nonempty"),
            order,
            strategies,
            prefixes,
        })
    }

    /// Fixed order with the cheapest enabled strategy chosen per step.
    pub fn greedy(
        query: &Query,
        catalog: &StatisticsCatalog,
        order: Vec<usize>,
        enabled: &[JoinStrategy],
    ) -> Result<Plan> {
        check_order(query, &order)?;
        check_enabled(enabled)?;
        let first = &query.body[order[0]];
        let mut est = predicate_estimate(catalog, first, &BTreeSet::new())?;
        let mut left = vec![first.clone()];
        let mut strategies = Vec::new();
        for &i in &order[1..] {
            let (s, e) = cheapest_step(catalog, est, &left, &query.body[i], enabled)?;
            strategies.push(s);
            est = e;
            left.push(query.body[i].clone());
        }
        Plan::new(query, catalog, order, strategies)
    }

    pub fn ordered_atoms(&self) -> Vec<Atom> {
        self.order.iter().map(|&i| self.query.body[i].clone()).collect()
    }

    /// The query with its body in plan order.
    pub fn ordered_query(&self) -> Query {
        self.query.reordered(&self.order)
    }

    /// Indented listing of the steps with their prefix estimates.
    pub fn explain(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "plan for {}", self.query);
        let _ = writeln!(
            out,
            "  estimated cost {} cardinality {}",
            fmt_num(self.estimate.cost),
            fmt_num(self.estimate.cardinality)
        );
        for (step, (&i, est)) in self.order.iter().zip(&self.prefixes).enumerate() {
            let how = if step == 0 {
                "scan".to_owned()
            } else {
                self.strategies[step - 1].to_string()
            };
            let _ = writeln!(
                out,
                "  {}. {} [{}]\n       {}  cost {} cardinality {}",
                step + 1,
                self.query.body[i],
                i,
                how,
                fmt_num(est.cost),
                fmt_num(est.cardinality)
            );
        }
        out
    }
}

fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{x:.0}")
    } else {
        format!("{x:.3}")
    }
}

fn check_order(query: &Query, order: &[usize]) -> Result<()> {
    if query.body.is_empty() {
        return Err(Error::EmptyBody);
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..query.body.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidConfig(format!(
            "{order:?} is not an ordering of {} subgoals",
            query.body.len()
        )));
    }
    Ok(())
}

fn check_enabled(enabled: &[JoinStrategy]) -> Result<()> {
    if enabled.is_empty() {
        return Err(Error::InvalidConfig("no join strategy enabled".into()));
    }
    enabled.iter().try_for_each(JoinStrategy::validate)
}

/// Cheapest enabled strategy for one step; earlier strategies win ties.
fn cheapest_step(
    catalog: &StatisticsCatalog,
    left: Estimate,
    left_atoms: &[Atom],
    right: &Atom,
    enabled: &[JoinStrategy],
) -> Result<(JoinStrategy, Estimate)> {
    let mut best: Option<(JoinStrategy, Estimate)> = None;
    for &s in enabled {
        let e = join_estimate(catalog, left, left_atoms, right, s)?;
        if best.is_none_or(|(_, b)| e.cost < b.cost) {
            best = Some((s, e));
        }
    }
    Ok(best.expect("at least one strategy"))
}

/// Adds `cand` to a frontier, keeping only undominated subplans. Of two
/// subplans with equal estimates the lexicographically smaller order stays.
fn insert(frontier: &mut Vec<SubPlan>, cand: SubPlan, prune: bool) {
    if !prune {
        frontier.push(cand);
        return;
    }
    for existing in frontier.iter_mut() {
        if existing.estimate == cand.estimate {
            if cand.order < existing.order {
                *existing = cand;
            }
            return;
        }
        if dominates(existing, &cand).expect("same class") {
            return;
        }
    }
    frontier.retain(|e| !dominates(&cand, e).expect("same class"));
    frontier.push(cand);
}

fn better(a: &SubPlan, b: &SubPlan) -> bool {
    a.estimate.cost < b.estimate.cost || (a.estimate.cost == b.estimate.cost && a.order < b.order)
}

/// Cheapest plan under `config`.
pub fn optimize_with(query: &Query, catalog: &StatisticsCatalog, config: &OptimizerConfig) -> Result<Plan> {
    let n = query.body.len();
    if n == 0 {
        return Err(Error::EmptyBody);
    }
    if n > MAX_SUBGOALS {
        return Err(Error::TooManySubgoals {
            len: n,
            bound: MAX_SUBGOALS,
        });
    }
    check_enabled(&config.strategies)?;
    let atoms = &query.body;
    let vars: Vec<BTreeSet<&str>> = atoms.iter().map(|a| a.variables().collect()).collect();
    let has_const: Vec<bool> = atoms.iter().map(|a| a.args.iter().any(|t| !t.is_var())).collect();

    let mut classes: BTreeMap<u64, Vec<SubPlan>> = BTreeMap::new();
    for (i, a) in atoms.iter().enumerate() {
        let sp = SubPlan {
            atoms: 1 << i,
            order: vec![i],
            strategies: Vec::new(),
            estimate: predicate_estimate(catalog, a, &BTreeSet::new())?,
        };
        insert(classes.entry(sp.atoms).or_default(), sp, config.prune);
    }
    for _round in 1..n {
        let mut next: BTreeMap<u64, Vec<SubPlan>> = BTreeMap::new();
        for frontier in classes.values() {
            for sp in frontier {
                let left_atoms: Vec<Atom> = sp.order.iter().map(|&i| atoms[i].clone()).collect();
                let left_vars: BTreeSet<&str> = sp.order.iter().flat_map(|&i| vars[i].iter().copied()).collect();
                let remaining: Vec<usize> = (0..n).filter(|z| sp.atoms & (1 << z) == 0).collect();
                let mut candidates = remaining.clone();
                if config.require_sideways {
                    let connected: Vec<usize> = remaining
                        .iter()
                        .copied()
                        .filter(|&z| has_const[z] || vars[z].iter().any(|v| left_vars.contains(v)))
                        .collect();
                    if !connected.is_empty() {
                        candidates = connected;
                    }
                }
                for z in candidates {
                    let (s, e) = cheapest_step(catalog, sp.estimate, &left_atoms, &atoms[z], &config.strategies)?;
                    let mut order = sp.order.clone();
                    order.push(z);
                    let mut strategies = sp.strategies.clone();
                    strategies.push(s);
                    let cand = SubPlan {
                        atoms: sp.atoms | 1 << z,
                        order,
                        strategies,
                        estimate: e,
                    };
                    insert(next.entry(cand.atoms).or_default(), cand, config.prune);
                }
            }
        }
        classes = next;
    }
    let full = classes.into_values().next().expect("one complete class");
    let best = full
        .into_iter()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("nonempty frontier");
    Plan::new(query, catalog, best.order, best.strategies)
}

/// Cheapest plan with the given strategies enabled and pruning on.
pub fn optimize(query: &Query, catalog: &StatisticsCatalog, strategies: &[JoinStrategy]) -> Result<Plan> {
    optimize_with(query, catalog, &OptimizerConfig::with_strategies(strategies))
}

/// Every ordering of the body (lexicographic permutation order), each with
/// the cheapest enabled strategy per step.
pub fn exhaustive_orderings(
    query: &Query,
    catalog: &StatisticsCatalog,
    strategies: &[JoinStrategy],
) -> Result<Vec<(Plan, Estimate)>> {
    exhaustive_orderings_bounded(query, catalog, strategies, DEFAULT_EXHAUSTIVE_BOUND)
}

pub fn exhaustive_orderings_bounded(
    query: &Query,
    catalog: &StatisticsCatalog,
    strategies: &[JoinStrategy],
    bound: usize,
) -> Result<Vec<(Plan, Estimate)>> {
    let n = query.body.len();
    if n == 0 {
        return Err(Error::EmptyBody);
    }
    if n > bound {
        return Err(Error::TooManySubgoals { len: n, bound });
    }
    (0..n)
        .permutations(n)
        .map(|order| {
            let plan = Plan::greedy(query, catalog, order, strategies)?;
            let e = plan.estimate;
            Ok((plan, e))
        })
        .collect()
}

/// The cheapest of [`exhaustive_orderings`], first in permutation order on ties.
pub fn exhaustive_best(query: &Query, catalog: &StatisticsCatalog, strategies: &[JoinStrategy]) -> Result<Plan> {
    let all = exhaustive_orderings(query, catalog, strategies)?;
    let best = all
        .into_iter()
        .reduce(|a, b| if b.1.cost < a.1.cost { b } else { a })
        .expect("at least one ordering");
    Ok(best.0)
}
