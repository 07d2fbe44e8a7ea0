//! System R style estimates for single atoms and left-deep conjunctions.
//!
//! A single atom's binding pattern comes from its constants plus the
//! variables already bound by earlier subgoals. Extensional atoms cost the
//! expected number of matching facts; intensional atoms read the sampled
//! per-pattern statistics. Joins multiply cardinalities by a reduction factor
//! of `1/max(distinct_left, distinct_right)` per shared variable.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::analyzer::{BindingPattern, PredicateStats, StatisticsCatalog};
use crate::error::{Error, Result};
use crate::syntax::{Atom, Term};

pub const DEFAULT_BLOCK_SIZE: usize = 32;

/// Estimated cost and cardinality.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub cost: f64,
    pub cardinality: f64,
}

impl Estimate {
    pub fn new(cost: f64, cardinality: f64) -> Self {
        Estimate { cost, cardinality }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JoinStrategy {
    NestedLoop,
    BlockNestedLoop { block_size: usize },
    HashJoin,
}

impl JoinStrategy {
    pub fn block_nested_loop() -> Self {
        JoinStrategy::BlockNestedLoop {
            block_size: DEFAULT_BLOCK_SIZE,
        }
    }

    /// Nested loop, block nested loop and hash join, in that order.
    pub fn all(block_size: usize) -> Vec<JoinStrategy> {
        vec![
            JoinStrategy::NestedLoop,
            JoinStrategy::BlockNestedLoop { block_size },
            JoinStrategy::HashJoin,
        ]
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            JoinStrategy::NestedLoop => "nlj",
            JoinStrategy::BlockNestedLoop { .. } => "bnlj",
            JoinStrategy::HashJoin => "hash",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            JoinStrategy::BlockNestedLoop { block_size: 0 } => {
                Err(Error::InvalidConfig("block size must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for JoinStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JoinStrategy::NestedLoop => f.write_str("NestedLoop"),
            JoinStrategy::BlockNestedLoop { block_size } => write!(f, "BlockNestedLoop({block_size})"),
            JoinStrategy::HashJoin => f.write_str("HashJoin"),
        }
    }
}

/// Parses `nlj`, `bnlj` or `hash`; block nested loop gets the default block size.
impl FromStr for JoinStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nlj" => Ok(JoinStrategy::NestedLoop),
            "bnlj" => Ok(JoinStrategy::block_nested_loop()),
            "hash" => Ok(JoinStrategy::HashJoin),
            other => Err(Error::InvalidConfig(format!("unknown strategy {other}"))),
        }
    }
}

fn pattern_of(atom: &Atom, bound: &BTreeSet<String>) -> BindingPattern {
    BindingPattern::new(
        atom.args
            .iter()
            .map(|t| match t {
                Term::Const(_) => true,
                Term::Var(v) => bound.contains(v),
            })
            .collect(),
    )
}

/// Estimate of `atom` alone, with query constants and `bound` variables bound.
pub fn predicate_estimate(catalog: &StatisticsCatalog, atom: &Atom, bound: &BTreeSet<String>) -> Result<Estimate> {
    let pred = atom.builtin()?;
    let pattern = pattern_of(atom, bound);
    Ok(match catalog.get(pred) {
        PredicateStats::Eob(s) => {
            let divisor: f64 = pattern
                .bound_positions()
                .iter()
                .map(|&i| (s.n_keys[i] as f64).max(1.0))
                .product();
            let card = s.cardinality as f64 / divisor;
            Estimate::new(card, card)
        }
        PredicateStats::Iob(s) => {
            let p = s.pattern(&pattern);
            Estimate::new(p.cost, p.cardinality)
        }
    })
}

/// Distinct values of argument `pos` of `atom`, from the catalog.
pub fn distinct_values(catalog: &StatisticsCatalog, atom: &Atom, pos: usize) -> Result<f64> {
    let pred = atom.builtin()?;
    Ok(match catalog.get(pred) {
        PredicateStats::Eob(s) => s.n_keys[pos] as f64,
        PredicateStats::Iob(s) => s.distinct[pos],
    })
}

fn var_positions<'a>(atom: &'a Atom, var: &'a str) -> impl Iterator<Item = usize> + 'a {
    atom.args
        .iter()
        .enumerate()
        .filter(move |(_, t)| t.as_var() == Some(var))
        .map(|(i, _)| i)
}

fn vars_of(atoms: &[Atom]) -> BTreeSet<String> {
    atoms.iter().flat_map(|a| a.variables().map(str::to_owned)).collect()
}

/// Product over variables shared by `left` and `right` of
/// `1/max(distinct_left, distinct_right)`. On the left, a variable's distinct
/// count is the smallest over the atoms it occurs in.
pub fn reduction_factor(catalog: &StatisticsCatalog, left: &[Atom], right: &Atom) -> Result<f64> {
    let left_vars = vars_of(left);
    let right_vars: BTreeSet<&str> = right.variables().collect();
    let mut rf = 1.0;
    for v in right_vars.into_iter().filter(|v| left_vars.contains(*v)) {
        let mut dl = f64::INFINITY;
        for a in left {
            for pos in var_positions(a, v) {
                dl = dl.min(distinct_values(catalog, a, pos)?);
            }
        }
        let mut dr = f64::INFINITY;
        for pos in var_positions(right, v) {
            dr = dr.min(distinct_values(catalog, right, pos)?);
        }
        rf /= dl.max(dr).max(1.0);
    }
    Ok(rf)
}

/// `card(L)·card(R)·rf`.
pub fn join_cardinality(left: f64, right: f64, rf: f64) -> f64 {
    left * right * rf
}

/// Estimate of extending a left-deep prefix with `right` under `strategy`.
pub fn join_estimate(
    catalog: &StatisticsCatalog,
    left: Estimate,
    left_atoms: &[Atom],
    right: &Atom,
    strategy: JoinStrategy,
) -> Result<Estimate> {
    let consts_only = predicate_estimate(catalog, right, &BTreeSet::new())?;
    let rf = reduction_factor(catalog, left_atoms, right)?;
    let cardinality = join_cardinality(left.cardinality, consts_only.cardinality, rf);
    let cost = match strategy {
        JoinStrategy::NestedLoop => {
            let inst = predicate_estimate(catalog, right, &vars_of(left_atoms))?;
            left.cost + left.cardinality * inst.cost
        }
        JoinStrategy::BlockNestedLoop { block_size } => {
            left.cost + (left.cardinality / block_size.max(1) as f64).ceil() * consts_only.cost
        }
        JoinStrategy::HashJoin => left.cost + consts_only.cost,
    };
    Ok(Estimate { cost, cardinality })
}

/// Left-deep fold over `atoms`; `strategies[i]` joins atom `i+1`.
pub fn plan_estimate(catalog: &StatisticsCatalog, atoms: &[Atom], strategies: &[JoinStrategy]) -> Result<Estimate> {
    Ok(*prefix_estimates(catalog, atoms, strategies)?
        .last()
        .ok_or(Error::EmptyBody)?)
}

/// Estimates of every prefix of the plan.
pub fn prefix_estimates(catalog: &StatisticsCatalog, atoms: &[Atom], strategies: &[JoinStrategy]) -> Result<Vec<Estimate>> {
    let Some(first) = atoms.first() else {
        return Err(Error::EmptyBody);
    };
    if strategies.len() + 1 != atoms.len() {
        return Err(Error::InvalidConfig(format!(
            "{} atoms need {} join strategies, got {}",
            atoms.len(),
            atoms.len() - 1,
            strategies.len()
        )));
    }
    let mut est = predicate_estimate(catalog, first, &BTreeSet::new())?;
    let mut out = vec![est];
    for (i, s) in strategies.iter().enumerate() {
        est = join_estimate(catalog, est, &atoms[..=i], &atoms[i + 1], *s)?;
        out.push(est);
    }
    Ok(out)
}
