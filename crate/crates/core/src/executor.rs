//! Plan execution with per-step join strategies.
//!
//! Nested-loop steps push each incoming row's bindings into the next
//! subgoal. Hash joins and each block of a block nested-loop join evaluate
//! the next subgoal once with only its query constants bound, against a memo
//! table of their own, so the step pays for the right side in full.
//!
//! By default each nested-loop probe also gets a fresh table: every valid
//! instantiation of the prefix gets its own proof of the next subgoal, which
//! is what the nested-loop cost formula charges for. [`MemoScope::Execution`]
//! instead shares one table across all probes of an execution.

use std::collections::{BTreeSet, HashMap};

use crate::base::{ConstId, Goal, OntologyBase, Slot};
use crate::cost::JoinStrategy;
use crate::engine::{CompiledBody, Counters, Evaluator, MemoTable, Substitution};
use crate::error::{Error, Result};
use crate::optimizer::Plan;
use crate::syntax::{Atom, Query, Term};

/// Lifetime of the memo table used by nested-loop probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MemoScope {
    /// A fresh table per probe.
    #[default]
    Probe,
    /// One table per execution, shared by every nested-loop probe.
    Execution,
}

impl std::fmt::Display for MemoScope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MemoScope::Probe => "probe",
            MemoScope::Execution => "execution",
        })
    }
}

impl std::str::FromStr for MemoScope {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "probe" => Ok(MemoScope::Probe),
            "execution" => Ok(MemoScope::Execution),
            _ => Err(format!("unknown memo scope {s:?} (probe or execution)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionReport {
    /// Distinct head instantiations, sorted.
    pub answers: Vec<Atom>,
    /// `inferred + eob_access` over all steps.
    pub actual_cost: u64,
    pub counters: Counters,
    pub per_step: Vec<Counters>,
    /// Rows leaving each step.
    pub rows_per_step: Vec<usize>,
}

pub fn execute(base: &OntologyBase, plan: &Plan) -> Result<ExecutionReport> {
    execute_order(base, &plan.ordered_query(), &plan.strategies)
}

pub fn execute_scoped(base: &OntologyBase, plan: &Plan, scope: MemoScope) -> Result<ExecutionReport> {
    execute_order_scoped(base, &plan.ordered_query(), &plan.strategies, scope)
}

/// Executes `query`'s body in its written order; `strategies[i]` joins
/// subgoal `i + 1`.
pub fn execute_order(base: &OntologyBase, query: &Query, strategies: &[JoinStrategy]) -> Result<ExecutionReport> {
    execute_order_scoped(base, query, strategies, MemoScope::default())
}

pub fn execute_order_scoped(
    base: &OntologyBase,
    query: &Query,
    strategies: &[JoinStrategy],
    scope: MemoScope,
) -> Result<ExecutionReport> {
    if query.body.is_empty() {
        return Err(Error::EmptyBody);
    }
    if strategies.len() + 1 != query.body.len() {
        return Err(Error::InvalidConfig(format!(
            "{} strategies for {} subgoals",
            strategies.len(),
            query.body.len()
        )));
    }
    strategies.iter().try_for_each(JoinStrategy::validate)?;
    let body = CompiledBody::compile(base, &query.body)?;
    let width = body.vars.len();
    let mut memo = MemoTable::new();
    let mut per_step = Vec::new();
    let mut rows_per_step = Vec::new();
    let mut rows = vec![Substitution::empty(width)];
    for (i, goal) in body.goals.iter().enumerate() {
        if rows.is_empty() {
            break;
        }
        let strategy = if i == 0 { JoinStrategy::NestedLoop } else { strategies[i - 1] };
        let (next, c) = match strategy {
            JoinStrategy::NestedLoop if scope == MemoScope::Execution => {
                let mut ev = Evaluator::new(base, &mut memo);
                let next = ev.extend_rows(goal, &rows)?;
                (next, ev.counters())
            }
            JoinStrategy::NestedLoop => {
                let mut next = Vec::new();
                let mut c = Counters::default();
                for row in &rows {
                    let mut probe = MemoTable::new();
                    let mut ev = Evaluator::new(base, &mut probe);
                    next.extend(ev.extend_rows(goal, std::slice::from_ref(row))?);
                    c += ev.counters();
                }
                (next, c)
            }
            JoinStrategy::HashJoin => {
                let (right, c) = solve_unbound(base, goal, width)?;
                (hash_join(goal, &rows, &right), c)
            }
            JoinStrategy::BlockNestedLoop { block_size } => {
                let mut next = Vec::new();
                let mut c = Counters::default();
                for block in rows.chunks(block_size) {
                    let (right, bc) = solve_unbound(base, goal, width)?;
                    c += bc;
                    for l in block {
                        next.extend(right.iter().filter_map(|r| merge(goal, l, r)));
                    }
                }
                (next, c)
            }
        };
        let set: BTreeSet<Substitution> = next.into_iter().collect();
        rows = set.into_iter().collect();
        per_step.push(c);
        rows_per_step.push(rows.len());
    }
    let counters = per_step.iter().fold(Counters::default(), |a, &c| a + c);
    let answers = project(base, &query.head, &body, &rows);
    Ok(ExecutionReport {
        answers,
        actual_cost: counters.total(),
        counters,
        per_step,
        rows_per_step,
    })
}

/// One report per strategy, each applying that strategy at every step.
pub fn execute_all_strategies(
    base: &OntologyBase,
    query: &Query,
    strategies: &[JoinStrategy],
) -> Result<Vec<(JoinStrategy, ExecutionReport)>> {
    strategies
        .iter()
        .map(|&s| {
            let per_step = vec![s; query.body.len().saturating_sub(1)];
            Ok((s, execute_order(base, query, &per_step)?))
        })
        .collect()
}

/// Solves `goal` with only its constants bound, in a table of its own.
fn solve_unbound(base: &OntologyBase, goal: &Goal, width: usize) -> Result<(Vec<Substitution>, Counters)> {
    let mut memo = MemoTable::new();
    let mut ev = Evaluator::new(base, &mut memo);
    let rows = ev.extend_rows(goal, &[Substitution::empty(width)])?;
    Ok((rows, ev.counters()))
}

/// `left` extended with `right`'s bindings of `goal`'s variables, if they agree.
fn merge(goal: &Goal, left: &Substitution, right: &Substitution) -> Option<Substitution> {
    let mut out = left.0.clone();
    for v in goal.vars() {
        let r = right.0[v as usize];
        match out[v as usize] {
            Some(l) if Some(l) != r => return None,
            Some(_) => {}
            None => out[v as usize] = r,
        }
    }
    Some(Substitution(out))
}

/// Joins on the variables of `goal` already bound in the incoming rows,
/// building the table over the smaller side.
fn hash_join(goal: &Goal, left: &[Substitution], right: &[Substitution]) -> Vec<Substitution> {
    let Some(first) = left.first() else {
        return Vec::new();
    };
    let mut shared: Vec<u32> = goal.vars().filter(|&v| first.0[v as usize].is_some()).collect();
    shared.sort_unstable();
    shared.dedup();
    let key = |s: &Substitution| -> Vec<Option<ConstId>> { shared.iter().map(|&v| s.0[v as usize]).collect() };
    let mut out = Vec::new();
    if left.len() <= right.len() {
        let mut table: HashMap<Vec<Option<ConstId>>, Vec<&Substitution>> = HashMap::new();
        for l in left {
            table.entry(key(l)).or_default().push(l);
        }
        for r in right {
            for l in table.get(&key(r)).into_iter().flatten() {
                out.extend(merge(goal, l, r));
            }
        }
    } else {
        let mut table: HashMap<Vec<Option<ConstId>>, Vec<&Substitution>> = HashMap::new();
        for r in right {
            table.entry(key(r)).or_default().push(r);
        }
        for l in left {
            for r in table.get(&key(l)).into_iter().flatten() {
                out.extend(merge(goal, l, r));
            }
        }
    }
    out
}

fn project(base: &OntologyBase, head: &Atom, body: &CompiledBody, rows: &[Substitution]) -> Vec<Atom> {
    let slots: Vec<Slot> = head
        .args
        .iter()
        .map(|t| match t.as_var() {
            Some(v) => Slot::Var(body.vars.get(v).expect("safe query")),
            None => Slot::Const(ConstId::ABSENT),
        })
        .collect();
    let set: BTreeSet<Atom> = rows
        .iter()
        .map(|row| {
            let args = head
                .args
                .iter()
                .zip(&slots)
                .map(|(t, s)| match *s {
                    Slot::Var(v) => Term::constant(base.name(row.get(v).expect("bound head variable"))),
                    Slot::Const(_) => t.clone(),
                })
                .collect();
            Atom::new(head.predicate.clone(), args)
        })
        .collect();
    set.into_iter().collect()
}
