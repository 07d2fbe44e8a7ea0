//! Top-down evaluation with call-pattern tabling.
//!
//! Every call to an IOB predicate is keyed by its per-argument constant
//! bindings. The first call with a given key opens a table and evaluates the
//! defining rules left to right, passing bindings sideways. Recursive calls
//! read the table's current answers; the leader of a strongly connected group
//! of calls iterates until no table in the group grows, then marks the whole
//! group complete (Tarjan-style low links over the call stack).
//!
//! Counters follow one convention throughout: `inferred` grows by one for each
//! distinct answer added to a table, and `eob_access` by one for each fact
//! returned from an EOB lookup. Completed tables are free to re-read.

mod oracle;

pub use oracle::bottom_up_oracle;

use std::collections::{BTreeSet, HashMap};
use std::ops::{Add, AddAssign, Sub};

use indexmap::IndexSet;

use crate::base::{ConstId, Goal, OntologyBase, Slot, VarTable};
use crate::error::{Error, Result};
use crate::schema::Predicate;
use crate::syntax::Atom;

/// Default cap on the number of tabled call patterns per memo table.
pub const DEFAULT_MAX_TABLES: usize = 1_000_000;

/// Work performed by an evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Counters {
    /// IOB facts derived, once per distinct fact per call pattern.
    pub inferred: u64,
    /// EOB facts retrieved.
    pub eob_access: u64,
}

impl Counters {
    /// The actual-cost metric.
    pub fn total(&self) -> u64 {
        self.inferred + self.eob_access
    }
}

impl Add for Counters {
    type Output = Counters;
    fn add(self, o: Counters) -> Counters {
        Counters {
            inferred: self.inferred + o.inferred,
            eob_access: self.eob_access + o.eob_access,
        }
    }
}

impl AddAssign for Counters {
    fn add_assign(&mut self, o: Counters) {
        *self = *self + o;
    }
}

impl Sub for Counters {
    type Output = Counters;
    fn sub(self, o: Counters) -> Counters {
        Counters {
            inferred: self.inferred - o.inferred,
            eob_access: self.eob_access - o.eob_access,
        }
    }
}

/// A ground valuation of the variables of one query or rule, indexed by slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution(pub Vec<Option<ConstId>>);

impl Substitution {
    pub fn empty(vars: usize) -> Self {
        Substitution(vec![None; vars])
    }

    pub fn get(&self, slot: u32) -> Option<ConstId> {
        self.0.get(slot as usize).copied().flatten()
    }

    pub fn bound_count(&self) -> usize {
        self.0.iter().filter(|v| v.is_some()).count()
    }
}

type CallKey = (Predicate, Vec<Option<ConstId>>);

#[derive(Debug, Default)]
struct Table {
    answers: IndexSet<Vec<ConstId>>,
    complete: bool,
    /// Call-stack depth while the table is being evaluated.
    active_at: Option<usize>,
    pending: bool,
}

/// Tabled answers keyed by call pattern. Confined to one query execution.
#[derive(Debug)]
pub struct MemoTable {
    index: HashMap<CallKey, usize>,
    tables: Vec<Table>,
    /// Evaluated but not yet complete tables, in evaluation order.
    open: Vec<usize>,
    max_tables: usize,
}

impl Default for MemoTable {
    fn default() -> Self {
        Self::new()
    }
}

impl MemoTable {
    pub fn new() -> Self {
        Self::with_limit(DEFAULT_MAX_TABLES)
    }

    pub fn with_limit(max_tables: usize) -> Self {
        MemoTable {
            index: HashMap::new(),
            tables: Vec::new(),
            open: Vec::new(),
            max_tables,
        }
    }

    /// Number of tabled call patterns.
    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    /// Completed answers for a call pattern, if tabled.
    pub fn answers(&self, pred: Predicate, key: &[Option<ConstId>]) -> Option<Vec<Vec<ConstId>>> {
        let id = *self.index.get(&(pred, key.to_vec()))?;
        let t = &self.tables[id];
        t.complete.then(|| t.answers.iter().cloned().collect())
    }
}

const NO_DEPENDENCY: usize = usize::MAX;

/// Evaluates goals against one base, accumulating counters in a memo table.
pub struct Evaluator<'a> {
    base: &'a OntologyBase,
    memo: &'a mut MemoTable,
    counters: Counters,
    /// Bumped whenever any table gains an answer.
    epoch: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(base: &'a OntologyBase, memo: &'a mut MemoTable) -> Self {
        Evaluator {
            base,
            memo,
            counters: Counters::default(),
            epoch: 0,
        }
    }

    pub fn base(&self) -> &'a OntologyBase {
        self.base
    }

    /// Counters accumulated by this evaluator so far.
    pub fn counters(&self) -> Counters {
        self.counters
    }

    /// All valid instantiations of `goal` under `row`, as full-arity tuples in
    /// lexicographic id order.
    pub fn solve_goal(
        &mut self,
        goal: &Goal,
        row: &[Option<ConstId>],
    ) -> Result<Vec<Vec<ConstId>>> {
        let key = goal.key(row);
        let mut out: Vec<Vec<ConstId>> = if goal.pred.is_eob() {
            let found: Vec<Vec<ConstId>> =
                self.base.lookup(goal.pred, &key).map(<[ConstId]>::to_vec).collect();
            self.counters.eob_access += found.len() as u64;
            found
        } else {
            let (id, _) = self.call(goal.pred, key, 0)?;
            self.memo.tables[id].answers.iter().cloned().collect()
        };
        // repeated variables and row bindings
        out.retain(|t| goal.unify(row, t).is_some());
        out.sort_unstable();
        Ok(out)
    }

    /// Extends every row of `rows` through `goal` (nested-loop sideways passing).
    pub fn extend_rows(
        &mut self,
        goal: &Goal,
        rows: &[Substitution],
    ) -> Result<Vec<Substitution>> {
        let mut next = Vec::new();
        for row in rows {
            for tuple in self.solve_goal(goal, &row.0)? {
                if let Some(r) = goal.unify(&row.0, &tuple) {
                    next.push(Substitution(r));
                }
            }
        }
        Ok(next)
    }

    fn call(
        &mut self,
        pred: Predicate,
        key: Vec<Option<ConstId>>,
        depth: usize,
    ) -> Result<(usize, usize)> {
        let id = match self.memo.index.get(&(pred, key.clone())) {
            Some(&id) => {
                let t = &self.memo.tables[id];
                if t.complete {
                    return Ok((id, NO_DEPENDENCY));
                }
                if let Some(d) = t.active_at {
                    return Ok((id, d));
                }
                id
            }
            None => {
                if self.memo.tables.len() >= self.memo.max_tables {
                    return Err(Error::ResourceExhausted {
                        limit: self.memo.max_tables,
                    });
                }
                let id = self.memo.tables.len();
                self.memo.tables.push(Table::default());
                self.memo.index.insert((pred, key.clone()), id);
                id
            }
        };
        let low = self.evaluate(id, pred, &key, depth)?;
        Ok((id, low))
    }

    fn evaluate(
        &mut self,
        id: usize,
        pred: Predicate,
        key: &[Option<ConstId>],
        depth: usize,
    ) -> Result<usize> {
        let mark = self.memo.open.len();
        {
            let t = &mut self.memo.tables[id];
            t.active_at = Some(depth);
            if !t.pending {
                t.pending = true;
                self.memo.open.push(id);
            }
        }
        let mut low = NO_DEPENDENCY;
        loop {
            let before = self.epoch;
            let pass_low = self.run_rules(id, pred, key, depth)?;
            low = low.min(pass_low);
            // a pass that read no incomplete table is final
            if pass_low == NO_DEPENDENCY || self.epoch == before {
                break;
            }
        }
        self.memo.tables[id].active_at = None;
        if low >= depth {
            self.memo.tables[id].complete = true;
            self.memo.tables[id].pending = false;
            for t in self.memo.open.drain(mark..) {
                self.memo.tables[t].complete = true;
                self.memo.tables[t].pending = false;
            }
            low = NO_DEPENDENCY;
        }
        Ok(low)
    }

    fn run_rules(
        &mut self,
        id: usize,
        pred: Predicate,
        key: &[Option<ConstId>],
        depth: usize,
    ) -> Result<usize> {
        let base = self.base;
        let mut low = NO_DEPENDENCY;
        for rule in base.rules_for(pred) {
            let Some(start) = bind_head(&rule.head, key, rule.vars.len()) else {
                continue;
            };
            let mut rows = vec![start];
            for goal in &rule.body {
                let mut next = Vec::new();
                for row in &rows {
                    let sub_key = goal.key(row);
                    if goal.pred.is_eob() {
                        for t in base.lookup(goal.pred, &sub_key) {
                            self.counters.eob_access += 1;
                            if let Some(r) = goal.unify(row, t) {
                                next.push(r);
                            }
                        }
                    } else {
                        let (sub, l) = self.call(goal.pred, sub_key, depth + 1)?;
                        low = low.min(l);
                        for t in &self.memo.tables[sub].answers {
                            if let Some(r) = goal.unify(row, t) {
                                next.push(r);
                            }
                        }
                    }
                }
                rows = next;
                if rows.is_empty() {
                    break;
                }
            }
            for row in rows {
                let tuple: Vec<ConstId> = rule
                    .head
                    .args
                    .iter()
                    .map(|s| match *s {
                        Slot::Const(c) => c,
                        Slot::Var(v) => row[v as usize].expect("safe rule binds head"),
                    })
                    .collect();
                if self.memo.tables[id].answers.insert(tuple) {
                    self.counters.inferred += 1;
                    self.epoch += 1;
                }
            }
        }
        Ok(low)
    }
}

fn bind_head(head: &Goal, key: &[Option<ConstId>], vars: usize) -> Option<Vec<Option<ConstId>>> {
    let mut row = vec![None; vars];
    for (slot, k) in head.args.iter().zip(key) {
        match (*slot, *k) {
            (_, None) => {}
            (Slot::Const(c), Some(v)) => {
                if c != v {
                    return None;
                }
            }
            (Slot::Var(x), Some(v)) => match row[x as usize] {
                Some(existing) if existing != v => return None,
                _ => row[x as usize] = Some(v),
            },
        }
    }
    Some(row)
}

/// Outcome of solving one atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationResult {
    /// Valid instantiations, duplicate-free, in lexicographic constant-id order.
    pub answers: Vec<Atom>,
    pub inferred_fact_count: u64,
    pub eob_access_count: u64,
}

impl EvaluationResult {
    pub fn counters(&self) -> Counters {
        Counters {
            inferred: self.inferred_fact_count,
            eob_access: self.eob_access_count,
        }
    }
}

/// Solves a single atom, reusing and extending `memo`.
pub fn solve(base: &OntologyBase, atom: &Atom, memo: &mut MemoTable) -> Result<EvaluationResult> {
    let mut vars = VarTable::default();
    let goal = base.compile_atom(atom, &mut vars)?;
    let row = vec![None; vars.len()];
    let mut ev = Evaluator::new(base, memo);
    let tuples = ev.solve_goal(&goal, &row)?;
    let c = ev.counters();
    Ok(EvaluationResult {
        answers: tuples
            .iter()
            .map(|t| base.ground_atom(goal.pred, t))
            .collect(),
        inferred_fact_count: c.inferred,
        eob_access_count: c.eob_access,
    })
}

/// Atoms compiled against one base with a shared variable numbering.
#[derive(Debug, Clone)]
pub struct CompiledBody {
    pub goals: Vec<Goal>,
    pub vars: VarTable,
}

impl CompiledBody {
    pub fn compile(base: &OntologyBase, atoms: &[Atom]) -> Result<Self> {
        let mut vars = VarTable::default();
        let goals = atoms
            .iter()
            .map(|a| base.compile_atom(a, &mut vars))
            .collect::<Result<Vec<_>>>()?;
        Ok(CompiledBody { goals, vars })
    }

    /// Like [`compile`](Self::compile) but reuses an existing variable table,
    /// so slots line up with e.g. a query head compiled earlier.
    pub fn compile_with(base: &OntologyBase, atoms: &[Atom], mut vars: VarTable) -> Result<Self> {
        let goals = atoms
            .iter()
            .map(|a| base.compile_atom(a, &mut vars))
            .collect::<Result<Vec<_>>>()?;
        Ok(CompiledBody { goals, vars })
    }
}

/// Evaluates `atoms` left to right from each input substitution, solving each
/// atom once per partial substitution with its bindings pushed in.
///
/// Returns the distinct complete substitutions (sorted) and the counters.
pub fn solve_sequence(
    base: &OntologyBase,
    body: &CompiledBody,
    inputs: &[Substitution],
    memo: &mut MemoTable,
) -> Result<(Vec<Substitution>, Counters)> {
    let mut ev = Evaluator::new(base, memo);
    let mut rows: Vec<Substitution> = inputs
        .iter()
        .map(|s| {
            let mut v = s.0.clone();
            v.resize(body.vars.len(), None);
            Substitution(v)
        })
        .collect();
    for goal in &body.goals {
        if rows.is_empty() {
            break;
        }
        rows = ev.extend_rows(goal, &rows)?;
    }
    let set: BTreeSet<Substitution> = rows.into_iter().collect();
    Ok((set.into_iter().collect(), ev.counters()))
}

/// Like [`solve_sequence`], but every (subgoal, substitution) probe is
/// evaluated against a fresh memo table, so no probe reuses another's tables.
pub fn solve_sequence_isolated(
    base: &OntologyBase,
    body: &CompiledBody,
    inputs: &[Substitution],
) -> Result<(Vec<Substitution>, Counters)> {
    let mut counters = Counters::default();
    let mut rows: Vec<Substitution> = inputs
        .iter()
        .map(|s| {
            let mut v = s.0.clone();
            v.resize(body.vars.len(), None);
            Substitution(v)
        })
        .collect();
    for goal in &body.goals {
        if rows.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for row in &rows {
            let mut memo = MemoTable::new();
            let mut ev = Evaluator::new(base, &mut memo);
            next.extend(ev.extend_rows(goal, std::slice::from_ref(row))?);
            counters += ev.counters();
        }
        rows = next;
    }
    let set: BTreeSet<Substitution> = rows.into_iter().collect();
    Ok((set.into_iter().collect(), counters))
}

#[cfg(test)]
mod tests;
