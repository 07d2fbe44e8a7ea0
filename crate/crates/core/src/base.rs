//! The extensional fact store.
//!
//! Constants are interned to dense integer ids in first-seen order. Each EOB
//! predicate keeps its ground tuples in insertion order together with one
//! posting-list index per argument position.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::program::builtin_iob_program;
use crate::schema::Predicate;
use crate::syntax::{Atom, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstId(u32);

impl ConstId {
    /// Stands in for a query constant that never occurs in the base; it
    /// matches no fact.
    pub const ABSENT: ConstId = ConstId(u32::MAX);

    pub fn raw(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, Default)]
pub struct Interner {
    ids: HashMap<String, ConstId>,
    names: Vec<String>,
}

impl Interner {
    pub fn intern(&mut self, s: &str) -> ConstId {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = ConstId(self.names.len() as u32);
        self.names.push(s.to_owned());
        self.ids.insert(s.to_owned(), id);
        id
    }

    pub fn get(&self, s: &str) -> Option<ConstId> {
        self.ids.get(s).copied()
    }

    pub fn name(&self, id: ConstId) -> &str {
        self.names
            .get(id.0 as usize)
            .map(String::as_str)
            .unwrap_or("<absent>")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// An argument of a compiled goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Const(ConstId),
    Var(u32),
}

/// An atom resolved against the schema and the interner. Variables are
/// numbered densely within their rule or query.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Goal {
    pub pred: Predicate,
    pub args: Vec<Slot>,
}

impl Goal {
    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.args.iter().filter_map(|s| match s {
            Slot::Var(v) => Some(*v),
            Slot::Const(_) => None,
        })
    }

    /// Per-argument constant binding under `row`.
    pub fn key(&self, row: &[Option<ConstId>]) -> Vec<Option<ConstId>> {
        self.args
            .iter()
            .map(|s| match *s {
                Slot::Const(c) => Some(c),
                Slot::Var(v) => row[v as usize],
            })
            .collect()
    }

    /// Extends `row` with `tuple`; `None` if a bound variable disagrees.
    pub fn unify(&self, row: &[Option<ConstId>], tuple: &[ConstId]) -> Option<Vec<Option<ConstId>>> {
        let mut out = row.to_vec();
        for (slot, &value) in self.args.iter().zip(tuple) {
            match *slot {
                Slot::Const(c) => {
                    if c != value {
                        return None;
                    }
                }
                Slot::Var(v) => match out[v as usize] {
                    Some(existing) if existing != value => return None,
                    Some(_) => {}
                    None => out[v as usize] = Some(value),
                },
            }
        }
        Some(out)
    }
}

/// Variable names of one rule or query, indexed by their slot number.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    pub fn slot(&mut self, name: &str) -> u32 {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return i as u32;
        }
        self.names.push(name.to_owned());
        (self.names.len() - 1) as u32
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn name(&self, slot: u32) -> &str {
        &self.names[slot as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct CompiledRule {
    pub head: Goal,
    pub body: Vec<Goal>,
    pub vars: VarTable,
}

#[derive(Debug, Clone, Default)]
struct Relation {
    tuples: Vec<Box<[ConstId]>>,
    seen: HashSet<Box<[ConstId]>>,
    index: Vec<HashMap<ConstId, Vec<u32>>>,
}

impl Relation {
    fn with_arity(arity: usize) -> Self {
        Relation {
            index: vec![HashMap::new(); arity],
            ..Default::default()
        }
    }

    fn insert(&mut self, tuple: Box<[ConstId]>) -> bool {
        if self.seen.contains(&tuple) {
            return false;
        }
        let pos = self.tuples.len() as u32;
        for (i, &c) in tuple.iter().enumerate() {
            self.index[i].entry(c).or_default().push(pos);
        }
        self.seen.insert(tuple.clone());
        self.tuples.push(tuple);
        true
    }
}

/// Iterator over the stored tuples matching a binding key.
pub struct Matches<'a>(MatchState<'a>);

enum MatchState<'a> {
    Scan(std::slice::Iter<'a, Box<[ConstId]>>),
    Indexed {
        relation: &'a Relation,
        postings: std::slice::Iter<'a, u32>,
        key: Vec<Option<ConstId>>,
    },
    Empty,
}

impl<'a> Iterator for Matches<'a> {
    type Item = &'a [ConstId];

    fn next(&mut self) -> Option<&'a [ConstId]> {
        match &mut self.0 {
            MatchState::Scan(it) => it.next().map(|t| &**t),
            MatchState::Indexed {
                relation,
                postings,
                key,
            } => {
                for &pos in postings.by_ref() {
                    let t = &relation.tuples[pos as usize];
                    if key
                        .iter()
                        .zip(t.iter())
                        .all(|(k, v)| k.is_none_or(|k| k == *v))
                    {
                        return Some(t);
                    }
                }
                None
            }
            MatchState::Empty => None,
        }
    }
}

/// A deductive ontology base: ground EOB facts plus the fixed IOB rule program.
#[derive(Debug, Clone)]
pub struct OntologyBase {
    interner: Interner,
    relations: Vec<Relation>,
    rules: Vec<CompiledRule>,
    rules_by_head: Vec<Vec<usize>>,
}

impl Default for OntologyBase {
    fn default() -> Self {
        Self::new()
    }
}

impl OntologyBase {
    pub fn new() -> Self {
        let relations = Predicate::eob()
            .map(|p| Relation::with_arity(p.arity()))
            .collect();
        let mut base = OntologyBase {
            interner: Interner::default(),
            relations,
            rules: Vec::new(),
            rules_by_head: vec![Vec::new(); Predicate::ALL.len()],
        };
        for rule in builtin_iob_program() {
            let mut vars = VarTable::default();
            let head = base
                .compile_atom(&rule.head, &mut vars)
                .expect("built-in rule head");
            let body = rule
                .body
                .iter()
                .map(|a| base.compile_atom(a, &mut vars))
                .collect::<Result<Vec<_>>>()
                .expect("built-in rule body");
            base.rules_by_head[head.pred.index()].push(base.rules.len());
            base.rules.push(CompiledRule { head, body, vars });
        }
        base
    }

    pub fn from_facts<'a>(facts: impl IntoIterator<Item = &'a Atom>) -> Result<Self> {
        let mut base = OntologyBase::new();
        for f in facts {
            base.assert_fact(f)?;
        }
        Ok(base)
    }

    /// Adds a ground EOB fact. Returns `false` if it was already present.
    pub fn assert_fact(&mut self, fact: &Atom) -> Result<bool> {
        let pred = fact.builtin()?;
        if !pred.is_eob() {
            return Err(Error::NotExtensional(fact.to_string()));
        }
        if !fact.is_ground() {
            return Err(Error::NonGround(fact.to_string()));
        }
        let tuple: Box<[ConstId]> = fact
            .args
            .iter()
            .map(|t| self.interner.intern(t.text()))
            .collect();
        Ok(self.relations[pred.index()].insert(tuple))
    }

    /// Adds a fact given as predicate and constant names.
    pub fn insert(&mut self, pred: Predicate, args: &[&str]) -> Result<bool> {
        let atom = Atom::new(
            pred.name(),
            args.iter().map(|a| Term::constant(*a)).collect(),
        );
        self.assert_fact(&atom)
    }

    pub fn interner(&self) -> &Interner {
        &self.interner
    }

    pub fn name(&self, id: ConstId) -> &str {
        self.interner.name(id)
    }

    pub fn lookup_constant(&self, s: &str) -> Option<ConstId> {
        self.interner.get(s)
    }

    pub fn rules(&self) -> &[CompiledRule] {
        &self.rules
    }

    pub fn rules_for(&self, pred: Predicate) -> impl Iterator<Item = &CompiledRule> {
        self.rules_by_head[pred.index()]
            .iter()
            .map(move |&i| &self.rules[i])
    }

    pub fn cardinality(&self, pred: Predicate) -> usize {
        if pred.is_eob() {
            self.relations[pred.index()].tuples.len()
        } else {
            0
        }
    }

    pub fn fact_count(&self) -> usize {
        self.relations.iter().map(|r| r.tuples.len()).sum()
    }

    pub fn tuples(&self, pred: Predicate) -> impl Iterator<Item = &[ConstId]> {
        let rel = pred.is_eob().then(|| &self.relations[pred.index()]);
        rel.into_iter().flat_map(|r| r.tuples.iter().map(|t| &**t))
    }

    /// Distinct constants at `pos` of `pred`, in first-seen order.
    pub fn distinct_values(&self, pred: Predicate, pos: usize) -> Vec<ConstId> {
        let mut seen = HashSet::new();
        self.tuples(pred)
            .map(|t| t[pos])
            .filter(|c| seen.insert(*c))
            .collect()
    }

    pub fn distinct_count(&self, pred: Predicate, pos: usize) -> usize {
        if !pred.is_eob() {
            return 0;
        }
        self.relations[pred.index()].index[pos].len()
    }

    /// Tuples of an EOB predicate agreeing with `key` at every bound position,
    /// in insertion order. Uses the most selective bound argument's index.
    pub fn lookup(&self, pred: Predicate, key: &[Option<ConstId>]) -> Matches<'_> {
        debug_assert!(pred.is_eob());
        let rel = &self.relations[pred.index()];
        let mut best: Option<&Vec<u32>> = None;
        for (i, k) in key.iter().enumerate() {
            if let Some(c) = k {
                match rel.index[i].get(c) {
                    None => return Matches(MatchState::Empty),
                    Some(list) => {
                        if best.is_none_or(|b| list.len() < b.len()) {
                            best = Some(list);
                        }
                    }
                }
            }
        }
        match best {
            None => Matches(MatchState::Scan(rel.tuples.iter())),
            Some(list) => Matches(MatchState::Indexed {
                relation: rel,
                postings: list.iter(),
                key: key.to_vec(),
            }),
        }
    }

    /// Resolves an atom to a goal. Unknown constants become [`ConstId::ABSENT`].
    pub fn compile_atom(&self, atom: &Atom, vars: &mut VarTable) -> Result<Goal> {
        let pred = atom.builtin()?;
        let args = atom
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) => Slot::Var(vars.slot(v)),
                Term::Const(c) => Slot::Const(self.interner.get(c).unwrap_or(ConstId::ABSENT)),
            })
            .collect();
        Ok(Goal { pred, args })
    }

    pub fn ground_atom(&self, pred: Predicate, tuple: &[ConstId]) -> Atom {
        Atom::new(
            pred.name(),
            tuple
                .iter()
                .map(|&c| Term::constant(self.name(c)))
                .collect(),
        )
    }

    /// All facts unifying with `pattern`, in insertion order.
    pub fn match_eob(&self, pattern: &Atom) -> Result<Vec<Atom>> {
        let pred = pattern.builtin()?;
        if !pred.is_eob() {
            return Err(Error::NotExtensional(pattern.to_string()));
        }
        let mut vars = VarTable::default();
        let goal = self.compile_atom(pattern, &mut vars)?;
        let row = vec![None; vars.len()];
        let key = goal.key(&row);
        Ok(self
            .lookup(pred, &key)
            .filter(|t| goal.unify(&row, t).is_some())
            .map(|t| self.ground_atom(pred, t))
            .collect())
    }

    /// Every stored fact, grouped by predicate in schema order.
    pub fn facts(&self) -> Vec<Atom> {
        Predicate::eob()
            .flat_map(|p| self.tuples(p).map(move |t| (p, t)))
            .map(|(p, t)| self.ground_atom(p, t))
            .collect()
    }
}

impl fmt::Display for OntologyBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fact in self.facts() {
            writeln!(f, "{fact}.")?;
        }
        Ok(())
    }
}
