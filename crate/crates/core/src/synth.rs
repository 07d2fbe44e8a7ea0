//! Random ontology bases and chain/star queries for the benchmarks.
//!
//! All choices are uniform and driven by one seeded generator, so a config
//! always yields the same base and queries.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::base::OntologyBase;
use crate::error::{Error, Result};
use crate::schema::{ArgDomain, Predicate};
use crate::syntax::{Atom, Query, Term};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    /// Bases in a generated corpus; base `i` uses seed `seed + i`.
    pub documents: usize,
    pub ontologies: usize,
    pub classes_per_ontology: usize,
    pub subclass_edges: usize,
    pub max_subclass_depth: usize,
    pub import_edges: usize,
    pub object_properties: usize,
    pub datatype_properties: usize,
    pub transitive_properties: usize,
    pub all_values_from: usize,
    pub individuals: usize,
    pub statements: usize,
    pub chain_queries: usize,
    pub star_queries: usize,
    pub subgoals: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            documents: 10,
            ontologies: 5,
            classes_per_ontology: 8,
            subclass_edges: 40,
            max_subclass_depth: 4,
            import_edges: 5,
            object_properties: 6,
            datatype_properties: 10,
            transitive_properties: 1,
            all_values_from: 4,
            individuals: 40,
            statements: 50,
            chain_queries: 3,
            star_queries: 3,
            subgoals: 3,
            seed: 42,
        }
    }
}

impl SynthConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain struct serializes")
    }

    fn classes(&self) -> usize {
        self.ontologies * self.classes_per_ontology
    }

    /// Ordered class pairs allowed by the level assignment.
    fn subclass_capacity(levels: &[usize]) -> usize {
        let mut per = std::collections::BTreeMap::new();
        for &l in levels {
            *per.entry(l).or_insert(0usize) += 1;
        }
        let counts: Vec<usize> = per.values().copied().collect();
        let mut total = 0;
        for i in 0..counts.len() {
            for j in i + 1..counts.len() {
                total += counts[i] * counts[j];
            }
        }
        total
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.ontologies == 0 {
            return bad("at least one ontology is needed".into());
        }
        if self.import_edges > self.ontologies * (self.ontologies - 1) {
            return bad(format!("{} import edges exceed ordered ontology pairs", self.import_edges));
        }
        if self.subclass_edges > 0 && (self.max_subclass_depth < 2 || self.classes() < 2) {
            return bad("subclass edges need two classes and max_subclass_depth >= 2".into());
        }
        let max_pairs = self.classes() * self.classes().saturating_sub(1) / 2;
        if self.subclass_edges > max_pairs {
            return bad(format!("{} subclass edges exceed class pairs", self.subclass_edges));
        }
        if self.transitive_properties > self.object_properties {
            return bad("more transitive than object properties".into());
        }
        let needs_class = self.object_properties + self.datatype_properties + self.individuals + self.all_values_from > 0;
        if needs_class && self.classes() == 0 {
            return bad("properties and individuals need classes".into());
        }
        if self.all_values_from > 0 && self.object_properties == 0 {
            return bad("allValuesFrom needs object properties".into());
        }
        if self.statements > 0 && (self.individuals == 0 || self.object_properties == 0) {
            return bad("statements need individuals and object properties".into());
        }
        if self.chain_queries + self.star_queries > 0 && self.subgoals < 2 {
            return bad("queries need at least two subgoals".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryShape {
    Chain,
    Star,
}

impl fmt::Display for QueryShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryShape::Chain => "chain",
            QueryShape::Star => "star",
        })
    }
}

impl FromStr for QueryShape {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "chain" => Ok(QueryShape::Chain),
            "star" => Ok(QueryShape::Star),
            _ => Err(format!("unknown query shape {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticQuery {
    pub shape: QueryShape,
    pub query: Query,
}

#[derive(Debug)]
pub struct Synthetic {
    pub facts: Vec<Atom>,
    pub base: OntologyBase,
    pub queries: Vec<SyntheticQuery>,
}

struct Names {
    ontology: Vec<String>,
    class: Vec<String>,
    property: Vec<String>,
    individual: Vec<String>,
}

/// Statement objects are individuals here, so the two domains join.
fn link_domain(d: ArgDomain) -> ArgDomain {
    match d {
        ArgDomain::Value => ArgDomain::Individual,
        d => d,
    }
}

fn pick_distinct<T: Ord + Clone>(
    rng: &mut ChaCha8Rng,
    count: usize,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Option<T>,
) -> Vec<T> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        if let Some(x) = draw(rng) {
            if seen.insert(x.clone()) {
                out.push(x);
            }
        }
    }
    out
}

fn fact(pred: Predicate, args: &[&str]) -> Atom {
    Atom::new(pred.name(), args.iter().map(|a| Term::constant(*a)).collect())
}

/// Generates one base and its queries from `config.seed`.
pub fn generate_synthetic(config: &SynthConfig) -> Result<Synthetic> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let names = Names {
        ontology: (0..config.ontologies).map(|i| format!("o{i}")).collect(),
        class: (0..config.ontologies)
            .flat_map(|o| (0..config.classes_per_ontology).map(move |c| format!("c{o}_{c}")))
            .collect(),
        property: (0..config.object_properties)
            .map(|i| format!("op{i}"))
            .chain((0..config.datatype_properties).map(|i| format!("dp{i}")))
            .collect(),
        individual: (0..config.individuals).map(|i| format!("i{i}")).collect(),
    };
    let mut facts = Vec::new();
    for o in &names.ontology {
        facts.push(fact(Predicate::IsOntology, &[o]));
    }
    for (i, c) in names.class.iter().enumerate() {
        facts.push(fact(Predicate::IsClass, &[c, &names.ontology[i / config.classes_per_ontology]]));
    }
    let n_onts = names.ontology.len();
    for (a, b) in pick_distinct(&mut rng, config.import_edges, |r| {
        let (a, b) = (r.gen_range(0..n_onts), r.gen_range(0..n_onts));
        (a != b).then_some((a, b))
    }) {
        facts.push(fact(Predicate::ImpOntology, &[&names.ontology[a], &names.ontology[b]]));
    }

    // a class only specializes classes on a lower level, so the graph is acyclic
    let n_classes = names.class.len();
    let depth = config.max_subclass_depth.max(1);
    let mut levels: Vec<usize> = (0..n_classes).map(|_| rng.gen_range(0..depth)).collect();
    if config.subclass_edges > SynthConfig::subclass_capacity(&levels) {
        // spread levels evenly when the draw leaves too few pairs
        levels = (0..n_classes).map(|i| i * depth / n_classes).collect();
        if config.subclass_edges > SynthConfig::subclass_capacity(&levels) {
            return Err(Error::InvalidConfig(format!(
                "{} subclass edges do not fit {} levels",
                config.subclass_edges, depth
            )));
        }
    }
    for (a, b) in pick_distinct(&mut rng, config.subclass_edges, |r| {
        let (a, b) = (r.gen_range(0..n_classes), r.gen_range(0..n_classes));
        (levels[a] > levels[b]).then_some((a, b))
    }) {
        facts.push(fact(Predicate::SubClassOf, &[&names.class[a], &names.class[b]]));
    }

    let class = |r: &mut ChaCha8Rng| names.class[r.gen_range(0..n_classes)].clone();
    let object: Vec<&String> = names.property[..config.object_properties].iter().collect();
    for p in &object {
        let (d, r) = (class(&mut rng), class(&mut rng));
        facts.push(fact(Predicate::IsOProperty, &[p, &d, &r]));
    }
    for p in &names.property[config.object_properties..] {
        let d = class(&mut rng);
        facts.push(fact(Predicate::IsDProperty, &[p, &d]));
    }
    for p in object.choose_multiple(&mut rng, config.transitive_properties) {
        facts.push(fact(Predicate::IsTransitive, &[p]));
    }
    let n_obj = object.len();
    for (c, p, d) in pick_distinct(&mut rng, config.all_values_from, |r| {
        Some((r.gen_range(0..n_classes), r.gen_range(0..n_obj), r.gen_range(0..n_classes)))
    }) {
        facts.push(fact(Predicate::AllValuesFrom, &[&names.class[c], object[p], &names.class[d]]));
    }
    for i in &names.individual {
        let c = class(&mut rng);
        facts.push(fact(Predicate::IsIndividual, &[i, &c]));
    }
    let n_ind = names.individual.len();
    let capacity = n_ind * n_obj * n_ind;
    if config.statements > capacity {
        return Err(Error::InvalidConfig(format!("{} statements exceed {capacity} triples", config.statements)));
    }
    for (a, p, b) in pick_distinct(&mut rng, config.statements, |r| {
        Some((r.gen_range(0..n_ind), r.gen_range(0..n_obj), r.gen_range(0..n_ind)))
    }) {
        facts.push(fact(Predicate::IsStatement, &[&names.individual[a], object[p], &names.individual[b]]));
    }

    let base = OntologyBase::from_facts(&facts)?;
    let mut queries = Vec::new();
    for _ in 0..config.chain_queries {
        queries.push(random_query(&mut rng, &base, QueryShape::Chain, config.subgoals));
    }
    for _ in 0..config.star_queries {
        queries.push(random_query(&mut rng, &base, QueryShape::Star, config.subgoals));
    }
    Ok(Synthetic { facts, base, queries })
}

/// Bases `seed, seed + 1, ...` of a corpus.
pub fn generate_corpus(config: &SynthConfig) -> Result<Vec<Synthetic>> {
    (0..config.documents as u64)
        .map(|i| {
            generate_synthetic(&SynthConfig {
                seed: config.seed.wrapping_add(i),
                ..config.clone()
            })
        })
        .collect()
}

/// Predicates usable in generated queries; unary ones cannot link twice.
fn query_predicates() -> Vec<Predicate> {
    Predicate::ALL.into_iter().filter(|p| p.arity() >= 2).collect()
}

fn positions_with(pred: Predicate, d: ArgDomain) -> Vec<usize> {
    (0..pred.arity()).filter(|&i| link_domain(pred.arg_domains()[i]) == d).collect()
}

/// Values found at `pos` of `pred`, or of the relation an IOB predicate
/// extends, so a query constant always matches some fact.
fn occurring(base: &OntologyBase, pred: Predicate, pos: usize) -> Vec<String> {
    let backing = match pred {
        Predicate::AreSubClasses => Predicate::SubClassOf,
        Predicate::AreImpOntologies => Predicate::ImpOntology,
        Predicate::AreClasses => Predicate::IsClass,
        Predicate::AreIndividuals => Predicate::IsIndividual,
        Predicate::AreStatements => Predicate::IsStatement,
        p => p,
    };
    base.distinct_values(backing, pos).into_iter().map(|c| base.name(c).to_owned()).collect()
}

/// A chain links consecutive subgoals by one fresh variable each; a star
/// puts one variable in every subgoal. Each query mixes EOB and IOB
/// subgoals and carries one constant, drawn from values that occur in its
/// argument, in a non-linking position.
fn random_query(rng: &mut ChaCha8Rng, base: &OntologyBase, shape: QueryShape, n: usize) -> SyntheticQuery {
    let preds = query_predicates();
    loop {
        // (predicate, slots) with None for free, Some(var) for links
        let mut atoms: Vec<(Predicate, Vec<Option<String>>)> = Vec::new();
        let mut links = Vec::new();
        let ok = match shape {
            QueryShape::Chain => {
                let mut p = *preds.choose(rng).expect("predicates");
                let mut slots = vec![None; p.arity()];
                let mut used_in: Option<usize> = None;
                let mut ok = true;
                for j in 0..n {
                    if j + 1 == n {
                        atoms.push((p, slots));
                        break;
                    }
                    let out: Vec<usize> = (0..p.arity()).filter(|&i| Some(i) != used_in).collect();
                    let i = *out.choose(rng).expect("arity >= 2");
                    let d = link_domain(p.arg_domains()[i]);
                    let next: Vec<(Predicate, usize)> = preds
                        .iter()
                        .flat_map(|&q| positions_with(q, d).into_iter().map(move |k| (q, k)))
                        .collect();
                    let Some(&(q, k)) = next.choose(rng) else {
                        ok = false;
                        break;
                    };
                    let var = format!("L{}", j + 1);
                    slots[i] = Some(var.clone());
                    links.push(var.clone());
                    atoms.push((p, slots));
                    p = q;
                    slots = vec![None; q.arity()];
                    slots[k] = Some(var);
                    used_in = Some(k);
                }
                ok
            }
            QueryShape::Star => {
                let d = [ArgDomain::Class, ArgDomain::Ontology, ArgDomain::Individual, ArgDomain::Property]
                    .choose(rng)
                    .copied()
                    .expect("domains");
                let choices: Vec<(Predicate, usize)> = preds
                    .iter()
                    .flat_map(|&q| positions_with(q, d).into_iter().map(move |k| (q, k)))
                    .collect();
                for _ in 0..n {
                    let &(q, k) = choices.choose(rng).expect("every domain has a predicate");
                    let mut slots = vec![None; q.arity()];
                    slots[k] = Some("X".to_owned());
                    atoms.push((q, slots));
                }
                links.push("X".to_owned());
                true
            }
        };
        if !ok {
            continue;
        }
        let has_eob = atoms.iter().any(|(p, _)| p.is_eob());
        let has_iob = atoms.iter().any(|(p, _)| !p.is_eob());
        let distinct: BTreeSet<&(Predicate, Vec<Option<String>>)> = atoms.iter().collect();
        if !has_eob || !has_iob || distinct.len() != atoms.len() {
            continue;
        }
        let open: Vec<(usize, usize)> = atoms
            .iter()
            .enumerate()
            .flat_map(|(j, (_, s))| s.iter().enumerate().filter(|(_, v)| v.is_none()).map(move |(i, _)| (j, i)))
            .filter(|&(j, i)| !occurring(base, atoms[j].0, i).is_empty())
            .collect();
        let constant = open.choose(rng).copied().and_then(|(j, i)| {
            let pool = occurring(base, atoms[j].0, i);
            pool.choose(rng).map(|c| (j, i, c.clone()))
        });
        let mut fresh = 0;
        let body: Vec<Atom> = atoms
            .iter()
            .enumerate()
            .map(|(j, (p, slots))| {
                let args = slots
                    .iter()
                    .enumerate()
                    .map(|(i, s)| match (s, &constant) {
                        (Some(v), _) => Term::var(v.clone()),
                        (None, Some((cj, ci, c))) if (*cj, *ci) == (j, i) => Term::constant(c.clone()),
                        (None, _) => {
                            fresh += 1;
                            Term::var(format!("V{fresh}"))
                        }
                    })
                    .collect();
                Atom::new(p.name(), args)
            })
            .collect();
        let head = Atom::new("q", links.iter().map(|v| Term::var(v.clone())).collect());
        let query = Query::new(head, body).expect("generated queries are safe");
        return SyntheticQuery { shape, query };
    }
}
