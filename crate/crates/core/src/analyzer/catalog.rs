//! Line-oriented catalog file.
//!
//! ```text
//! # dobs-catalog v1
//! # config d=0.2 p=0.7 k=7 m_cap=2000 seed=1 clt=false exact=false created=1700000000
//! # domains ontology=3 class=4 property=4 individual=1 value=0
//! isClass | EOB | ff | 4 | 4 | 4,1 | - | - | - | -
//! areClasses | IOB | bf | 3 | 11 | 4,3 | 4,3 | 4/7/77/11 | - | -
//! areClasses | IOB | ff | 12 | 44 | 4,3 | 4,3 | 4/7/308/44 | 4/7/21/3 | p0
//! ```
//!
//! Columns: predicate, kind, binding pattern, cardinality, cost, distinct
//! values per argument (`nKeys` for EOB rows), domain sizes, cost run, and
//! cardinality run (`n/m/z/b`, free pattern only), then flags (`low` and
//! `lowcard` for low-confidence cost and cardinality runs, `pN` for the
//! partition argument). EOB predicates have one all-free row whose cost
//! equals its cardinality. Floats use Rust's shortest round-trip formatting.

use std::fmt::Write as _;

use super::{
    BindingPattern, DomainSizes, EobStats, IobStats, PatternStats, PredicateStats, SamplingConfig,
    SamplingRun, StatisticsCatalog,
};
use crate::error::{Error, Result};
use crate::schema::{Predicate, PredicateKind};

pub const CATALOG_HEADER: &str = "# dobs-catalog v1";

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn run_text(r: &SamplingRun) -> String {
    format!("{}/{}/{}/{}", r.n, r.m, r.z, r.b_of_n)
}

fn bad(line: usize, message: impl Into<String>) -> Error {
    Error::CatalogFormat {
        line,
        message: message.into(),
    }
}

fn num<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| bad(line, format!("bad {what} {:?}", s.trim())))
}

fn parse_list<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<Vec<T>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| num(x, line, what)).collect()
}

fn parse_run(s: &str, line: usize, low: bool) -> Result<SamplingRun> {
    let parts: Vec<&str> = s.trim().split('/').collect();
    if parts.len() != 4 {
        return Err(bad(line, format!("bad sampling run {:?}", s.trim())));
    }
    Ok(SamplingRun {
        n: num(parts[0], line, "n")?,
        m: num(parts[1], line, "m")?,
        z: num(parts[2], line, "z")?,
        b_of_n: num(parts[3], line, "b(n)")?,
        low_confidence: low,
    })
}

/// `key=value` pairs after a `# word` prefix.
fn pairs(rest: &str, line: usize) -> Result<Vec<(&str, &str)>> {
    rest.split_whitespace()
        .map(|kv| kv.split_once('=').ok_or_else(|| bad(line, format!("expected key=value, got {kv:?}"))))
        .collect()
}

impl StatisticsCatalog {
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let d = &self.domains;
        let mut out = String::new();
        let _ = writeln!(out, "{CATALOG_HEADER}");
        let _ = writeln!(
            out,
            "# config d={} p={} k={} m_cap={} seed={} clt={} exact={} created={}",
            c.d, c.p, c.k, c.m_cap, c.seed, c.clt, self.exact, self.created
        );
        let _ = writeln!(
            out,
            "# domains ontology={} class={} property={} individual={} value={}",
            d.ontology, d.class, d.property, d.individual, d.value
        );
        for p in Predicate::ALL {
            match self.get(p) {
                PredicateStats::Eob(s) => {
                    let _ = writeln!(
                        out,
                        "{} | EOB | {} | {} | {} | {} | - | - | - | -",
                        p,
                        BindingPattern::free(p.arity()),
                        s.cardinality,
                        s.cardinality,
                        list(&s.n_keys)
                    );
                }
                PredicateStats::Iob(s) => {
                    for ps in &s.patterns {
                        let free = ps.pattern.is_all_free();
                        let mut flags = Vec::new();
                        if ps.cost_run.low_confidence {
                            flags.push("low".to_owned());
                        }
                        if free {
                            if s.card_run.low_confidence {
                                flags.push("lowcard".to_owned());
                            }
                            flags.push(format!("p{}", s.partition_arg));
                        }
                        let _ = writeln!(
                            out,
                            "{} | IOB | {} | {} | {} | {} | {} | {} | {} | {}",
                            p,
                            ps.pattern,
                            ps.cardinality,
                            ps.cost,
                            list(&s.distinct),
                            list(&s.domain_sizes),
                            run_text(&ps.cost_run),
                            if free { run_text(&s.card_run) } else { "-".into() },
                            if flags.is_empty() { "-".into() } else { flags.join(",") },
                        );
                    }
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, l)) if l.trim() == CATALOG_HEADER => {}
            _ => return Err(bad(1, format!("expected header {CATALOG_HEADER:?}"))),
        }
        let mut config = SamplingConfig::default();
        let mut exact = false;
        let mut created = 0;
        let mut domains = DomainSizes::default();
        let mut eob: Vec<Option<EobStats>> = vec![None; Predicate::ALL.len()];
        // per IOB predicate: pattern rows plus the free row's extras
        type Row = (PatternStats, Vec<f64>, Vec<u64>, Option<(SamplingRun, usize)>);
        let mut iob: Vec<Vec<Row>> = vec![Vec::new(); Predicate::ALL.len()];

        for (no, raw) in lines {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# config") {
                for (k, v) in pairs(rest, no)? {
                    match k {
                        "d" => config.d = num(v, no, k)?,
                        "p" => config.p = num(v, no, k)?,
                        "k" => config.k = num(v, no, k)?,
                        "m_cap" => config.m_cap = num(v, no, k)?,
                        "seed" => config.seed = num(v, no, k)?,
                        "clt" => config.clt = num(v, no, k)?,
                        "exact" => exact = num(v, no, k)?,
                        "created" => created = num(v, no, k)?,
                        _ => return Err(bad(no, format!("unknown config key {k}"))),
                    }
                }
                continue;
            }
            if let Some(rest) = line.strip_prefix("# domains") {
                for (k, v) in pairs(rest, no)? {
                    let n = num(v, no, k)?;
                    match k {
                        "ontology" => domains.ontology = n,
                        "class" => domains.class = n,
                        "property" => domains.property = n,
                        "individual" => domains.individual = n,
                        "value" => domains.value = n,
                        _ => return Err(bad(no, format!("unknown domain {k}"))),
                    }
                }
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('|').map(str::trim).collect();
            if cols.len() != 10 {
                return Err(bad(no, format!("expected 10 columns, found {}", cols.len())));
            }
            let pred = Predicate::from_name(cols[0]).ok_or_else(|| bad(no, format!("unknown predicate {}", cols[0])))?;
            let kind = match cols[1] {
                "EOB" => PredicateKind::Eob,
                "IOB" => PredicateKind::Iob,
                other => return Err(bad(no, format!("unknown kind {other}"))),
            };
            if kind != pred.kind() {
                return Err(bad(no, format!("{pred} is not {}", cols[1])));
            }
            let pattern: BindingPattern = cols[2].parse().map_err(|e: String| bad(no, e))?;
            if pattern.len() != pred.arity() {
                return Err(bad(no, format!("pattern {pattern} does not fit {pred}")));
            }
            let flags: Vec<&str> = if cols[9] == "-" { Vec::new() } else { cols[9].split(',').collect() };
            let low = flags.contains(&"low");
            if kind == PredicateKind::Eob {
                let n_keys: Vec<u64> = parse_list(cols[5], no, "nKeys")?;
                if n_keys.len() != pred.arity() {
                    return Err(bad(no, "nKeys length differs from arity"));
                }
                if eob[pred.index()].is_some() {
                    return Err(bad(no, format!("duplicate row for {pred}")));
                }
                eob[pred.index()] = Some(EobStats {
                    cardinality: num(cols[3], no, "cardinality")?,
                    n_keys,
                });
                continue;
            }
            let free = pattern.is_all_free();
            let extra = if free {
                let part = flags
                    .iter()
                    .find_map(|f| f.strip_prefix('p'))
                    .ok_or_else(|| bad(no, "free pattern row lacks partition flag"))?;
                let low_card = flags.contains(&"lowcard");
                Some((parse_run(cols[8], no, low_card)?, num(part, no, "partition")?))
            } else {
                None
            };
            let stats = PatternStats {
                cost: num(cols[4], no, "cost")?,
                cardinality: num(cols[3], no, "cardinality")?,
                cost_run: parse_run(cols[7], no, low)?,
                pattern,
            };
            iob[pred.index()].push((
                stats,
                parse_list(cols[5], no, "distinct")?,
                parse_list(cols[6], no, "domain size")?,
                extra,
            ));
        }

        let mut stats = Vec::new();
        for p in Predicate::ALL {
            if p.is_eob() {
                let s = eob[p.index()].take().ok_or_else(|| Error::CatalogMiss(p.name().to_owned()))?;
                stats.push(PredicateStats::Eob(s));
                continue;
            }
            let mut rows = std::mem::take(&mut iob[p.index()]);
            rows.sort_by_key(|r| r.0.pattern.mask());
            let complete = rows.len() == 1 << p.arity()
                && rows.iter().enumerate().all(|(i, r)| r.0.pattern.mask() as usize == i);
            if !complete {
                return Err(Error::CatalogMiss(format!("{p} (needs all {} patterns)", 1 << p.arity())));
            }
            let (_, distinct, domain_sizes, extra) = rows[0].clone();
            let (card_run, partition_arg) = extra.expect("free row has extras");
            stats.push(PredicateStats::Iob(IobStats {
                predicate: p,
                partition_arg,
                domain_sizes,
                distinct,
                card_run,
                patterns: rows.into_iter().map(|r| r.0).collect(),
            }));
        }
        Ok(StatisticsCatalog {
            config,
            exact,
            created,
            domains,
            stats,
        })
    }
}
