//! Random small bases shared by unit tests.

use proptest::prelude::*;

use crate::base::OntologyBase;
use crate::schema::{ArgDomain, Predicate};

pub fn pool(domain: ArgDomain) -> &'static [&'static str] {
    match domain {
        ArgDomain::Ontology => &["o0", "o1", "o2", "o3"],
        ArgDomain::Class => &["c0", "c1", "c2", "c3", "c4", "owl:Thing"],
        ArgDomain::Property => &["p0", "p1", "p2"],
        ArgDomain::Individual => &["i0", "i1", "i2", "i3", "i4"],
        ArgDomain::Value => &["i0", "i1", "i2", "v0", "v1"],
    }
}

prop_compose! {
    pub fn small_base()(raw in prop::collection::vec((0..10usize, 0..8usize, 0..8usize, 0..8usize), 0..60)) -> OntologyBase {
        let mut base = OntologyBase::new();
        for (p, a, b, c) in raw {
            let pred = Predicate::ALL[p];
            let picks = [a, b, c];
            let args: Vec<&str> = pred
                .arg_domains()
                .iter()
                .zip(picks)
                .map(|(d, i)| pool(*d)[i % pool(*d).len()])
                .collect();
            base.insert(pred, &args).unwrap();
        }
        base
    }
}

