//! A deliberately naive reference evaluator used to cross-check the engine.
//!
//! Literals are plain strings ("p" or "~p"), tags are their printed spellings,
//! and each inference condition is spelled out as a separate quantifier over
//! the rule list. Nothing is indexed or shared with the library evaluator.

use std::collections::{BTreeSet, HashSet};

use defeasible::syntax::{ArrowKind, Theory};

#[derive(Clone, Debug)]
struct OracleRule {
    label: String,
    body: Vec<String>,
    strict: bool,
    supportive: bool,
    head: String,
}

pub struct Oracle {
    facts: HashSet<String>,
    rules: Vec<OracleRule>,
    sup: HashSet<(String, String)>,
    sigma: BTreeSet<String>,
}

pub type Fact = (bool, &'static str, String);

fn neg(q: &str) -> String {
    match q.strip_prefix('~') {
        Some(p) => p.to_string(),
        None => format!("~{q}"),
    }
}

impl Oracle {
    pub fn new(d: &Theory) -> Self {
        let rules: Vec<OracleRule> = d
            .rules
            .iter()
            .map(|r| OracleRule {
                label: r.label.name().to_string(),
                body: r.body.iter().map(|l| l.to_string()).collect(),
                strict: r.arrow == ArrowKind::Strict,
                supportive: r.arrow != ArrowKind::Defeater,
                head: r.head.to_string(),
            })
            .collect();
        let mut sigma = BTreeSet::new();
        let mut add = |q: &str| {
            sigma.insert(q.to_string());
            sigma.insert(neg(q));
        };
        for f in &d.facts {
            add(&f.to_string());
        }
        for r in &rules {
            add(&r.head);
            for b in &r.body {
                add(b);
            }
        }
        Oracle {
            facts: d.facts.iter().map(|l| l.to_string()).collect(),
            rules,
            sup: d
                .superiority
                .iter()
                .map(|(a, b)| (a.name().to_string(), b.name().to_string()))
                .collect(),
            sigma,
        }
    }

    fn beats(&self, a: &OracleRule, b: &OracleRule) -> bool {
        self.sup.contains(&(a.label.clone(), b.label.clone()))
    }

    fn all_for(&self, q: &str) -> impl Iterator<Item = &OracleRule> {
        let q = q.to_string();
        self.rules.iter().filter(move |r| r.head == q)
    }

    fn sd_for(&self, q: &str) -> impl Iterator<Item = &OracleRule> {
        self.all_for(q).filter(|r| r.supportive)
    }

    /// One application of the consequence operator.
    pub fn step(&self, e: &HashSet<Fact>) -> HashSet<Fact> {
        let has = |s: bool, t: &'static str, q: &str| e.contains(&(s, t, q.to_string()));
        let body_all = |r: &OracleRule, s: bool, t: &'static str| r.body.iter().all(|a| has(s, t, a));
        let body_any = |r: &OracleRule, s: bool, t: &'static str| r.body.iter().any(|a| has(s, t, a));
        let mut out = HashSet::new();
        for q in &self.sigma {
            let nq = neg(q);
            let mut put = |s: bool, t: &'static str, ok: bool| {
                if ok {
                    out.insert((s, t, q.clone()));
                }
            };

            let plus_delta = self.facts.contains(q)
                || self.all_for(q).any(|r| r.strict && body_all(r, true, "D"));
            put(true, "D", plus_delta);
            let minus_delta = !self.facts.contains(q)
                && self.all_for(q).filter(|r| r.strict).all(|r| body_any(r, false, "D"));
            put(false, "D", minus_delta);

            // team defeat: pd uses (pd, pd), d uses (d, s)
            for (own, weak) in [("pd", "pd"), ("d", "s")] {
                let plus = has(true, "D", q)
                    || (self.sd_for(q).any(|r| body_all(r, true, own))
                        && has(false, "D", &nq)
                        && self.all_for(&nq).all(|s| {
                            body_any(s, false, weak)
                                || self.sd_for(q).any(|t| body_all(t, true, own) && self.beats(t, s))
                        }));
                put(true, own, plus);
                let minus = has(false, "D", q)
                    && (self.sd_for(q).all(|r| body_any(r, false, own))
                        || has(true, "D", &nq)
                        || self.all_for(&nq).any(|s| {
                            body_all(s, true, weak)
                                && self.sd_for(q).all(|t| body_any(t, false, own) || !self.beats(t, s))
                        }));
                put(false, own, minus);
            }

            // individual defeat: pd* uses (pd*, pd*), d* uses (d*, s*)
            for (own, weak) in [("pd*", "pd*"), ("d*", "s*")] {
                let plus = has(true, "D", q)
                    || self.sd_for(q).any(|r| {
                        body_all(r, true, own)
                            && has(false, "D", &nq)
                            && self.all_for(&nq).all(|s| body_any(s, false, weak) || self.beats(r, s))
                    });
                put(true, own, plus);
                let minus = has(false, "D", q)
                    && self.sd_for(q).all(|r| {
                        body_any(r, false, own)
                            || has(true, "D", &nq)
                            || self.all_for(&nq).any(|s| body_all(s, true, weak) && !self.beats(r, s))
                    });
                put(false, own, minus);
            }

            // support: s attacks through d, s* through d*
            for (own, strong) in [("s", "d"), ("s*", "d*")] {
                let plus = has(true, "D", q)
                    || self.sd_for(q).any(|r| {
                        body_all(r, true, own)
                            && self.all_for(&nq).all(|s| body_any(s, false, strong) || !self.beats(s, r))
                    });
                put(true, own, plus);
                let minus = has(false, "D", q)
                    && self.sd_for(q).all(|r| {
                        body_any(r, false, own)
                            || self.all_for(&nq).any(|s| body_all(s, true, strong) && self.beats(s, r))
                    });
                put(false, own, minus);
            }
        }
        out
    }

    /// Iterates the operator from the empty set until nothing changes.
    pub fn fixpoint(&self) -> HashSet<Fact> {
        let mut e = HashSet::new();
        loop {
            let next = self.step(&e);
            if next == e {
                return e;
            }
            e = next;
        }
    }
}
