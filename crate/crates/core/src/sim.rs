//! Random theories, modular additions and differential simulation checks.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{build_index, least_fixpoint, ConclusionSet, Sign, Tag, TagSet};
use crate::syntax::{
    add_theories, is_modular_addition, language_of, ArrowKind, Atom, Label, Literal, ModularityViolation, Rule,
    Theory,
};
use crate::text::print_theory;
use crate::transform::{FreshAtom, Namer, TransformKind};

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub atoms: usize,
    pub rules: usize,
    pub max_body: usize,
    pub strict_ratio: f64,
    pub defeasible_ratio: f64,
    pub defeater_ratio: f64,
    pub superiority_density: f64,
    pub facts: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            atoms: 4,
            rules: 8,
            max_body: 2,
            strict_ratio: 0.2,
            defeasible_ratio: 0.7,
            defeater_ratio: 0.1,
            superiority_density: 0.3,
            facts: 1,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let ratios = [self.strict_ratio, self.defeasible_ratio, self.defeater_ratio];
        if ratios.iter().any(|r| r.is_nan() || *r < 0.0) {
            return Err(SimError::InvalidConfig("rule-kind ratios must be non-negative".into()));
        }
        if (ratios.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(SimError::InvalidConfig("rule-kind ratios must sum to 1".into()));
        }
        if !(0.0..=1.0).contains(&self.superiority_density) {
            return Err(SimError::InvalidConfig("superiority density must lie in [0, 1]".into()));
        }
        if self.atoms == 0 && (self.rules > 0 || self.facts > 0) {
            return Err(SimError::InvalidConfig("rules and facts need at least one atom".into()));
        }
        Ok(())
    }

    fn arrow(&self, rng: &mut impl Rng) -> ArrowKind {
        let x: f64 = rng.gen();
        if x < self.strict_ratio {
            ArrowKind::Strict
        } else if x < self.strict_ratio + self.defeasible_ratio {
            ArrowKind::Defeasible
        } else {
            ArrowKind::Defeater
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AdditionKind {
    Facts,
    Rules,
}

impl AdditionKind {
    pub fn name(self) -> &'static str {
        match self {
            AdditionKind::Facts => "facts",
            AdditionKind::Rules => "rules",
        }
    }
}

impl std::str::FromStr for AdditionKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "facts" => Ok(AdditionKind::Facts),
            "rules" => Ok(AdditionKind::Rules),
            other => Err(SimError::InvalidConfig(format!("unknown addition kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("unsupported claim: {0}")]
    UnsupportedClaim(Claim),
    #[error("the pair does not exhibit a mismatch")]
    NotAMismatch,
    #[error("addition is not modular: {0}")]
    NotModular(ModularityViolation),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// A simulation statement: `transform` maps the source logic into the
/// target logic, for additions of the given kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Claim {
    pub transform: TransformKind,
    pub source: Tag,
    pub target: Tag,
    pub additions: AdditionKind,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}->{} {}",
            self.transform.short_name(),
            self.source,
            self.target,
            self.additions.name()
        )
    }
}

impl Claim {
    pub fn new(transform: TransformKind, source: Tag, target: Tag, additions: AdditionKind) -> Self {
        Claim {
            transform,
            source,
            target,
            additions,
        }
    }

    /// Claims expected to hold for every modular addition.
    pub fn positive() -> Vec<Claim> {
        use AdditionKind::*;
        use Tag::*;
        use TransformKind::*;
        let mut v = vec![
            Claim::new(BlockForProp, PropagatingIndividual, BlockingIndividual, Facts),
            Claim::new(PropForBlock, BlockingIndividual, PropagatingIndividual, Facts),
            Claim::new(PropForBlock, BlockingIndividual, Propagating, Facts),
            Claim::new(PropForBlock, BlockingIndividual, Blocking, Facts),
        ];
        for additions in [Rules, Facts] {
            v.push(Claim::new(TeamForIndividual, BlockingIndividual, Blocking, additions));
            v.push(Claim::new(TeamForIndividual, PropagatingIndividual, Propagating, additions));
            v.push(Claim::new(IndividualForTeam, Blocking, BlockingIndividual, additions));
            v.push(Claim::new(IndividualForTeam, Propagating, PropagatingIndividual, additions));
        }
        v
    }

    /// Claims known to fail for some addition of rules.
    pub fn negative() -> Vec<Claim> {
        use Tag::*;
        vec![
            Claim::new(TransformKind::TeamForIndividualBase, BlockingIndividual, Blocking, AdditionKind::Rules),
            Claim::new(TransformKind::TeamForIndividualBase, PropagatingIndividual, Propagating, AdditionKind::Rules),
        ]
    }

    pub fn is_supported(&self) -> bool {
        Claim::positive().contains(self) || Claim::negative().contains(self)
    }

    pub fn expects_mismatch(&self) -> bool {
        Claim::negative().contains(self)
    }
}

#[derive(Clone, Debug)]
pub struct SimCheckConfig {
    pub claim: Claim,
    pub trials: usize,
    pub seed: u64,
    /// Shapes both `D`-independent parts of generated additions.
    pub gen: GenConfig,
    /// Used as the addition of trial 0 instead of a generated one.
    pub fixture: Option<Theory>,
}

impl SimCheckConfig {
    pub fn new(claim: Claim, trials: usize, seed: u64) -> Self {
        SimCheckConfig {
            claim,
            trials,
            seed,
            gen: GenConfig::default(),
            fixture: None,
        }
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_literal(rng: &mut impl Rng, atoms: &[Atom]) -> Literal {
    Literal::new(atoms.choose(rng).expect("non-empty atom pool").clone(), rng.gen())
}

fn random_body(rng: &mut impl Rng, atoms: &[Atom], max: usize) -> Vec<Literal> {
    let size = rng.gen_range(0..=max.min(atoms.len()));
    sample(rng, atoms.len(), size)
        .into_iter()
        .map(|i| Literal::new(atoms[i].clone(), rng.gen()))
        .collect()
}

/// Deterministic in `(cfg, seed)`. Atoms are `a0..`, labels `g0..`;
/// superiority only runs from lower to higher rule index between opposing
/// rules, which keeps it acyclic.
pub fn gen_theory(cfg: &GenConfig, seed: u64) -> Theory {
    let mut rng = rng_for(seed);
    let mut d = Theory::new();
    if cfg.atoms == 0 {
        return d;
    }
    let atoms: Vec<Atom> = (0..cfg.atoms).map(|i| Atom::new(format!("a{i}"))).collect();
    for i in sample(&mut rng, atoms.len(), cfg.facts.min(atoms.len())) {
        d.facts.insert(Literal::new(atoms[i].clone(), rng.gen()));
    }
    for i in 0..cfg.rules {
        let arrow = cfg.arrow(&mut rng);
        let body = random_body(&mut rng, &atoms, cfg.max_body);
        let head = random_literal(&mut rng, &atoms);
        d.rules.push(Rule::new(Label::new(format!("g{i}")), body, arrow, head));
    }
    for i in 0..d.rules.len() {
        for j in i + 1..d.rules.len() {
            if d.rules[i].opposes(&d.rules[j]) && rng.gen_bool(cfg.superiority_density) {
                d.superiority.insert((d.rules[i].label.clone(), d.rules[j].label.clone()));
            }
        }
    }
    d
}

fn fresh_names(prefix: &str, taken: &BTreeSet<String>, count: usize) -> Vec<String> {
    (0..)
        .map(|i| format!("{prefix}{i}"))
        .filter(|n| !taken.contains(n))
        .take(count)
        .collect()
}

/// A random addition that is modular for `(d, td)`. Half of the additions
/// are competitor-style: body-less rules (or facts) over literals of `d`.
pub fn gen_modular_addition(d: &Theory, td: &Theory, kind: AdditionKind, cfg: &GenConfig, seed: u64) -> Theory {
    let mut rng = rng_for(seed);
    let names: BTreeSet<String> = language_of(d)
        .literals
        .iter()
        .chain(language_of(td).literals.iter())
        .map(|q| q.atom().name().to_string())
        .collect();
    let labels: BTreeSet<String> = d
        .rules
        .iter()
        .chain(td.rules.iter())
        .map(|r| r.label.name().to_string())
        .collect();

    let own: Vec<Atom> = language_of(d)
        .literals
        .iter()
        .filter(|q| q.is_positive())
        .map(|q| q.atom().clone())
        .collect();
    let extra = rng.gen_range(1..=2);
    let mut pool = own.clone();
    pool.extend(fresh_names("x", &names, extra).into_iter().map(Atom::new));
    let heads = if own.is_empty() || !rng.gen_bool(0.5) {
        None
    } else {
        Some(own)
    };

    let mut a = Theory::new();
    match kind {
        AdditionKind::Facts => {
            let from = heads.as_deref().unwrap_or(&pool);
            for _ in 0..rng.gen_range(1..=2) {
                a.facts.insert(random_literal(&mut rng, from));
            }
        }
        AdditionKind::Rules => {
            let count = rng.gen_range(1..=3);
            for label in fresh_names("a", &labels, count) {
                let arrow = cfg.arrow(&mut rng);
                let (body, head) = match &heads {
                    Some(own) => (Vec::new(), random_literal(&mut rng, own)),
                    None => (random_body(&mut rng, &pool, cfg.max_body), random_literal(&mut rng, &pool)),
                };
                a.rules.push(Rule::new(Label::new(label), body, arrow, head));
            }
        }
    }
    debug_assert!(is_modular_addition(d, td, &a).is_ok());
    a
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TagMismatch {
    pub literal: Literal,
    pub sign: Sign,
    pub source_has: bool,
    pub target_has: bool,
}

/// Literal-by-literal comparison of two conclusion sets under different
/// tags, on both signs. Absence on both sides counts as agreement.
pub fn compare_modulo_tags(
    src: &ConclusionSet,
    src_tag: Tag,
    tgt: &ConclusionSet,
    tgt_tag: Tag,
    scope: &BTreeSet<Literal>,
) -> Vec<TagMismatch> {
    let mut out = Vec::new();
    for q in scope {
        for sign in [Sign::Plus, Sign::Minus] {
            let source_has = src.holds(sign, src_tag, q);
            let target_has = tgt.holds(sign, tgt_tag, q);
            if source_has != target_has {
                out.push(TagMismatch {
                    literal: q.clone(),
                    sign,
                    source_has,
                    target_has,
                });
            }
        }
    }
    out
}

/// Compares `D+A` under the claim's source tag with `T(D)+A` under its
/// target tag, over the language of `D+A`.
pub fn compare_pair(d: &Theory, td: &Theory, a: &Theory, claim: &Claim) -> Result<Vec<TagMismatch>, SimError> {
    is_modular_addition(d, td, a).map_err(SimError::NotModular)?;
    let da = add_theories(d, a).map_err(|_| SimError::NotModular(label_clash(d, a)))?;
    let tda = add_theories(td, a).map_err(|_| SimError::NotModular(label_clash(td, a)))?;
    let src = least_fixpoint(&da, TagSet::of(&[claim.source]));
    let tgt = least_fixpoint(&tda, TagSet::of(&[claim.target]));
    let scope = language_of(&da).literals;
    Ok(compare_modulo_tags(&src, claim.source, &tgt, claim.target, &scope))
}

fn label_clash(d: &Theory, a: &Theory) -> ModularityViolation {
    let shared = d
        .labels()
        .intersection(&a.labels())
        .next()
        .cloned()
        .expect("add_theories only fails on a shared label");
    ModularityViolation::SourceLabel(shared)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub trial: usize,
    pub d: Theory,
    pub a: Theory,
    pub literal: Literal,
    pub sign: Sign,
    pub source_has: bool,
    pub target_has: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    AllPass,
    Mismatch,
}

#[derive(Clone, Debug)]
pub struct SimReport {
    pub claim: Claim,
    pub verdict: Verdict,
    pub trials_run: usize,
    pub seed: u64,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Serialize)]
struct MismatchJson {
    trial: usize,
    d_file: String,
    a_file: String,
    literal: String,
    sign: String,
    source: bool,
    target: bool,
}

#[derive(Serialize)]
struct ReportJson {
    claim: String,
    trials: usize,
    verdict: Verdict,
    mismatches: Vec<MismatchJson>,
    seed: u64,
}

impl SimReport {
    /// `d_file`/`a_file` carry the canonical text of each theory.
    pub fn to_json(&self) -> String {
        let doc = ReportJson {
            claim: self.claim.to_string(),
            trials: self.trials_run,
            verdict: self.verdict,
            seed: self.seed,
            mismatches: self
                .mismatches
                .iter()
                .map(|m| MismatchJson {
                    trial: m.trial,
                    d_file: print_theory(&m.d),
                    a_file: print_theory(&m.a),
                    literal: m.literal.to_string(),
                    sign: m.sign.symbol().to_string(),
                    source: m.source_has,
                    target: m.target_has,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("report serialises")
    }
}

/// Runs `cfg.trials` additions against `d`. Trial `i` draws its addition
/// with seed `cfg.seed ^ i`.
pub fn check_simulation(d: &Theory, cfg: &SimCheckConfig) -> Result<SimReport, SimError> {
    if !cfg.claim.is_supported() {
        return Err(SimError::UnsupportedClaim(cfg.claim));
    }
    cfg.gen.validate()?;
    let td = cfg.claim.transform.apply(d);
    let mut mismatches = Vec::new();
    for trial in 0..cfg.trials {
        let a = match (&cfg.fixture, trial) {
            (Some(fixture), 0) => fixture.clone(),
            _ => gen_modular_addition(d, &td, cfg.claim.additions, &cfg.gen, cfg.seed ^ trial as u64),
        };
        for m in compare_pair(d, &td, &a, &cfg.claim)? {
            mismatches.push(Mismatch {
                trial,
                d: d.clone(),
                a: a.clone(),
                literal: m.literal,
                sign: m.sign,
                source_has: m.source_has,
                target_has: m.target_has,
            });
        }
    }
    mismatches.sort_by(|x, y| (x.trial, &x.literal, x.sign).cmp(&(y.trial, &y.literal, y.sign)));
    Ok(SimReport {
        claim: cfg.claim,
        verdict: if mismatches.is_empty() {
            Verdict::AllPass
        } else {
            Verdict::Mismatch
        },
        trials_run: cfg.trials,
        seed: cfg.seed,
        mismatches,
    })
}

/// Greedily drops facts, rules and superiority pairs from `d` and `a` while
/// the first mismatch (same literal and sign) persists.
pub fn shrink_counterexample(d: &Theory, a: &Theory, claim: &Claim) -> Result<(Theory, Theory), SimError> {
    let target = match compare_pair(d, &claim.transform.apply(d), a, claim)?.into_iter().next() {
        Some(m) => (m.literal, m.sign),
        None => return Err(SimError::NotAMismatch),
    };
    let still_fails = |d: &Theory, a: &Theory| {
        compare_pair(d, &claim.transform.apply(d), a, claim)
            .map(|ms| ms.iter().any(|m| (&m.literal, m.sign) == (&target.0, target.1)))
            .unwrap_or(false)
    };
    let (mut d, mut a) = (d.clone(), a.clone());
    'outer: loop {
        let candidates: Vec<(bool, Theory)> =
            smaller(&d).map(|c| (true, c)).chain(smaller(&a).map(|c| (false, c))).collect();
        for (on_d, cand) in candidates {
            let ok = if on_d { still_fails(&cand, &a) } else { still_fails(&d, &cand) };
            if ok {
                if on_d {
                    d = cand;
                } else {
                    a = cand;
                }
                continue 'outer;
            }
        }
        return Ok((d, a));
    }
}

/// Every theory obtained by deleting one fact, rule (with its superiority
/// pairs) or superiority pair.
fn smaller(t: &Theory) -> impl Iterator<Item = Theory> + '_ {
    let facts = t.facts.iter().map(move |q| {
        let mut c = t.clone();
        c.facts.remove(q);
        c
    });
    let rules = (0..t.rules.len()).map(move |i| {
        let mut c = t.clone();
        let r = c.rules.remove(i);
        c.superiority.retain(|(w, l)| *w != r.label && *l != r.label);
        c
    });
    let sups = t.superiority.iter().map(move |p| {
        let mut c = t.clone();
        c.superiority.remove(p);
        c
    });
    sups.chain(rules).chain(facts)
}

/// One containment between two conclusion families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Containment {
    pub sign: Sign,
    pub smaller: Tag,
    pub larger: Tag,
}

impl fmt::Display for Containment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} <= {}{}", self.sign, self.smaller, self.sign, self.larger)
    }
}

/// The adjacent containments of the inclusion chains between the tags.
pub fn inclusion_containments() -> Vec<Containment> {
    use Sign::*;
    use Tag::*;
    let chains: [(Sign, &[Tag]); 4] = [
        (Plus, &[Definite, PropagatingIndividual, Propagating, Blocking, Support, SupportIndividual]),
        (Minus, &[SupportIndividual, Support, Blocking, Propagating, PropagatingIndividual, Definite]),
        (Plus, &[PropagatingIndividual, BlockingIndividual, SupportIndividual]),
        (Minus, &[SupportIndividual, BlockingIndividual, PropagatingIndividual]),
    ];
    chains
        .iter()
        .flat_map(|(sign, chain)| {
            chain.windows(2).map(move |w| Containment {
                sign: *sign,
                smaller: w[0],
                larger: w[1],
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionViolation {
    pub containment: Containment,
    pub witnesses: BTreeSet<Literal>,
}

pub fn check_inclusion_theorem(d: &Theory) -> Vec<InclusionViolation> {
    let lfp = least_fixpoint(d, TagSet::ALL);
    inclusion_containments()
        .into_iter()
        .filter_map(|c| {
            let small = lfp.literals(c.sign, c.smaller);
            let large = lfp.literals(c.sign, c.larger);
            let witnesses: BTreeSet<Literal> = small.difference(&large).cloned().collect();
            (!witnesses.is_empty()).then_some(InclusionViolation { containment: c, witnesses })
        })
        .collect()
}

/// `(tag, q)` pairs with both `+tag q` and `-tag q` derived.
pub fn check_coherence(d: &Theory) -> Vec<(Tag, Literal)> {
    let lfp = least_fixpoint(d, TagSet::ALL);
    Tag::ALL
        .into_iter()
        .flat_map(|t| {
            lfp.literals(Sign::Plus, t)
                .intersection(&lfp.literals(Sign::Minus, t))
                .map(|q| (t, q.clone()))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `step(lfp) = lfp` for all tags.
pub fn check_idempotence(d: &Theory) -> bool {
    let it = build_index(d);
    let lfp = it.fixpoint(TagSet::ALL);
    it.step(&lfp, TagSet::ALL).is_ok_and(|next| next == lfp)
}

/// Equivalence checks on `T(D)+A` for the generated strict and truth
/// markers. Each returned string describes one failed equivalence.
pub mod lemmas {
    use super::*;

    struct Views {
        da: ConclusionSet,
        tda: ConclusionSet,
        n: Namer,
        scope: BTreeSet<Literal>,
        own: BTreeSet<Literal>,
    }

    fn views(d: &Theory, a: &Theory, kind: TransformKind) -> Views {
        let td = kind.apply(d);
        let da = add_theories(d, a).expect("label-disjoint addition");
        let tda = add_theories(&td, a).expect("label-disjoint addition");
        Views {
            scope: language_of(&da).literals,
            own: language_of(d).literals,
            da: least_fixpoint(&da, TagSet::ALL),
            tda: least_fixpoint(&tda, TagSet::ALL),
            n: Namer::for_theory(d),
        }
    }

    fn lit(n: &Namer, a: FreshAtom, positive: bool) -> Literal {
        Literal::new(n.atom(a), positive)
    }

    fn same(out: &mut Vec<String>, what: String, x: bool, y: bool) {
        if x != y {
            out.push(format!("{what}: {x} vs {y}"));
        }
    }

    /// `±D q` agrees between `D+A` and `T(D)+A` on the language of `D+A`.
    pub fn strict_preserved(d: &Theory, a: &Theory, kind: TransformKind) -> Vec<String> {
        let v = views(d, a, kind);
        let mut out = Vec::new();
        for q in &v.scope {
            for sign in [Sign::Plus, Sign::Minus] {
                same(
                    &mut out,
                    format!("{kind}: {sign}D {q}"),
                    v.da.holds(sign, Tag::Definite, q),
                    v.tda.holds(sign, Tag::Definite, q),
                );
            }
        }
        out
    }

    /// For the block-for-prop output: `+D q` iff `+pd* strict(q)` iff
    /// `-pd* ~strict(q)`, and dually for `-D q`.
    pub fn block_strict_mirror(d: &Theory, a: &Theory) -> Vec<String> {
        let v = views(d, a, TransformKind::BlockForProp);
        let pd = Tag::BlockingIndividual;
        let mut out = Vec::new();
        for q in &v.own {
            let strict = lit(&v.n, FreshAtom::Strict(q.clone()), true);
            for (sign, flip) in [(Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus)] {
                let base = v.da.holds(sign, Tag::Definite, q);
                same(&mut out, format!("{sign}D {q} / {sign}pd* {strict}"), base, v.tda.holds(sign, pd, &strict));
                same(
                    &mut out,
                    format!("{sign}D {q} / {flip}pd* {}", strict.complement()),
                    base,
                    v.tda.holds(flip, pd, &strict.complement()),
                );
            }
        }
        out
    }

    /// For outputs with truth markers: `+D q` iff `+d* strict(q)` iff
    /// `+d* true(q)` iff `+s* true(q)` iff `-d* ~true(q)` iff
    /// `-s* ~true(q)`, and dually for `-D q`.
    pub fn truth_mirror(d: &Theory, a: &Theory, kind: TransformKind) -> Vec<String> {
        let v = views(d, a, kind);
        let mut out = Vec::new();
        for q in &v.own {
            let strict = lit(&v.n, FreshAtom::Strict(q.clone()), true);
            let truth = lit(&v.n, FreshAtom::True(q.clone()), true);
            for (sign, flip) in [(Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus)] {
                let base = v.da.holds(sign, Tag::Definite, q);
                let checks = [
                    (sign, Tag::PropagatingIndividual, &strict),
                    (sign, Tag::PropagatingIndividual, &truth),
                    (sign, Tag::SupportIndividual, &truth),
                ];
                for (s, t, l) in checks {
                    same(&mut out, format!("{kind}: {sign}D {q} / {s}{t} {l}"), base, v.tda.holds(s, t, l));
                }
                let nt = truth.complement();
                for t in [Tag::PropagatingIndividual, Tag::SupportIndividual] {
                    same(&mut out, format!("{kind}: {sign}D {q} / {flip}{t} {nt}"), base, v.tda.holds(flip, t, &nt));
                }
            }
        }
        out
    }

    /// For the prop-for-block output: `d*` and `s*` agree on the language of
    /// `D+A` extended with `undefeated(p)`, `~undefeated(p)` and `~true(p)`.
    pub fn prop_tightness(d: &Theory, a: &Theory) -> Vec<String> {
        let v = views(d, a, TransformKind::PropForBlock);
        let mut scope = v.scope.clone();
        for p in &v.own {
            let u = lit(&v.n, FreshAtom::Undefeated(p.clone()), true);
            scope.insert(u.complement());
            scope.insert(u);
            scope.insert(lit(&v.n, FreshAtom::True(p.clone()), false));
        }
        let mut out = Vec::new();
        for q in &scope {
            for sign in [Sign::Plus, Sign::Minus] {
                same(
                    &mut out,
                    format!("{sign}d* {q} / {sign}s* {q}"),
                    v.tda.holds(sign, Tag::PropagatingIndividual, q),
                    v.tda.holds(sign, Tag::SupportIndividual, q),
                );
            }
        }
        out
    }

    /// `+s* g`, `+s* ~g`, `-pd* g`, `-d* g` (and the same for `~g`) in the
    /// individual-for-team output.
    pub fn individual_gadget(d: &Theory, a: &Theory) -> Vec<String> {
        let v = views(d, a, TransformKind::IndividualForTeam);
        let g = lit(&v.n, FreshAtom::G, true);
        let mut out = Vec::new();
        if d.rules.is_empty() && v.own.is_empty() {
            return out;
        }
        for l in [g.clone(), g.complement()] {
            for (sign, tag) in [
                (Sign::Plus, Tag::SupportIndividual),
                (Sign::Minus, Tag::BlockingIndividual),
                (Sign::Minus, Tag::PropagatingIndividual),
            ] {
                same(&mut out, format!("{sign}{tag} {l}"), true, v.tda.holds(sign, tag, &l));
            }
        }
        out
    }
}
