//! The one-step consequence operator over tagged conclusions and its least
//! fixpoint.
//!
//! Seven proof tags are supported:
//!
//! | tag | spelling | reading                                         |
//! |-----|----------|-------------------------------------------------|
//! | Δ   | `D`      | definite: facts, strict rules, modus ponens     |
//! | ∂   | `pd`     | ambiguity blocking, team defeat                 |
//! | ∂*  | `pd*`    | ambiguity blocking, individual defeat           |
//! | δ   | `d`      | ambiguity propagating, team defeat              |
//! | σ   | `s`      | support, auxiliary to δ                         |
//! | δ*  | `d*`     | ambiguity propagating, individual defeat        |
//! | σ*  | `s*`     | support, auxiliary to δ*                        |
//!
//! Rounds are computed naively: every candidate conclusion is re-evaluated
//! against the previous round until nothing changes.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{language_of, ArrowKind, LanguageView, Literal, Rule, Theory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tag {
    /// Δ
    Definite,
    /// ∂
    Blocking,
    /// ∂*
    BlockingIndividual,
    /// δ
    Propagating,
    /// σ
    Support,
    /// δ*
    PropagatingIndividual,
    /// σ*
    SupportIndividual,
}

impl Tag {
    pub const ALL: [Tag; 7] = [
        Tag::Definite,
        Tag::Blocking,
        Tag::BlockingIndividual,
        Tag::Propagating,
        Tag::Support,
        Tag::PropagatingIndividual,
        Tag::SupportIndividual,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn spelling(self) -> &'static str {
        match self {
            Tag::Definite => "D",
            Tag::Blocking => "pd",
            Tag::BlockingIndividual => "pd*",
            Tag::Propagating => "d",
            Tag::Support => "s",
            Tag::PropagatingIndividual => "d*",
            Tag::SupportIndividual => "s*",
        }
    }

    /// Tags whose conclusions this tag's inference rules read.
    pub fn dependencies(self) -> &'static [Tag] {
        match self {
            Tag::Definite => &[],
            Tag::Blocking | Tag::BlockingIndividual => &[Tag::Definite],
            Tag::Propagating => &[Tag::Support, Tag::Definite],
            Tag::Support => &[Tag::Propagating, Tag::Definite],
            Tag::PropagatingIndividual => &[Tag::SupportIndividual, Tag::Definite],
            Tag::SupportIndividual => &[Tag::PropagatingIndividual, Tag::Definite],
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.spelling())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown tag `{0}` (expected one of D, pd, pd*, d, d*, s, s*)")]
pub struct UnknownTag(pub String);

impl FromStr for Tag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL
            .into_iter()
            .find(|t| t.spelling() == s)
            .ok_or_else(|| UnknownTag(s.to_string()))
    }
}

/// A small set of tags.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct TagSet(u8);

impl TagSet {
    pub const EMPTY: TagSet = TagSet(0);
    pub const ALL: TagSet = TagSet(0x7f);

    pub fn of(tags: &[Tag]) -> Self {
        tags.iter().copied().collect()
    }

    pub fn contains(self, tag: Tag) -> bool {
        self.0 & (1 << tag.index()) != 0
    }

    pub fn insert(&mut self, tag: Tag) {
        self.0 |= 1 << tag.index();
    }

    pub fn is_subset(self, other: TagSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Tag> {
        Tag::ALL.into_iter().filter(move |t| self.contains(*t))
    }

    /// Smallest superset closed under [`Tag::dependencies`].
    pub fn closure(self) -> TagSet {
        let mut out = self;
        loop {
            let before = out;
            for t in before.iter() {
                for &d in t.dependencies() {
                    out.insert(d);
                }
            }
            if out == before {
                return out;
            }
        }
    }

    /// First tag with a dependency outside the set, with that dependency.
    pub fn missing_dependency(self) -> Option<(Tag, Tag)> {
        self.iter()
            .find_map(|t| t.dependencies().iter().find(|d| !self.contains(**d)).map(|&d| (t, d)))
    }
}

impl FromIterator<Tag> for TagSet {
    fn from_iter<I: IntoIterator<Item = Tag>>(iter: I) -> Self {
        let mut s = TagSet::EMPTY;
        for t in iter {
            s.insert(t);
        }
        s
    }
}

impl fmt::Debug for TagSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(Tag::spelling)).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// `+d q` or `-d q`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedConclusion {
    pub sign: Sign,
    pub tag: Tag,
    pub literal: Literal,
}

impl SignedConclusion {
    pub fn new(sign: Sign, tag: Tag, literal: Literal) -> Self {
        SignedConclusion { sign, tag, literal }
    }

    pub fn plus(tag: Tag, literal: Literal) -> Self {
        SignedConclusion::new(Sign::Plus, tag, literal)
    }

    pub fn minus(tag: Tag, literal: Literal) -> Self {
        SignedConclusion::new(Sign::Minus, tag, literal)
    }
}

impl fmt::Debug for SignedConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} {}", self.sign, self.tag, self.literal)
    }
}

/// Interned literal universe shared by an indexed theory and the
/// conclusion sets computed over it.
#[derive(Debug)]
struct Universe {
    language: LanguageView,
    literals: Vec<Literal>,
    index: HashMap<Literal, u32>,
    complement: Vec<u32>,
}

impl Universe {
    fn new(language: LanguageView) -> Self {
        let literals: Vec<Literal> = language.literals.iter().cloned().collect();
        let index: HashMap<Literal, u32> =
            literals.iter().enumerate().map(|(i, q)| (q.clone(), i as u32)).collect();
        let complement = literals.iter().map(|q| index[&q.complement()]).collect();
        Universe {
            language,
            literals,
            index,
            complement,
        }
    }
}

const SLOTS: usize = 14;

fn slot(sign: Sign, tag: Tag) -> u16 {
    1 << (sign.index() * 7 + tag.index())
}

/// A set of signed conclusions over a fixed literal universe.
#[derive(Clone)]
pub struct ConclusionSet {
    universe: Arc<Universe>,
    tags: TagSet,
    marks: Vec<u16>,
}

impl ConclusionSet {
    fn empty(universe: Arc<Universe>, tags: TagSet) -> Self {
        let marks = vec![0; universe.literals.len()];
        ConclusionSet { universe, tags, marks }
    }

    /// Σ over which the set was computed.
    pub fn universe(&self) -> &LanguageView {
        &self.universe.language
    }

    /// Tag families the set was computed for.
    pub fn tags(&self) -> TagSet {
        self.tags
    }

    pub fn contains(&self, c: &SignedConclusion) -> bool {
        self.universe
            .index
            .get(&c.literal)
            .is_some_and(|&i| self.marks[i as usize] & slot(c.sign, c.tag) != 0)
    }

    /// Membership extended to literals outside the universe: such literals
    /// have no fact and no rule, so every `-` conclusion holds for them and
    /// no `+` conclusion does.
    pub fn holds(&self, sign: Sign, tag: Tag, q: &Literal) -> bool {
        match self.universe.index.get(q) {
            Some(&i) => self.marks[i as usize] & slot(sign, tag) != 0,
            None => sign == Sign::Minus,
        }
    }

    /// Adds `c` if its literal lies in the universe; returns whether it did.
    pub fn insert(&mut self, c: &SignedConclusion) -> bool {
        match self.universe.index.get(&c.literal) {
            Some(&i) => {
                self.tags.insert(c.tag);
                self.marks[i as usize] |= slot(c.sign, c.tag);
                true
            }
            None => false,
        }
    }

    pub fn len(&self) -> usize {
        self.marks.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.iter().all(|&m| m == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = SignedConclusion> + '_ {
        self.marks.iter().enumerate().flat_map(move |(i, &m)| {
            (0..SLOTS).filter(move |b| m & (1 << b) != 0).map(move |b| {
                let sign = if b < 7 { Sign::Plus } else { Sign::Minus };
                SignedConclusion::new(sign, Tag::ALL[b % 7], self.universe.literals[i].clone())
            })
        })
    }

    pub fn to_set(&self) -> BTreeSet<SignedConclusion> {
        self.iter().collect()
    }

    /// Literals `q` with `sign tag q` in the set.
    pub fn literals(&self, sign: Sign, tag: Tag) -> BTreeSet<Literal> {
        let bit = slot(sign, tag);
        self.marks
            .iter()
            .zip(&self.universe.literals)
            .filter(|(m, _)| **m & bit != 0)
            .map(|(_, q)| q.clone())
            .collect()
    }

    pub fn restrict(&self, tags: TagSet) -> ConclusionSet {
        let mut mask = 0u16;
        for t in tags.iter() {
            mask |= slot(Sign::Plus, t) | slot(Sign::Minus, t);
        }
        ConclusionSet {
            universe: self.universe.clone(),
            tags,
            marks: self.marks.iter().map(|m| m & mask).collect(),
        }
    }

    pub fn is_subset(&self, other: &ConclusionSet) -> bool {
        if Arc::ptr_eq(&self.universe, &other.universe) || self.universe.literals == other.universe.literals {
            self.marks.iter().zip(&other.marks).all(|(a, b)| a & !b == 0)
        } else {
            self.iter().all(|c| other.contains(&c))
        }
    }

    fn mark(&self, i: u32) -> u16 {
        self.marks[i as usize]
    }
}

impl PartialEq for ConclusionSet {
    fn eq(&self, other: &Self) -> bool {
        self.universe.literals == other.universe.literals && self.marks == other.marks
    }
}

impl Eq for ConclusionSet {}

impl fmt::Debug for ConclusionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone)]
struct CompiledRule {
    body: Vec<u32>,
}

/// A theory with head indexes and interned literals, ready for inference.
#[derive(Debug, Clone)]
pub struct IndexedTheory {
    theory: Theory,
    universe: Arc<Universe>,
    rules: Vec<CompiledRule>,
    /// R[q]
    by_head: Vec<Vec<u32>>,
    /// R_sd[q]
    by_head_sd: Vec<Vec<u32>>,
    /// R_s[q]
    by_head_strict: Vec<Vec<u32>>,
    facts: Vec<bool>,
    superior: HashSet<(u32, u32)>,
}

pub fn build_index(theory: &Theory) -> IndexedTheory {
    let universe = Arc::new(Universe::new(language_of(theory)));
    let n = universe.literals.len();
    let mut by_head = vec![Vec::new(); n];
    let mut by_head_sd = vec![Vec::new(); n];
    let mut by_head_strict = vec![Vec::new(); n];
    let mut rules = Vec::with_capacity(theory.rules.len());
    let mut label_index = HashMap::new();
    for (i, rule) in theory.rules.iter().enumerate() {
        let i = i as u32;
        let head = universe.index[&rule.head] as usize;
        by_head[head].push(i);
        if rule.arrow.is_supportive() {
            by_head_sd[head].push(i);
        }
        if rule.arrow == ArrowKind::Strict {
            by_head_strict[head].push(i);
        }
        label_index.entry(rule.label.clone()).or_insert(i);
        rules.push(CompiledRule {
            body: rule.body.iter().map(|q| universe.index[q]).collect(),
        });
    }
    let mut facts = vec![false; n];
    for q in &theory.facts {
        facts[universe.index[q] as usize] = true;
    }
    let superior = theory
        .superiority
        .iter()
        .filter_map(|(w, l)| Some((*label_index.get(w)?, *label_index.get(l)?)))
        .collect();
    IndexedTheory {
        theory: theory.clone(),
        universe,
        rules,
        by_head,
        by_head_sd,
        by_head_strict,
        facts,
        superior,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("tag set is not dependency-closed: {tag} needs {missing}")]
    TagSetNotClosed { tag: Tag, missing: Tag },
    #[error("conclusion set was computed over a different literal universe")]
    UniverseMismatch,
}

impl IndexedTheory {
    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn universe(&self) -> &LanguageView {
        &self.universe.language
    }

    fn collect(&self, q: &Literal, table: &[Vec<u32>]) -> Vec<&Rule> {
        match self.universe.index.get(q) {
            Some(&i) => table[i as usize].iter().map(|&r| &self.theory.rules[r as usize]).collect(),
            None => Vec::new(),
        }
    }

    /// R[q]: every rule with head `q`, in theory order.
    pub fn rules_for(&self, q: &Literal) -> Vec<&Rule> {
        self.collect(q, &self.by_head)
    }

    /// R_sd[q]: strict and defeasible rules for `q`.
    pub fn supportive_rules_for(&self, q: &Literal) -> Vec<&Rule> {
        self.collect(q, &self.by_head_sd)
    }

    /// R_s[q]: strict rules for `q`.
    pub fn strict_rules_for(&self, q: &Literal) -> Vec<&Rule> {
        self.collect(q, &self.by_head_strict)
    }

    /// An empty conclusion set over this theory's universe.
    pub fn empty_set(&self, tags: TagSet) -> ConclusionSet {
        ConclusionSet::empty(self.universe.clone(), tags)
    }

    /// One application of the consequence operator, restricted to `tags`.
    pub fn step(&self, e: &ConclusionSet, tags: TagSet) -> Result<ConclusionSet, EngineError> {
        if let Some((tag, missing)) = tags.missing_dependency() {
            return Err(EngineError::TagSetNotClosed { tag, missing });
        }
        if !Arc::ptr_eq(&self.universe, &e.universe) && self.universe.literals != e.universe.literals {
            return Err(EngineError::UniverseMismatch);
        }
        Ok(self.step_unchecked(e, tags))
    }

    fn step_unchecked(&self, e: &ConclusionSet, tags: TagSet) -> ConclusionSet {
        let mut out = self.empty_set(tags);
        let view = Round { it: self, e };
        for q in 0..self.universe.literals.len() as u32 {
            let mut m = 0u16;
            for tag in tags.iter() {
                for sign in [Sign::Plus, Sign::Minus] {
                    if view.derives(sign, tag, q) {
                        m |= slot(sign, tag);
                    }
                }
            }
            out.marks[q as usize] = m;
        }
        out
    }

    /// Iterates from the empty set until the conclusions stabilise.
    pub fn fixpoint(&self, tags: TagSet) -> ConclusionSet {
        let closed = tags.closure();
        let bound = 2 * 7 * self.universe.literals.len() + 1;
        let mut e = self.empty_set(closed);
        let mut rounds = 0;
        loop {
            let next = self.step_unchecked(&e, closed);
            rounds += 1;
            debug_assert!(e.is_subset(&next), "iteration from the empty set is inflationary");
            if next == e {
                break;
            }
            debug_assert!(rounds <= bound, "fixpoint exceeded its round bound");
            e = next;
        }
        e.restrict(tags)
    }
}

/// Evaluation of the inference rules against the previous round `e`.
struct Round<'a> {
    it: &'a IndexedTheory,
    e: &'a ConclusionSet,
}

impl Round<'_> {
    fn has(&self, sign: Sign, tag: Tag, q: u32) -> bool {
        self.e.mark(q) & slot(sign, tag) != 0
    }

    fn body(&self, r: u32) -> &[u32] {
        &self.it.rules[r as usize].body
    }

    /// ∀a ∈ A(r): +tag a
    fn body_proved(&self, tag: Tag, r: u32) -> bool {
        self.body(r).iter().all(|&a| self.has(Sign::Plus, tag, a))
    }

    /// ∃a ∈ A(r): -tag a
    fn body_refuted(&self, tag: Tag, r: u32) -> bool {
        self.body(r).iter().any(|&a| self.has(Sign::Minus, tag, a))
    }

    fn sup(&self, winner: u32, loser: u32) -> bool {
        self.it.superior.contains(&(winner, loser))
    }

    fn derives(&self, sign: Sign, tag: Tag, q: u32) -> bool {
        use Tag::*;
        match (tag, sign) {
            (Definite, Sign::Plus) => self.plus_definite(q),
            (Definite, Sign::Minus) => self.minus_definite(q),
            (Blocking, Sign::Plus) => self.plus_team(q, Blocking, Blocking),
            (Blocking, Sign::Minus) => self.minus_team(q, Blocking, Blocking),
            (Propagating, Sign::Plus) => self.plus_team(q, Propagating, Support),
            (Propagating, Sign::Minus) => self.minus_team(q, Propagating, Support),
            (BlockingIndividual, Sign::Plus) => self.plus_individual(q, BlockingIndividual, BlockingIndividual),
            (BlockingIndividual, Sign::Minus) => self.minus_individual(q, BlockingIndividual, BlockingIndividual),
            (PropagatingIndividual, Sign::Plus) => {
                self.plus_individual(q, PropagatingIndividual, SupportIndividual)
            }
            (PropagatingIndividual, Sign::Minus) => {
                self.minus_individual(q, PropagatingIndividual, SupportIndividual)
            }
            (Support, Sign::Plus) => self.plus_support(q, Support, Propagating),
            (Support, Sign::Minus) => self.minus_support(q, Support, Propagating),
            (SupportIndividual, Sign::Plus) => self.plus_support(q, SupportIndividual, PropagatingIndividual),
            (SupportIndividual, Sign::Minus) => {
                self.minus_support(q, SupportIndividual, PropagatingIndividual)
            }
        }
    }

    fn plus_definite(&self, q: u32) -> bool {
        self.it.facts[q as usize]
            || self.it.by_head_strict[q as usize]
                .iter()
                .any(|&r| self.body_proved(Tag::Definite, r))
    }

    fn minus_definite(&self, q: u32) -> bool {
        !self.it.facts[q as usize]
            && self.it.by_head_strict[q as usize]
                .iter()
                .all(|&r| self.body_refuted(Tag::Definite, r))
    }

    /// +∂ and +δ. `own` proves bodies of rules for q; attackers fail when
    /// some body literal is `-attack`.
    fn plus_team(&self, q: u32, own: Tag, attack: Tag) -> bool {
        let nq = self.it.universe.complement[q as usize];
        let sd = &self.it.by_head_sd[q as usize];
        if self.has(Sign::Plus, Tag::Definite, q) {
            return true;
        }
        sd.iter().any(|&r| self.body_proved(own, r))
            && self.has(Sign::Minus, Tag::Definite, nq)
            && self.it.by_head[nq as usize].iter().all(|&s| {
                self.body_refuted(attack, s)
                    || sd.iter().any(|&t| self.body_proved(own, t) && self.sup(t, s))
            })
    }

    /// -∂ and -δ.
    fn minus_team(&self, q: u32, own: Tag, attack: Tag) -> bool {
        let nq = self.it.universe.complement[q as usize];
        let sd = &self.it.by_head_sd[q as usize];
        self.has(Sign::Minus, Tag::Definite, q)
            && (sd.iter().all(|&r| self.body_refuted(own, r))
                || self.has(Sign::Plus, Tag::Definite, nq)
                || self.it.by_head[nq as usize].iter().any(|&s| {
                    self.body_proved(attack, s)
                        && sd.iter().all(|&t| self.body_refuted(own, t) || !self.sup(t, s))
                }))
    }

    /// +∂* and +δ*: a single rule must beat every applicable attacker.
    fn plus_individual(&self, q: u32, own: Tag, attack: Tag) -> bool {
        let nq = self.it.universe.complement[q as usize];
        if self.has(Sign::Plus, Tag::Definite, q) {
            return true;
        }
        self.it.by_head_sd[q as usize].iter().any(|&r| {
            self.body_proved(own, r)
                && self.has(Sign::Minus, Tag::Definite, nq)
                && self.it.by_head[nq as usize]
                    .iter()
                    .all(|&s| self.body_refuted(attack, s) || self.sup(r, s))
        })
    }

    /// -∂* and -δ*.
    fn minus_individual(&self, q: u32, own: Tag, attack: Tag) -> bool {
        let nq = self.it.universe.complement[q as usize];
        self.has(Sign::Minus, Tag::Definite, q)
            && self.it.by_head_sd[q as usize].iter().all(|&r| {
                self.body_refuted(own, r)
                    || self.has(Sign::Plus, Tag::Definite, nq)
                    || self.it.by_head[nq as usize]
                        .iter()
                        .any(|&s| self.body_proved(attack, s) && !self.sup(r, s))
            })
    }

    /// +σ and +σ*: a rule for q is supported unless an attacker that is
    /// superior to it has a body not refuted under `attack`.
    fn plus_support(&self, q: u32, own: Tag, attack: Tag) -> bool {
        let nq = self.it.universe.complement[q as usize];
        if self.has(Sign::Plus, Tag::Definite, q) {
            return true;
        }
        self.it.by_head_sd[q as usize].iter().any(|&r| {
            self.body_proved(own, r)
                && self.it.by_head[nq as usize]
                    .iter()
                    .all(|&s| self.body_refuted(attack, s) || !self.sup(s, r))
        })
    }

    /// -σ and -σ*.
    fn minus_support(&self, q: u32, own: Tag, attack: Tag) -> bool {
        let nq = self.it.universe.complement[q as usize];
        self.has(Sign::Minus, Tag::Definite, q)
            && self.it.by_head_sd[q as usize].iter().all(|&r| {
                self.body_refuted(own, r)
                    || self.it.by_head[nq as usize]
                        .iter()
                        .any(|&s| self.body_proved(attack, s) && self.sup(s, r))
            })
    }
}

/// `step` over an already indexed theory. Fails when `tags` is not
/// dependency-closed.
pub fn step(it: &IndexedTheory, e: &ConclusionSet, tags: TagSet) -> Result<ConclusionSet, EngineError> {
    it.step(e, tags)
}

/// All conclusions of `theory` for `tags` (dependencies are added
/// internally and dropped from the result).
pub fn least_fixpoint(theory: &Theory, tags: TagSet) -> ConclusionSet {
    build_index(theory).fixpoint(tags)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    Proved,
    Refuted,
    Undetermined,
}

/// Status of `tag q` in the least fixpoint. The sign of `c` is ignored: a
/// query always asks about `+tag q`.
pub fn query(theory: &Theory, c: &SignedConclusion) -> Answer {
    let lfp = least_fixpoint(theory, TagSet::of(&[c.tag]));
    if lfp.holds(Sign::Plus, c.tag, &c.literal) {
        Answer::Proved
    } else if lfp.holds(Sign::Minus, c.tag, &c.literal) {
        Answer::Refuted
    } else {
        Answer::Undetermined
    }
}
