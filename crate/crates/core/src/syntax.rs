//! Propositional defeasible theories: literals, labelled rules, the
//! superiority relation, and the addition operator used to extend a theory
//! with label-disjoint material.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Character that marks names produced by theory transformations.
pub const RESERVED_CHAR: char = '$';

/// A propositional symbol.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        debug_assert!(!name.is_empty(), "atom names are non-empty");
        debug_assert!(!name.contains(char::is_whitespace), "atom names contain no whitespace");
        Atom(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// True for names in the transformation namespace.
    pub fn is_reserved(&self) -> bool {
        self.0.contains(RESERVED_CHAR)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An atom or its negation. Negative literals order before positive ones
/// over the same atom.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    atom: Atom,
    positive: bool,
}

impl Literal {
    pub fn new(atom: Atom, positive: bool) -> Self {
        Literal { atom, positive }
    }

    pub fn pos(name: impl AsRef<str>) -> Self {
        Literal::new(Atom::new(name), true)
    }

    pub fn neg(name: impl AsRef<str>) -> Self {
        Literal::new(Atom::new(name), false)
    }

    pub fn atom(&self) -> &Atom {
        &self.atom
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    /// `~q`: same atom, opposite polarity.
    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Free-function form of [`Literal::complement`].
pub fn complement(q: &Literal) -> Literal {
    q.complement()
}

/// A rule name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        debug_assert!(!name.is_empty(), "labels are non-empty");
        Label(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        self.0.contains(RESERVED_CHAR)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArrowKind {
    /// `->`
    Strict,
    /// `=>`
    Defeasible,
    /// `~>`: may only block conclusions, never supports them.
    Defeater,
}

impl ArrowKind {
    pub fn token(self) -> &'static str {
        match self {
            ArrowKind::Strict => "->",
            ArrowKind::Defeasible => "=>",
            ArrowKind::Defeater => "~>",
        }
    }

    /// Strict or defeasible, i.e. able to support its head.
    pub fn is_supportive(self) -> bool {
        !matches!(self, ArrowKind::Defeater)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub label: Label,
    pub body: BTreeSet<Literal>,
    pub arrow: ArrowKind,
    pub head: Literal,
}

impl Rule {
    pub fn new(
        label: Label,
        body: impl IntoIterator<Item = Literal>,
        arrow: ArrowKind,
        head: Literal,
    ) -> Self {
        Rule {
            label,
            body: body.into_iter().collect(),
            arrow,
            head,
        }
    }

    pub fn strict(label: &str, body: &[Literal], head: Literal) -> Self {
        Rule::new(Label::new(label), body.iter().cloned(), ArrowKind::Strict, head)
    }

    pub fn defeasible(label: &str, body: &[Literal], head: Literal) -> Self {
        Rule::new(Label::new(label), body.iter().cloned(), ArrowKind::Defeasible, head)
    }

    pub fn defeater(label: &str, body: &[Literal], head: Literal) -> Self {
        Rule::new(Label::new(label), body.iter().cloned(), ArrowKind::Defeater, head)
    }

    /// Rules with complementary heads oppose each other.
    pub fn opposes(&self, other: &Rule) -> bool {
        self.head.atom() == other.head.atom() && self.head.is_positive() != other.head.is_positive()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.label)?;
        let mut first = true;
        for lit in &self.body {
            f.write_str(if first { " " } else { ", " })?;
            write!(f, "{lit}")?;
            first = false;
        }
        write!(f, " {} {}", self.arrow.token(), self.head)
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A defeasible theory: facts, labelled rules, and a superiority relation
/// stored as `(winner, loser)` label pairs.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Theory {
    pub facts: BTreeSet<Literal>,
    pub rules: Vec<Rule>,
    pub superiority: BTreeSet<(Label, Label)>,
}

impl Theory {
    pub fn new() -> Self {
        Theory::default()
    }

    pub fn with_fact(mut self, q: Literal) -> Self {
        self.facts.insert(q);
        self
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rules.push(rule);
        self
    }

    pub fn with_superiority(mut self, winner: &str, loser: &str) -> Self {
        self.superiority.insert((Label::new(winner), Label::new(loser)));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty() && self.rules.is_empty() && self.superiority.is_empty()
    }

    pub fn rule(&self, label: &Label) -> Option<&Rule> {
        self.rules.iter().find(|r| &r.label == label)
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        self.rules.iter().map(|r| r.label.clone()).collect()
    }

    /// Every literal occurring in a fact, a body, or a head, closed under
    /// complement.
    pub fn literals(&self) -> BTreeSet<Literal> {
        let mut out = BTreeSet::new();
        let occurring = self
            .facts
            .iter()
            .chain(self.rules.iter().flat_map(|r| r.body.iter().chain(std::iter::once(&r.head))));
        for q in occurring {
            if !out.contains(q) {
                out.insert(q.complement());
                out.insert(q.clone());
            }
        }
        out
    }

    pub fn is_superior(&self, winner: &Label, loser: &Label) -> bool {
        self.superiority.contains(&(winner.clone(), loser.clone()))
    }
}

impl fmt::Debug for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Theory")
            .field("facts", &self.facts)
            .field("rules", &self.rules)
            .field("superiority", &self.superiority)
            .finish()
    }
}

/// The literal and label languages of a theory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LanguageView {
    pub literals: BTreeSet<Literal>,
    pub labels: BTreeSet<Label>,
}

impl LanguageView {
    pub fn contains_literal(&self, q: &Literal) -> bool {
        self.literals.contains(q)
    }

    pub fn union(&self, other: &LanguageView) -> LanguageView {
        LanguageView {
            literals: self.literals.union(&other.literals).cloned().collect(),
            labels: self.labels.union(&other.labels).cloned().collect(),
        }
    }
}

pub fn language_of(theory: &Theory) -> LanguageView {
    LanguageView {
        literals: theory.literals(),
        labels: theory.labels(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateLabel(Label),
    DanglingSuperiority { winner: Label, loser: Label, missing: Label },
    /// Labels along one directed cycle, starting and ending at the same label.
    SuperiorityCycle(Vec<Label>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateLabel(l) => write!(f, "duplicate rule label `{l}`"),
            Violation::DanglingSuperiority { winner, loser, missing } => {
                write!(f, "superiority `{winner} > {loser}` names unknown rule `{missing}`")
            }
            Violation::SuperiorityCycle(cycle) => {
                let path: Vec<_> = cycle.iter().map(Label::name).collect();
                write!(f, "superiority cycle {}", path.join(" > "))
            }
        }
    }
}

/// Advisory findings that do not make a theory invalid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Note {
    /// Superiority between rules whose heads are not complementary. Inference
    /// never consults such a pair.
    NonOpposingSuperiority { winner: Label, loser: Label },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Validation {
    pub violations: Vec<Violation>,
    pub notes: Vec<Note>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_theory(theory: &Theory) -> Validation {
    let mut out = Validation::default();

    let mut by_label: BTreeMap<&Label, &Rule> = BTreeMap::new();
    let mut reported = BTreeSet::new();
    for rule in &theory.rules {
        if by_label.insert(&rule.label, rule).is_some() && reported.insert(&rule.label) {
            out.violations.push(Violation::DuplicateLabel(rule.label.clone()));
        }
    }

    let mut graph: BTreeMap<&Label, Vec<&Label>> = BTreeMap::new();
    for (winner, loser) in &theory.superiority {
        let missing = [winner, loser].into_iter().find(|l| !by_label.contains_key(l));
        if let Some(missing) = missing {
            out.violations.push(Violation::DanglingSuperiority {
                winner: winner.clone(),
                loser: loser.clone(),
                missing: missing.clone(),
            });
            continue;
        }
        if !by_label[winner].opposes(by_label[loser]) {
            out.notes.push(Note::NonOpposingSuperiority {
                winner: winner.clone(),
                loser: loser.clone(),
            });
        }
        graph.entry(winner).or_default().push(loser);
    }

    if let Some(cycle) = find_cycle(&graph) {
        out.violations.push(Violation::SuperiorityCycle(cycle));
    }
    out
}

/// Iterative three-colour DFS; returns the first cycle found.
fn find_cycle(graph: &BTreeMap<&Label, Vec<&Label>>) -> Option<Vec<Label>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        Grey,
        Black,
    }
    let mut colour: BTreeMap<&Label, Colour> = BTreeMap::new();
    for &start in graph.keys() {
        if colour.contains_key(start) {
            continue;
        }
        let mut path: Vec<&Label> = vec![start];
        let mut cursor: Vec<usize> = vec![0];
        colour.insert(start, Colour::Grey);
        while let Some(&node) = path.last() {
            let idx = cursor.last_mut().unwrap();
            let succs = graph.get(node).map(Vec::as_slice).unwrap_or(&[]);
            if let Some(&next) = succs.get(*idx) {
                *idx += 1;
                match colour.get(next) {
                    Some(Colour::Grey) => {
                        let from = path.iter().position(|&l| l == next).unwrap();
                        let mut cycle: Vec<Label> = path[from..].iter().map(|&l| l.clone()).collect();
                        cycle.push(next.clone());
                        return Some(cycle);
                    }
                    Some(Colour::Black) => {}
                    None => {
                        colour.insert(next, Colour::Grey);
                        path.push(next);
                        cursor.push(0);
                    }
                }
            } else {
                colour.insert(node, Colour::Black);
                path.pop();
                cursor.pop();
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("label `{0}` occurs in both theories")]
    LabelClash(Label),
}

/// `D + A`: union of facts, rules and superiority. The label sets must be
/// disjoint.
pub fn add_theories(base: &Theory, addition: &Theory) -> Result<Theory, SyntaxError> {
    let labels = base.labels();
    if let Some(clash) = addition.rules.iter().find(|r| labels.contains(&r.label)) {
        return Err(SyntaxError::LabelClash(clash.label.clone()));
    }
    let mut out = base.clone();
    out.facts.extend(addition.facts.iter().cloned());
    out.rules.extend(addition.rules.iter().cloned());
    out.superiority.extend(addition.superiority.iter().cloned());
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModularityViolation {
    /// A literal of the addition that the transformed theory uses but the
    /// source theory does not.
    SharedLiteral(Literal),
    SourceLabel(Label),
    TransformedLabel(Label),
}

impl fmt::Display for ModularityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModularityViolation::SharedLiteral(q) => {
                write!(f, "literal `{q}` belongs to the transformed theory but not the source")
            }
            ModularityViolation::SourceLabel(l) => write!(f, "label `{l}` already used by the source theory"),
            ModularityViolation::TransformedLabel(l) => {
                write!(f, "label `{l}` already used by the transformed theory")
            }
        }
    }
}

/// Checks that `addition` can only affect `transformed` through the
/// language of `source`. Returns the first offending literal or label.
pub fn is_modular_addition(
    source: &Theory,
    transformed: &Theory,
    addition: &Theory,
) -> Result<(), ModularityViolation> {
    let src = language_of(source);
    let tgt = language_of(transformed);
    for q in addition.literals() {
        if tgt.literals.contains(&q) && !src.literals.contains(&q) {
            return Err(ModularityViolation::SharedLiteral(q));
        }
    }
    for l in addition.labels() {
        if src.labels.contains(&l) {
            return Err(ModularityViolation::SourceLabel(l));
        }
        if tgt.labels.contains(&l) {
            return Err(ModularityViolation::TransformedLabel(l));
        }
    }
    Ok(())
}
