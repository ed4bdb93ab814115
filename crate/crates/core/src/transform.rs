//! Source-to-source compilers between the defeasible logics.
//!
//! Every transformation keeps the input's facts and introduces new material
//! only under the reserved `$` namespace, so any addition written in plain
//! identifiers stays disjoint from what a transformation generated.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{language_of, ArrowKind, Atom, Label, Literal, Rule, Theory, RESERVED_CHAR};

/// Families of generated propositions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FreshAtom {
    Strict(Literal),
    True(Literal),
    Supp(Literal),
    SuppBody(Label),
    /// `o(r)`: rule `r` is overruled.
    ORule(Label),
    Comp(Label),
    Undefeated(Literal),
    H(Label),
    One(Literal),
    /// `d(ri, rj)`
    D1(Label, Label),
    /// `d(ri)`
    D2(Label),
    Fail(Label),
    DSupp(Label, Label),
    /// `o(q)`: some rule for `q` is applicable.
    OLit(Literal),
    G,
}

/// Families of generated rule labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FreshLabel {
    Str(Literal),
    NStr(Literal),
    T(Literal),
    NT(Literal),
    /// `q => supp(q)`
    SuppLit(Literal),
    /// `supp(b1..bn) => supp_body(r)`
    SuppBody(Label),
    /// `supp_body(r), ~o(r) => supp(q)`
    SuppHead(Label),
    NS(Label, Label),
    PS(Label),
    Inf(Label),
    ND(Label, Label),
    PD(Label),
    /// `undefeated(q) => q`
    Undefeated(Literal),
    P(Label),
    S(Label),
    N(Label, Label),
    OQ(Literal),
    /// `B_r => one(q)`
    OneR(Label),
    /// `B_r => o(q)`
    OR(Label),
    R1(Label, Label),
    R2(Label, Label),
    R3(Label, Label),
    /// `d(ri, rj) => d(ri)`
    DD(Label, Label),
    /// `fail(ri) => d(ri)`
    FD(Label),
    NF(Label),
    F(Label),
    SQ(Literal),
    SuppQ(Literal, Label),
    A(Label, Label),
    B(Label, Label),
    G1,
    G2,
}

fn render(prefix: &str, family: &str, keys: &[String]) -> String {
    if keys.is_empty() {
        format!("{prefix}{family}")
    } else {
        format!("{prefix}{family}({})", keys.join(","))
    }
}

fn lit(q: &Literal) -> String {
    q.to_string()
}

fn lab(l: &Label) -> String {
    l.name().to_string()
}

impl FreshAtom {
    fn parts(&self) -> (&'static str, Vec<String>) {
        use FreshAtom::*;
        match self {
            Strict(q) => ("strict", vec![lit(q)]),
            True(q) => ("true", vec![lit(q)]),
            Supp(q) => ("supp", vec![lit(q)]),
            SuppBody(r) => ("supp_body", vec![lab(r)]),
            ORule(r) => ("o", vec![lab(r)]),
            Comp(r) => ("comp", vec![lab(r)]),
            Undefeated(q) => ("undefeated", vec![lit(q)]),
            H(r) => ("h", vec![lab(r)]),
            One(q) => ("one", vec![lit(q)]),
            D1(i, j) => ("d", vec![lab(i), lab(j)]),
            D2(i) => ("d", vec![lab(i)]),
            Fail(r) => ("fail", vec![lab(r)]),
            DSupp(s, r) => ("d_supp", vec![lab(s), lab(r)]),
            OLit(q) => ("o_lit", vec![lit(q)]),
            G => ("g", vec![]),
        }
    }
}

impl FreshLabel {
    fn parts(&self) -> (&'static str, Vec<String>) {
        use FreshLabel::*;
        match self {
            Str(q) => ("str", vec![lit(q)]),
            NStr(q) => ("nstr", vec![lit(q)]),
            T(q) => ("t", vec![lit(q)]),
            NT(q) => ("nt", vec![lit(q)]),
            SuppLit(q) => ("supp", vec![lit(q)]),
            SuppBody(r) => ("sb", vec![lab(r)]),
            SuppHead(r) => ("sh", vec![lab(r)]),
            NS(r, s) => ("n_s", vec![lab(r), lab(s)]),
            PS(r) => ("p_s", vec![lab(r)]),
            Inf(r) => ("inf", vec![lab(r)]),
            ND(r, s) => ("n_d", vec![lab(r), lab(s)]),
            PD(r) => ("p_d", vec![lab(r)]),
            Undefeated(q) => ("u", vec![lit(q)]),
            P(r) => ("p", vec![lab(r)]),
            S(r) => ("s", vec![lab(r)]),
            N(r, s) => ("n", vec![lab(r), lab(s)]),
            OQ(q) => ("o", vec![lit(q)]),
            OneR(r) => ("one", vec![lab(r)]),
            OR(r) => ("or", vec![lab(r)]),
            R1(i, j) => ("R1", vec![lab(i), lab(j)]),
            R2(i, j) => ("R2", vec![lab(i), lab(j)]),
            R3(i, j) => ("R3", vec![lab(i), lab(j)]),
            DD(i, j) => ("dd", vec![lab(i), lab(j)]),
            FD(i) => ("fd", vec![lab(i)]),
            NF(i) => ("NF", vec![lab(i)]),
            F(i) => ("F", vec![lab(i)]),
            SQ(q) => ("s_q", vec![lit(q)]),
            SuppQ(q, r) => ("supp", vec![lit(q), lab(r)]),
            A(s, r) => ("a", vec![lab(s), lab(r)]),
            B(s, r) => ("b", vec![lab(s), lab(r)]),
            G1 => ("g1", vec![]),
            G2 => ("g2", vec![]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FreshName {
    Atom(FreshAtom),
    Label(FreshLabel),
}

/// `$family(key)` with a single reserved prefix.
pub fn fresh_name(name: &FreshName) -> String {
    Namer::default().render(name)
}

/// Renders fresh names with enough leading `$` to avoid every name in a
/// given input theory.
#[derive(Clone, Debug)]
pub struct Namer {
    prefix: String,
}

impl Default for Namer {
    fn default() -> Self {
        Namer {
            prefix: RESERVED_CHAR.to_string(),
        }
    }
}

fn leading_reserved(s: &str) -> usize {
    s.chars().take_while(|&c| c == RESERVED_CHAR).count()
}

impl Namer {
    /// A generated name starts with more `$` than any name in `d`, so it
    /// cannot coincide with one.
    pub fn for_theory(d: &Theory) -> Self {
        let atoms = language_of(d).literals.into_iter().map(|q| leading_reserved(q.atom().name()));
        let labels = d.rules.iter().map(|r| leading_reserved(r.label.name()));
        let depth = atoms.chain(labels).max().unwrap_or(0);
        Namer {
            prefix: RESERVED_CHAR.to_string().repeat(depth + 1),
        }
    }

    pub fn render(&self, name: &FreshName) -> String {
        let (family, keys) = match name {
            FreshName::Atom(a) => a.parts(),
            FreshName::Label(l) => l.parts(),
        };
        render(&self.prefix, family, &keys)
    }

    pub fn atom(&self, a: FreshAtom) -> Atom {
        Atom::new(self.render(&FreshName::Atom(a)))
    }

    pub fn label(&self, l: FreshLabel) -> Label {
        Label::new(self.render(&FreshName::Label(l)))
    }

    fn pos(&self, a: FreshAtom) -> Literal {
        Literal::new(self.atom(a), true)
    }

    fn neg(&self, a: FreshAtom) -> Literal {
        Literal::new(self.atom(a), false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TransformKind {
    /// Ambiguity blocking with individual defeat simulating ambiguity
    /// propagation.
    BlockForProp,
    /// Ambiguity propagation simulating ambiguity blocking.
    PropForBlock,
    /// Team defeat over individual defeat, without the competitor repair.
    TeamForIndividualBase,
    TeamForIndividual,
    IndividualForTeam,
}

impl TransformKind {
    pub const ALL: [TransformKind; 5] = [
        TransformKind::BlockForProp,
        TransformKind::PropForBlock,
        TransformKind::TeamForIndividualBase,
        TransformKind::TeamForIndividual,
        TransformKind::IndividualForTeam,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::BlockForProp => "block-for-prop",
            TransformKind::PropForBlock => "prop-for-block",
            TransformKind::TeamForIndividualBase => "team-for-individual-base",
            TransformKind::TeamForIndividual => "team-for-individual",
            TransformKind::IndividualForTeam => "individual-for-team",
        }
    }

    /// Short alias, `def2` through `def6`.
    pub fn short_name(self) -> &'static str {
        match self {
            TransformKind::BlockForProp => "def2",
            TransformKind::PropForBlock => "def3",
            TransformKind::TeamForIndividualBase => "def4",
            TransformKind::TeamForIndividual => "def5",
            TransformKind::IndividualForTeam => "def6",
        }
    }

    pub fn apply(self, d: &Theory) -> Theory {
        match self {
            TransformKind::BlockForProp => t_block_for_prop(d),
            TransformKind::PropForBlock => t_prop_for_block(d),
            TransformKind::TeamForIndividualBase => t_team_for_individual_base(d),
            TransformKind::TeamForIndividual => t_team_for_individual(d),
            TransformKind::IndividualForTeam => t_individual_for_team(d),
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown transformation `{0}`")]
pub struct UnknownTransform(pub String);

impl FromStr for TransformKind {
    type Err = UnknownTransform;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TransformKind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.short_name() == s)
            .ok_or_else(|| UnknownTransform(s.to_string()))
    }
}

/// Output accumulator shared by the transformations.
struct Emitter<'d> {
    d: &'d Theory,
    n: Namer,
    out: Theory,
    sigma: BTreeSet<Literal>,
    by_head: BTreeMap<Literal, Vec<&'d Rule>>,
}

impl<'d> Emitter<'d> {
    fn new(d: &'d Theory) -> Self {
        let mut by_head: BTreeMap<Literal, Vec<&Rule>> = BTreeMap::new();
        for r in &d.rules {
            by_head.entry(r.head.clone()).or_default().push(r);
        }
        let out = Theory {
            facts: d.facts.clone(),
            ..Theory::new()
        };
        Emitter {
            d,
            n: Namer::for_theory(d),
            out,
            sigma: language_of(d).literals,
            by_head,
        }
    }

    /// R[q]
    fn rules_for(&self, q: &Literal) -> Vec<&'d Rule> {
        self.by_head.get(q).cloned().unwrap_or_default()
    }

    fn sup(&self, a: &Rule, b: &Rule) -> bool {
        self.d.is_superior(&a.label, &b.label)
    }

    fn emit(&mut self, label: FreshLabel, body: impl IntoIterator<Item = Literal>, arrow: ArrowKind, head: Literal) {
        let label = self.n.label(label);
        self.out.rules.push(Rule::new(label, body, arrow, head));
    }

    fn prefer(&mut self, winner: FreshLabel, loser: FreshLabel) {
        let (w, l) = (self.n.label(winner), self.n.label(loser));
        self.out.superiority.insert((w, l));
    }

    fn copy_strict_rules(&mut self) {
        let strict = self.d.rules.iter().filter(|r| r.arrow == ArrowKind::Strict).cloned();
        self.out.rules.extend(strict);
    }

    /// `str(q): q -> strict(q)` and `nstr(q): => ~strict(q)`, optionally
    /// with `t(q): strict(q) => true(q)` and `nt(q): => ~true(q)`.
    fn strict_markers(&mut self, with_truth: bool) {
        for q in self.sigma.clone() {
            let strict = self.n.pos(FreshAtom::Strict(q.clone()));
            self.emit(FreshLabel::Str(q.clone()), [q.clone()], ArrowKind::Strict, strict.clone());
            self.emit(FreshLabel::NStr(q.clone()), [], ArrowKind::Defeasible, strict.complement());
            self.prefer(FreshLabel::NStr(q.clone()), FreshLabel::Str(q.clone()));
            if with_truth {
                let truth = self.n.pos(FreshAtom::True(q.clone()));
                self.emit(FreshLabel::T(q.clone()), [strict], ArrowKind::Defeasible, truth.clone());
                self.emit(FreshLabel::NT(q.clone()), [], ArrowKind::Defeasible, truth.complement());
                self.prefer(FreshLabel::T(q.clone()), FreshLabel::NT(q));
            }
        }
    }

    fn finish(self) -> Theory {
        self.out
    }
}

fn supportive(d: &Theory) -> impl Iterator<Item = &Rule> {
    d.rules.iter().filter(|r| r.arrow.is_supportive())
}

/// Makes ambiguity-propagating, individual-defeat reasoning (δ*) available
/// under ambiguity blocking (∂*).
pub fn t_block_for_prop(d: &Theory) -> Theory {
    let mut e = Emitter::new(d);
    e.copy_strict_rules();
    e.strict_markers(false);
    for q in e.sigma.clone() {
        let supp = e.n.pos(FreshAtom::Supp(q.clone()));
        e.emit(FreshLabel::SuppLit(q.clone()), [q], ArrowKind::Defeasible, supp);
    }
    // supp_body(r) is produced for defeaters as well, since they can still
    // act as competitors below.
    for r in &d.rules {
        let body: Vec<Literal> = r.body.iter().map(|b| e.n.pos(FreshAtom::Supp(b.clone()))).collect();
        let head = e.n.pos(FreshAtom::SuppBody(r.label.clone()));
        e.emit(FreshLabel::SuppBody(r.label.clone()), body, ArrowKind::Defeasible, head);
    }
    for r in supportive(d) {
        let l = &r.label;
        let sb = e.n.pos(FreshAtom::SuppBody(l.clone()));
        let overruled = e.n.pos(FreshAtom::ORule(l.clone()));
        let supp = e.n.pos(FreshAtom::Supp(r.head.clone()));
        e.emit(FreshLabel::SuppHead(l.clone()), [sb, overruled.complement()], ArrowKind::Defeasible, supp);
        e.emit(FreshLabel::PS(l.clone()), [], ArrowKind::Defeasible, overruled.complement());
        for s in e.rules_for(&r.head.complement()) {
            if e.sup(s, r) {
                e.emit(FreshLabel::NS(l.clone(), s.label.clone()), s.body.clone(), ArrowKind::Defeasible, overruled.clone());
                e.prefer(FreshLabel::NS(l.clone(), s.label.clone()), FreshLabel::PS(l.clone()));
            }
        }
    }
    for r in supportive(d) {
        let l = &r.label;
        let comp = e.n.pos(FreshAtom::Comp(l.clone()));
        let mut body: Vec<Literal> = r.body.iter().cloned().collect();
        body.push(comp.complement());
        body.push(e.n.neg(FreshAtom::Strict(r.head.complement())));
        e.emit(FreshLabel::Inf(l.clone()), body, ArrowKind::Defeasible, r.head.clone());
        e.emit(FreshLabel::PD(l.clone()), [], ArrowKind::Defeasible, comp.complement());
        for s in e.rules_for(&r.head.complement()) {
            if !e.sup(r, s) {
                let sb = e.n.pos(FreshAtom::SuppBody(s.label.clone()));
                e.emit(FreshLabel::ND(l.clone(), s.label.clone()), [sb], ArrowKind::Defeasible, comp.clone());
                e.prefer(FreshLabel::ND(l.clone(), s.label.clone()), FreshLabel::PD(l.clone()));
            }
        }
    }
    e.finish()
}

/// Makes ambiguity-blocking, individual-defeat reasoning (∂*) available
/// under ambiguity propagation.
pub fn t_prop_for_block(d: &Theory) -> Theory {
    let mut e = Emitter::new(d);
    e.copy_strict_rules();
    e.strict_markers(true);
    for q in e.sigma.clone() {
        let undefeated = e.n.pos(FreshAtom::Undefeated(q.clone()));
        e.emit(FreshLabel::Undefeated(q.clone()), [undefeated], ArrowKind::Defeasible, q);
    }
    for r in supportive(d) {
        let l = &r.label;
        let undefeated = e.n.pos(FreshAtom::Undefeated(r.head.clone()));
        let mut body: Vec<Literal> = r.body.iter().cloned().collect();
        body.push(e.n.neg(FreshAtom::True(r.head.complement())));
        e.emit(FreshLabel::PD(l.clone()), body, ArrowKind::Defeasible, undefeated.clone());
        for s in e.rules_for(&r.head.complement()) {
            if !e.sup(r, s) {
                let nd = FreshLabel::ND(l.clone(), s.label.clone());
                e.emit(nd.clone(), s.body.clone(), ArrowKind::Defeasible, undefeated.complement());
                e.prefer(nd, FreshLabel::PD(l.clone()));
            }
        }
    }
    e.finish()
}

fn team_base(e: &mut Emitter<'_>) {
    let d = e.d;
    for r in &d.rules {
        let l = &r.label;
        let h = e.n.pos(FreshAtom::H(l.clone()));
        e.emit(FreshLabel::P(l.clone()), r.body.clone(), r.arrow, h.clone());
        e.emit(FreshLabel::S(l.clone()), [h.clone()], ArrowKind::Strict, r.head.clone());
        for s in e.rules_for(&r.head.complement()) {
            e.emit(FreshLabel::N(l.clone(), s.label.clone()), s.body.clone(), s.arrow, h.complement());
        }
    }
    for (w, l) in &d.superiority {
        let (Some(rw), Some(rl)) = (d.rule(w), d.rule(l)) else {
            continue;
        };
        if rw.opposes(rl) {
            e.prefer(FreshLabel::P(w.clone()), FreshLabel::N(w.clone(), l.clone()));
            e.prefer(FreshLabel::N(l.clone(), w.clone()), FreshLabel::P(l.clone()));
        }
    }
}

/// Team defeat over individual defeat, with rule-level heads `h(r)` but no
/// extra competitor for each literal.
pub fn t_team_for_individual_base(d: &Theory) -> Theory {
    let mut e = Emitter::new(d);
    team_base(&mut e);
    e.finish()
}

/// [`t_team_for_individual_base`] plus a defeater `o(q)` for every literal,
/// subordinate to every `s(r)` for the complement.
pub fn t_team_for_individual(d: &Theory) -> Theory {
    let mut e = Emitter::new(d);
    team_base(&mut e);
    for q in e.sigma.clone() {
        let one = e.n.pos(FreshAtom::One(q.clone()));
        e.emit(FreshLabel::OQ(q.clone()), [one], ArrowKind::Defeater, q);
    }
    for r in &d.rules {
        let one = e.n.pos(FreshAtom::One(r.head.clone()));
        e.emit(FreshLabel::OneR(r.label.clone()), r.body.clone(), ArrowKind::Defeasible, one);
    }
    for r in &d.rules {
        e.prefer(FreshLabel::S(r.label.clone()), FreshLabel::OQ(r.head.complement()));
    }
    e.finish()
}

/// Individual defeat over team defeat.
pub fn t_individual_for_team(d: &Theory) -> Theory {
    let mut e = Emitter::new(d);
    e.copy_strict_rules();
    e.strict_markers(true);

    // Rule r_i for ~q against each strict or defeasible r_j for q.
    for ri in &d.rules {
        for rj in e.rules_for(&ri.head.complement()) {
            if !rj.arrow.is_supportive() {
                continue;
            }
            let (i, j) = (ri.label.clone(), rj.label.clone());
            let dij = e.n.pos(FreshAtom::D1(i.clone(), j.clone()));
            let truth = e.n.pos(FreshAtom::True(rj.head.clone()));
            e.emit(FreshLabel::R1(i.clone(), j.clone()), ri.body.clone(), ri.arrow, dij.complement());
            e.emit(FreshLabel::R2(i.clone(), j.clone()), rj.body.clone(), ArrowKind::Defeasible, dij.clone());
            e.emit(FreshLabel::R3(i.clone(), j.clone()), [truth], ArrowKind::Defeasible, dij.clone());
            let di = e.n.pos(FreshAtom::D2(i.clone()));
            e.emit(FreshLabel::DD(i.clone(), j.clone()), [dij], ArrowKind::Defeasible, di);
            if e.sup(rj, ri) {
                e.prefer(FreshLabel::R2(i.clone(), j.clone()), FreshLabel::R1(i.clone(), j.clone()));
            }
            e.prefer(FreshLabel::R3(i.clone(), j.clone()), FreshLabel::R1(i, j));
        }
    }
    for ri in &d.rules {
        let i = &ri.label;
        let fail = e.n.pos(FreshAtom::Fail(i.clone()));
        let di = e.n.pos(FreshAtom::D2(i.clone()));
        e.emit(FreshLabel::FD(i.clone()), [fail.clone()], ArrowKind::Defeasible, di);
        e.emit(FreshLabel::NF(i.clone()), ri.body.clone(), ArrowKind::Defeasible, fail.complement());
        e.emit(FreshLabel::F(i.clone()), [], ArrowKind::Defeasible, fail);
        e.prefer(FreshLabel::NF(i.clone()), FreshLabel::F(i.clone()));
    }

    for r in supportive(d) {
        let one = e.n.pos(FreshAtom::One(r.head.clone()));
        e.emit(FreshLabel::OneR(r.label.clone()), r.body.clone(), ArrowKind::Defeasible, one);
    }
    for q in e.sigma.clone() {
        let mut body = vec![
            e.n.pos(FreshAtom::One(q.clone())),
            e.n.neg(FreshAtom::True(q.complement())),
        ];
        for s in e.rules_for(&q.complement()) {
            body.push(e.n.pos(FreshAtom::D2(s.label.clone())));
        }
        e.emit(FreshLabel::SQ(q.clone()), body, ArrowKind::Defeasible, q);
    }

    let g = e.n.pos(FreshAtom::G);
    for r in supportive(d) {
        let attackers = e.rules_for(&r.head.complement());
        let mut body: Vec<Literal> = r.body.iter().cloned().collect();
        for s in &attackers {
            body.push(e.n.pos(FreshAtom::DSupp(s.label.clone(), r.label.clone())));
        }
        body.push(g.clone());
        body.push(g.complement());
        e.emit(FreshLabel::SuppQ(r.head.clone(), r.label.clone()), body, ArrowKind::Defeasible, r.head.clone());
    }
    for r in supportive(d) {
        for s in e.rules_for(&r.head.complement()) {
            let (sl, rl) = (s.label.clone(), r.label.clone());
            let ds = e.n.pos(FreshAtom::DSupp(sl.clone(), rl.clone()));
            e.emit(FreshLabel::A(sl.clone(), rl.clone()), s.body.clone(), ArrowKind::Defeasible, ds.complement());
            e.emit(FreshLabel::B(sl.clone(), rl.clone()), r.body.clone(), ArrowKind::Defeasible, ds);
            if e.sup(s, r) {
                e.prefer(FreshLabel::A(sl.clone(), rl.clone()), FreshLabel::B(sl, rl));
            }
        }
    }
    if !d.rules.is_empty() || !e.sigma.is_empty() {
        e.emit(FreshLabel::G1, [], ArrowKind::Defeasible, g.clone());
        e.emit(FreshLabel::G2, [], ArrowKind::Defeasible, g.complement());
    }

    for r in &d.rules {
        let o = e.n.pos(FreshAtom::OLit(r.head.clone()));
        e.emit(FreshLabel::OR(r.label.clone()), r.body.clone(), ArrowKind::Defeasible, o);
    }
    for q in e.sigma.clone() {
        let o = e.n.pos(FreshAtom::OLit(q.clone()));
        e.emit(FreshLabel::OQ(q.clone()), [o], ArrowKind::Defeater, q.clone());
        e.prefer(FreshLabel::SQ(q.clone()), FreshLabel::OQ(q.complement()));
    }
    e.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{least_fixpoint, Sign, Tag, TagSet};
    use crate::syntax::validate_theory;
    use crate::text::{parse_theory, print_theory};

    fn theory(text: &str) -> Theory {
        parse_theory(text).unwrap()
    }

    fn ex1() -> Theory {
        theory("r1: => p.\nr2: => ~p.\nr3: ~p => ~q.\nr4: => q.\n")
    }

    fn preferred() -> Theory {
        theory("r1: => p.\nr2: => ~p.\nr1 > r2.\n")
    }

    fn lines(d: &Theory) -> Vec<String> {
        print_theory(d).lines().map(str::to_string).collect()
    }

    fn has_line(d: &Theory, line: &str) -> bool {
        lines(d).iter().any(|l| l == line)
    }

    #[test]
    fn fresh_names_render() {
        assert_eq!(fresh_name(&FreshName::Atom(FreshAtom::Strict(Literal::pos("p")))), "$strict(p)");
        assert_eq!(
            fresh_name(&FreshName::Atom(FreshAtom::D1(Label::new("r1"), Label::new("r2")))),
            "$d(r1,r2)"
        );
        assert_eq!(
            fresh_name(&FreshName::Label(FreshLabel::ND(Label::new("r3"), Label::new("r4")))),
            "$n_d(r3,r4)"
        );
        assert_eq!(fresh_name(&FreshName::Atom(FreshAtom::Strict(Literal::neg("p")))), "$strict(~p)");
    }

    #[test]
    fn namer_deepens_prefix_past_input() {
        let d = Theory::new().with_rule(Rule::defeasible("$h(r1)", &[], Literal::pos("$$x")));
        let n = Namer::for_theory(&d);
        assert_eq!(n.render(&FreshName::Atom(FreshAtom::G)), "$$$g");
        assert_eq!(Namer::for_theory(&ex1()).render(&FreshName::Atom(FreshAtom::G)), "$g");
    }

    #[test]
    fn kinds_parse_by_either_name() {
        for k in TransformKind::ALL {
            assert_eq!(k.name().parse::<TransformKind>().unwrap(), k);
            assert_eq!(k.short_name().parse::<TransformKind>().unwrap(), k);
        }
        assert!("def7".parse::<TransformKind>().is_err());
    }

    #[test]
    fn empty_theory_maps_to_empty_theory() {
        for k in TransformKind::ALL {
            assert!(k.apply(&Theory::new()).is_empty(), "{k}");
        }
    }

    #[test]
    fn block_for_prop_example1_shape() {
        let t = t_block_for_prop(&ex1());
        assert_eq!(t.rules.len(), 36);
        assert!(has_line(&t, "$inf(r3): ~$comp(r3), ~$strict(q), ~p => ~q."));
        assert!(t.is_superior(&Label::new("$n_d(r3,r4)"), &Label::new("$p_d(r3)")));
        assert!(has_line(&t, "$sb(r3): $supp(~p) => $supp_body(r3)."));
        assert!(has_line(&t, "$sh(r1): ~$o(r1), $supp_body(r1) => $supp(p)."));
        assert!(has_line(&t, "$p_s(r4): => ~$o(r4)."));
        assert!(has_line(&t, "$n_d(r1,r2): $supp_body(r2) => $comp(r1)."));
        assert!(!lines(&t).iter().any(|l| l.starts_with("$n_s")));
    }

    #[test]
    fn block_for_prop_overruling_rules() {
        let t = t_block_for_prop(&preferred());
        assert!(has_line(&t, "$n_s(r2,r1): => $o(r2)."));
        assert!(t.is_superior(&Label::new("$n_s(r2,r1)"), &Label::new("$p_s(r2)")));
        // r1 > r2, so r2 is no competitor for r1.
        assert!(!has_line(&t, "$n_d(r1,r2): $supp_body(r2) => $comp(r1)."));
        assert!(has_line(&t, "$n_d(r2,r1): $supp_body(r1) => $comp(r2)."));
    }

    #[test]
    fn prop_for_block_example2_rules() {
        let t = t_prop_for_block(&ex1());
        assert!(has_line(&t, "$n_d(r4,r3): ~p => ~$undefeated(q)."));
        assert!(has_line(&t, "$p_d(r4): ~$true(~q) => $undefeated(q)."));
        assert!(has_line(&t, "$u(q): $undefeated(q) => q."));

        let single = t_prop_for_block(&theory("r1: => p."));
        assert!(has_line(&single, "$p_d(r1): ~$true(~p) => $undefeated(p)."));
        assert!(!lines(&single).iter().any(|l| l.starts_with("$n_d")));
    }

    #[test]
    fn team_base_example13_has_six_rules() {
        let t = t_team_for_individual_base(&theory("r1: => p.\nr2: => ~p.\n"));
        assert_eq!(
            lines(&t),
            [
                "$p(r1): => $h(r1).",
                "$s(r1): $h(r1) -> p.",
                "$n(r1,r2): => ~$h(r1).",
                "$p(r2): => $h(r2).",
                "$s(r2): $h(r2) -> ~p.",
                "$n(r2,r1): => ~$h(r2).",
            ]
        );
    }

    #[test]
    fn team_base_maps_superiority() {
        let d = theory("r1: => p.\nr2: => ~p.\nr3: => p.\nr4: => ~p.\nr1 > r2.\nr3 > r4.\n");
        let t = t_team_for_individual_base(&d);
        for (w, l) in [
            ("$p(r1)", "$n(r1,r2)"),
            ("$n(r2,r1)", "$p(r2)"),
            ("$p(r3)", "$n(r3,r4)"),
            ("$n(r4,r3)", "$p(r4)"),
        ] {
            assert!(t.is_superior(&Label::new(w), &Label::new(l)), "{w} > {l}");
        }
        assert_eq!(t.superiority.len(), 4);
    }

    #[test]
    fn team_for_individual_adds_competitors() {
        let t = t_team_for_individual(&theory("r1: => p.\nr2: => ~p.\n"));
        assert!(has_line(&t, "$one(r1): => $one(p)."));
        assert!(has_line(&t, "$one(r2): => $one(~p)."));
        assert!(has_line(&t, "$o(p): $one(p) ~> p."));
        assert!(has_line(&t, "$o(~p): $one(~p) ~> ~p."));
        assert!(t.is_superior(&Label::new("$s(r1)"), &Label::new("$o(~p)")));
        assert!(t.is_superior(&Label::new("$s(r2)"), &Label::new("$o(p)")));

        let t = t_team_for_individual(&theory("r1: => p."));
        assert!(has_line(&t, "$o(~p): $one(~p) ~> ~p."));
        let lfp = least_fixpoint(&t, TagSet::of(&[Tag::Blocking]));
        assert!(lfp.holds(Sign::Minus, Tag::Blocking, &Literal::neg("$one(p)")));
        assert!(lfp.holds(Sign::Plus, Tag::Blocking, &Literal::pos("p")));
    }

    #[test]
    fn individual_for_team_blocks() {
        let t = t_individual_for_team(&theory("r1: => p.\nr2: => ~p.\n"));
        assert!(has_line(&t, "$s_q(p): $d(r2), $one(p), ~$true(~p) => p."));
        assert!(has_line(&t, "$s_q(~p): $d(r1), $one(~p), ~$true(p) => ~p."));
        assert!(has_line(&t, "$supp(p,r1): $d_supp(r2,r1), ~$g, $g => p."));

        let t = t_individual_for_team(&theory("r1: => p.\nr2: => ~p.\nr1 > r2.\n"));
        assert!(t.is_superior(&Label::new("$R2(r2,r1)"), &Label::new("$R1(r2,r1)")));
        assert!(!t.is_superior(&Label::new("$R2(r1,r2)"), &Label::new("$R1(r1,r2)")));
        assert!(t.is_superior(&Label::new("$R3(r1,r2)"), &Label::new("$R1(r1,r2)")));
        assert!(t.is_superior(&Label::new("$a(r1,r2)"), &Label::new("$b(r1,r2)")));
        assert!(t.is_superior(&Label::new("$NF(r1)"), &Label::new("$F(r1)")));
    }

    #[test]
    fn outputs_are_valid_and_fresh() {
        let d = theory("p.\nr1: p -> q.\nr2: q => ~s.\nr3: ~> s.\nr4: => s.\nr4 > r3.\n");
        for k in TransformKind::ALL {
            let t = k.apply(&d);
            assert!(validate_theory(&t).is_ok(), "{k}: {:?}", validate_theory(&t));
            let plain: BTreeSet<_> = language_of(&t)
                .literals
                .into_iter()
                .filter(|q| !q.atom().is_reserved())
                .collect();
            assert_eq!(plain, language_of(&d).literals, "{k}");
            assert_eq!(t.facts, d.facts);
            assert_eq!(k.apply(&d), t);
        }
    }
}
