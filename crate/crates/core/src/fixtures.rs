//! Worked example theories shipped with the crate, and the checks that
//! reproduce the behaviour each one was built to exhibit.

use std::collections::BTreeSet;

use crate::engine::{least_fixpoint, Sign, Tag, TagSet};
use crate::sim::{compare_pair, AdditionKind, Claim};
use crate::syntax::{add_theories, Literal, Theory};
use crate::text::parse_theory;
use crate::transform::TransformKind;

pub const EX1: &str = include_str!("../fixtures/ex1.dfl");
pub const EX13: &str = include_str!("../fixtures/ex13.dfl");
pub const EX13_ADDITION: &str = include_str!("../fixtures/ex13_addition.dfl");
pub const EX15: &str = include_str!("../fixtures/ex15.dfl");
pub const EX15_ADDITION: &str = include_str!("../fixtures/ex15_addition.dfl");
pub const EX16_DPRIME: &str = include_str!("../fixtures/ex16_dprime.dfl");

/// Every fixture by file name.
pub const ALL: [(&str, &str); 6] = [
    ("ex1.dfl", EX1),
    ("ex13.dfl", EX13),
    ("ex13_addition.dfl", EX13_ADDITION),
    ("ex15.dfl", EX15),
    ("ex15_addition.dfl", EX15_ADDITION),
    ("ex16_dprime.dfl", EX16_DPRIME),
];

pub fn load(text: &str) -> Theory {
    parse_theory(text).expect("bundled fixtures parse")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, passed: bool, detail: impl Into<String>) -> ExampleOutcome {
    ExampleOutcome {
        name,
        passed,
        detail: detail.into(),
    }
}

fn lits(names: &[&str]) -> BTreeSet<Literal> {
    names
        .iter()
        .map(|n| match n.strip_prefix('~') {
            Some(a) => Literal::neg(a),
            None => Literal::pos(n),
        })
        .collect()
}

fn holds_all(d: &Theory, sign: Sign, tag: Tag, names: &[&str]) -> bool {
    let c = least_fixpoint(d, TagSet::of(&[tag]));
    lits(names).iter().all(|q| c.holds(sign, tag, q))
}

fn ex1_golden() -> ExampleOutcome {
    let d = load(EX1);
    let c = least_fixpoint(&d, TagSet::ALL);
    let expect = [
        (Tag::BlockingIndividual, &["q"][..], &["p", "~p", "~q"][..]),
        (Tag::PropagatingIndividual, &[][..], &["p", "~p", "q", "~q"][..]),
        (Tag::SupportIndividual, &["p", "~p", "q", "~q"][..], &[][..]),
    ];
    let ok = expect.iter().all(|(tag, plus, minus)| {
        c.literals(Sign::Plus, *tag) == lits(plus) && c.literals(Sign::Minus, *tag) == lits(minus)
    });
    outcome("ex1 conclusions", ok, "pd*, d* and s* sets of the four-rule theory")
}

fn ex1_block_for_prop() -> ExampleOutcome {
    let td = TransformKind::BlockForProp.apply(&load(EX1));
    let c = least_fixpoint(&td, TagSet::of(&[Tag::BlockingIndividual]));
    let t = Tag::BlockingIndividual;
    let ok = ["p", "~p", "q", "~q"].iter().all(|l| {
        let q = lits(&[l]).into_iter().next().expect("one literal");
        let strict = Literal::pos(format!("$strict({q})"));
        let supp = Literal::pos(format!("$supp({q})"));
        c.holds(Sign::Plus, t, &strict.complement())
            && c.holds(Sign::Minus, t, &strict)
            && c.holds(Sign::Plus, t, &supp)
            && c.holds(Sign::Minus, t, &q)
    });
    outcome("ex1 block-for-prop", ok, "strict/supp atoms and -pd* on every literal")
}

fn ex2_prop_for_block() -> ExampleOutcome {
    let td = TransformKind::PropForBlock.apply(&load(EX1));
    let t = Tag::PropagatingIndividual;
    let c = least_fixpoint(&td, TagSet::of(&[t]));
    let ok = c.holds(Sign::Minus, t, &Literal::pos("$undefeated(~p)"))
        && lits(&["~p", "p", "~q"]).iter().all(|q| c.holds(Sign::Minus, t, q))
        && c.holds(Sign::Plus, t, &Literal::pos("q"));
    outcome("ex2 prop-for-block", ok, "-d* on p, ~p, ~q and +d* q")
}

fn mismatch_at_p(kind: TransformKind, source: Tag, target: Tag) -> (bool, bool) {
    let (d, a) = (load(EX13), load(EX13_ADDITION));
    let claim = Claim::new(kind, source, target, AdditionKind::Rules);
    let ms = compare_pair(&d, &kind.apply(&d), &a, &claim).expect("supported claim");
    let p = Literal::pos("p");
    let found = ms
        .iter()
        .any(|m| m.literal == p && m.sign == Sign::Plus && !m.source_has && m.target_has);
    let on_p = ms.iter().any(|m| m.literal.atom() == p.atom());
    (found, on_p)
}

fn ex13() -> Vec<ExampleOutcome> {
    let (d, a) = (load(EX13), load(EX13_ADDITION));
    let da = add_theories(&d, &a).expect("disjoint labels");
    let ta = add_theories(&TransformKind::TeamForIndividualBase.apply(&d), &a).expect("disjoint labels");
    let base = holds_all(&da, Sign::Minus, Tag::BlockingIndividual, &["p"])
        && holds_all(&ta, Sign::Plus, Tag::Blocking, &["p"])
        && mismatch_at_p(TransformKind::TeamForIndividualBase, Tag::BlockingIndividual, Tag::Blocking).0;
    let tb = add_theories(&TransformKind::TeamForIndividual.apply(&d), &a).expect("disjoint labels");
    let fixed = holds_all(&tb, Sign::Minus, Tag::Blocking, &["p"])
        && !mismatch_at_p(TransformKind::TeamForIndividual, Tag::BlockingIndividual, Tag::Blocking).1;
    vec![
        outcome("ex13 team-for-individual-base", base, "source -pd* p, target +pd p"),
        outcome("ex13 team-for-individual", fixed, "target -pd p, no mismatch on p"),
    ]
}

fn ex15() -> ExampleOutcome {
    let (d, a) = (load(EX15), load(EX15_ADDITION));
    let da = add_theories(&d, &a).expect("disjoint labels");
    let ta = add_theories(&TransformKind::TeamForIndividualBase.apply(&d), &a).expect("disjoint labels");
    let ok = holds_all(&da, Sign::Minus, Tag::PropagatingIndividual, &["p"])
        && holds_all(&ta, Sign::Plus, Tag::Propagating, &["p"]);
    outcome("ex15 team-for-individual-base", ok, "source -d* p, target +d p")
}

fn ex16() -> ExampleOutcome {
    let a = load(EX13_ADDITION);
    let da = add_theories(&load(EX13), &a).expect("disjoint labels");
    let dpa = add_theories(&load(EX16_DPRIME), &a).expect("disjoint labels");
    let ok = holds_all(&da, Sign::Minus, Tag::Blocking, &["p"])
        && holds_all(&dpa, Sign::Plus, Tag::BlockingIndividual, &["p"]);
    outcome("ex16 hand encoding", ok, "D+A -pd p, D'+A +pd* p")
}

/// Runs every worked-example check in a fixed order.
pub fn run_examples() -> Vec<ExampleOutcome> {
    let mut out = vec![ex1_golden(), ex1_block_for_prop(), ex2_prop_for_block()];
    out.extend(ex13());
    out.push(ex15());
    out.push(ex16());
    out
}
