use std::collections::BTreeSet;

use defeasible::engine::{build_index, least_fixpoint, Sign, SignedConclusion, Tag, TagSet};
use defeasible::sim::{
    check_coherence, check_idempotence, check_inclusion_theorem, check_simulation, gen_modular_addition, gen_theory,
    lemmas, shrink_counterexample, AdditionKind, Claim, GenConfig, SimCheckConfig,
};
use defeasible::syntax::{
    add_theories, is_modular_addition, language_of, validate_theory, ArrowKind, Label, Literal, Rule, Theory,
};
use defeasible::text::{parse_theory, print_theory};
use defeasible::transform::TransformKind;
use proptest::prelude::*;
use proptest::sample::subsequence;

const NAMES: [&str; 6] = ["p", "q", "guilty", "a_1", "x9", "Bird"];

fn literal() -> impl Strategy<Value = Literal> {
    (0..NAMES.len(), any::<bool>()).prop_map(|(i, pos)| if pos { Literal::pos(NAMES[i]) } else { Literal::neg(NAMES[i]) })
}

fn arrow() -> impl Strategy<Value = ArrowKind> {
    prop_oneof![Just(ArrowKind::Strict), Just(ArrowKind::Defeasible), Just(ArrowKind::Defeater)]
}

/// Arbitrary valid theories over a small vocabulary, with superiority only
/// pointing from earlier to later rules.
fn theory() -> impl Strategy<Value = Theory> {
    let rule = (prop::collection::btree_set(literal(), 0..4), arrow(), literal());
    (
        prop::collection::btree_set(literal(), 0..3),
        prop::collection::vec(rule, 0..7),
        prop::collection::vec((0usize..7, 0usize..7), 0..5),
    )
        .prop_map(|(facts, rules, sup)| {
            let rules: Vec<Rule> = rules
                .into_iter()
                .enumerate()
                .map(|(i, (body, arrow, head))| Rule::new(Label::new(format!("r{i}")), body, arrow, head))
                .collect();
            let n = rules.len();
            let superiority = sup
                .into_iter()
                .filter(|&(i, j)| i < j && j < n)
                .map(|(i, j)| (rules[i].label.clone(), rules[j].label.clone()))
                .collect();
            Theory {
                facts,
                rules,
                superiority,
            }
        })
}

fn all_conclusions(d: &Theory) -> Vec<SignedConclusion> {
    let mut out = Vec::new();
    for q in language_of(d).literals {
        for tag in Tag::ALL {
            for sign in [Sign::Plus, Sign::Minus] {
                out.push(SignedConclusion::new(sign, tag, q.clone()));
            }
        }
    }
    out
}

fn seeded_theory() -> impl Strategy<Value = Theory> {
    any::<u64>().prop_map(|s| gen_theory(&GenConfig::default(), s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printing_then_parsing_is_the_identity(d in theory()) {
        prop_assert!(validate_theory(&d).is_ok());
        let text = print_theory(&d);
        let back = parse_theory(&text).expect("printed theories parse");
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(print_theory(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn one_step_is_monotone(d in theory(), picks in any::<(u64, u64)>()) {
        let all = all_conclusions(&d);
        let it = build_index(&d);
        let (mut small, mut large) = (it.empty_set(TagSet::ALL), it.empty_set(TagSet::ALL));
        for (i, c) in all.iter().enumerate() {
            let bit = |seed: u64| seed.rotate_left(i as u32 % 64) & 1 == 1;
            if bit(picks.0) || bit(picks.1) {
                large.insert(c);
                if bit(picks.0) && bit(picks.1) {
                    small.insert(c);
                }
            }
        }
        prop_assert!(small.is_subset(&large));
        let (a, b) = (it.step(&small, TagSet::ALL).unwrap(), it.step(&large, TagSet::ALL).unwrap());
        prop_assert!(a.is_subset(&b));
    }

    #[test]
    fn conclusions_ignore_rule_order(d in theory(), order in any::<prop::sample::Index>()) {
        let mut rotated = d.clone();
        if !rotated.rules.is_empty() {
            let k = order.index(rotated.rules.len());
            rotated.rules.rotate_left(k);
            rotated.rules.reverse();
        }
        prop_assert_eq!(least_fixpoint(&d, TagSet::ALL).to_set(), least_fixpoint(&rotated, TagSet::ALL).to_set());
    }

    #[test]
    fn fixpoint_is_closed(d in theory()) {
        prop_assert!(check_idempotence(&d));
    }

    #[test]
    fn inclusion_and_coherence_hold(d in theory()) {
        prop_assert!(check_inclusion_theorem(&d).is_empty());
        prop_assert!(check_coherence(&d).is_empty());
    }

    #[test]
    fn restricting_tags_keeps_their_conclusions(d in theory(), tag in 0usize..7) {
        let t = Tag::ALL[tag];
        let full = least_fixpoint(&d, TagSet::ALL);
        let part = least_fixpoint(&d, TagSet::of(&[t]));
        for sign in [Sign::Plus, Sign::Minus] {
            prop_assert_eq!(full.literals(sign, t), part.literals(sign, t));
        }
    }

    #[test]
    fn addition_is_a_union(d in theory(), extra in theory()) {
        // relabel the addition so the two label sets are disjoint
        let mut a = extra.clone();
        for r in &mut a.rules {
            r.label = Label::new(format!("x_{}", r.label));
        }
        a.superiority = extra
            .superiority
            .iter()
            .map(|(w, l)| (Label::new(format!("x_{w}")), Label::new(format!("x_{l}"))))
            .collect();
        let s = add_theories(&d, &a).expect("disjoint labels");
        prop_assert!(validate_theory(&s).is_ok());
        prop_assert_eq!(s.rules.len(), d.rules.len() + a.rules.len());
        prop_assert_eq!(&s.facts, &d.facts.union(&a.facts).cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(s.superiority.len(), d.superiority.len() + a.superiority.len());
        prop_assert_eq!(add_theories(&d, &Theory::new()).unwrap(), d.clone());
        if !d.rules.is_empty() {
            prop_assert!(add_theories(&d, &d).is_err());
        }
    }

    #[test]
    fn transforms_are_valid_deterministic_and_fresh(d in theory(), k in 0usize..5) {
        let kind = TransformKind::ALL[k];
        let td = kind.apply(&d);
        prop_assert!(validate_theory(&td).is_ok());
        prop_assert_eq!(&kind.apply(&d), &td);
        let user: BTreeSet<Literal> = language_of(&td).literals.into_iter().filter(|q| !q.atom().is_reserved()).collect();
        prop_assert_eq!(user, language_of(&d).literals);
        prop_assert!(td.labels().iter().all(|l| d.labels().contains(l) || l.is_reserved()));
    }

    #[test]
    fn transformed_output_can_be_transformed_again(d in theory(), k in 0usize..5, j in 0usize..5) {
        let once = TransformKind::ALL[k].apply(&d);
        let twice = TransformKind::ALL[j].apply(&once);
        prop_assert!(validate_theory(&twice).is_ok());
        let before: BTreeSet<Literal> = language_of(&once).literals;
        let depth = |s: &str| s.chars().take_while(|&c| c == '$').count();
        let deepest = before
            .iter()
            .map(|q| depth(q.atom().name()))
            .chain(once.rules.iter().map(|r| depth(r.label.name())))
            .max()
            .unwrap_or(0);
        let added: Vec<Literal> = language_of(&twice).literals.into_iter().filter(|q| !before.contains(q)).collect();
        prop_assert!(added.iter().all(|q| depth(q.atom().name()) > deepest), "{:?}", added);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn generated_additions_are_modular(d in seeded_theory(), k in 0usize..5, seed in any::<u64>(), facts in any::<bool>()) {
        let kind = TransformKind::ALL[k];
        let td = kind.apply(&d);
        let additions = if facts { AdditionKind::Facts } else { AdditionKind::Rules };
        let a = gen_modular_addition(&d, &td, additions, &GenConfig::default(), seed);
        prop_assert!(is_modular_addition(&d, &td, &a).is_ok());
        prop_assert!(a.superiority.is_empty());
        let shaped = if facts { a.rules.is_empty() } else { a.facts.is_empty() };
        prop_assert!(shaped);
    }

    #[test]
    fn strict_conclusions_survive_every_transform(d in seeded_theory(), k in 0usize..5, seed in any::<u64>()) {
        let kind = TransformKind::ALL[k];
        let a = gen_modular_addition(&d, &kind.apply(&d), AdditionKind::Rules, &GenConfig::default(), seed);
        let v = lemmas::strict_preserved(&d, &a, kind);
        prop_assert!(v.is_empty(), "{:?}", v);
    }

    #[test]
    fn strict_markers_mirror_definite_conclusions(d in seeded_theory(), seed in any::<u64>()) {
        let kind = TransformKind::BlockForProp;
        let a = gen_modular_addition(&d, &kind.apply(&d), AdditionKind::Rules, &GenConfig::default(), seed);
        let v = lemmas::block_strict_mirror(&d, &a);
        prop_assert!(v.is_empty(), "{:?}", v);
    }

    #[test]
    fn truth_markers_mirror_definite_conclusions(d in seeded_theory(), seed in any::<u64>(), six in any::<bool>()) {
        let kind = if six { TransformKind::IndividualForTeam } else { TransformKind::PropForBlock };
        let a = gen_modular_addition(&d, &kind.apply(&d), AdditionKind::Rules, &GenConfig::default(), seed);
        let v = lemmas::truth_mirror(&d, &a, kind);
        prop_assert!(v.is_empty(), "{:?}", v);
    }

    #[test]
    fn support_only_gadget_behaves(d in seeded_theory(), seed in any::<u64>()) {
        let kind = TransformKind::IndividualForTeam;
        let a = gen_modular_addition(&d, &kind.apply(&d), AdditionKind::Rules, &GenConfig::default(), seed);
        let v = lemmas::individual_gadget(&d, &a);
        prop_assert!(v.is_empty(), "{:?}", v);
    }

    #[test]
    fn reports_replay_from_their_seed(d in seeded_theory(), seed in any::<u64>(), c in any::<prop::sample::Index>()) {
        let claims: Vec<Claim> = Claim::positive().into_iter().chain(Claim::negative()).collect();
        let cfg = SimCheckConfig::new(*c.get(&claims), 3, seed);
        let first = check_simulation(&d, &cfg).unwrap();
        let second = check_simulation(&d, &cfg).unwrap();
        prop_assert_eq!(first.to_json(), second.to_json());
        prop_assert_eq!(first.mismatches.is_empty(), first.verdict == defeasible::sim::Verdict::AllPass);
    }

    #[test]
    fn shrinking_keeps_the_first_mismatch(d in seeded_theory(), seed in any::<u64>()) {
        let claim = Claim::negative()[0];
        let report = check_simulation(&d, &SimCheckConfig::new(claim, 5, seed)).unwrap();
        if let Some(m) = report.mismatches.first() {
            let (sd, sa) = shrink_counterexample(&m.d, &m.a, &claim).unwrap();
            let td = claim.transform.apply(&sd);
            prop_assert!(is_modular_addition(&sd, &td, &sa).is_ok());
            let again = defeasible::sim::compare_pair(&sd, &td, &sa, &claim).unwrap();
            prop_assert!(again.iter().any(|x| x.literal == m.literal && x.sign == m.sign));
            prop_assert!(sd.rules.len() <= m.d.rules.len() && sa.rules.len() <= m.a.rules.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn subsets_of_a_fixpoint_step_inside_it(d in theory(), keep in subsequence((0..64usize).collect::<Vec<_>>(), 0..64)) {
        let it = build_index(&d);
        let lfp = it.fixpoint(TagSet::ALL);
        let mut part = it.empty_set(TagSet::ALL);
        for (i, c) in lfp.iter().enumerate() {
            if keep.contains(&(i % 64)) {
                part.insert(&c);
            }
        }
        prop_assert!(it.step(&part, TagSet::ALL).unwrap().is_subset(&lfp));
    }
}
