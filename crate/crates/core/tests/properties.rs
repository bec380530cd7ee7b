use std::collections::BTreeSet;

use iml_core::formula::{closure_of, modal_step, parse, Formula, FormulaSet};
use iml_core::kripke::{
    enumerate_frames, random_model, truth_set, valid_in_frame, FrameClass, Model, SemanticsVariant,
};
use proptest::prelude::*;

fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::atom("p")),
        Just(Formula::atom("q")),
        Just(Formula::Top),
        Just(Formula::Bot),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::dia),
        ]
    })
}

fn model_in(class: FrameClass) -> impl Strategy<Value = Model> {
    (any::<u64>(), 1usize..=5)
        .prop_map(move |(seed, n)| random_model(seed, n, class, &["p", "q"]).unwrap())
}

const CLASSES: [FrameClass; 4] = [
    FrameClass::ALL,
    FrameClass::FC,
    FrameClass::FDC,
    FrameClass::FDUC,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_then_parse_is_identity(a in formula(5)) {
        prop_assert_eq!(parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn closure_bounds(a in formula(5)) {
        let sigma = closure_of(&a);
        prop_assert!(sigma.len() <= a.len());
        let strata = sigma.strata();
        for (alpha, g) in strata.iter().enumerate() {
            prop_assert!(g.len() <= sigma.len().saturating_sub(alpha));
            if !g.is_empty() {
                prop_assert!(modal_step(g).len() < g.len());
            }
        }
        prop_assert!(strata.last().unwrap().is_empty());
    }

    #[test]
    fn modal_step_is_monotone(a in formula(4), b in formula(4)) {
        let small: FormulaSet = closure_of(&a).members;
        let mut big = small.clone();
        big.extend(closure_of(&b).members);
        prop_assert!(modal_step(&small).is_subset(&modal_step(&big)));
    }

    #[test]
    fn heredity(m in (0usize..4).prop_flat_map(|i| model_in(CLASSES[i])), a in formula(4)) {
        let truth = truth_set(&m, &a, SemanticsVariant::Standard);
        for (s, t) in m.frame().le().pairs() {
            prop_assert!(!truth[s] || truth[t], "{a}: {} ≤ {}", m.frame().name(s), m.frame().name(t));
        }
    }

    #[test]
    fn heredity_of_other_clauses_on_fc(m in model_in(FrameClass::FC), a in formula(4)) {
        for sem in [SemanticsVariant::FischerServi, SemanticsVariant::Wijesekera] {
            let truth = truth_set(&m, &a, sem);
            for (s, t) in m.frame().le().pairs() {
                prop_assert!(!truth[s] || truth[t]);
            }
        }
    }

    #[test]
    fn clauses_agree_on_fc(m in model_in(FrameClass::FC), a in formula(4)) {
        let std = truth_set(&m, &a, SemanticsVariant::Standard);
        prop_assert_eq!(&std, &truth_set(&m, &a, SemanticsVariant::FischerServi));
        prop_assert_eq!(&std, &truth_set(&m, &a, SemanticsVariant::Wijesekera));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn validity_on_fc_carries_to_fuc(a in formula(3)) {
        let on = |class| (1..=2).all(|n| enumerate_frames(n, class).all(|f| valid_in_frame(&f, &a).is_ok()));
        if on(FrameClass::FC) {
            prop_assert!(on(FrameClass::FUC));
        }
    }
}

#[test]
fn fischer_servi_differs_off_fc() {
    // v ≤ w, vRu, p at u: the standard clause looks below w, the other does not
    let text = r#"{"worlds": ["v", "w", "u"], "le": [["v", "w"]], "r": [["v", "u"]], "val": {"p": ["u"]}}"#;
    let m = Model::from_json(text).unwrap();
    let a = parse("<>p").unwrap();
    let w = m.world("w").unwrap();
    assert!(truth_set(&m, &a, SemanticsVariant::Standard)[w]);
    assert!(!truth_set(&m, &a, SemanticsVariant::FischerServi)[w]);
}

#[test]
fn class_inclusions() {
    for n in 1..=3 {
        let set = |c| {
            enumerate_frames(n, c)
                .map(|f| {
                    (
                        f.le().pairs().collect::<Vec<_>>(),
                        f.r().pairs().collect::<Vec<_>>(),
                    )
                })
                .collect::<BTreeSet<_>>()
        };
        let (fc, fuc, fdc, fduc) = (
            set(FrameClass::FC),
            set(FrameClass::FUC),
            set(FrameClass::FDC),
            set(FrameClass::FDUC),
        );
        assert!(fuc.is_subset(&fc));
        assert!(fdc.is_subset(&fc));
        assert!(fduc.is_subset(&fdc));
        assert!(fduc.is_subset(&fuc));
    }
}
