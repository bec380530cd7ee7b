use std::collections::BTreeSet;
use std::sync::Arc;

use super::*;
use crate::formula::{parse, Formula};
use crate::kripke::{frame_class_check, satisfies, Frame, FrameClass, Relation, Valuation};

fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

fn model(
    names: &[&str],
    le: &[(usize, usize)],
    r: &[(usize, usize)],
    val: &[(&str, &[usize])],
) -> Model {
    let n = names.len();
    let frame = Frame::new(
        names.iter().map(|s| s.to_string()).collect(),
        &Relation::from_pairs(n, le.iter().copied()),
        Relation::from_pairs(n, r.iter().copied()),
    );
    let val: Valuation = val
        .iter()
        .map(|(p, ws)| (p.to_string(), ws.iter().copied().collect::<BTreeSet<_>>()))
        .collect();
    Model::new(frame, val).unwrap()
}

fn box_p_model() -> Model {
    model(&["w", "u"], &[], &[(0, 1)], &[("p", &[])])
}

#[test]
fn initial_clip_of_box_p() {
    let c = initial_clip(&box_p_model(), 0, &f("[]p"), LogicId::Fik).unwrap();
    assert_eq!(c.len(), 1);
    let t = c.tip(0);
    assert_eq!((t.name, t.world, t.rank, t.height), (0, 0, 0, 0));
    assert_eq!(*t.topic, [f("[]p"), f("p")].into_iter().collect());
    assert_eq!(c.ll().count() + c.tr().count(), 0);
    let rep = validate_clip(&c);
    assert!(rep.coherent && rep.regular);
}

#[test]
fn initial_clip_preconditions() {
    let m = box_p_model();
    let e = initial_clip(&m, 0, &f("[]p -> []p"), LogicId::Fik).unwrap_err();
    assert_eq!(e.code(), "BASE_MODEL_SATISFIES_A");
    // t <= s, t R u, s has no successor
    let bad = model(&["t", "s", "u"], &[(0, 1)], &[(0, 2)], &[("p", &[])]);
    let e = initial_clip(&bad, 0, &f("[]p"), LogicId::Fik).unwrap_err();
    assert_eq!(e.code(), "BASE_MODEL_WRONG_CLASS");
}

#[test]
fn degree_examples() {
    let m = model(&["w", "x"], &[(0, 1)], &[], &[("p", &[1])]);
    let t = Tip {
        name: 0,
        world: 0,
        topic: Arc::new([f("p")].into_iter().collect()),
        rank: 0,
        height: 0,
    };
    assert_eq!(degree(&t, &m), 0);
    let top = Tip {
        world: 1,
        ..t.clone()
    };
    assert_eq!(degree(&top, &m), 0);
    let m2 = model(&["w", "x"], &[(0, 1)], &[], &[("p", &[])]);
    assert_eq!(degree(&t, &m2), 1);
}

#[test]
fn strict_maximal_witnesses() {
    let chain = model(&["w", "x", "y"], &[(0, 1), (1, 2)], &[], &[("p", &[2])]);
    assert_eq!(find_strict_maximal_witness(&chain, 0, &f("p")).unwrap(), 1);
    let e = find_strict_maximal_witness(&chain, 2, &f("p")).unwrap_err();
    assert_eq!(e.code(), "NO_WITNESS");
    let fork = model(&["w", "x0", "x1"], &[(0, 1), (0, 2)], &[], &[("p", &[])]);
    assert_eq!(find_strict_maximal_witness(&fork, 0, &f("p")).unwrap(), 1);
}

#[test]
fn box_p_runs_through_one_accessibility_repair() {
    let m = box_p_model();
    let a = f("[]p");
    let c = initial_clip(&m, 0, &a, LogicId::Fik).unwrap();
    let ds = find_defects(&c, &DefectKind::ALL, None, None);
    assert_eq!(ds, vec![Defect::BoxAcc { tip: 0, b: f("p") }]);

    let c1 = repair_defect(&c, &ds[0]).unwrap();
    let t = c1.tip(1);
    assert_eq!((t.name, t.world, t.rank, t.height), (1, 1, 1, 0));
    assert_eq!(*t.topic, [f("p")].into_iter().collect());
    assert_eq!(c1.tr().collect::<Vec<_>>(), vec![(0, 1)]);
    assert!(find_defects(&c1, &DefectKind::ALL, None, None).is_empty());

    let out = saturate_with(&m, 0, &a, LogicId::Fik, &SaturationOptions::default()).unwrap();
    assert_eq!(out.clip.len(), 2);
    assert_eq!(out.trace.len(), 1);
    assert_eq!(out.trace[0].kind, DefectKind::BoxAcc);

    let sat = extract_saturated_model(&out.clip).unwrap();
    assert_eq!(sat.len(), 2);
    assert_eq!(
        sat.frame().le().pairs().collect::<Vec<_>>(),
        vec![(0, 0), (1, 1)]
    );
    assert_eq!(sat.frame().r().pairs().collect::<Vec<_>>(), vec![(0, 1)]);
    assert!(!satisfies(&sat, 0, &a, SemanticsVariant::Standard));

    let rep = verify_truth_lemma(&out.clip, &sat);
    assert!(rep.truth_lemma_ok && rep.root_falsified, "{rep:?}");
    assert!(validate_clip(&out.clip).all_ok());
}

#[test]
fn bottom_needs_no_repair() {
    let m = model(&["w"], &[], &[], &[]);
    let out = saturate_with(
        &m,
        0,
        &Formula::Bot,
        LogicId::Lik,
        &SaturationOptions::default(),
    )
    .unwrap();
    assert_eq!(out.clip.len(), 1);
    assert!(out.trace.is_empty());
}

#[test]
fn duplicate_names_are_incoherent() {
    let m = model(&["w", "u"], &[], &[(0, 1)], &[("p", &[])]);
    let ctx = SaturationContext::new(&m, &f("[]p"), LogicId::Fik).unwrap();
    let tip = |world| Tip {
        name: 0,
        world,
        topic: ctx.stratum(0),
        rank: 0,
        height: 0,
    };
    let c = Clip::from_parts(ctx.clone(), vec![tip(0), tip(1)], [], []);
    let rep = validate_clip(&c);
    assert!(!rep.coherent);
    let rep = verify_truth_lemma(&c, &m);
    assert!(!rep.truth_lemma_ok);
    assert!(rep.violations.iter().any(|v| v.detail.contains("skipped")));
}

#[test]
fn irregular_clip_is_reported() {
    let m = model(&["w", "u"], &[], &[(0, 1)], &[("p", &[])]);
    let ctx = SaturationContext::new(&m, &f("[]p"), LogicId::Fik).unwrap();
    let t = |name, world, rank| Tip {
        name,
        world,
        topic: ctx.stratum(rank),
        rank,
        height: 0,
    };
    let c = Clip::from_parts(
        ctx.clone(),
        vec![t(0, 0, 0), t(1, 0, 0), t(2, 1, 1)],
        [],
        [(0, 2), (1, 2)],
    );
    let rep = validate_clip(&c);
    assert!(rep.coherent);
    assert!(!rep.regular);
}

// w <= x, x R u, w R v, v <= u: forward and downward confluent
fn square() -> Model {
    model(
        &["w", "x", "u", "v"],
        &[(0, 1), (3, 2)],
        &[(1, 2), (0, 3)],
        &[("p", &[])],
    )
}

#[test]
fn downward_confluence_repair() {
    let m = square();
    assert!(frame_class_check(m.frame(), FrameClass::FDC).is_ok());
    let ctx = SaturationContext::new(&m, &f("[]p"), LogicId::Lik).unwrap();
    let t = |name, world, rank, height| Tip {
        name,
        world,
        topic: ctx.stratum(rank),
        rank,
        height,
    };
    let c = Clip::from_parts(
        ctx.clone(),
        vec![t(0, 0, 0, 0), t(1, 1, 0, 1), t(2, 2, 1, 1)],
        [(0, 1)],
        [(1, 2)],
    );
    let ds = find_defects(&c, &[DefectKind::DownConf], None, None);
    assert_eq!(ds, vec![Defect::DownConf { i: 0, j: 1, k: 2 }]);
    let c = repair_defect(&c, &ds[0]).unwrap();
    let n = c.tip(3);
    assert_eq!((n.name, n.world, n.rank, n.height), (3, 3, 1, 0));
    assert!(c.has_tr(0, 3) && c.has_ll(3, 2));
    assert!(find_defects(&c, &[DefectKind::DownConf], None, None).is_empty());
    let rep = validate_clip(&c);
    assert!(rep.coherent && rep.regular, "{:?}", rep.violations);

    // not a defect kind for FIK
    let ctx = SaturationContext::new(&m, &f("[]p"), LogicId::Fik).unwrap();
    let c = Clip::from_parts(
        ctx.clone(),
        vec![t(0, 0, 0, 0), t(1, 1, 0, 1), t(2, 2, 1, 1)],
        [(0, 1)],
        [(1, 2)],
    );
    assert!(find_defects(&c, &[DefectKind::DownConf], None, None).is_empty());
}

#[test]
fn forward_confluence_repair() {
    let m = square();
    let ctx = SaturationContext::new(&m, &f("[]p"), LogicId::Fik).unwrap();
    let t = |name, world, rank, height| Tip {
        name,
        world,
        topic: ctx.stratum(rank),
        rank,
        height,
    };
    let c = Clip::from_parts(
        ctx.clone(),
        vec![t(0, 0, 0, 0), t(1, 1, 0, 1), t(2, 3, 1, 0)],
        [(0, 1)],
        [(0, 2)],
    );
    let ds = find_defects(&c, &[DefectKind::FwdConf], None, None);
    assert_eq!(ds, vec![Defect::FwdConf { i: 1, j: 0, k: 2 }]);
    let c = repair_defect(&c, &ds[0]).unwrap();
    let n = c.tip(3);
    assert_eq!((n.name, n.world, n.rank, n.height), (3, 2, 1, 1));
    assert!(c.has_tr(1, 3) && c.has_ll(2, 3));
    let rep = validate_clip(&c);
    assert!(rep.coherent && rep.regular, "{:?}", rep.violations);
}

#[test]
fn clusters_in_the_base_are_collapsed() {
    // w0 and w1 form a cluster; p fails only at u, which w0 does not see
    let m = model(
        &["w0", "w1", "u", "v"],
        &[(0, 1), (1, 0), (2, 3)],
        &[(1, 2), (1, 3), (0, 3)],
        &[("p", &[3])],
    );
    assert!(frame_class_check(m.frame(), FrameClass::FC).is_ok());
    let a = f("[]p");
    assert!(!satisfies(&m, 0, &a, SemanticsVariant::Standard));
    assert!(m.frame().r().successors(0).all(|t| satisfies(
        &m,
        t,
        &f("p"),
        SemanticsVariant::Standard
    )));
    let out = saturate_with(&m, 0, &a, LogicId::Fik, &SaturationOptions::default()).unwrap();
    let rep = validate_clip(&out.clip);
    assert!(rep.all_ok(), "{:?}", rep.violations);
    assert_eq!(
        out.clip.context().world_name(out.clip.tip(0).world),
        "w0+w1"
    );
}

#[test]
fn maximality_repairs_climb_the_order() {
    // p | ~p at the bottom of a chain: the implication ~p needs a witness above
    let m = model(&["s", "t"], &[(0, 1)], &[], &[("p", &[1])]);
    let a = f("p | ~p");
    let out = saturate_with(&m, 0, &a, LogicId::Fik, &SaturationOptions::default()).unwrap();
    assert_eq!(out.trace.len(), 1);
    assert_eq!(out.trace[0].kind, DefectKind::ImplMax);
    assert!(out.trace[0].new_degree < out.trace[0].anchor_degree);
    let rep = validate_clip(&out.clip);
    assert!(rep.all_ok(), "{:?}", rep.violations);
}

#[test]
fn fuel_cap_is_enforced() {
    let m = model(&["s", "t"], &[(0, 1)], &[], &[("p", &[1])]);
    let e = saturate_with(
        &m,
        0,
        &f("p | ~p"),
        LogicId::Fik,
        &SaturationOptions { fuel: Some(0) },
    )
    .unwrap_err();
    assert_eq!(e.code(), "FUEL_EXHAUSTED");
}

#[test]
fn extraction_needs_a_clean_clip() {
    let c = initial_clip(&box_p_model(), 0, &f("[]p"), LogicId::Fik).unwrap();
    assert_eq!(
        extract_saturated_model(&c).unwrap_err().code(),
        "CLIP_NOT_CLEAN"
    );
}

#[test]
fn passes_are_no_ops_without_defects() {
    let c = initial_clip(&box_p_model(), 0, &f("[]p"), LogicId::Fik).unwrap();
    let same = run_pass(c.clone(), PassGroup::Maximality, 0).unwrap();
    assert_eq!(same.len(), 1);
    let same = run_pass(c.clone(), PassGroup::Downward, 0).unwrap();
    assert_eq!(same.len(), 1);
    let fixed = run_pass(c, PassGroup::Accessibility, 0).unwrap();
    assert_eq!(fixed.len(), 2);
}

#[test]
fn clip_records_round_trip() {
    let m = square();
    let a = f("[]p");
    let out = saturate_with(&m, 0, &a, LogicId::Lik, &SaturationOptions::default()).unwrap();
    let rec = ClipRecord::from_clip(&out.clip);
    let text = serde_json::to_string(&rec).unwrap();
    let back: ClipRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(back, rec);
    let c = back.to_clip().unwrap();
    assert_eq!(c.len(), out.clip.len());
    assert!(validate_clip(&c).all_ok());
}
