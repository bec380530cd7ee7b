use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{find_defects, Clip, DefectKind, SaturationError};
use crate::formula::{is_closed, modal_step};
use crate::kripke::{
    frame_class_check, Evaluator, Frame, FrameClass, Model, Relation, SemanticsVariant,
    TipProvenance,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub coherent: bool,
    pub regular: bool,
    pub clean: bool,
    pub frame_class_ok: bool,
    pub truth_lemma_ok: bool,
    pub root_falsified: bool,
    pub topic_invariant_ok: bool,
    pub homomorphism_ok: bool,
    pub upward_confluent_ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.coherent
            && self.regular
            && self.clean
            && self.frame_class_ok
            && self.truth_lemma_ok
            && self.root_falsified
            && self.topic_invariant_ok
            && self.homomorphism_ok
            && self.upward_confluent_ok
            && self.violations.is_empty()
    }

    fn fail(&mut self, check: &str, detail: String) {
        self.violations.push(Violation {
            check: check.to_string(),
            detail,
        });
    }
}

fn ll_closure(c: &Clip) -> Relation {
    Relation::from_pairs(c.len(), c.ll()).reflexive_transitive_closure()
}

fn check_coherence(c: &Clip, rep: &mut ValidationReport) {
    let base = c.base().frame();
    let tips = c.tips();
    let mut ok = true;
    let mut by_name: BTreeMap<usize, usize> = BTreeMap::new();
    for (pos, t) in tips.iter().enumerate() {
        if let Some(&first) = by_name.get(&t.name) {
            if tips[first] != *t {
                ok = false;
                rep.fail(
                    "coherence",
                    format!("two different tips are named {}", t.name),
                );
            }
        } else {
            by_name.insert(t.name, pos);
        }
    }
    for (a, b) in c.ll() {
        let (x, y) = (&tips[a], &tips[b]);
        let problem = if x.name == y.name {
            Some("endpoints share a name")
        } else if !base.leq(x.world, y.world) {
            Some("worlds are not ≤-related")
        } else if x.topic.is_empty() {
            Some("source topic is empty")
        } else if x.topic != y.topic {
            Some("topics differ")
        } else if x.rank != y.rank {
            Some("ranks differ")
        } else if y.height != x.height + 1 {
            Some("height does not go up by one")
        } else {
            None
        };
        if let Some(p) = problem {
            ok = false;
            rep.fail("coherence", format!("{} ≪ {}: {p}", x.name, y.name));
        }
    }
    for (a, b) in c.tr() {
        let (x, y) = (&tips[a], &tips[b]);
        let problem = if x.name == y.name {
            Some("endpoints share a name")
        } else if !base.acc(x.world, y.world) {
            Some("worlds are not R-related")
        } else if x.topic.is_empty() {
            Some("source topic is empty")
        } else if *y.topic != modal_step(&x.topic) {
            Some("target topic is not the modal step of the source topic")
        } else if y.rank != x.rank + 1 {
            Some("rank does not go up by one")
        } else if y.height != x.height {
            Some("heights differ")
        } else {
            None
        };
        if let Some(p) = problem {
            ok = false;
            rep.fail("coherence", format!("{} ▷ {}: {p}", x.name, y.name));
        }
    }
    rep.coherent = ok;
}

fn check_regularity(c: &Clip, rep: &mut ValidationReport) {
    let tips = c.tips();
    let mut ok = true;
    for k in 0..c.len() {
        for (rel, preds) in [("≪", c.ll_predecessors(k)), ("▷", c.tr_predecessors(k))] {
            let names: BTreeSet<usize> = preds.iter().map(|&p| tips[p].name).collect();
            if names.len() > 1 {
                ok = false;
                rep.fail(
                    "regularity",
                    format!(
                        "tip {} has {} {rel}-predecessors",
                        tips[k].name,
                        names.len()
                    ),
                );
            }
        }
        for &i in c.tr_predecessors(k) {
            for &j in c.ll_predecessors(k) {
                if !c.ll_predecessors(i).iter().any(|&l| c.has_tr(l, j)) {
                    ok = false;
                    rep.fail(
                        "regularity",
                        format!(
                            "{} ▷ {} and {} ≪ {} but no tip is ≪ {} and ▷ {}",
                            tips[i].name,
                            tips[k].name,
                            tips[j].name,
                            tips[k].name,
                            tips[i].name,
                            tips[j].name
                        ),
                    );
                }
            }
        }
    }
    rep.regular = ok;
}

fn check_topics(c: &Clip, rep: &mut ValidationReport) {
    let ctx = c.context();
    let mut ok = true;
    for t in c.tips() {
        if !is_closed(&t.topic) || !t.topic.is_subset(&ctx.sigma().members) {
            ok = false;
            rep.fail(
                "topic",
                format!("tip {}: topic is not a closed subset of Σ_A", t.name),
            );
        }
        if *t.topic != *ctx.stratum(t.rank) {
            ok = false;
            rep.fail(
                "topic",
                format!("tip {}: topic differs from stratum {}", t.name, t.rank),
            );
        }
        if t.rank > ctx.card() {
            ok = false;
            rep.fail(
                "topic",
                format!("tip {}: rank {} exceeds {}", t.name, t.rank, ctx.card()),
            );
        }
    }
    rep.topic_invariant_ok = ok;
}

fn clip_frame(c: &Clip, le: &Relation) -> Frame {
    let names = c.tips().iter().map(|t| format!("t{}", t.name)).collect();
    Frame::new(names, le, Relation::from_pairs(c.len(), c.tr()))
}

fn check_projection(c: &Clip, le: &Relation, rep: &mut ValidationReport) {
    let base = c.base().frame();
    let tips = c.tips();
    let mut ok = true;
    for (a, b) in le.pairs() {
        if !base.leq(tips[a].world, tips[b].world) {
            ok = false;
            rep.fail(
                "homomorphism",
                format!(
                    "{} ≪* {} but worlds are not ≤-related",
                    tips[a].name, tips[b].name
                ),
            );
        }
    }
    for (a, b) in c.tr() {
        if !base.acc(tips[a].world, tips[b].world) {
            ok = false;
            rep.fail(
                "homomorphism",
                format!(
                    "{} ▷ {} but worlds are not R-related",
                    tips[a].name, tips[b].name
                ),
            );
        }
    }
    rep.homomorphism_ok = ok;
    match frame_class_check(&clip_frame(c, le), FrameClass::UC) {
        Ok(()) => rep.upward_confluent_ok = true,
        Err(v) => {
            rep.upward_confluent_ok = false;
            rep.fail("upward confluence", v.to_string());
        }
    }
}

fn structural(c: &Clip) -> ValidationReport {
    let mut rep = ValidationReport {
        coherent: false,
        regular: false,
        clean: false,
        frame_class_ok: false,
        truth_lemma_ok: false,
        root_falsified: false,
        topic_invariant_ok: false,
        homomorphism_ok: false,
        upward_confluent_ok: false,
        violations: Vec::new(),
    };
    check_coherence(c, &mut rep);
    check_regularity(c, &mut rep);
    check_topics(c, &mut rep);
    check_projection(c, &ll_closure(c), &mut rep);
    rep
}

fn truth_lemma(c: &Clip, extracted: &Model, rep: &mut ValidationReport) {
    let ctx = c.context();
    let ev = Evaluator::new(extracted.frame());
    let mut cache = HashMap::new();
    let mut ok = true;
    for (pos, t) in c.tips().iter().enumerate() {
        for b in t.topic.iter() {
            let set = cache
                .entry(b.clone())
                .or_insert_with(|| ev.eval(b, extracted.val(), SemanticsVariant::Standard));
            let (there, here) = (set[pos], ctx.holds(t.world, b));
            if there != here {
                ok = false;
                rep.fail(
                    "truth lemma",
                    format!(
                        "tip {} {} {b} but its world {} {} it",
                        t.name,
                        if there { "satisfies" } else { "refutes" },
                        ctx.world_name(t.world),
                        if here { "satisfies" } else { "refutes" }
                    ),
                );
            }
        }
    }
    rep.truth_lemma_ok = ok;
    match c.position_of(0) {
        Some(p) if p < extracted.len() => {
            let root = c.root();
            rep.root_falsified = !ev.eval(root, extracted.val(), SemanticsVariant::Standard)[p];
            if !rep.root_falsified {
                rep.fail("falsification", format!("tip 0 satisfies {root}"));
            }
        }
        _ => rep.fail("falsification", "no tip named 0".to_string()),
    }
}

/// `W′` = tips, `≤′` = `≪*`, `R′` = `▷`, and an atom holds at a tip when it
/// holds at the tip's world. World `k` of the result is tip position `k`.
pub fn extract_saturated_model(c: &Clip) -> Result<Model, SaturationError> {
    let left = find_defects(c, &DefectKind::ALL, None, None).len();
    if left > 0 {
        return Err(SaturationError::ClipNotClean(left));
    }
    let frame = clip_frame(c, &ll_closure(c));
    let base = c.base();
    let val = base
        .val()
        .iter()
        .map(|(p, set)| {
            let tips = c.tips().iter().enumerate();
            (
                p.clone(),
                tips.filter(|(_, t)| set.contains(&t.world))
                    .map(|(i, _)| i)
                    .collect(),
            )
        })
        .collect();
    let provenance = c
        .tips()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let p = TipProvenance {
                name: t.name,
                world: base.frame().name(t.world).to_string(),
                rank: t.rank,
                height: t.height,
            };
            (i, p)
        })
        .collect();
    Model::new(frame, val)
        .map(|m| m.with_provenance(provenance))
        .map_err(|e| SaturationError::Invariant(format!("extracted valuation: {e}")))
}

/// Structural checks, then the truth lemma against `extracted` (skipped when
/// the clip is not coherent and regular).
pub fn verify_truth_lemma(c: &Clip, extracted: &Model) -> ValidationReport {
    let mut rep = structural(c);
    rep.clean = find_defects(c, &DefectKind::ALL, None, None).is_empty();
    if !(rep.coherent && rep.regular) {
        rep.fail(
            "truth lemma",
            "skipped: clip is not coherent and regular".to_string(),
        );
        return rep;
    }
    if extracted.len() != c.len() {
        rep.fail(
            "truth lemma",
            format!("model has {} worlds for {} tips", extracted.len(), c.len()),
        );
        return rep;
    }
    truth_lemma(c, extracted, &mut rep);
    rep
}

/// Every check at once; the semantic ones run on the extracted model when the
/// clip is clean.
pub fn validate_clip(c: &Clip) -> ValidationReport {
    let mut rep = structural(c);
    let defects = find_defects(c, &DefectKind::ALL, None, None);
    rep.clean = defects.is_empty();
    for d in defects.iter().take(20) {
        rep.fail("cleanness", d.describe(c));
    }
    if !(rep.coherent && rep.regular && rep.clean) {
        return rep;
    }
    let extracted = match extract_saturated_model(c) {
        Ok(m) => m,
        Err(e) => {
            rep.fail("extraction", e.to_string());
            return rep;
        }
    };
    let class = c.logic().upgraded_class();
    match frame_class_check(extracted.frame(), class) {
        Ok(()) => rep.frame_class_ok = true,
        Err(v) => rep.fail("frame class", format!("not in {class}: {v}")),
    }
    truth_lemma(c, &extracted, &mut rep);
    rep
}
