//! Bounded countermodel search over the logic's frame class, optional
//! saturation of the hit, and certificates that can be re-checked from their
//! stored contents alone.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::formula::{parse, Formula};
use crate::kripke::{
    enumerate_valuations, frame_class_check, frames_over_order, preorders, satisfies, Evaluator,
    Model, Relation, SemanticsVariant, MAX_ENUMERATION_SIZE,
};
use crate::logic::LogicId;
use crate::saturation::{
    extract_saturated_model, saturate_with, validate_clip, ClipRecord, SaturationOptions,
    ValidationReport,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_frame_size: usize,
    pub semantics: SemanticsVariant,
    pub run_saturation: bool,
    /// Repair cap for saturation; `None` uses the default.
    pub fuel: Option<u64>,
    /// Worker threads; `None` uses all cores.
    pub jobs: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_frame_size: 3,
            semantics: SemanticsVariant::Standard,
            run_saturation: false,
            fuel: None,
            jobs: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Frames of the class examined, in canonical order up to the hit.
    pub frames: u64,
    pub valuations: u64,
    /// Frame size of the hit.
    pub found_at: Option<usize>,
}

#[derive(Default)]
struct OrderScan {
    hit: Option<(Model, usize)>,
    frames: u64,
    valuations: u64,
}

fn scan_order(
    order: &Relation,
    a: &Formula,
    atoms: &[String],
    l: LogicId,
    sem: SemanticsVariant,
) -> OrderScan {
    let mut out = OrderScan::default();
    for frame in frames_over_order(order, l.frame_class()) {
        out.frames += 1;
        let ev = Evaluator::new(&frame);
        for val in enumerate_valuations(&frame, atoms) {
            out.valuations += 1;
            if let Some(w) = ev.eval(a, &val, sem).iter().position(|&b| !b) {
                let model =
                    Model::new(frame.clone(), val).expect("enumerated valuations are up-sets");
                out.hit = Some((model, w));
                return out;
            }
        }
    }
    out
}

fn search_in_pool(
    a: &Formula,
    l: LogicId,
    cfg: &SearchConfig,
) -> (Option<(Model, usize)>, SearchStats) {
    let atoms: Vec<String> = a.atoms().into_iter().collect();
    let chunk = rayon::current_num_threads().max(1) * 4;
    let mut stats = SearchStats::default();
    for size in 1..=cfg.max_frame_size.min(MAX_ENUMERATION_SIZE) {
        let orders = preorders(size);
        for batch in orders.chunks(chunk) {
            let scans: Vec<OrderScan> = batch
                .par_iter()
                .map(|o| scan_order(o, a, &atoms, l, cfg.semantics))
                .collect();
            for scan in scans {
                stats.frames += scan.frames;
                stats.valuations += scan.valuations;
                if scan.hit.is_some() {
                    stats.found_at = Some(size);
                    return (scan.hit, stats);
                }
            }
        }
    }
    (None, stats)
}

/// First falsifying `(model, world)` in canonical order (sizes ascending,
/// frames, valuations, worlds), with counts of what was examined.
pub fn search_countermodel_with_stats(
    a: &Formula,
    l: LogicId,
    cfg: &SearchConfig,
) -> (Option<(Model, usize)>, SearchStats) {
    match cfg.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(|| search_in_pool(a, l, cfg)),
        None => search_in_pool(a, l, cfg),
    }
}

pub fn search_countermodel(a: &Formula, l: LogicId, cfg: &SearchConfig) -> Option<(Model, usize)> {
    search_countermodel_with_stats(a, l, cfg).0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    NonTheorem,
    NoCountermodelUpToBound,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NonTheorem => "NonTheorem",
            Verdict::NoCountermodelUpToBound => "NoCountermodelUpToBound",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaturationEvidence {
    pub clip: ClipRecord,
    pub model: Model,
    pub report: ValidationReport,
    pub repairs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_path: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub verdict: Verdict,
    pub formula: String,
    pub logic: LogicId,
    pub bound: usize,
    pub semantics: SemanticsVariant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<Model>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub world: Option<String>,
    pub frames_examined: u64,
    pub valuations_examined: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturation: Option<SaturationEvidence>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Certificate, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Search, then (on a hit and if asked) saturate. A failed saturation keeps
/// the verdict and records the error under `diagnostics`.
///
/// The run trace of a saturation is returned alongside as JSON lines.
pub fn decide_with_trace(
    a: &Formula,
    l: LogicId,
    cfg: &SearchConfig,
) -> (Certificate, Option<String>) {
    let (hit, stats) = search_countermodel_with_stats(a, l, cfg);
    let mut cert = Certificate {
        verdict: Verdict::NoCountermodelUpToBound,
        formula: a.to_string(),
        logic: l,
        bound: cfg.max_frame_size,
        semantics: cfg.semantics,
        countermodel: None,
        world: None,
        frames_examined: stats.frames,
        valuations_examined: stats.valuations,
        saturation: None,
        diagnostics: Vec::new(),
    };
    let Some((model, w)) = hit else {
        return (cert, None);
    };
    cert.verdict = Verdict::NonTheorem;
    cert.world = Some(model.frame().name(w).to_string());
    let mut trace = None;
    if cfg.run_saturation {
        // the search classes are forward confluent, where all three
        // semantics agree, so the standard clauses used by saturation apply
        let opts = SaturationOptions { fuel: cfg.fuel };
        match saturate_with(&model, w, a, l, &opts) {
            Ok(out) => {
                let report = validate_clip(&out.clip);
                match extract_saturated_model(&out.clip) {
                    Ok(sat) => {
                        if !report.all_ok() {
                            cert.diagnostics
                                .push("saturated clip failed validation".to_string());
                        }
                        trace = Some(out.trace_jsonl());
                        cert.saturation = Some(SaturationEvidence {
                            clip: ClipRecord::from_clip(&out.clip),
                            model: sat,
                            report,
                            repairs: out.trace.len(),
                            trace_path: None,
                        });
                    }
                    Err(e) => cert.diagnostics.push(format!("saturation failed: {e}")),
                }
            }
            Err(e) => cert.diagnostics.push(format!("saturation failed: {e}")),
        }
    }
    cert.countermodel = Some(model);
    (cert, trace)
}

pub fn decide(a: &Formula, l: LogicId, cfg: &SearchConfig) -> Certificate {
    decide_with_trace(a, l, cfg).0
}

/// Re-checks a certificate from its stored contents; `Err` says what failed.
pub fn check_certificate(c: &Certificate) -> Result<(), String> {
    let a = parse(&c.formula).map_err(|e| format!("formula does not parse: {e}"))?;
    if c.bound == 0 {
        return Err("bound must be at least 1".into());
    }
    match c.verdict {
        Verdict::NoCountermodelUpToBound => {
            if c.countermodel.is_some() || c.world.is_some() || c.saturation.is_some() {
                return Err("a bounded-search verdict carries no countermodel".into());
            }
            Ok(())
        }
        Verdict::NonTheorem => {
            let m = c.countermodel.as_ref().ok_or("no countermodel")?;
            let name = c.world.as_deref().ok_or("no world")?;
            let w = m
                .world(name)
                .ok_or_else(|| format!("unknown world {name}"))?;
            if !m.is_val_closed() {
                return Err("valuation is not upward closed".into());
            }
            frame_class_check(m.frame(), c.logic.frame_class())
                .map_err(|v| format!("countermodel not in {}: {v}", c.logic.frame_class()))?;
            if satisfies(m, w, &a, c.semantics) {
                return Err(format!("{name} satisfies the formula"));
            }
            if let Some(ev) = &c.saturation {
                check_saturation(c, &a, m, w, ev)?;
            }
            Ok(())
        }
    }
}

fn check_saturation(
    c: &Certificate,
    a: &Formula,
    m: &Model,
    w: usize,
    ev: &SaturationEvidence,
) -> Result<(), String> {
    if ev.clip.logic != c.logic || ev.clip.base != *m {
        return Err("saturation evidence is about another logic or base model".into());
    }
    if parse(&ev.clip.root).ok().as_ref() != Some(a) {
        return Err("saturation evidence is about another formula".into());
    }
    let clip = ev.clip.to_clip().map_err(|e| e.to_string())?;
    let tip0 = clip.position_of(0).ok_or("no tip named 0")?;
    if clip.tip(tip0).world != clip.context().class_of()[w] {
        return Err("tip 0 does not sit on the countermodel's world".into());
    }
    let report = validate_clip(&clip);
    if !report.all_ok() {
        let first = report
            .violations
            .first()
            .map(|v| v.detail.clone())
            .unwrap_or_default();
        return Err(format!("saturated clip fails validation: {first}"));
    }
    if report != ev.report {
        return Err("stored validation report differs from a fresh one".into());
    }
    let sat = extract_saturated_model(&clip).map_err(|e| e.to_string())?;
    if sat != ev.model {
        return Err("stored saturated model differs from the clip's".into());
    }
    frame_class_check(sat.frame(), c.logic.upgraded_class())
        .map_err(|v| format!("saturated model not in {}: {v}", c.logic.upgraded_class()))?;
    if satisfies(&sat, tip0, a, SemanticsVariant::Standard) {
        return Err("saturated model does not falsify the formula at tip 0".into());
    }
    Ok(())
}

pub fn verify_certificate(c: &Certificate) -> bool {
    check_certificate(c).is_ok()
}
