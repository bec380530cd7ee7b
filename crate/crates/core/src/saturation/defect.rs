use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Clip, SaturationContext, SaturationError, Tip};
use crate::formula::{modal_step, Formula};
use crate::kripke::{truth_set, Model, SemanticsVariant};
use crate::logic::LogicId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DefectKind {
    ImplMax,
    BoxMax,
    BoxAcc,
    DiaAcc,
    DownConf,
    FwdConf,
}

impl DefectKind {
    pub const ALL: [DefectKind; 6] = [
        DefectKind::ImplMax,
        DefectKind::BoxMax,
        DefectKind::BoxAcc,
        DefectKind::DiaAcc,
        DefectKind::DownConf,
        DefectKind::FwdConf,
    ];
}

impl fmt::Display for DefectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A defect of a clip. Tip fields are positions in [`Clip::tips`]; for the
/// confluence kinds `i` is the anchor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Defect {
    /// `B -> C` in the topic, refuted at a non-maximal world, no `≪`-successor refutes it.
    ImplMax { tip: usize, b: Formula, c: Formula },
    /// `[]B` in the topic, refuted at a non-maximal world, no `≪`-successor refutes it.
    BoxMax { tip: usize, b: Formula },
    /// `[]B` refuted at a world maximal for it, every `▷`-successor satisfies `B`.
    BoxAcc { tip: usize, b: Formula },
    /// `<>B` holds, no `▷`-successor satisfies `B`.
    DiaAcc { tip: usize, b: Formula },
    /// `i ≪ j ▷ k` with no `l` such that `i ▷ l ≪ k`.
    DownConf { i: usize, j: usize, k: usize },
    /// `j ≪ i`, `j ▷ k` with no `l` such that `i ▷ l` and `k ≪ l`.
    FwdConf { i: usize, j: usize, k: usize },
}

impl Defect {
    pub fn kind(&self) -> DefectKind {
        match self {
            Defect::ImplMax { .. } => DefectKind::ImplMax,
            Defect::BoxMax { .. } => DefectKind::BoxMax,
            Defect::BoxAcc { .. } => DefectKind::BoxAcc,
            Defect::DiaAcc { .. } => DefectKind::DiaAcc,
            Defect::DownConf { .. } => DefectKind::DownConf,
            Defect::FwdConf { .. } => DefectKind::FwdConf,
        }
    }

    pub fn anchor(&self) -> usize {
        match *self {
            Defect::ImplMax { tip, .. }
            | Defect::BoxMax { tip, .. }
            | Defect::BoxAcc { tip, .. }
            | Defect::DiaAcc { tip, .. } => tip,
            Defect::DownConf { i, .. } | Defect::FwdConf { i, .. } => i,
        }
    }

    /// The topic formula the defect is about, if any.
    pub fn formula(&self) -> Option<Formula> {
        match self {
            Defect::ImplMax { b, c, .. } => Some(b.clone().implies(c.clone())),
            Defect::BoxMax { b, .. } | Defect::BoxAcc { b, .. } => Some(b.clone().boxed()),
            Defect::DiaAcc { b, .. } => Some(b.clone().dia()),
            Defect::DownConf { .. } | Defect::FwdConf { .. } => None,
        }
    }

    pub fn rank(&self, clip: &Clip) -> usize {
        clip.tip(self.anchor()).rank
    }

    pub fn height(&self, clip: &Clip) -> usize {
        clip.tip(self.anchor()).height
    }

    fn sort_key(&self, clip: &Clip) -> (usize, DefectKind, Option<Formula>, usize, usize) {
        let name = |p: usize| clip.tip(p).name;
        let (j, k) = match *self {
            Defect::DownConf { j, k, .. } | Defect::FwdConf { j, k, .. } => (name(j), name(k)),
            _ => (0, 0),
        };
        (name(self.anchor()), self.kind(), self.formula(), j, k)
    }

    pub fn describe(&self, clip: &Clip) -> String {
        let name = |p: usize| clip.tip(p).name;
        match self {
            Defect::DownConf { i, j, k } | Defect::FwdConf { i, j, k } => {
                format!("{} ({}, {}, {})", self.kind(), name(*i), name(*j), name(*k))
            }
            _ => format!(
                "{} at tip {} on {}",
                self.kind(),
                name(self.anchor()),
                self.formula().expect("formula defect")
            ),
        }
    }
}

fn push_tip_defects(clip: &Clip, pos: usize, kinds: &[DefectKind], out: &mut Vec<Defect>) {
    let ctx = clip.context();
    let tip = clip.tip(pos);
    let s = tip.world;
    let want = |k| kinds.contains(&k);
    for f in tip.topic.iter() {
        match f {
            Formula::Impl(b, c) if want(DefectKind::ImplMax) => {
                if !ctx.holds(s, f)
                    && !ctx.is_maximal(s, f)
                    && clip
                        .ll_successors(pos)
                        .iter()
                        .all(|&q| ctx.holds(clip.tip(q).world, f))
                {
                    out.push(Defect::ImplMax {
                        tip: pos,
                        b: (**b).clone(),
                        c: (**c).clone(),
                    });
                }
            }
            Formula::Box(b) => {
                if ctx.holds(s, f) {
                    continue;
                }
                let maximal = ctx.is_maximal(s, f);
                if want(DefectKind::BoxMax)
                    && !maximal
                    && clip
                        .ll_successors(pos)
                        .iter()
                        .all(|&q| ctx.holds(clip.tip(q).world, f))
                {
                    out.push(Defect::BoxMax {
                        tip: pos,
                        b: (**b).clone(),
                    });
                }
                if want(DefectKind::BoxAcc)
                    && maximal
                    && clip
                        .tr_successors(pos)
                        .iter()
                        .all(|&q| ctx.holds(clip.tip(q).world, b))
                {
                    out.push(Defect::BoxAcc {
                        tip: pos,
                        b: (**b).clone(),
                    });
                }
            }
            Formula::Dia(b)
                if want(DefectKind::DiaAcc)
                    && ctx.holds(s, f)
                    && clip
                        .tr_successors(pos)
                        .iter()
                        .all(|&q| !ctx.holds(clip.tip(q).world, b)) =>
            {
                out.push(Defect::DiaAcc {
                    tip: pos,
                    b: (**b).clone(),
                });
            }
            _ => {}
        }
    }
    if want(DefectKind::DownConf) && clip.logic() == LogicId::Lik {
        for &j in clip.ll_successors(pos) {
            for &k in clip.tr_successors(j) {
                if !clip.tr_successors(pos).iter().any(|&l| clip.has_ll(l, k)) {
                    out.push(Defect::DownConf { i: pos, j, k });
                }
            }
        }
    }
    if want(DefectKind::FwdConf) {
        for &j in clip.ll_predecessors(pos) {
            for &k in clip.tr_successors(j) {
                if !clip.tr_successors(pos).iter().any(|&l| clip.has_ll(k, l)) {
                    out.push(Defect::FwdConf { i: pos, j, k });
                }
            }
        }
    }
}

/// Defects of the given kinds whose anchor has the given rank (and height,
/// if given), ordered by anchor name, kind, formula, then the other tips.
pub fn find_defects(
    clip: &Clip,
    kinds: &[DefectKind],
    rank: Option<usize>,
    height: Option<usize>,
) -> Vec<Defect> {
    let mut out = Vec::new();
    for (pos, tip) in clip.tips().iter().enumerate() {
        if rank.is_some_and(|r| tip.rank != r) || height.is_some_and(|h| tip.height != h) {
            continue;
        }
        push_tip_defects(clip, pos, kinds, &mut out);
    }
    out.sort_by_cached_key(|d| d.sort_key(clip));
    out
}

/// Whether `d` is (still) a defect of `clip`.
pub(crate) fn is_current(clip: &Clip, d: &Defect) -> bool {
    let mut found = Vec::new();
    push_tip_defects(clip, d.anchor(), &[d.kind()], &mut found);
    found.contains(d)
}

/// Number of topic formulas refuted at the tip's world at which that world is
/// not maximal.
pub fn degree(t: &Tip, m: &Model) -> usize {
    let frame = m.frame();
    t.topic
        .iter()
        .filter(|b| {
            let set = truth_set(m, b, SemanticsVariant::Standard);
            !set[t.world] && frame.worlds().any(|u| frame.lt(t.world, u) && !set[u])
        })
        .count()
}

pub(crate) fn tip_degree(ctx: &SaturationContext, t: &Tip) -> usize {
    t.topic
        .iter()
        .filter(|b| !ctx.holds(t.world, b) && !ctx.is_maximal(t.world, b))
        .count()
}

/// Lowest-index `t` with `s < t`, `t` refuting `b`, and `t` maximal with respect to `b`.
pub fn find_strict_maximal_witness(
    m: &Model,
    s: usize,
    b: &Formula,
) -> Result<usize, SaturationError> {
    let frame = m.frame();
    let set = truth_set(m, b, SemanticsVariant::Standard);
    let maximal = |t: usize| frame.worlds().all(|u| !frame.lt(t, u) || set[u]);
    frame
        .worlds()
        .find(|&t| frame.lt(s, t) && !set[t] && maximal(t))
        .ok_or_else(|| SaturationError::NoWitness {
            world: frame.name(s).to_string(),
            formula: b.to_string(),
        })
}

fn ctx_maximal_witness(ctx: &SaturationContext, s: usize, b: &Formula) -> Option<usize> {
    ctx.strict_successors(s)
        .iter()
        .copied()
        .find(|&t| !ctx.holds(t, b) && ctx.is_maximal(t, b))
}

/// What a repair did: the new tip's position and its world.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Repaired {
    pub new_tip: usize,
    pub witness: usize,
}

enum Edge {
    Ll(usize, usize),
    Tr(usize, usize),
}

pub(crate) fn apply_repair(clip: &mut Clip, d: &Defect) -> Result<Repaired, SaturationError> {
    let ctx = clip.context().clone();
    let base = ctx.base().frame();
    let anchor = clip.tip(d.anchor()).clone();
    let s = anchor.world;
    let missing = |detail: String| SaturationError::WitnessNotFound {
        kind: d.kind(),
        anchor: anchor.name,
        detail,
    };
    let name = clip.fresh_name();
    let new = clip.len();
    let (tip, edges) = match d {
        Defect::ImplMax { .. } | Defect::BoxMax { .. } => {
            let f = d.formula().expect("maximality defects carry a formula");
            let t = ctx_maximal_witness(&ctx, s, &f).ok_or_else(|| {
                missing(format!(
                    "no maximal world strictly above {} refutes {f}",
                    ctx.world_name(s)
                ))
            })?;
            let tip = Tip {
                name,
                world: t,
                topic: anchor.topic.clone(),
                rank: anchor.rank,
                height: anchor.height + 1,
            };
            (tip, vec![Edge::Ll(d.anchor(), new)])
        }
        Defect::BoxAcc { b, .. } | Defect::DiaAcc { b, .. } => {
            let want = matches!(d, Defect::DiaAcc { .. });
            let t = base
                .r()
                .successors(s)
                .find(|&t| ctx.holds(t, b) == want)
                .ok_or_else(|| {
                    missing(format!(
                        "no R-successor of {} where {b} is {}",
                        ctx.world_name(s),
                        if want { "true" } else { "false" }
                    ))
                })?;
            let tip = Tip {
                name,
                world: t,
                topic: std::sync::Arc::new(modal_step(&anchor.topic)),
                rank: anchor.rank + 1,
                height: anchor.height,
            };
            (tip, vec![Edge::Tr(d.anchor(), new)])
        }
        Defect::DownConf { k, .. } | Defect::FwdConf { k, .. } => {
            let down = matches!(d, Defect::DownConf { .. });
            let target = clip.tip(*k).clone();
            let u = target.world;
            let v = base
                .r()
                .successors(s)
                .find(|&v| if down { base.leq(v, u) } else { base.leq(u, v) })
                .ok_or_else(|| {
                    missing(format!(
                        "no R-successor of {} {} {}",
                        ctx.world_name(s),
                        if down { "below" } else { "above" },
                        ctx.world_name(u)
                    ))
                })?;
            let topic = modal_step(&anchor.topic);
            if topic != *target.topic || target.rank != anchor.rank + 1 {
                return Err(SaturationError::Invariant(format!(
                    "{}: tip {} does not carry the modal step of tip {}",
                    d.describe(clip),
                    target.name,
                    anchor.name
                )));
            }
            let expected = if down {
                target.height.checked_sub(1)
            } else {
                Some(target.height + 1)
            };
            if expected != Some(anchor.height) {
                return Err(SaturationError::Invariant(format!(
                    "{}: heights {} and {} do not fit",
                    d.describe(clip),
                    anchor.height,
                    target.height
                )));
            }
            let tip = Tip {
                name,
                world: v,
                topic: target.topic.clone(),
                rank: anchor.rank + 1,
                height: anchor.height,
            };
            let ll = if down {
                Edge::Ll(new, *k)
            } else {
                Edge::Ll(*k, new)
            };
            (tip, vec![Edge::Tr(d.anchor(), new), ll])
        }
    };
    let witness = tip.world;
    clip.push_tip(tip);
    for e in edges {
        match e {
            Edge::Ll(a, b) => clip.add_ll(a, b),
            Edge::Tr(a, b) => clip.add_tr(a, b),
        }
    }
    Ok(Repaired {
        new_tip: new,
        witness,
    })
}

/// Applies the prescribed repair to a copy of the clip.
pub fn repair_defect(clip: &Clip, d: &Defect) -> Result<Clip, SaturationError> {
    if !is_current(clip, d) {
        return Err(SaturationError::Invariant(format!(
            "{} is not a defect of the clip",
            d.describe(clip)
        )));
    }
    let mut out = clip.clone();
    apply_repair(&mut out, d)?;
    Ok(out)
}
