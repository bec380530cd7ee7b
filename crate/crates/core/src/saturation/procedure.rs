use std::fmt;

use serde::{Deserialize, Serialize};

use super::clip::initial_clip;
use super::defect::{apply_repair, is_current, tip_degree};
use super::{find_defects, Clip, Defect, DefectKind, SaturationError};
use crate::formula::Formula;
use crate::kripke::Model;
use crate::logic::LogicId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PassGroup {
    Maximality,
    Accessibility,
    Downward,
    Forward,
}

impl PassGroup {
    pub const ORDER: [PassGroup; 4] = [
        PassGroup::Maximality,
        PassGroup::Accessibility,
        PassGroup::Downward,
        PassGroup::Forward,
    ];

    pub fn kinds(self) -> &'static [DefectKind] {
        match self {
            PassGroup::Maximality => &[DefectKind::ImplMax, DefectKind::BoxMax],
            PassGroup::Accessibility => &[DefectKind::BoxAcc, DefectKind::DiaAcc],
            PassGroup::Downward => &[DefectKind::DownConf],
            PassGroup::Forward => &[DefectKind::FwdConf],
        }
    }
}

impl fmt::Display for PassGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PassGroup::Maximality => "maximality",
            PassGroup::Accessibility => "accessibility",
            PassGroup::Downward => "downward",
            PassGroup::Forward => "forward",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SaturationOptions {
    /// Cap on the total number of repairs; `None` means `4^(Card(Σ_A)+2)`.
    pub fuel: Option<u64>,
}

impl SaturationOptions {
    pub fn default_fuel(card: usize) -> u64 {
        4u64.saturating_pow(card.saturating_add(2).min(u32::MAX as usize) as u32)
    }

    fn fuel_for(&self, card: usize) -> u64 {
        self.fuel.unwrap_or_else(|| Self::default_fuel(card))
    }
}

/// One line of the repair trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairRecord {
    pub pass: PassGroup,
    pub rank: usize,
    pub height: usize,
    pub kind: DefectKind,
    pub anchor: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub formula: Option<String>,
    pub new_tip: usize,
    pub witness_world: String,
    pub new_rank: usize,
    pub new_height: usize,
    pub anchor_degree: usize,
    pub new_degree: usize,
}

#[derive(Clone, Debug)]
pub struct SaturationOutcome {
    pub clip: Clip,
    pub trace: Vec<RepairRecord>,
    /// Number of ranks the outer loop went through.
    pub ranks: usize,
}

impl SaturationOutcome {
    pub fn trace_jsonl(&self) -> String {
        self.trace
            .iter()
            .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
            .collect()
    }
}

struct Engine {
    fuel: u64,
    used: u64,
    trace: Vec<RepairRecord>,
}

impl Engine {
    fn new(fuel: u64) -> Engine {
        Engine {
            fuel,
            used: 0,
            trace: Vec::new(),
        }
    }

    fn repair(
        &mut self,
        clip: &mut Clip,
        d: &Defect,
        pass: PassGroup,
    ) -> Result<(), SaturationError> {
        if self.used >= self.fuel {
            return Err(SaturationError::FuelExhausted(self.fuel));
        }
        self.used += 1;
        let ctx = clip.context().clone();
        let anchor = clip.tip(d.anchor()).clone();
        let anchor_degree = tip_degree(&ctx, &anchor);
        let done = apply_repair(clip, d)?;
        let new = clip.tip(done.new_tip).clone();
        let new_degree = tip_degree(&ctx, &new);

        let fail = |what: String| {
            Err(SaturationError::Invariant(format!(
                "after {}: {what}",
                d.describe(clip)
            )))
        };
        if *new.topic != *ctx.stratum(new.rank) {
            return fail(format!(
                "tip {} has a topic other than the rank-{} stratum",
                new.name, new.rank
            ));
        }
        if new.rank > ctx.card() {
            return fail(format!(
                "tip {} has rank {} above {}",
                new.name,
                new.rank,
                ctx.card()
            ));
        }
        match pass {
            PassGroup::Maximality => {
                if new_degree >= anchor_degree {
                    return fail(format!("degree went from {anchor_degree} to {new_degree}"));
                }
                if new.rank != anchor.rank || new.height != anchor.height + 1 {
                    return fail(format!(
                        "tip {} is not one level above tip {}",
                        new.name, anchor.name
                    ));
                }
            }
            _ => {
                if new.rank != anchor.rank + 1 || new.height != anchor.height {
                    return fail(format!(
                        "tip {} has rank {} and height {}, anchor has {} and {}",
                        new.name, new.rank, new.height, anchor.rank, anchor.height
                    ));
                }
            }
        }
        self.trace.push(RepairRecord {
            pass,
            rank: anchor.rank,
            height: anchor.height,
            kind: d.kind(),
            anchor: anchor.name,
            formula: d.formula().map(|f| f.to_string()),
            new_tip: new.name,
            witness_world: ctx.world_name(done.witness).to_string(),
            new_rank: new.rank,
            new_height: new.height,
            anchor_degree,
            new_degree,
        });
        Ok(())
    }

    fn repair_batch(
        &mut self,
        clip: &mut Clip,
        group: PassGroup,
        alpha: usize,
        x: usize,
    ) -> Result<(), SaturationError> {
        for d in find_defects(clip, group.kinds(), Some(alpha), Some(x)) {
            // an earlier repair of the batch may already have fixed it
            if is_current(clip, &d) {
                self.repair(clip, &d, group)?;
            }
        }
        Ok(())
    }

    fn pass(
        &mut self,
        clip: &mut Clip,
        group: PassGroup,
        alpha: usize,
    ) -> Result<(), SaturationError> {
        if group == PassGroup::Downward && clip.logic() != LogicId::Lik {
            return Ok(());
        }
        let stalled = |x: i64| {
            Err(SaturationError::Invariant(format!(
                "{group} pass at rank {alpha}: defects left behind height {x}"
            )))
        };
        if group == PassGroup::Downward {
            let mut x = clip.max_height_at_rank(alpha) as i64;
            loop {
                let left = find_defects(clip, group.kinds(), Some(alpha), None);
                if left.is_empty() {
                    return Ok(());
                }
                if x < 0 || left.iter().all(|d| d.height(clip) as i64 > x) {
                    return stalled(x);
                }
                self.repair_batch(clip, group, alpha, x as usize)?;
                x -= 1;
            }
        } else {
            let mut x = 0usize;
            loop {
                let left = find_defects(clip, group.kinds(), Some(alpha), None);
                if left.is_empty() {
                    return Ok(());
                }
                if left.iter().all(|d| d.height(clip) < x) {
                    return stalled(x as i64);
                }
                self.repair_batch(clip, group, alpha, x)?;
                x += 1;
            }
        }
    }
}

/// Repairs every defect of the group at rank `alpha`, height by height.
pub fn run_pass(clip: Clip, group: PassGroup, alpha: usize) -> Result<Clip, SaturationError> {
    let mut clip = clip;
    let fuel = SaturationOptions::default_fuel(clip.context().card());
    Engine::new(fuel).pass(&mut clip, group, alpha)?;
    Ok(clip)
}

pub fn saturate_with(
    m: &Model,
    s0: usize,
    a: &Formula,
    l: LogicId,
    opts: &SaturationOptions,
) -> Result<SaturationOutcome, SaturationError> {
    let mut clip = initial_clip(m, s0, a, l)?;
    let card = clip.context().card();
    let mut engine = Engine::new(opts.fuel_for(card));
    let mut alpha = 0;
    while !find_defects(&clip, &DefectKind::ALL, None, None).is_empty() {
        if alpha > card {
            return Err(SaturationError::Invariant(format!(
                "defects remain after rank {card}"
            )));
        }
        for group in PassGroup::ORDER {
            engine.pass(&mut clip, group, alpha)?;
        }
        alpha += 1;
    }
    Ok(SaturationOutcome {
        clip,
        trace: engine.trace,
        ranks: alpha,
    })
}

/// Runs the procedure from the initial clip of `s0` until the clip is clean.
pub fn saturate(m: &Model, s0: usize, a: &Formula, l: LogicId) -> Result<Clip, SaturationError> {
    saturate_with(m, s0, a, l, &SaturationOptions::default()).map(|o| o.clip)
}
