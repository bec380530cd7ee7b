use std::collections::BTreeSet;
use std::sync::Arc;

use super::{SaturationContext, SaturationError};
use crate::formula::{Formula, FormulaSet};
use crate::kripke::{satisfies, Model, SemanticsVariant};
use crate::logic::LogicId;

/// `(name, world, topic, rank, height)`; `world` indexes the context's base model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tip {
    pub name: usize,
    pub world: usize,
    pub topic: Arc<FormulaSet>,
    pub rank: usize,
    pub height: usize,
}

/// Tips with the relations `≪` (`ll`) and `▷` (`tr`).
///
/// Edges are stored between positions in [`Clip::tips`]. Clips built by the
/// procedure name each tip by its position.
#[derive(Clone, Debug)]
pub struct Clip {
    ctx: Arc<SaturationContext>,
    tips: Vec<Tip>,
    ll: BTreeSet<(usize, usize)>,
    tr: BTreeSet<(usize, usize)>,
    ll_succ: Vec<Vec<usize>>,
    ll_pred: Vec<Vec<usize>>,
    tr_succ: Vec<Vec<usize>>,
    tr_pred: Vec<Vec<usize>>,
}

impl Clip {
    /// Builds a clip from explicit parts without checking anything (use
    /// [`super::validate_clip`] for that). Edges are pairs of positions.
    pub fn from_parts(
        ctx: Arc<SaturationContext>,
        tips: Vec<Tip>,
        ll: impl IntoIterator<Item = (usize, usize)>,
        tr: impl IntoIterator<Item = (usize, usize)>,
    ) -> Clip {
        let n = tips.len();
        let mut clip = Clip {
            ctx,
            tips,
            ll: BTreeSet::new(),
            tr: BTreeSet::new(),
            ll_succ: vec![Vec::new(); n],
            ll_pred: vec![Vec::new(); n],
            tr_succ: vec![Vec::new(); n],
            tr_pred: vec![Vec::new(); n],
        };
        for (a, b) in ll {
            clip.add_ll(a, b);
        }
        for (a, b) in tr {
            clip.add_tr(a, b);
        }
        clip
    }

    pub fn context(&self) -> &Arc<SaturationContext> {
        &self.ctx
    }

    pub fn base(&self) -> &Model {
        self.ctx.base()
    }

    pub fn root(&self) -> &Formula {
        self.ctx.root()
    }

    pub fn logic(&self) -> LogicId {
        self.ctx.logic()
    }

    pub fn tips(&self) -> &[Tip] {
        &self.tips
    }

    pub fn tip(&self, pos: usize) -> &Tip {
        &self.tips[pos]
    }

    pub fn len(&self) -> usize {
        self.tips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tips.is_empty()
    }

    pub fn position_of(&self, name: usize) -> Option<usize> {
        self.tips.iter().position(|t| t.name == name)
    }

    pub fn ll(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ll.iter().copied()
    }

    pub fn tr(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.tr.iter().copied()
    }

    pub fn has_ll(&self, a: usize, b: usize) -> bool {
        self.ll.contains(&(a, b))
    }

    pub fn has_tr(&self, a: usize, b: usize) -> bool {
        self.tr.contains(&(a, b))
    }

    pub fn ll_successors(&self, pos: usize) -> &[usize] {
        &self.ll_succ[pos]
    }

    pub fn ll_predecessors(&self, pos: usize) -> &[usize] {
        &self.ll_pred[pos]
    }

    pub fn tr_successors(&self, pos: usize) -> &[usize] {
        &self.tr_succ[pos]
    }

    pub fn tr_predecessors(&self, pos: usize) -> &[usize] {
        &self.tr_pred[pos]
    }

    /// `h_α`: largest height among rank-`α` tips, 0 when there are none.
    pub fn max_height_at_rank(&self, alpha: usize) -> usize {
        self.tips
            .iter()
            .filter(|t| t.rank == alpha)
            .map(|t| t.height)
            .max()
            .unwrap_or(0)
    }

    pub fn max_height(&self) -> usize {
        self.tips.iter().map(|t| t.height).max().unwrap_or(0)
    }

    pub fn max_rank(&self) -> usize {
        self.tips.iter().map(|t| t.rank).max().unwrap_or(0)
    }

    pub(crate) fn fresh_name(&self) -> usize {
        self.tips.iter().map(|t| t.name + 1).max().unwrap_or(0)
    }

    pub(crate) fn push_tip(&mut self, tip: Tip) -> usize {
        self.tips.push(tip);
        self.ll_succ.push(Vec::new());
        self.ll_pred.push(Vec::new());
        self.tr_succ.push(Vec::new());
        self.tr_pred.push(Vec::new());
        self.tips.len() - 1
    }

    pub(crate) fn add_ll(&mut self, a: usize, b: usize) {
        if self.ll.insert((a, b)) {
            self.ll_succ[a].push(b);
            self.ll_pred[b].push(a);
        }
    }

    pub(crate) fn add_tr(&mut self, a: usize, b: usize) {
        if self.tr.insert((a, b)) {
            self.tr_succ[a].push(b);
            self.tr_pred[b].push(a);
        }
    }
}

/// The single-tip clip `(0, s0, Σ_A, 0, 0)`.
pub fn initial_clip(
    m: &Model,
    s0: usize,
    a: &Formula,
    l: LogicId,
) -> Result<Clip, SaturationError> {
    if s0 >= m.len() {
        return Err(SaturationError::BadWorld(format!("#{s0}")));
    }
    let ctx = SaturationContext::new(m, a, l)?;
    if satisfies(m, s0, a, SemanticsVariant::Standard) {
        return Err(SaturationError::BaseModelSatisfiesA {
            world: m.frame().name(s0).to_string(),
            formula: a.to_string(),
        });
    }
    let tip = Tip {
        name: 0,
        world: ctx.class_of()[s0],
        topic: ctx.stratum(0),
        rank: 0,
        height: 0,
    };
    Ok(Clip::from_parts(ctx, vec![tip], [], []))
}
