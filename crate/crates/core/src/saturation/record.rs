use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Clip, SaturationContext, SaturationError, Tip};
use crate::formula::{parse, FormulaSet};
use crate::kripke::Model;
use crate::logic::LogicId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TipRecord {
    pub name: usize,
    /// World name in the cluster-collapsed base model.
    pub world: String,
    pub topic: Vec<String>,
    pub rank: usize,
    pub height: usize,
}

/// Self-contained serialized clip: the base model as supplied, the root
/// formula, and tips and edges by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClipRecord {
    pub root: String,
    pub logic: LogicId,
    pub base: Model,
    pub tips: Vec<TipRecord>,
    pub ll: Vec<(usize, usize)>,
    pub tr: Vec<(usize, usize)>,
}

impl ClipRecord {
    pub fn from_clip(c: &Clip) -> ClipRecord {
        let ctx = c.context();
        let name = |p: usize| c.tip(p).name;
        ClipRecord {
            root: c.root().to_string(),
            logic: c.logic(),
            base: ctx.original().clone(),
            tips: c
                .tips()
                .iter()
                .map(|t| TipRecord {
                    name: t.name,
                    world: ctx.world_name(t.world).to_string(),
                    topic: t.topic.iter().map(|f| f.to_string()).collect(),
                    rank: t.rank,
                    height: t.height,
                })
                .collect(),
            ll: c.ll().map(|(a, b)| (name(a), name(b))).collect(),
            tr: c.tr().map(|(a, b)| (name(a), name(b))).collect(),
        }
    }

    /// Rebuilds the clip; edges attach to the first tip carrying each name.
    pub fn to_clip(&self) -> Result<Clip, SaturationError> {
        let bad = |m: String| SaturationError::Record(m);
        let root = parse(&self.root).map_err(|e| bad(format!("root formula: {e}")))?;
        let ctx = SaturationContext::new(&self.base, &root, self.logic)?;
        let mut tips = Vec::with_capacity(self.tips.len());
        for t in &self.tips {
            let world = ctx
                .base()
                .world(&t.world)
                .ok_or_else(|| bad(format!("tip {}: unknown world {}", t.name, t.world)))?;
            let mut topic = FormulaSet::new();
            for f in &t.topic {
                topic.insert(parse(f).map_err(|e| bad(format!("tip {}: {e}", t.name)))?);
            }
            tips.push(Tip {
                name: t.name,
                world,
                topic: Arc::new(topic),
                rank: t.rank,
                height: t.height,
            });
        }
        let pos = |n: usize| {
            tips.iter()
                .position(|t| t.name == n)
                .ok_or_else(|| bad(format!("edge mentions unknown tip {n}")))
        };
        let ll = self
            .ll
            .iter()
            .map(|&(a, b)| Ok((pos(a)?, pos(b)?)))
            .collect::<Result<Vec<_>, SaturationError>>()?;
        let tr = self
            .tr
            .iter()
            .map(|&(a, b)| Ok((pos(a)?, pos(b)?)))
            .collect::<Result<Vec<_>, SaturationError>>()?;
        Ok(Clip::from_parts(ctx, tips, ll, tr))
    }
}
