//! Selective filtration: tips and clips over a finite base model, the five
//! defect kinds and their repairs, the rank-by-rank saturation procedure, and
//! extraction plus verification of the saturated model.
//!
//! The base model replaces the canonical model: every query the construction
//! needs (satisfaction, maximality, `R`-successors, strict `≤`) is answered by
//! model checking. Nontrivial `≤`-clusters are collapsed first (see
//! [`Model::cluster_quotient`]), so that strict order behaves as on a
//! partial order.

mod clip;
mod defect;
mod procedure;
mod record;
mod validate;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::{closure_of, ClosureSet, Formula, FormulaSet};
use crate::kripke::{frame_class_check, satisfies, Evaluator, Model, SemanticsVariant};
use crate::logic::LogicId;

pub use clip::{initial_clip, Clip, Tip};
pub use defect::{
    degree, find_defects, find_strict_maximal_witness, repair_defect, Defect, DefectKind,
};
pub use procedure::{
    run_pass, saturate, saturate_with, PassGroup, RepairRecord, SaturationOptions,
    SaturationOutcome,
};
pub use record::{ClipRecord, TipRecord};
pub use validate::{
    extract_saturated_model, validate_clip, verify_truth_lemma, ValidationReport, Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SaturationError {
    #[error("BASE_MODEL_WRONG_CLASS: base model is not in {class}: {detail}")]
    BaseModelWrongClass { class: String, detail: String },
    #[error("BASE_MODEL_SATISFIES_A: world {world} satisfies {formula}")]
    BaseModelSatisfiesA { world: String, formula: String },
    #[error("BASE_MODEL_BAD_WORLD: no world {0}")]
    BadWorld(String),
    #[error("WITNESS_NOT_FOUND: {kind} at tip {anchor}: {detail}")]
    WitnessNotFound {
        kind: DefectKind,
        anchor: usize,
        detail: String,
    },
    #[error("NO_WITNESS: {world} is maximal with respect to {formula}")]
    NoWitness { world: String, formula: String },
    #[error("FUEL_EXHAUSTED: more than {0} repairs")]
    FuelExhausted(u64),
    #[error("CLIP_NOT_CLEAN: {0} defect(s) remain")]
    ClipNotClean(usize),
    #[error("INVARIANT_VIOLATION: {0}")]
    Invariant(String),
    #[error("CLIP_RECORD: {0}")]
    Record(String),
}

impl SaturationError {
    pub fn code(&self) -> &'static str {
        match self {
            SaturationError::BaseModelWrongClass { .. } => "BASE_MODEL_WRONG_CLASS",
            SaturationError::BaseModelSatisfiesA { .. } => "BASE_MODEL_SATISFIES_A",
            SaturationError::BadWorld(_) => "BASE_MODEL_BAD_WORLD",
            SaturationError::WitnessNotFound { .. } => "WITNESS_NOT_FOUND",
            SaturationError::NoWitness { .. } => "NO_WITNESS",
            SaturationError::FuelExhausted(_) => "FUEL_EXHAUSTED",
            SaturationError::ClipNotClean(_) => "CLIP_NOT_CLEAN",
            SaturationError::Invariant(_) => "INVARIANT_VIOLATION",
            SaturationError::Record(_) => "CLIP_RECORD",
        }
    }
}

/// Everything a run consults and never changes: the (cluster-collapsed) base
/// model, `Σ_A` with its strata, and truth and maximality tables for `Σ_A`.
#[derive(Debug)]
pub struct SaturationContext {
    original: Model,
    base: Model,
    class_of: Vec<usize>,
    root: Formula,
    logic: LogicId,
    sigma: ClosureSet,
    strata: Vec<Arc<FormulaSet>>,
    truth: HashMap<Formula, Vec<bool>>,
    maximal: HashMap<Formula, Vec<bool>>,
    strict_up: Vec<Vec<usize>>,
}

impl SaturationContext {
    /// Checks that `m` lies in the logic's class and prepares the tables.
    pub fn new(
        m: &Model,
        root: &Formula,
        logic: LogicId,
    ) -> Result<Arc<SaturationContext>, SaturationError> {
        let class = logic.frame_class();
        if let Err(v) = frame_class_check(m.frame(), class) {
            return Err(SaturationError::BaseModelWrongClass {
                class: class.to_string(),
                detail: v.to_string(),
            });
        }
        let (base, class_of) = m.cluster_quotient();
        let sigma = closure_of(root);
        let strata = sigma.strata().into_iter().map(Arc::new).collect();
        let ev = Evaluator::new(base.frame());
        let frame = base.frame();
        let strict_up: Vec<Vec<usize>> = frame
            .worlds()
            .map(|s| frame.worlds().filter(|&t| frame.lt(s, t)).collect())
            .collect();
        let mut truth = HashMap::new();
        let mut maximal = HashMap::new();
        for b in sigma.members.iter() {
            let set = ev.eval(b, base.val(), SemanticsVariant::Standard);
            let max: Vec<bool> = frame
                .worlds()
                .map(|s| strict_up[s].iter().all(|&t| set[t]))
                .collect();
            truth.insert(b.clone(), set);
            maximal.insert(b.clone(), max);
        }
        Ok(Arc::new(SaturationContext {
            original: m.clone(),
            base,
            class_of,
            root: root.clone(),
            logic,
            sigma,
            strata,
            truth,
            maximal,
            strict_up,
        }))
    }

    /// The model the caller supplied.
    pub fn original(&self) -> &Model {
        &self.original
    }

    /// The model tips refer to (clusters collapsed).
    pub fn base(&self) -> &Model {
        &self.base
    }

    /// Maps worlds of the original model to worlds of [`Self::base`].
    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn root(&self) -> &Formula {
        &self.root
    }

    pub fn logic(&self) -> LogicId {
        self.logic
    }

    pub fn sigma(&self) -> &ClosureSet {
        &self.sigma
    }

    pub fn card(&self) -> usize {
        self.sigma.len()
    }

    /// `Σ_A^α`; empty beyond the last stratum.
    pub fn stratum(&self, alpha: usize) -> Arc<FormulaSet> {
        match self.strata.get(alpha) {
            Some(s) => s.clone(),
            None => self.strata.last().expect("at least one stratum").clone(),
        }
    }

    /// Truth of a `Σ_A` member at a base world; other formulas are evaluated directly.
    pub fn holds(&self, w: usize, f: &Formula) -> bool {
        match self.truth.get(f) {
            Some(set) => set[w],
            None => satisfies(&self.base, w, f, SemanticsVariant::Standard),
        }
    }

    /// Every strict `≤`-successor of `w` satisfies `f`.
    pub fn is_maximal(&self, w: usize, f: &Formula) -> bool {
        match self.maximal.get(f) {
            Some(set) => set[w],
            None => self.strict_up[w].iter().all(|&t| self.holds(t, f)),
        }
    }

    pub fn strict_successors(&self, w: usize) -> &[usize] {
        &self.strict_up[w]
    }

    pub fn world_name(&self, w: usize) -> &str {
        self.base.frame().name(w)
    }
}

#[cfg(test)]
mod tests;
