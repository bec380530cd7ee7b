//! Birelational frames and models, the three `<>` clauses, frame classes
//! given by confluence conditions, and exhaustive enumeration of small frames.

mod enumerate;
mod frame;
mod model;
mod random;
mod relation;
mod semantics;

use thiserror::Error;

pub use enumerate::{
    enumerate_frames, enumerate_valuations, frames_over_order, preorders, up_sets, valid_in_frame,
    valid_in_frame_under, Countervaluation, FrameEnumeration, ValuationEnumeration,
    MAX_ENUMERATION_SIZE,
};
pub use frame::{
    confluence_violation, frame_class_check, preorder_closure, Confluence, ConfluenceViolation,
    Frame, FrameClass,
};
pub use model::{frame_from_json, Model, ModelError, TipProvenance, Valuation};
pub use random::random_model;
pub use relation::Relation;
pub use semantics::{satisfies, true_in_model, truth_set, Evaluator, SemanticsVariant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("no model in the class after {attempts} attempts (seed {seed})")]
    GenerationFailed { seed: u64, attempts: u32 },
}
