//! Decision support for the intuitionistic modal logics FIK and LIK: formulas,
//! birelational semantics, bounded countermodel search, and the saturation
//! construction that turns a countermodel into one of a stronger frame class.

pub mod decide;
pub mod formula;
pub mod kripke;
pub mod logic;
pub mod saturation;
