//! The propositional modal language: syntax trees, text front end, and the
//! closed-set machinery (`Σ_A`, the one-modal-step projection and its
//! iterates) that bounds the saturation procedure.

mod closure;
mod parse;
mod random;
mod render;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub use closure::{closure_iterate, closure_of, is_closed, modal_step, ClosureSet};
pub use parse::{parse, ParseError};
pub use random::random_formula;

/// Finite set of formulas with canonical (derived `Ord`) iteration order.
pub type FormulaSet = BTreeSet<Formula>;

/// A formula of the intuitionistic modal language.
///
/// Negation is not primitive: `~A` is `A -> false`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Arc<str>),
    Top,
    Bot,
    Impl(Arc<Formula>, Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
    Dia(Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        Formula::Impl(Arc::new(self), Arc::new(rhs))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Arc::new(self), Arc::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Arc::new(self), Arc::new(rhs))
    }

    pub fn boxed(self) -> Formula {
        Formula::Box(Arc::new(self))
    }

    pub fn dia(self) -> Formula {
        Formula::Dia(Arc::new(self))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        self.implies(Formula::Bot)
    }

    /// Number of atoms, constants and connectives. Parentheses are not counted.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 1,
            Formula::Impl(a, b) | Formula::And(a, b) | Formula::Or(a, b) => 1 + a.len() + b.len(),
            Formula::Box(a) | Formula::Dia(a) => 1 + a.len(),
        }
    }

    /// Nesting depth of connectives; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 0,
            Formula::Impl(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Box(a) | Formula::Dia(a) => 1 + a.depth(),
        }
    }

    /// Atoms occurring in the formula, in name order.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.to_string());
            }
            Formula::Top | Formula::Bot => {}
            Formula::Impl(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Box(a) | Formula::Dia(a) => a.collect_atoms(out),
        }
    }

    /// Simultaneous substitution of atoms. Images are not rewritten again.
    pub fn substitute(&self, binding: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Atom(p) => binding.get(&**p).cloned().unwrap_or_else(|| self.clone()),
            Formula::Top | Formula::Bot => self.clone(),
            Formula::Impl(a, b) => a.substitute(binding).implies(b.substitute(binding)),
            Formula::And(a, b) => a.substitute(binding).and(b.substitute(binding)),
            Formula::Or(a, b) => a.substitute(binding).or(b.substitute(binding)),
            Formula::Box(a) => a.substitute(binding).boxed(),
            Formula::Dia(a) => a.substitute(binding).dia(),
        }
    }

    /// Body of a `[]B` or `<>B` formula.
    pub fn modal_body(&self) -> Option<&Formula> {
        match self {
            Formula::Box(b) | Formula::Dia(b) => Some(b),
            _ => None,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render::render(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// `‖A‖`.
pub fn formula_length(f: &Formula) -> usize {
    f.len()
}

pub fn render(f: &Formula) -> String {
    render::render(f)
}

pub fn substitute(f: &Formula, binding: &BTreeMap<String, Formula>) -> Formula {
    f.substitute(binding)
}
