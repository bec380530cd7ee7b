use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Frame, Model, Valuation};
use crate::formula::Formula;

/// Which clause interprets `<>`. The other connectives are shared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SemanticsVariant {
    /// `<>A` at `s`: some `t ≤ s` has an `R`-successor satisfying `A`.
    #[default]
    Standard,
    /// `<>A` at `s`: some `R`-successor of `s` satisfies `A`.
    FischerServi,
    /// `<>A` at `s`: every `t ≥ s` has an `R`-successor satisfying `A`.
    Wijesekera,
}

impl SemanticsVariant {
    pub const ALL: [SemanticsVariant; 3] = [
        SemanticsVariant::Standard,
        SemanticsVariant::FischerServi,
        SemanticsVariant::Wijesekera,
    ];
}

impl fmt::Display for SemanticsVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemanticsVariant::Standard => "std",
            SemanticsVariant::FischerServi => "fs",
            SemanticsVariant::Wijesekera => "w",
        })
    }
}

impl FromStr for SemanticsVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "std" | "standard" => Ok(SemanticsVariant::Standard),
            "fs" | "fischer-servi" => Ok(SemanticsVariant::FischerServi),
            "w" | "wijesekera" => Ok(SemanticsVariant::Wijesekera),
            _ => Err(format!("unknown semantics `{s}` (expected std, fs or w)")),
        }
    }
}

/// Adjacency lists of a frame, reused across valuations and formulas.
pub struct Evaluator<'a> {
    frame: &'a Frame,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    succ: Vec<Vec<usize>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(frame: &'a Frame) -> Self {
        let up = frame
            .worlds()
            .map(|s| frame.le().successors(s).collect())
            .collect();
        let down = frame
            .worlds()
            .map(|s| frame.le().predecessors(s).collect())
            .collect();
        let succ = frame
            .worlds()
            .map(|s| frame.r().successors(s).collect())
            .collect();
        Evaluator {
            frame,
            up,
            down,
            succ,
        }
    }

    pub fn frame(&self) -> &Frame {
        self.frame
    }

    /// Truth set of `f`, one flag per world.
    pub fn eval(&self, f: &Formula, val: &Valuation, sem: SemanticsVariant) -> Vec<bool> {
        let n = self.frame.len();
        match f {
            Formula::Atom(p) => match val.get(&**p) {
                Some(set) => (0..n).map(|w| set.contains(&w)).collect(),
                None => vec![false; n],
            },
            Formula::Top => vec![true; n],
            Formula::Bot => vec![false; n],
            Formula::And(a, b) => {
                let (a, b) = (self.eval(a, val, sem), self.eval(b, val, sem));
                a.iter().zip(&b).map(|(x, y)| *x && *y).collect()
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.eval(a, val, sem), self.eval(b, val, sem));
                a.iter().zip(&b).map(|(x, y)| *x || *y).collect()
            }
            Formula::Impl(a, b) => {
                let (a, b) = (self.eval(a, val, sem), self.eval(b, val, sem));
                (0..n)
                    .map(|s| self.up[s].iter().all(|&t| !a[t] || b[t]))
                    .collect()
            }
            Formula::Box(a) => {
                let a = self.eval(a, val, sem);
                let local: Vec<bool> = (0..n).map(|t| self.succ[t].iter().all(|&u| a[u])).collect();
                (0..n)
                    .map(|s| self.up[s].iter().all(|&t| local[t]))
                    .collect()
            }
            Formula::Dia(a) => {
                let a = self.eval(a, val, sem);
                let local: Vec<bool> = (0..n).map(|t| self.succ[t].iter().any(|&u| a[u])).collect();
                match sem {
                    SemanticsVariant::Standard => (0..n)
                        .map(|s| self.down[s].iter().any(|&t| local[t]))
                        .collect(),
                    SemanticsVariant::FischerServi => local,
                    SemanticsVariant::Wijesekera => (0..n)
                        .map(|s| self.up[s].iter().all(|&t| local[t]))
                        .collect(),
                }
            }
        }
    }
}

pub fn truth_set(m: &Model, f: &Formula, sem: SemanticsVariant) -> Vec<bool> {
    Evaluator::new(m.frame()).eval(f, m.val(), sem)
}

pub fn satisfies(m: &Model, w: usize, f: &Formula, sem: SemanticsVariant) -> bool {
    truth_set(m, f, sem)[w]
}

/// `f` holds at every world under the standard clauses.
pub fn true_in_model(m: &Model, f: &Formula) -> bool {
    truth_set(m, f, SemanticsVariant::Standard)
        .into_iter()
        .all(|b| b)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::formula::parse;
    use crate::kripke::Relation;

    fn model(n: usize, le: &[(usize, usize)], r: &[(usize, usize)], p: &[usize]) -> Model {
        let frame = Frame::with_default_names(
            &Relation::from_pairs(n, le.iter().copied()),
            Relation::from_pairs(n, r.iter().copied()),
        );
        let mut val = Valuation::new();
        val.insert("p".into(), p.iter().copied().collect::<BTreeSet<_>>());
        Model::new(frame, val).unwrap()
    }

    #[test]
    fn excluded_middle_fails_on_a_chain() {
        let m = model(2, &[(0, 1)], &[], &[1]);
        let f = parse("p | ~p").unwrap();
        assert!(!satisfies(&m, 0, &f, SemanticsVariant::Standard));
        assert!(satisfies(&m, 1, &f, SemanticsVariant::Standard));
        assert!(!true_in_model(&m, &f));
    }

    #[test]
    fn diamond_looks_at_successors() {
        let m = model(2, &[], &[(0, 1)], &[1]);
        assert!(satisfies(
            &m,
            0,
            &parse("<>p").unwrap(),
            SemanticsVariant::Standard
        ));
        assert!(!satisfies(
            &m,
            1,
            &parse("<>p").unwrap(),
            SemanticsVariant::Standard
        ));
    }

    #[test]
    fn standard_and_fischer_servi_split_off_forward_confluence() {
        // t=0 <= s=1, t R u=2, p at u
        let m = model(3, &[(0, 1)], &[(0, 2)], &[2]);
        let f = parse("<>p").unwrap();
        assert!(satisfies(&m, 1, &f, SemanticsVariant::Standard));
        assert!(!satisfies(&m, 1, &f, SemanticsVariant::FischerServi));
        assert!(!satisfies(&m, 1, &f, SemanticsVariant::Wijesekera));
    }

    #[test]
    fn box_quantifies_over_upper_worlds() {
        // 0 <= 1, 1 R 2, p false at 2: []p fails at 0 through 1
        let m = model(3, &[(0, 1)], &[(1, 2)], &[]);
        assert!(!satisfies(
            &m,
            0,
            &parse("[]p").unwrap(),
            SemanticsVariant::Standard
        ));
        assert!(satisfies(
            &m,
            2,
            &parse("[]p").unwrap(),
            SemanticsVariant::Standard
        ));
        assert!(true_in_model(&m, &parse("[]true").unwrap()));
        assert!(true_in_model(&m, &Formula::Top));
    }

    #[test]
    fn wijesekera_requires_successors_above() {
        // 0 R 2 with p at 2; 0 <= 1 and 1 has no successor
        let m = model(3, &[(0, 1)], &[(0, 2)], &[2]);
        let f = parse("<>p").unwrap();
        assert!(satisfies(&m, 0, &f, SemanticsVariant::FischerServi));
        assert!(!satisfies(&m, 0, &f, SemanticsVariant::Wijesekera));
    }
}
