use super::{Formula, FormulaSet};

/// `Σ_A` together with the formula it was generated from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSet {
    pub members: FormulaSet,
    pub root: Formula,
}

impl ClosureSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.members.contains(f)
    }

    /// `Σ_A^α`.
    pub fn stratum(&self, alpha: usize) -> FormulaSet {
        closure_iterate(&self.members, alpha)
    }

    /// `Σ_A^0, Σ_A^1, …` up to and including the first empty stratum.
    pub fn strata(&self) -> Vec<FormulaSet> {
        let mut out = vec![self.members.clone()];
        while !out.last().unwrap().is_empty() {
            let next = modal_step(out.last().unwrap());
            out.push(next);
        }
        out
    }
}

fn insert_closure(f: &Formula, out: &mut FormulaSet) {
    if !out.insert(f.clone()) {
        return;
    }
    match f {
        Formula::Atom(_) | Formula::Top | Formula::Bot => {}
        Formula::Impl(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
            insert_closure(a, out);
            insert_closure(b, out);
        }
        Formula::Box(a) | Formula::Dia(a) => insert_closure(a, out),
    }
}

/// `Σ_A`: the least closed set containing `a`.
pub fn closure_of(a: &Formula) -> ClosureSet {
    let mut members = FormulaSet::new();
    insert_closure(a, &mut members);
    ClosureSet {
        members,
        root: a.clone(),
    }
}

/// `Γ°`: the union of `Σ_B` over all `[]B` and `<>B` in `g`.
pub fn modal_step(g: &FormulaSet) -> FormulaSet {
    let mut out = FormulaSet::new();
    for f in g {
        if let Some(body) = f.modal_body() {
            insert_closure(body, &mut out);
        }
    }
    out
}

/// `Γ^α`.
pub fn closure_iterate(g: &FormulaSet, alpha: usize) -> FormulaSet {
    let mut cur = g.clone();
    for _ in 0..alpha {
        if cur.is_empty() {
            break;
        }
        cur = modal_step(&cur);
    }
    cur
}

pub fn is_closed(g: &FormulaSet) -> bool {
    g.iter().all(|f| match f {
        Formula::Atom(_) | Formula::Top | Formula::Bot => true,
        Formula::Impl(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
            g.contains(&**a) && g.contains(&**b)
        }
        Formula::Box(a) | Formula::Dia(a) => g.contains(&**a),
    })
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn set(items: &[&str]) -> FormulaSet {
        items.iter().map(|s| parse(s).unwrap()).collect()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(closure_of(&parse("p").unwrap()).members, set(&["p"]));
        assert_eq!(
            closure_of(&parse("[]p").unwrap()).members,
            set(&["[]p", "p"])
        );
        assert_eq!(
            closure_of(&parse("<>(p & q)").unwrap()).members,
            set(&["<>(p & q)", "p & q", "p", "q"])
        );
        // shared subformulas are counted once
        assert_eq!(closure_of(&parse("p & p").unwrap()).len(), 2);
        assert_eq!(
            closure_of(&parse("~p").unwrap()).members,
            set(&["~p", "p", "false"])
        );
    }

    #[test]
    fn modal_step_examples() {
        assert_eq!(modal_step(&set(&["[]p", "<>q", "r"])), set(&["p", "q"]));
        assert!(modal_step(&set(&["p", "q & r"])).is_empty());
        let g = set(&["[]p", "p"]);
        let step = modal_step(&g);
        assert_eq!(step, set(&["p"]));
        assert!(step.len() < g.len());
    }

    #[test]
    fn iterate_examples() {
        let sigma = closure_of(&parse("[][]p").unwrap()).members;
        assert_eq!(closure_iterate(&sigma, 0), set(&["[][]p", "[]p", "p"]));
        assert_eq!(closure_iterate(&sigma, 1), set(&["[]p", "p"]));
        assert_eq!(closure_iterate(&sigma, 2), set(&["p"]));
        assert!(closure_iterate(&sigma, 3).is_empty());
        assert!(closure_iterate(&sigma, 10).is_empty());
    }

    #[test]
    fn strata_end_at_empty() {
        let c = closure_of(&parse("[][]p").unwrap());
        let s = c.strata();
        assert_eq!(s.len(), 4);
        assert!(s[3].is_empty());
        assert_eq!(c.stratum(2), s[2]);
    }

    #[test]
    fn closedness() {
        assert!(is_closed(&set(&["[]p", "p"])));
        assert!(!is_closed(&set(&["[]p"])));
        assert!(!is_closed(&set(&["p -> q", "p"])));
        assert!(is_closed(&FormulaSet::new()));
    }
}
