use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{KripkeError, Relation};

/// Birelational frame `(W, ≤, R)`. Worlds are indices; names are for I/O only.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Frame {
    names: Vec<String>,
    le: Relation,
    r: Relation,
}

impl Frame {
    /// Builds a frame, closing `le` reflexive-transitively.
    pub fn new(names: Vec<String>, le: &Relation, r: Relation) -> Frame {
        assert!(!names.is_empty(), "a frame needs at least one world");
        assert_eq!(names.len(), le.size());
        assert_eq!(names.len(), r.size());
        Frame {
            names,
            le: le.reflexive_transitive_closure(),
            r,
        }
    }

    /// Frame on worlds named `w0, w1, …`.
    pub fn with_default_names(le: &Relation, r: Relation) -> Frame {
        let names = (0..le.size()).map(|i| format!("w{i}")).collect();
        Frame::new(names, le, r)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn worlds(&self) -> std::ops::Range<usize> {
        0..self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn world(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn le(&self) -> &Relation {
        &self.le
    }

    pub fn r(&self) -> &Relation {
        &self.r
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.le.contains(a, b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.le.strictly_below(a, b)
    }

    #[inline]
    pub fn acc(&self, a: usize, b: usize) -> bool {
        self.r.contains(a, b)
    }

    /// Whether `set` is `≤`-closed.
    pub fn is_up_set(&self, set: impl Fn(usize) -> bool) -> bool {
        self.le.pairs().all(|(a, b)| !set(a) || set(b))
    }

    /// `≤`-equivalence classes, each sorted, ordered by least member.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for w in self.worlds() {
            if seen[w] {
                continue;
            }
            let class: Vec<usize> = self
                .worlds()
                .filter(|&v| self.leq(w, v) && self.leq(v, w))
                .collect();
            for &v in &class {
                seen[v] = true;
            }
            out.push(class);
        }
        out
    }
}

/// One of the four confluence conditions relating `≤` and `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Confluence {
    Forward,
    Backward,
    Downward,
    Upward,
}

impl fmt::Display for Confluence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confluence::Forward => "forward",
            Confluence::Backward => "backward",
            Confluence::Downward => "downward",
            Confluence::Upward => "upward",
        })
    }
}

/// A set of confluence requirements; the empty set is `C_all`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FrameClass {
    pub forward: bool,
    pub backward: bool,
    pub downward: bool,
    pub upward: bool,
}

impl FrameClass {
    pub const ALL: FrameClass = FrameClass::of(false, false, false, false);
    pub const FC: FrameClass = FrameClass::of(true, false, false, false);
    pub const BC: FrameClass = FrameClass::of(false, true, false, false);
    pub const DC: FrameClass = FrameClass::of(false, false, true, false);
    pub const UC: FrameClass = FrameClass::of(false, false, false, true);
    pub const FDC: FrameClass = FrameClass::of(true, false, true, false);
    pub const FUC: FrameClass = FrameClass::of(true, false, false, true);
    pub const FDUC: FrameClass = FrameClass::of(true, false, true, true);

    pub const fn of(forward: bool, backward: bool, downward: bool, upward: bool) -> FrameClass {
        FrameClass {
            forward,
            backward,
            downward,
            upward,
        }
    }

    pub fn requires(&self, c: Confluence) -> bool {
        match c {
            Confluence::Forward => self.forward,
            Confluence::Backward => self.backward,
            Confluence::Downward => self.downward,
            Confluence::Upward => self.upward,
        }
    }

    /// Every frame of `self` is a frame of `other`.
    pub fn is_subclass_of(&self, other: &FrameClass) -> bool {
        [
            Confluence::Forward,
            Confluence::Backward,
            Confluence::Downward,
            Confluence::Upward,
        ]
        .iter()
        .all(|&c| !other.requires(c) || self.requires(c))
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut tag = String::new();
        if self.forward {
            tag.push('f');
        }
        if self.backward {
            tag.push('b');
        }
        if self.downward {
            tag.push('d');
        }
        if self.upward {
            tag.push('u');
        }
        if tag.is_empty() {
            write!(f, "C_all")
        } else {
            write!(f, "C_{tag}c")
        }
    }
}

impl FromStr for FrameClass {
    type Err = String;

    /// Accepts `all`, or a tag such as `fc`, `fdc`, `fduc` (optionally `C_`-prefixed).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches("C_").to_ascii_lowercase();
        if s == "all" {
            return Ok(FrameClass::ALL);
        }
        let body = s
            .strip_suffix('c')
            .filter(|b| !b.is_empty())
            .ok_or_else(|| format!("unknown frame class `{s}`"))?;
        let mut class = FrameClass::ALL;
        for ch in body.chars() {
            match ch {
                'f' => class.forward = true,
                'b' => class.backward = true,
                'd' => class.downward = true,
                'u' => class.upward = true,
                _ => return Err(format!("unknown frame class `{s}`")),
            }
        }
        Ok(class)
    }
}

/// Triple `(s, t, u)` for which a confluence inclusion fails, named as in the
/// quantifier of that condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfluenceViolation {
    pub condition: Confluence,
    pub s: usize,
    pub t: usize,
    pub u: usize,
}

impl fmt::Display for ConfluenceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, t, u) = (self.s, self.t, self.u);
        match self.condition {
            Confluence::Forward => {
                write!(
                    f,
                    "not forward confluent: {t} <= {s}, {t} R {u}, no v with {s} R v and {u} <= v"
                )
            }
            Confluence::Backward => {
                write!(
                    f,
                    "not backward confluent: {s} R {t}, {t} <= {u}, no v with {s} <= v and v R {u}"
                )
            }
            Confluence::Downward => {
                write!(
                    f,
                    "not downward confluent: {s} <= {t}, {t} R {u}, no v with {s} R v and v <= {u}"
                )
            }
            Confluence::Upward => {
                write!(
                    f,
                    "not upward confluent: {s} R {t}, {u} <= {t}, no v with v <= {s} and v R {u}"
                )
            }
        }
    }
}

/// First violated triple of one confluence condition, in `(s, t, u)` index order.
pub fn confluence_violation(frame: &Frame, c: Confluence) -> Option<ConfluenceViolation> {
    let n = frame.len();
    let violation = |s, t, u| {
        Some(ConfluenceViolation {
            condition: c,
            s,
            t,
            u,
        })
    };
    for s in 0..n {
        for t in 0..n {
            for u in 0..n {
                let holds = match c {
                    Confluence::Forward => {
                        !(frame.leq(t, s) && frame.acc(t, u))
                            || (0..n).any(|v| frame.acc(s, v) && frame.leq(u, v))
                    }
                    Confluence::Backward => {
                        !(frame.acc(s, t) && frame.leq(t, u))
                            || (0..n).any(|v| frame.leq(s, v) && frame.acc(v, u))
                    }
                    Confluence::Downward => {
                        !(frame.leq(s, t) && frame.acc(t, u))
                            || (0..n).any(|v| frame.acc(s, v) && frame.leq(v, u))
                    }
                    Confluence::Upward => {
                        !(frame.acc(s, t) && frame.leq(u, t))
                            || (0..n).any(|v| frame.leq(v, s) && frame.acc(v, u))
                    }
                };
                if !holds {
                    return violation(s, t, u);
                }
            }
        }
    }
    None
}

/// Checks every confluence the class requires, in the order forward,
/// backward, downward, upward.
pub fn frame_class_check(frame: &Frame, class: FrameClass) -> Result<(), ConfluenceViolation> {
    for c in [
        Confluence::Forward,
        Confluence::Backward,
        Confluence::Downward,
        Confluence::Upward,
    ] {
        if class.requires(c) {
            if let Some(v) = confluence_violation(frame, c) {
                return Err(v);
            }
        }
    }
    Ok(())
}

/// Reflexive-transitive closure of named pairs over the named worlds.
pub fn preorder_closure(
    pairs: &[(String, String)],
    worlds: &[String],
) -> Result<Relation, KripkeError> {
    let index = |w: &str| {
        worlds
            .iter()
            .position(|x| x == w)
            .ok_or_else(|| KripkeError::UnknownWorld(w.to_string()))
    };
    let mut r = Relation::empty(worlds.len());
    for (a, b) in pairs {
        r.insert(index(a)?, index(b)?);
    }
    Ok(r.reflexive_transitive_closure())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    fn pairs(p: &[(&str, &str)]) -> Vec<(String, String)> {
        p.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn preorder_closure_examples() {
        let r = preorder_closure(&pairs(&[("a", "b")]), &names(&["a", "b"])).unwrap();
        assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(0, 0), (0, 1), (1, 1)]);

        let r = preorder_closure(&[], &names(&["a"])).unwrap();
        assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(0, 0)]);

        let r =
            preorder_closure(&pairs(&[("a", "b"), ("b", "c")]), &names(&["a", "b", "c"])).unwrap();
        assert!(r.contains(0, 2));

        assert_eq!(
            preorder_closure(&pairs(&[("a", "z")]), &names(&["a"])),
            Err(KripkeError::UnknownWorld("z".into()))
        );
    }

    #[test]
    fn identity_order_satisfies_every_confluence() {
        for mask in 0..16u64 {
            let f = Frame::with_default_names(&Relation::identity(2), Relation::from_mask(2, mask));
            assert!(frame_class_check(&f, FrameClass::of(true, true, true, true)).is_ok());
        }
    }

    #[test]
    fn forward_but_not_downward() {
        // w=0, x=1, u=2; w <= x, x R u
        let f = Frame::new(
            names(&["w", "x", "u"]),
            &Relation::from_pairs(3, [(0, 1)]),
            Relation::from_pairs(3, [(1, 2)]),
        );
        assert!(frame_class_check(&f, FrameClass::FC).is_ok());
        let v = frame_class_check(&f, FrameClass::DC).unwrap_err();
        assert_eq!(
            v,
            ConfluenceViolation {
                condition: Confluence::Downward,
                s: 0,
                t: 1,
                u: 2
            }
        );
        assert!(frame_class_check(&f, FrameClass::FDC).is_err());
    }

    #[test]
    fn not_forward_confluent() {
        // t=0, s=1, u=2; t <= s, t R u
        let f = Frame::new(
            names(&["t", "s", "u"]),
            &Relation::from_pairs(3, [(0, 1)]),
            Relation::from_pairs(3, [(0, 2)]),
        );
        let v = frame_class_check(&f, FrameClass::FC).unwrap_err();
        assert_eq!((v.condition, v.s, v.t, v.u), (Confluence::Forward, 1, 0, 2));
    }

    #[test]
    fn class_names_round_trip() {
        for c in [
            FrameClass::ALL,
            FrameClass::FC,
            FrameClass::FDC,
            FrameClass::FUC,
            FrameClass::FDUC,
        ] {
            assert_eq!(c.to_string().parse::<FrameClass>().unwrap(), c);
        }
        assert_eq!("fduc".parse::<FrameClass>().unwrap(), FrameClass::FDUC);
        assert!("xc".parse::<FrameClass>().is_err());
        assert!(FrameClass::FDUC.is_subclass_of(&FrameClass::FC));
        assert!(!FrameClass::FC.is_subclass_of(&FrameClass::FUC));
    }

    #[test]
    fn clusters_group_equivalent_worlds() {
        let f = Frame::with_default_names(
            &Relation::from_pairs(3, [(0, 2), (2, 0), (0, 1)]),
            Relation::empty(3),
        );
        assert_eq!(f.clusters(), vec![vec![0, 2], vec![1]]);
    }
}
