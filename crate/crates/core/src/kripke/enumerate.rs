use std::collections::BTreeSet;

use super::{
    frame_class_check, Evaluator, Frame, FrameClass, Relation, SemanticsVariant, Valuation,
};
use crate::formula::Formula;

/// Largest frame size whose relations fit the 64-bit adjacency encoding.
pub const MAX_ENUMERATION_SIZE: usize = 7;

/// All preorders on `n` worlds in ascending adjacency-mask order.
pub fn preorders(n: usize) -> Vec<Relation> {
    assert!((1..=MAX_ENUMERATION_SIZE).contains(&n));
    let off_diagonal: Vec<usize> = (0..n * n).filter(|i| i / n != i % n).collect();
    let diagonal: u64 = (0..n).fold(0, |m, i| m | 1 << (i * n + i));
    let mut out = Vec::new();
    for bits in 0u64..1 << off_diagonal.len() {
        let mut mask = diagonal;
        for (k, &pos) in off_diagonal.iter().enumerate() {
            if bits >> k & 1 == 1 {
                mask |= 1 << pos;
            }
        }
        let rel = Relation::from_mask(n, mask);
        if rel.is_transitive() {
            out.push(rel);
        }
    }
    out
}

/// Lazily enumerates labelled frames on `w0..w{size-1}` in a class: preorders
/// in mask order, and for each preorder every `R` in mask order.
pub struct FrameEnumeration {
    size: usize,
    class: FrameClass,
    orders: Vec<Relation>,
    order_idx: usize,
    next_r: u64,
}

impl FrameEnumeration {
    fn r_limit(&self) -> u64 {
        1u64 << (self.size * self.size)
    }

    pub fn preorder_count(&self) -> usize {
        self.orders.len()
    }
}

impl Iterator for FrameEnumeration {
    type Item = Frame;

    fn next(&mut self) -> Option<Frame> {
        while self.order_idx < self.orders.len() {
            while self.next_r < self.r_limit() {
                let r = Relation::from_mask(self.size, self.next_r);
                self.next_r += 1;
                let frame = Frame::with_default_names(&self.orders[self.order_idx], r);
                if frame_class_check(&frame, self.class).is_ok() {
                    return Some(frame);
                }
            }
            self.order_idx += 1;
            self.next_r = 0;
        }
        None
    }
}

pub fn enumerate_frames(size: usize, class: FrameClass) -> FrameEnumeration {
    FrameEnumeration {
        size,
        class,
        orders: preorders(size),
        order_idx: 0,
        next_r: 0,
    }
}

/// Frames of one fixed preorder, all `R` in mask order (used to split
/// enumeration across workers without changing the canonical order).
pub fn frames_over_order(order: &Relation, class: FrameClass) -> impl Iterator<Item = Frame> + '_ {
    let n = order.size();
    (0u64..1 << (n * n)).filter_map(move |mask| {
        let frame = Frame::with_default_names(order, Relation::from_mask(n, mask));
        frame_class_check(&frame, class).is_ok().then_some(frame)
    })
}

/// Up-sets of the frame's preorder in ascending bitmask order (bit `i` is world `i`).
pub fn up_sets(frame: &Frame) -> Vec<BTreeSet<usize>> {
    fn go(frame: &Frame, i: usize, chosen: &mut Vec<Option<bool>>, out: &mut Vec<BTreeSet<usize>>) {
        let n = frame.len();
        for bit in [false, true] {
            // decided worlds are those with index > i
            let ok = (i + 1..n).all(|j| match chosen[j] {
                Some(true) if !bit => !frame.leq(j, i),
                Some(false) if bit => !frame.leq(i, j),
                _ => true,
            });
            if !ok {
                continue;
            }
            chosen[i] = Some(bit);
            if i == 0 {
                out.push((0..n).filter(|&w| chosen[w] == Some(true)).collect());
            } else {
                go(frame, i - 1, chosen, out);
            }
            chosen[i] = None;
        }
    }
    let mut out = Vec::new();
    go(
        frame,
        frame.len() - 1,
        &mut vec![None; frame.len()],
        &mut out,
    );
    out
}

/// Every assignment of up-sets to the given atoms; the first atom varies slowest.
pub struct ValuationEnumeration {
    atoms: Vec<String>,
    ups: Vec<BTreeSet<usize>>,
    digits: Vec<usize>,
    done: bool,
}

impl ValuationEnumeration {
    /// `(number of up-sets)^(number of atoms)`.
    pub fn total(&self) -> u128 {
        (self.ups.len() as u128).pow(self.atoms.len() as u32)
    }
}

impl Iterator for ValuationEnumeration {
    type Item = Valuation;

    fn next(&mut self) -> Option<Valuation> {
        if self.done {
            return None;
        }
        let val = self
            .atoms
            .iter()
            .zip(&self.digits)
            .map(|(p, &d)| (p.clone(), self.ups[d].clone()))
            .collect();
        // odometer, last atom fastest
        let mut k = self.digits.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.digits[k] += 1;
            if self.digits[k] < self.ups.len() {
                break;
            }
            self.digits[k] = 0;
        }
        Some(val)
    }
}

pub fn enumerate_valuations<S: AsRef<str>>(frame: &Frame, atoms: &[S]) -> ValuationEnumeration {
    ValuationEnumeration {
        atoms: atoms.iter().map(|a| a.as_ref().to_string()).collect(),
        ups: up_sets(frame),
        digits: vec![0; atoms.len()],
        done: false,
    }
}

/// A valuation and world refuting a formula on a frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countervaluation {
    pub val: Valuation,
    pub world: usize,
}

/// Validity over all valuations of the atoms occurring in `a`; on failure
/// returns the first refuting valuation and world in canonical order.
pub fn valid_in_frame(frame: &Frame, a: &Formula) -> Result<(), Countervaluation> {
    valid_in_frame_under(frame, a, SemanticsVariant::Standard)
}

pub fn valid_in_frame_under(
    frame: &Frame,
    a: &Formula,
    sem: SemanticsVariant,
) -> Result<(), Countervaluation> {
    let atoms: Vec<String> = a.atoms().into_iter().collect();
    let ev = Evaluator::new(frame);
    for val in enumerate_valuations(frame, &atoms) {
        if let Some(world) = ev.eval(a, &val, sem).iter().position(|&b| !b) {
            return Err(Countervaluation { val, world });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::{satisfies, Model};

    #[test]
    fn preorder_counts() {
        // labelled preorders on n points: 1, 4, 29, 355
        let counts: Vec<usize> = (1..=4).map(|n| preorders(n).len()).collect();
        assert_eq!(counts, vec![1, 4, 29, 355]);
    }

    #[test]
    fn frame_counts() {
        assert_eq!(enumerate_frames(1, FrameClass::ALL).count(), 2);
        assert_eq!(enumerate_frames(2, FrameClass::ALL).count(), 64);
    }

    #[test]
    fn enumeration_order_is_canonical() {
        let frames: Vec<Frame> = enumerate_frames(2, FrameClass::ALL).collect();
        let keys: Vec<(u64, u64)> = frames
            .iter()
            .map(|f| (f.le().mask(), f.r().mask()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(keys[0], (0b1001, 0));
    }

    #[test]
    fn up_set_counts_and_order() {
        let one = Frame::with_default_names(&Relation::identity(1), Relation::empty(1));
        assert_eq!(up_sets(&one).len(), 2);
        let chain =
            Frame::with_default_names(&Relation::from_pairs(2, [(0, 1)]), Relation::empty(2));
        let ups = up_sets(&chain);
        assert_eq!(
            ups,
            vec![BTreeSet::new(), BTreeSet::from([1]), BTreeSet::from([0, 1])]
        );
        let discrete = Frame::with_default_names(&Relation::identity(2), Relation::empty(2));
        assert_eq!(up_sets(&discrete).len(), 4);
    }

    #[test]
    fn up_sets_match_brute_force() {
        for order in preorders(3) {
            let f = Frame::with_default_names(&order, Relation::empty(3));
            let brute: Vec<BTreeSet<usize>> = (0u32..8)
                .map(|m| {
                    (0..3)
                        .filter(|w| m >> w & 1 == 1)
                        .collect::<BTreeSet<usize>>()
                })
                .filter(|s| f.is_up_set(|w| s.contains(&w)))
                .collect();
            assert_eq!(up_sets(&f), brute);
        }
    }

    #[test]
    fn valuation_counts() {
        let chain =
            Frame::with_default_names(&Relation::from_pairs(2, [(0, 1)]), Relation::empty(2));
        assert_eq!(enumerate_valuations(&chain, &["p"]).count(), 3);
        assert_eq!(enumerate_valuations(&chain, &["p", "q"]).count(), 9);
        assert_eq!(enumerate_valuations(&chain, &["p", "q"]).total(), 9);
        let empty: [&str; 0] = [];
        assert_eq!(enumerate_valuations(&chain, &empty).count(), 1);
    }

    #[test]
    fn validity_examples() {
        let one =
            Frame::with_default_names(&Relation::identity(1), Relation::from_pairs(1, [(0, 0)]));
        assert!(valid_in_frame(&one, &parse("p | ~p").unwrap()).is_ok());

        let chain =
            Frame::with_default_names(&Relation::from_pairs(2, [(0, 1)]), Relation::empty(2));
        let cv = valid_in_frame(&chain, &parse("p | ~p").unwrap()).unwrap_err();
        assert_eq!(cv.world, 0);
        assert_eq!(cv.val["p"], BTreeSet::from([1]));

        for frame in enumerate_frames(2, FrameClass::ALL) {
            assert!(valid_in_frame(&frame, &parse("[]true").unwrap()).is_ok());
        }
    }

    #[test]
    fn validity_agrees_with_double_loop() {
        let formulas = [
            "p | ~p",
            "[]p -> p",
            "<>p -> []p",
            "~~p -> p",
            "<>(p | q) -> <>p | <>q",
        ];
        for frame in enumerate_frames(2, FrameClass::ALL) {
            for s in formulas {
                let f = parse(s).unwrap();
                let atoms: Vec<String> = f.atoms().into_iter().collect();
                let mut brute = true;
                for val in enumerate_valuations(&frame, &atoms) {
                    let m = Model::new(frame.clone(), val).unwrap();
                    for w in frame.worlds() {
                        brute &= satisfies(&m, w, &f, SemanticsVariant::Standard);
                    }
                }
                assert_eq!(valid_in_frame(&frame, &f).is_ok(), brute, "{s}");
            }
        }
    }
}
