use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{frame_class_check, Frame, FrameClass, KripkeError, Model, Relation, Valuation};

const MAX_ATTEMPTS: u32 = 64;

/// Adds `s R u` edges until every confluence the class requires holds.
/// For each of the four conditions the edge `s R u` repairs the failing
/// triple (with `v = u` or `v = s`), so the loop terminates.
fn close_under_class(le: &Relation, r: &mut Relation, class: FrameClass) {
    loop {
        let frame = Frame::with_default_names(le, r.clone());
        match frame_class_check(&frame, class) {
            Ok(()) => return,
            Err(v) => r.insert(v.s, v.u),
        }
    }
}

/// Deterministic pseudo-random model in the class (test-corpus generation).
pub fn random_model<S: AsRef<str>>(
    seed: u64,
    size: usize,
    class: FrameClass,
    atoms: &[S],
) -> Result<Model, KripkeError> {
    assert!(size >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let le_density = rng.gen_range(0.0..0.6);
        let r_density = rng.gen_range(0.0..0.5);
        let mut le = Relation::empty(size);
        let mut r = Relation::empty(size);
        for a in 0..size {
            for b in 0..size {
                if a != b && rng.gen_bool(le_density) {
                    le.insert(a, b);
                }
                if rng.gen_bool(r_density) {
                    r.insert(a, b);
                }
            }
        }
        let le = le.reflexive_transitive_closure();
        close_under_class(&le, &mut r, class);
        let frame = Frame::with_default_names(&le, r);
        if frame_class_check(&frame, class).is_err() {
            continue;
        }
        let val: Valuation = atoms
            .iter()
            .map(|p| {
                let seeds: BTreeSet<usize> = (0..size).filter(|_| rng.gen_bool(0.35)).collect();
                (p.as_ref().to_string(), seeds)
            })
            .collect();
        return Ok(Model::with_upward_closure(frame, val));
    }
    Err(KripkeError::GenerationFailed {
        seed,
        attempts: MAX_ATTEMPTS,
    })
}
