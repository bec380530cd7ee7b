use rand::Rng;

use super::Formula;

/// Random formula with `‖A‖ ≤ max_len` over the given atoms (corpus generation).
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, max_len: usize, atoms: &[&str]) -> Formula {
    assert!(max_len >= 1 && !atoms.is_empty());
    let budget = rng.gen_range(1..=max_len);
    build(rng, budget, atoms)
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str]) -> Formula {
    match rng.gen_range(0..10) {
        0 => Formula::Top,
        1 => Formula::Bot,
        _ => Formula::atom(atoms[rng.gen_range(0..atoms.len())]),
    }
}

fn build<R: Rng + ?Sized>(rng: &mut R, budget: usize, atoms: &[&str]) -> Formula {
    if budget <= 1 {
        return leaf(rng, atoms);
    }
    if budget == 2 || rng.gen_bool(0.3) {
        let body = build(rng, budget - 1, atoms);
        return if rng.gen_bool(0.5) {
            body.boxed()
        } else {
            body.dia()
        };
    }
    let left = rng.gen_range(1..budget - 1);
    let a = build(rng, left, atoms);
    let b = build(rng, budget - 1 - left, atoms);
    match rng.gen_range(0..3) {
        0 => a.implies(b),
        1 => a.and(b),
        _ => a.or(b),
    }
}
