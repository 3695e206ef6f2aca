//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

pub mod chain;
pub mod criteria;
pub mod exact;
pub mod gen;
pub mod md_oracle;

use freqsynth::formula::{in_fragment, parse_formula, Cmp, Ext, Formula, FreqBound};
use freqsynth::rational::ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn atoms(n: usize) -> Vec<String> {
    ["a", "b", "c"][..n].iter().map(|s| s.to_string()).collect()
}

fn leaf(rng: &mut impl Rng, atoms: &[String]) -> Formula {
    let a = atoms.choose(rng).unwrap();
    match rng.gen_range(0..20) {
        0 => Formula::True,
        1 => Formula::False,
        2..=12 => Formula::atom(a),
        _ => Formula::neg_atom(a),
    }
}

fn bound(rng: &mut impl Rng) -> FreqBound {
    let cmp = if rng.gen_bool(0.5) { Cmp::Geq } else { Cmp::Gt };
    let ext = if rng.gen_bool(0.5) { Ext::Inf } else { Ext::Sup };
    let q = rng.gen_range(1..=4);
    let p = rng.gen_range(0..=q);
    FreqBound::new(cmp, ratio(p, q), ext)
}

/// A formula with at most `size` nodes; until is only generated outside the
/// scope of globally operators, so the result is always in the fragment.
pub fn random_formula(rng: &mut impl Rng, size: usize, atoms: &[String], allow_until: bool) -> Formula {
    if size <= 1 {
        return leaf(rng, atoms);
    }
    match rng.gen_range(0..7) {
        0 | 1 if size >= 3 => {
            let l = rng.gen_range(1..size - 1);
            let left = random_formula(rng, l, atoms, allow_until);
            let right = random_formula(rng, size - 1 - l, atoms, allow_until);
            if rng.gen_bool(0.5) {
                Formula::and(left, right)
            } else {
                Formula::or(left, right)
            }
        }
        2 if allow_until && size >= 3 => {
            let l = rng.gen_range(1..size - 1);
            let left = random_formula(rng, l, atoms, true);
            let right = random_formula(rng, size - 1 - l, atoms, true);
            Formula::until(left, right)
        }
        3 => Formula::next(random_formula(rng, size - 1, atoms, allow_until)),
        4 => Formula::finally(random_formula(rng, size - 1, atoms, allow_until)),
        5 => Formula::globally(random_formula(rng, size - 1, atoms, false)),
        6 => Formula::freq(bound(rng), random_formula(rng, size - 1, atoms, false)),
        _ => Formula::next(random_formula(rng, size - 1, atoms, allow_until)),
    }
}

pub fn has_temporal(f: &Formula) -> bool {
    match f {
        Formula::And(..) | Formula::Or(..) | Formula::Not(_) => f.children().into_iter().any(has_temporal),
        Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => false,
        _ => true,
    }
}

/// Random fragment formula that mentions at least one temporal operator.
pub fn random_fragment_formula(rng: &mut impl Rng, max_size: usize, atoms: &[String]) -> Formula {
    loop {
        let size = rng.gen_range(2..=max_size);
        let f = random_formula(rng, size, atoms, true);
        if f.size() <= max_size && in_fragment(&f) && has_temporal(&f) {
            return f;
        }
    }
}

/// Random formula without until (operand of a recurrent operator).
pub fn random_until_free(rng: &mut impl Rng, max_size: usize, atoms: &[String]) -> Formula {
    let size = rng.gen_range(1..=max_size);
    random_formula(rng, size, atoms, false)
}

pub const NAMED: [&str; 8] = [
    "a & X(b U a)",
    "a | b | X(b & G F a)",
    "G(X a | G X b)",
    "G{>=0.99,inf}(r -> X(f & F c))",
    "G{>=0.85,inf}(r -> X(f & F c))",
    "G F a & F G b",
    "G{>1/3,sup} (a | X b) & G F a",
    "F (a U b) | G{>=1/2,inf} X a",
];

/// Named formulas followed by seeded random ones; at least `total` entries.
pub fn corpus(total: usize, seed: u64) -> Vec<Formula> {
    let mut out: Vec<Formula> = NAMED.iter().map(|s| parse_formula(s).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < total {
        let n = rng.gen_range(1..=3);
        let f = random_fragment_formula(&mut rng, 10, &atoms(n));
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}
