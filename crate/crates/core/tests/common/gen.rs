//! Random models and mean-payoff conditions.

use std::collections::BTreeSet;

use freqsynth::formula::Cmp;
use freqsynth::mdp::{Action, Mdp, Valuation};
use freqsynth::mec_analysis::{GbmpCondition, MpBound};
use freqsynth::rational::{ratio, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

/// A random distribution over `n` states that includes `forced`, if given.
fn distribution(rng: &mut impl Rng, n: usize, forced: Option<usize>) -> Vec<(usize, Rational)> {
    let mut support: Vec<usize> = (0..n).collect();
    support.shuffle(rng);
    support.truncate(rng.gen_range(1..=n.min(3)));
    if let Some(f) = forced {
        if !support.contains(&f) {
            support[0] = f;
        }
    }
    let weights: Vec<i64> = support.iter().map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    support.into_iter().zip(weights).map(|(s, w)| (s, ratio(w, total))).collect()
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

/// Strongly connected MDP: action 0 of state `i` can move to `i + 1`.
pub fn strongly_connected_mdp(rng: &mut impl Rng, max_states: usize, max_actions: usize) -> Mdp {
    let n = rng.gen_range(1..=max_states);
    let mut actions = Vec::new();
    for s in 0..n {
        for k in 0..rng.gen_range(1..=max_actions) {
            let forced = (k == 0).then_some((s + 1) % n);
            actions.push(Action {
                state: s,
                name: format!("a{k}"),
                dist: distribution(rng, n, forced),
            });
        }
    }
    Mdp::new(names(n), 0, actions).unwrap()
}

fn reward(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| ratio(rng.gen_range(0..=4), 4)).collect()
}

fn mp_bound(rng: &mut impl Rng, n: usize) -> MpBound {
    let cmp = if rng.gen_bool(0.3) { Cmp::Gt } else { Cmp::Geq };
    let q = *[2, 3, 4, 8].choose(rng).unwrap();
    MpBound {
        reward: reward(rng, n),
        cmp,
        bound: ratio(rng.gen_range(0..=q), q),
    }
}

/// At most two inf bounds, two sup bounds and one Büchi set.
pub fn condition(rng: &mut impl Rng, n: usize) -> GbmpCondition {
    let infs = if rng.gen_bool(0.4) {
        let mut set: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
        if rng.gen_bool(0.8) && !set.iter().any(|&b| b) {
            set[rng.gen_range(0..n)] = true;
        }
        vec![set]
    } else {
        Vec::new()
    };
    GbmpCondition {
        infs,
        mp_inf: (0..rng.gen_range(0..=2)).map(|_| mp_bound(rng, n)).collect(),
        mp_sup: (0..rng.gen_range(0..=2)).map(|_| mp_bound(rng, n)).collect(),
    }
}

/// Random Markov chain with random labels over `atoms`.
pub fn markov_chain(rng: &mut impl Rng, max_states: usize, atoms: &[String]) -> (Mdp, Valuation) {
    let n = rng.gen_range(1..=max_states);
    let actions = (0..n)
        .map(|s| Action {
            state: s,
            name: "step".into(),
            dist: distribution(rng, n, None),
        })
        .collect();
    let labels = (0..n)
        .map(|_| atoms.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect::<BTreeSet<_>>())
        .collect();
    (Mdp::new(names(n), 0, actions).unwrap(), Valuation(labels))
}
