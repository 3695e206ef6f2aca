//! Slave systems that monitor a subformula from every position, and their
//! token-set (Büchi / co-Büchi) and token-counting (mean-payoff) automata.

use crate::boolfn::{BoolFn, NbId};
use crate::calculus::Universe;
use crate::error::Result;
use crate::lts::{explore, Lts};

/// Slave LTS of a subformula: steps without unfolding. Sinks have no
/// outgoing transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlaveLts {
    pub lts: Lts<BoolFn>,
    pub sinks: Vec<bool>,
}

/// Sorted slave state indices holding at least one token.
pub type TokenSet = Vec<u32>;

/// Sorted `(slave state, number of tokens)` pairs with positive counts.
pub type TokenCount = Vec<(u32, u32)>;

impl SlaveLts {
    pub fn initial(&self) -> usize {
        self.lts.initial
    }

    pub fn num_states(&self) -> usize {
        self.lts.num_states()
    }

    pub fn state(&self, q: usize) -> &BoolFn {
        &self.lts.states[q]
    }

    /// Sinks provable from the assumption set.
    pub fn accepting_sinks(&self, assumed: &[NbId]) -> Vec<bool> {
        (0..self.num_states())
            .map(|q| self.sinks[q] && provable(assumed, self.state(q)))
            .collect()
    }
}

/// `assumed ⊢ f`, with the assumptions given as interned formulas.
pub fn provable(assumed: &[NbId], f: &BoolFn) -> bool {
    f.eval(|v| assumed.contains(&v))
}

pub fn build_slave_lts(universe: &Universe, xi: &BoolFn, cap: usize) -> Result<SlaveLts> {
    let lts = explore(universe.alphabet(), xi.clone(), cap, "slave", |psi, letter| {
        if universe.is_sink(psi) {
            Ok(None)
        } else {
            Ok(Some(universe.step(psi, letter)))
        }
    })?;
    let sinks: Vec<bool> = lts.delta.iter().map(|row| row.iter().all(Option::is_none)).collect();
    assert!(is_acyclic(&lts), "slave transition system must be acyclic");
    Ok(SlaveLts { lts, sinks })
}

fn is_acyclic<S>(lts: &Lts<S>) -> bool {
    let n = lts.num_states();
    let mut indegree = vec![0usize; n];
    for row in &lts.delta {
        for t in row.iter().flatten() {
            indegree[*t as usize] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&q| indegree[q] == 0).collect();
    let mut done = 0;
    while let Some(q) = ready.pop() {
        done += 1;
        for t in lts.delta[q].iter().flatten() {
            let t = *t as usize;
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.push(t);
            }
        }
    }
    done == n
}

/// Subset construction: every step moves the live tokens and puts a fresh one
/// on the initial state. Tokens sitting on a sink are dropped.
pub fn build_token_lts(slave: &SlaveLts, cap: usize) -> Result<Lts<TokenSet>> {
    let init = slave.initial() as u32;
    explore(&slave.lts.alphabet, vec![init], cap, "token-set slave", |tokens, letter| {
        let mut next: TokenSet = tokens
            .iter()
            .filter_map(|&q| slave.lts.successor(q as usize, letter))
            .map(|q| q as u32)
            .collect();
        next.push(init);
        next.sort_unstable();
        next.dedup();
        Ok(Some(next))
    })
}

/// Token sets holding a sink provable from the assumptions.
pub fn buchi_accepting_sets(slave: &SlaveLts, tokens: &Lts<TokenSet>, assumed: &[NbId]) -> Vec<bool> {
    let good = slave.accepting_sinks(assumed);
    tokens
        .states
        .iter()
        .map(|set| set.iter().any(|&q| good[q as usize]))
        .collect()
}

/// Token sets holding a sink not provable from the assumptions.
pub fn cobuchi_rejecting_sets(
    slave: &SlaveLts,
    tokens: &Lts<TokenSet>,
    assumed: &[NbId],
) -> Vec<bool> {
    let good = slave.accepting_sinks(assumed);
    tokens
        .states
        .iter()
        .map(|set| {
            set.iter()
                .any(|&q| slave.sinks[q as usize] && !good[q as usize])
        })
        .collect()
}

/// Counting construction: like the subset construction but tokens are
/// counted per slave state.
pub fn build_count_lts(slave: &SlaveLts, cap: usize) -> Result<Lts<TokenCount>> {
    let init = slave.initial() as u32;
    let bound = slave.num_states() as u32;
    explore(&slave.lts.alphabet, vec![(init, 1)], cap, "counting slave", |counts, letter| {
        let mut next: Vec<(u32, u32)> = counts
            .iter()
            .filter_map(|&(q, c)| slave.lts.successor(q as usize, letter).map(|t| (t as u32, c)))
            .collect();
        next.push((init, 1));
        next.sort_unstable();
        let mut merged: TokenCount = Vec::with_capacity(next.len());
        for (q, c) in next {
            match merged.last_mut() {
                Some((p, total)) if *p == q => *total += c,
                _ => merged.push((q, c)),
            }
        }
        assert!(
            merged.iter().all(|&(_, c)| c <= bound),
            "token count exceeds the slave size"
        );
        Ok(Some(merged))
    })
}

/// Number of tokens on sinks provable from the assumptions, per counting state.
pub fn mp_reward(slave: &SlaveLts, counts: &Lts<TokenCount>, assumed: &[NbId]) -> Vec<u32> {
    let good = slave.accepting_sinks(assumed);
    counts
        .states
        .iter()
        .map(|f| f.iter().filter(|(q, _)| good[*q as usize]).map(|(_, c)| c).sum())
        .collect()
}

pub fn slave_dot(universe: &Universe, slave: &SlaveLts, name: &str) -> String {
    slave.lts.to_dot(
        name,
        |_, f| universe.show(f),
        |q| slave.sinks[q].then(|| "peripheries=2".to_string()),
    )
}

pub fn token_dot(universe: &Universe, slave: &SlaveLts, tokens: &Lts<TokenSet>, name: &str) -> String {
    tokens.to_dot(
        name,
        |_, set| {
            let items: Vec<String> = set.iter().map(|&q| universe.show(slave.state(q as usize))).collect();
            format!("{{{}}}", items.join(", "))
        },
        |_| None,
    )
}

pub fn count_dot(universe: &Universe, slave: &SlaveLts, counts: &Lts<TokenCount>, name: &str) -> String {
    counts.to_dot(
        name,
        |_, f| {
            let items: Vec<String> = f
                .iter()
                .map(|&(q, c)| format!("{}:{c}", universe.show(slave.state(q as usize))))
                .collect();
            format!("[{}]", items.join(", "))
        },
        |_| None,
    )
}
