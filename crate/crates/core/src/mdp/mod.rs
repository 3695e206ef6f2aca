//! Markov decision processes with exact rational transition probabilities.
//!
//! Every action belongs to exactly one state; `enabled[s]` lists the actions
//! of `s` in declaration order.

mod mec;
mod parse;
mod product;

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use mec::{mec_decomposition, mecs_within, EndComponent};
pub use parse::{format_mdp, parse_mdp};
pub use product::{product_mdp, Product};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    pub state: usize,
    pub name: String,
    /// Successors with positive probability, sorted by state, summing to 1.
    pub dist: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mdp {
    pub state_names: Vec<String>,
    pub initial: usize,
    pub actions: Vec<Action>,
    pub enabled: Vec<Vec<usize>>,
}

/// Atomic propositions holding in each state.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Valuation(pub Vec<BTreeSet<String>>);

impl Valuation {
    pub fn of(&self, s: usize) -> &BTreeSet<String> {
        &self.0[s]
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.0.iter().flatten().cloned().collect()
    }
}

impl Mdp {
    /// Builds and validates an MDP from per-action data.
    pub fn new(state_names: Vec<String>, initial: usize, actions: Vec<Action>) -> Result<Mdp> {
        let n = state_names.len();
        if initial >= n {
            return Err(Error::Invalid("initial state out of range".into()));
        }
        let mut enabled = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(actions.len());
        for (i, mut a) in actions.into_iter().enumerate() {
            if a.state >= n || a.dist.iter().any(|(t, _)| *t >= n) {
                return Err(Error::Invalid(format!("action `{}` refers to an unknown state", a.name)));
            }
            a.dist.sort_by_key(|(t, _)| *t);
            let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(a.dist.len());
            for (t, p) in a.dist {
                if p < Rational::zero() {
                    return Err(Error::Invalid(format!("negative probability in action `{}`", a.name)));
                }
                match merged.last_mut() {
                    Some((u, q)) if *u == t => *q += p,
                    _ => merged.push((t, p)),
                }
            }
            merged.retain(|(_, p)| !p.is_zero());
            let total: Rational = merged.iter().map(|(_, p)| p.clone()).sum();
            if !total.is_one() {
                return Err(Error::Invalid(format!(
                    "probabilities of action `{}` sum to {} instead of 1",
                    a.name,
                    crate::rational::fmt_exact(&total)
                )));
            }
            a.dist = merged;
            enabled[a.state].push(i);
            normalized.push(a);
        }
        if let Some(s) = enabled.iter().position(Vec::is_empty) {
            return Err(Error::Invalid(format!("state `{}` has no action", state_names[s])));
        }
        Ok(Mdp {
            state_names,
            initial,
            actions: normalized,
            enabled,
        })
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn is_markov_chain(&self) -> bool {
        self.enabled.iter().all(|a| a.len() == 1)
    }

    pub fn successors(&self, action: usize) -> impl Iterator<Item = usize> + '_ {
        self.actions[action].dist.iter().map(|(t, _)| *t)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|s| s == name)
    }

    /// Removes the given states, every action enabled in or leading into them,
    /// and then, repeatedly, states left without actions. Returns the smaller
    /// MDP with a map from its states to the original ones, or `None` when
    /// nothing survives. The initial state becomes the first survivor unless
    /// the original one survives.
    pub fn restrict(&self, removed: &[bool]) -> Option<(Mdp, Vec<usize>)> {
        let (alive, actions) = self.surviving(removed);
        let map: Vec<usize> = (0..self.num_states()).filter(|&s| alive[s]).collect();
        if map.is_empty() {
            return None;
        }
        Some(self.sub_mdp(&map, &actions))
    }

    /// Fixpoint of the restriction rule as state/action masks.
    pub(crate) fn surviving(&self, removed: &[bool]) -> (Vec<bool>, Vec<bool>) {
        let mut alive: Vec<bool> = removed.iter().map(|r| !r).collect();
        let mut act = vec![true; self.num_actions()];
        loop {
            let mut changed = false;
            for (i, a) in self.actions.iter().enumerate() {
                if act[i] && (!alive[a.state] || a.dist.iter().any(|(t, _)| !alive[*t])) {
                    act[i] = false;
                    changed = true;
                }
            }
            for s in 0..self.num_states() {
                if alive[s] && !self.enabled[s].iter().any(|&a| act[a]) {
                    alive[s] = false;
                    changed = true;
                }
            }
            if !changed {
                return (alive, act);
            }
        }
    }

    /// The sub-MDP on `states` (sorted original indices) keeping the actions
    /// flagged in `keep`; every kept action must stay inside `states`.
    pub fn sub_mdp(&self, states: &[usize], keep: &[bool]) -> (Mdp, Vec<usize>) {
        let mut index = vec![usize::MAX; self.num_states()];
        for (i, &s) in states.iter().enumerate() {
            index[s] = i;
        }
        let mut actions = Vec::new();
        let mut enabled = vec![Vec::new(); states.len()];
        for &s in states {
            for &a in &self.enabled[s] {
                if !keep[a] {
                    continue;
                }
                let act = &self.actions[a];
                enabled[index[s]].push(actions.len());
                actions.push(Action {
                    state: index[s],
                    name: act.name.clone(),
                    dist: act.dist.iter().map(|(t, p)| (index[*t], p.clone())).collect(),
                });
            }
        }
        let initial = if index[self.initial] != usize::MAX {
            index[self.initial]
        } else {
            0
        };
        let mdp = Mdp {
            state_names: states.iter().map(|&s| self.state_names[s].clone()).collect(),
            initial,
            actions,
            enabled,
        };
        (mdp, states.to_vec())
    }

    /// Positive-probability attractor: for every state outside `target` that
    /// can reach it using allowed actions, an action strictly decreasing the
    /// distance to `target`. Inside an end component, following it reaches
    /// `target` almost surely.
    pub fn attractor(&self, target: &[bool], allowed: &[bool]) -> Vec<Option<usize>> {
        let n = self.num_states();
        let mut reached = target.to_vec();
        let mut choice = vec![None; n];
        let mut frontier: Vec<usize> = (0..n).filter(|&s| target[s]).collect();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, action) in self.actions.iter().enumerate() {
            if allowed[a] {
                for (t, _) in &action.dist {
                    preds[*t].push(a);
                }
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for t in frontier {
                for &a in &preds[t] {
                    let s = self.actions[a].state;
                    if !reached[s] {
                        reached[s] = true;
                        choice[s] = Some(a);
                        next.push(s);
                    }
                }
            }
            next.sort_unstable();
            frontier = next;
        }
        choice
    }

    /// Same MDP with another initial state.
    pub fn with_initial(&self, initial: usize) -> Mdp {
        Mdp {
            initial,
            ..self.clone()
        }
    }
}
