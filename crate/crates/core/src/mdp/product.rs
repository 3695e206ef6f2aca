//! Product of an MDP with a deterministic automaton reading state labels.

use std::collections::HashMap;

use super::{Action, Mdp, Valuation};
use crate::error::{Error, Result};
use crate::lts::Lts;

#[derive(Clone, Debug)]
pub struct Product {
    pub mdp: Mdp,
    /// `(model state, automaton state)` of each product state.
    pub states: Vec<(usize, usize)>,
    /// Model action each product action copies.
    pub origin: Vec<usize>,
}

/// Reachable part of the product. The automaton reads the label of every
/// state entered, including the initial one; labels are projected onto the
/// automaton alphabet.
pub fn product_mdp<S>(m: &Mdp, valuation: &Valuation, automaton: &Lts<S>, cap: usize) -> Result<Product> {
    let ab = &automaton.alphabet;
    let letters: Vec<u32> = (0..m.num_states()).map(|s| ab.letter_of(valuation.of(s))).collect();
    let step = |q: usize, s: usize| -> Result<usize> {
        automaton.successor(q, letters[s]).ok_or_else(|| Error::AlphabetMismatch {
            state: q,
            letter: ab.fmt_letter(letters[s]),
        })
    };

    let first = (m.initial, step(automaton.initial, m.initial)?);
    let mut states = vec![first];
    let mut index: HashMap<(usize, usize), usize> = HashMap::from([(first, 0)]);
    let mut actions = Vec::new();
    let mut origin = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let (s, q) = states[next];
        for &a in &m.enabled[s] {
            let mut dist = Vec::with_capacity(m.actions[a].dist.len());
            for (t, p) in &m.actions[a].dist {
                let target = (*t, step(q, *t)?);
                let id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= cap {
                            return Err(Error::StateCap { what: "product", cap });
                        }
                        index.insert(target, states.len());
                        states.push(target);
                        states.len() - 1
                    }
                };
                dist.push((id, p.clone()));
            }
            actions.push(Action {
                state: next,
                name: m.actions[a].name.clone(),
                dist,
            });
            origin.push(a);
        }
        next += 1;
    }
    let names = states
        .iter()
        .map(|&(s, q)| format!("{}.q{q}", m.state_names[s]))
        .collect();
    let mdp = Mdp::new(names, 0, actions)?;
    Ok(Product { mdp, states, origin })
}
