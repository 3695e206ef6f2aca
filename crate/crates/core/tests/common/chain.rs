//! Satisfaction probability on a Markov chain by bottom-SCC classification of
//! the chain-automaton product and absorption probabilities.

use std::collections::HashMap;

use freqsynth::dgrma::Dgrma;
use freqsynth::formula::Cmp;
use freqsynth::mdp::{Mdp, Valuation};
use freqsynth::rational::Rational;
use num_traits::{One, Zero};

use super::exact::{bottom_sccs, gauss, stationary};

pub fn chain_probability(m: &Mdp, val: &Valuation, a: &Dgrma) -> Rational {
    assert!(m.is_markov_chain());
    let lts = &a.lts;
    let letter: Vec<u32> = (0..m.num_states()).map(|s| lts.alphabet.letter_of(val.of(s))).collect();
    let first = (m.initial, lts.successor(lts.initial, letter[m.initial]).unwrap());
    let mut states = vec![first];
    let mut index = HashMap::from([(first, 0usize)]);
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (s, q) = states[i];
        let mut row = Vec::new();
        for (t, p) in &m.actions[m.enabled[s][0]].dist {
            let next = (*t, lts.successor(q, letter[*t]).unwrap());
            let j = *index.entry(next).or_insert_with(|| {
                states.push(next);
                states.len() - 1
            });
            row.push((j, p.clone()));
        }
        rows.push(row);
        i += 1;
    }
    let n = states.len();
    let succ: Vec<Vec<usize>> = rows.iter().map(|r| r.iter().map(|(t, _)| *t).collect()).collect();

    let mut good = vec![false; n];
    let mut in_class = vec![false; n];
    for class in bottom_sccs(&succ) {
        class.iter().for_each(|&s| in_class[s] = true);
        let mut p = vec![vec![Rational::zero(); class.len()]; class.len()];
        for (i, &s) in class.iter().enumerate() {
            for (t, q) in &rows[s] {
                p[i][class.binary_search(t).unwrap()] += q;
            }
        }
        let pi = stationary(&p);
        let accepted = a.pairs.iter().any(|pair| {
            class.iter().all(|&s| !pair.fin[states[s].1])
                && pair.infs.iter().all(|set| class.iter().any(|&s| set[states[s].1]))
                && pair.mps.iter().all(|mp| {
                    let avg: Rational = class
                        .iter()
                        .zip(&pi)
                        .map(|(&s, w)| w * Rational::from_integer(mp.reward[states[s].1].into()))
                        .sum();
                    match mp.bound.cmp {
                        Cmp::Geq => avg >= mp.bound.p,
                        Cmp::Gt => avg > mp.bound.p,
                    }
                })
        });
        if accepted {
            class.iter().for_each(|&s| good[s] = true);
        }
    }

    if in_class[0] {
        return if good[0] { Rational::one() } else { Rational::zero() };
    }
    let transient: Vec<usize> = (0..n).filter(|&s| !in_class[s]).collect();
    let pos: HashMap<usize, usize> = transient.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let k = transient.len();
    let mut a_mat = vec![vec![Rational::zero(); k]; k];
    let mut b = vec![Rational::zero(); k];
    for (i, &s) in transient.iter().enumerate() {
        a_mat[i][i] += Rational::one();
        for (t, p) in &rows[s] {
            match pos.get(t) {
                Some(&j) => a_mat[i][j] -= p,
                None if good[*t] => b[i] += p,
                None => {}
            }
        }
    }
    gauss(a_mat, b)[pos[&0]].clone()
}
