//! Exact maximal reachability probabilities with an optimal memoryless
//! deterministic selector.

use num_traits::Zero;

use crate::mdp::Mdp;
use crate::rational::{one, zero, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reachability {
    pub prob: Vec<Rational>,
    /// Action to play outside the target; `None` on target states.
    pub choice: Vec<Option<usize>>,
}

/// Solves `a x = b` exactly; `a` must be non-singular.
pub fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("non-singular system");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = one() / &a[col][col];
        for v in a[col].iter_mut().skip(col) {
            *v *= &inv;
        }
        b[col] *= &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for k in col..n {
                let d = &f * &a[col][k];
                a[r][k] -= d;
            }
            let d = &f * &b[col];
            b[r] -= d;
        }
    }
    b
}

fn expected(m: &Mdp, action: usize, value: &[Rational]) -> Rational {
    m.actions[action].dist.iter().map(|(t, p)| p * &value[*t]).sum()
}

pub fn max_reach(m: &Mdp, target: &[bool]) -> Reachability {
    let n = m.num_states();
    let all = vec![true; m.num_actions()];
    let towards = m.attractor(target, &all);
    let positive: Vec<bool> = (0..n).map(|s| target[s] || towards[s].is_some()).collect();

    // states reaching the target almost surely: greatest fixpoint
    let mut sure = positive.clone();
    let sure_choice = loop {
        let allowed: Vec<bool> = m
            .actions
            .iter()
            .map(|a| sure[a.state] && a.dist.iter().all(|(t, _)| sure[*t]))
            .collect();
        let att = m.attractor(target, &allowed);
        let next: Vec<bool> = (0..n).map(|s| target[s] || (sure[s] && att[s].is_some())).collect();
        if next == sure {
            break att;
        }
        sure = next;
    };

    let mut choice: Vec<Option<usize>> = (0..n)
        .map(|s| {
            if target[s] {
                None
            } else if sure[s] {
                sure_choice[s]
            } else if positive[s] {
                towards[s]
            } else {
                m.enabled[s].first().copied()
            }
        })
        .collect();
    let mut value: Vec<Rational> = (0..n).map(|s| if sure[s] { one() } else { zero() }).collect();

    let maybe: Vec<usize> = (0..n).filter(|&s| positive[s] && !sure[s]).collect();
    if !maybe.is_empty() {
        let mut index = vec![usize::MAX; n];
        for (i, &s) in maybe.iter().enumerate() {
            index[s] = i;
        }
        loop {
            // evaluate the current selector on the undecided states
            let k = maybe.len();
            let mut a = vec![vec![zero(); k]; k];
            let mut b = vec![zero(); k];
            for (i, &s) in maybe.iter().enumerate() {
                a[i][i] += one();
                for (t, p) in &m.actions[choice[s].unwrap()].dist {
                    if index[*t] != usize::MAX {
                        a[i][index[*t]] -= p;
                    } else if sure[*t] {
                        b[i] += p;
                    }
                }
            }
            for (&s, v) in maybe.iter().zip(solve_linear(a, b)) {
                value[s] = v;
            }
            let mut improved = false;
            for &s in &maybe {
                let mut best = value[s].clone();
                for &act in &m.enabled[s] {
                    let v = expected(m, act, &value);
                    if v > best {
                        best = v;
                        choice[s] = Some(act);
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }
    Reachability { prob: value, choice }
}
