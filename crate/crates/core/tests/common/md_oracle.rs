//! Exhaustive search over deterministic memoryless strategies.

use freqsynth::formula::Cmp;
use freqsynth::mdp::Mdp;
use freqsynth::mec_analysis::{GbmpCondition, MpBound};
use freqsynth::rational::Rational;
use num_traits::Zero;

use super::exact::{bottom_sccs, stationary};

fn holds(b: &MpBound, value: &Rational) -> bool {
    match b.cmp {
        Cmp::Geq => *value >= b.bound,
        Cmp::Gt => *value > b.bound,
    }
}

/// Whether some bottom class of the chain induced by `choice` satisfies the
/// condition almost surely.
fn some_class_satisfies(m: &Mdp, choice: &[usize], cond: &GbmpCondition) -> bool {
    let n = m.num_states();
    let succ: Vec<Vec<usize>> = (0..n).map(|s| m.successors(choice[s]).collect()).collect();
    bottom_sccs(&succ).into_iter().any(|class| {
        if !cond.infs.iter().all(|set| class.iter().any(|&s| set[s])) {
            return false;
        }
        let mut p = vec![vec![Rational::zero(); class.len()]; class.len()];
        for (i, &s) in class.iter().enumerate() {
            for (t, q) in &m.actions[choice[s]].dist {
                let j = class.binary_search(t).expect("class is closed");
                p[i][j] += q;
            }
        }
        let pi = stationary(&p);
        let avg = |b: &MpBound| -> Rational { class.iter().zip(&pi).map(|(&s, w)| w * &b.reward[s]).sum() };
        cond.mp_inf.iter().chain(&cond.mp_sup).all(|b| holds(b, &avg(b)))
    })
}

/// A deterministic memoryless strategy (one action per state) under which
/// some reachable bottom class satisfies `cond`, if any exists.
pub fn md_witness(m: &Mdp, cond: &GbmpCondition) -> Option<Vec<usize>> {
    let n = m.num_states();
    let mut idx = vec![0usize; n];
    loop {
        let choice: Vec<usize> = (0..n).map(|s| m.enabled[s][idx[s]]).collect();
        if some_class_satisfies(m, &choice, cond) {
            return Some(choice);
        }
        let mut s = 0;
        loop {
            if s == n {
                return None;
            }
            idx[s] += 1;
            if idx[s] < m.enabled[s].len() {
                break;
            }
            idx[s] = 0;
            s += 1;
        }
    }
}
