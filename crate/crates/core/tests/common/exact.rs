//! Exact linear algebra and graph helpers written independently of the
//! library, for use as test oracles.

use freqsynth::lasso::Lasso;
use freqsynth::lts::Lts;
use freqsynth::rational::Rational;
use num_traits::{One, Zero};

/// Gauss-Jordan elimination; panics on a singular matrix.
#[allow(clippy::needless_range_loop)]
pub fn gauss(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("singular");
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[c][c];
                for k in 0..n {
                    let d = &f * &a[c][k];
                    a[r][k] -= d;
                }
                let d = &f * &b[c];
                b[r] -= d;
            }
        }
    }
    (0..n).map(|i| &b[i] / &a[i][i]).collect()
}

/// Reachability closure: `reach[s][t]` iff `t` is reachable from `s`.
pub fn closure(succ: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = succ.len();
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &t in &succ[u] {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            seen
        })
        .collect()
}

/// Bottom strongly connected components, each sorted, ordered by first state.
pub fn bottom_sccs(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let reach = closure(succ);
    let n = succ.len();
    let mut done = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if done[s] {
            continue;
        }
        let bottom = (0..n).all(|t| !reach[s][t] || reach[t][s]);
        if bottom {
            let class: Vec<usize> = (0..n).filter(|&t| reach[s][t]).collect();
            class.iter().for_each(|&t| done[t] = true);
            out.push(class);
        }
    }
    out
}

/// Stationary distribution of an irreducible chain given as a dense matrix.
pub fn stationary(p: &[Vec<Rational>]) -> Vec<Rational> {
    let n = p.len();
    // pi (P - I) = 0 with the last equation replaced by sum = 1
    let mut a = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            a[j][i] = p[i][j].clone() - if i == j { Rational::one() } else { Rational::zero() };
        }
    }
    a[n - 1] = vec![Rational::one(); n];
    let mut b = vec![Rational::zero(); n];
    b[n - 1] = Rational::one();
    gauss(a, b)
}

/// States of `lts` visited on the cycle of `w` forever, in run order.
pub fn lts_cycle<S>(lts: &Lts<S>, w: &Lasso) -> Vec<usize> {
    let ab = &lts.alphabet;
    let mut q = lts.initial;
    for l in &w.stem {
        q = lts.successor(q, ab.letter_of(l)).unwrap();
    }
    let mut seen = std::collections::HashMap::new();
    let mut trace = Vec::new();
    let mut pos = 0;
    loop {
        if let Some(&start) = seen.get(&(pos, q)) {
            return trace[start..].to_vec();
        }
        seen.insert((pos, q), trace.len());
        trace.push(q);
        q = lts.successor(q, ab.letter_of(&w.cycle[pos])).unwrap();
        pos = (pos + 1) % w.cycle.len();
    }
}
