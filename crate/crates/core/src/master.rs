//! The master transition system: states are what remains to be satisfied,
//! transitions are `psi --letter--> Unf(psi)[letter]`.

use crate::boolfn::BoolFn;
use crate::calculus::Universe;
use crate::error::Result;
use crate::lts::{explore, Lts};

pub const DEFAULT_STATE_CAP: usize = 100_000;

pub fn build_master(universe: &mut Universe, phi: &BoolFn, cap: usize) -> Result<Lts<BoolFn>> {
    let alphabet = universe.alphabet().clone();
    explore(&alphabet, phi.clone(), cap, "master", |psi, letter| {
        Ok(Some(universe.unfold_step(psi, letter)))
    })
}

/// Renders a BoolFn-labelled system (master or slave) as Graphviz.
pub fn boolfn_dot(universe: &Universe, lts: &Lts<BoolFn>, name: &str) -> String {
    lts.to_dot(name, |_, f| universe.show(f), |_| None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::lts::Alphabet;

    fn setup(atoms: &[&str], text: &str) -> (Universe, BoolFn) {
        let mut u = Universe::new(Alphabet::new(atoms.iter().copied()).unwrap());
        let phi = u.encode(&parse_formula(text).unwrap()).unwrap();
        (u, phi)
    }

    fn enc(u: &mut Universe, s: &str) -> BoolFn {
        u.encode(&parse_formula(s).unwrap()).unwrap()
    }

    fn target(lts: &Lts<BoolFn>, from: &BoolFn, letter: u32) -> BoolFn {
        let q = lts.states.iter().position(|s| s == from).unwrap();
        lts.states[lts.successor(q, letter).unwrap()].clone()
    }

    #[test]
    fn example_with_until() {
        // letters over [a, b]: {} = 0, {a} = 1, {b} = 2, {a b} = 3
        let (mut u, phi) = setup(&["a", "b"], "a & X(b U a)");
        let m = build_master(&mut u, &phi, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(m.num_states(), 4);
        let bua = enc(&mut u, "b U a");
        let (tt, ff) = (BoolFn::tt(), BoolFn::ff());
        assert_eq!(target(&m, &phi, 0), ff);
        assert_eq!(target(&m, &phi, 1), bua);
        assert_eq!(target(&m, &phi, 2), ff);
        assert_eq!(target(&m, &phi, 3), bua);
        assert_eq!(target(&m, &bua, 2), bua);
        assert_eq!(target(&m, &bua, 1), tt);
        assert_eq!(target(&m, &bua, 0), ff);
    }

    #[test]
    fn example_with_nested_globally() {
        let (mut u, phi) = setup(&["a", "b"], "G(X a | G X b)");
        let m = build_master(&mut u, &phi, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(m.num_states(), 4);
        let want = enc(&mut u, "G(X a | G X b) & (a | (b & G X b))");
        for letter in 0..4 {
            assert_eq!(target(&m, &phi, letter), want);
        }
    }

    #[test]
    fn constants_absorb() {
        let (mut u, phi) = setup(&["a"], "tt");
        let m = build_master(&mut u, &phi, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.delta[0], vec![Some(0), Some(0)]);

        let (mut u, phi) = setup(&["a"], "F a & G !a");
        let m = build_master(&mut u, &phi, DEFAULT_STATE_CAP).unwrap();
        for (q, s) in m.states.iter().enumerate() {
            if s.is_tt() || s.is_ff() {
                assert!(m.delta[q].iter().all(|t| t.map(|t| t as usize) == Some(q)));
            }
        }
    }

    #[test]
    fn cap_is_reported() {
        let (mut u, phi) = setup(&["a"], "a & X(a U X X a)");
        assert!(matches!(
            build_master(&mut u, &phi, 2),
            Err(crate::Error::StateCap { what: "master", cap: 2 })
        ));
    }
}
