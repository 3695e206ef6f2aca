//! The one-step unfolding calculus on propositional-equivalence classes.
//!
//! Every distinct non-Boolean formula is interned into a [`Universe`] and
//! receives a stable [`NbId`]; ids are handed out in first-seen order, which
//! fixes a deterministic total order on non-Boolean formulas.

use std::collections::HashMap;

use crate::boolfn::{BoolFn, NbId};
use crate::error::{Error, Result};
use crate::formula::{FreqBound, Formula};
use crate::lts::{Alphabet, Letter};

/// A non-Boolean formula whose operands are themselves Boolean functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NbNode {
    Lit { atom: usize, positive: bool },
    Next(BoolFn),
    Finally(BoolFn),
    Globally(BoolFn),
    Until(BoolFn, BoolFn),
    Freq(FreqBound, BoolFn),
}

/// Kind of a formula whose satisfaction may lack a finite witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecKind {
    Finally,
    Globally,
    Freq,
}

#[derive(Clone, Debug)]
pub struct Universe {
    alphabet: Alphabet,
    nodes: Vec<NbNode>,
    index: HashMap<NbNode, NbId>,
    unfold_cache: HashMap<NbId, BoolFn>,
}

impl Universe {
    pub fn new(alphabet: Alphabet) -> Self {
        Universe {
            alphabet,
            nodes: Vec::new(),
            index: HashMap::new(),
            unfold_cache: HashMap::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NbId) -> &NbNode {
        &self.nodes[id.0 as usize]
    }

    pub fn intern(&mut self, node: NbNode) -> NbId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = NbId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    pub fn lookup(&self, node: &NbNode) -> Option<NbId> {
        self.index.get(node).copied()
    }

    pub fn rec_kind(&self, id: NbId) -> Option<RecKind> {
        match self.node(id) {
            NbNode::Finally(_) => Some(RecKind::Finally),
            NbNode::Globally(_) => Some(RecKind::Globally),
            NbNode::Freq(..) => Some(RecKind::Freq),
            _ => None,
        }
    }

    /// Operand of an F, G or frequency-G node.
    pub fn rec_operand(&self, id: NbId) -> Option<&BoolFn> {
        match self.node(id) {
            NbNode::Finally(f) | NbNode::Globally(f) | NbNode::Freq(_, f) => Some(f),
            _ => None,
        }
    }

    /// Interns a negation-normal-form formula as a Boolean function over its
    /// top-level non-Boolean subformulas.
    pub fn encode(&mut self, formula: &Formula) -> Result<BoolFn> {
        Ok(match formula {
            Formula::True => BoolFn::tt(),
            Formula::False => BoolFn::ff(),
            Formula::Atom(a) | Formula::NegAtom(a) => {
                let atom = self
                    .alphabet
                    .index_of(a)
                    .ok_or_else(|| Error::UnknownAtom(a.clone()))?;
                let positive = matches!(formula, Formula::Atom(_));
                BoolFn::var(self.intern(NbNode::Lit { atom, positive }))
            }
            Formula::Not(_) => {
                return Err(Error::Invalid(format!(
                    "formula is not in negation normal form: {formula}"
                )))
            }
            Formula::And(l, r) => self.encode(l)?.and(&self.encode(r)?),
            Formula::Or(l, r) => self.encode(l)?.or(&self.encode(r)?),
            Formula::Next(g) => {
                let g = self.encode(g)?;
                BoolFn::var(self.intern(NbNode::Next(g)))
            }
            Formula::Finally(g) => {
                let g = self.encode(g)?;
                BoolFn::var(self.intern(NbNode::Finally(g)))
            }
            Formula::Globally(g) => {
                let g = self.encode(g)?;
                BoolFn::var(self.intern(NbNode::Globally(g)))
            }
            Formula::Until(l, r) => {
                let l = self.encode(l)?;
                let r = self.encode(r)?;
                BoolFn::var(self.intern(NbNode::Until(l, r)))
            }
            Formula::FreqGlobally(bound, g) => {
                let g = self.encode(g)?;
                BoolFn::var(self.intern(NbNode::Freq(bound.clone(), g)))
            }
        })
    }

    /// Formula represented by an interned node.
    pub fn formula_of(&self, id: NbId) -> Formula {
        match self.node(id) {
            NbNode::Lit { atom, positive } => {
                let name = self.alphabet.atoms()[*atom].clone();
                if *positive {
                    Formula::Atom(name)
                } else {
                    Formula::NegAtom(name)
                }
            }
            NbNode::Next(g) => Formula::next(self.decode(g)),
            NbNode::Finally(g) => Formula::finally(self.decode(g)),
            NbNode::Globally(g) => Formula::globally(self.decode(g)),
            NbNode::Until(l, r) => Formula::until(self.decode(l), self.decode(r)),
            NbNode::Freq(b, g) => Formula::freq(b.clone(), self.decode(g)),
        }
    }

    /// A representative formula (minimal disjunctive normal form).
    pub fn decode(&self, f: &BoolFn) -> Formula {
        if f.is_ff() {
            return Formula::False;
        }
        let mut disjuncts = f.models().iter().map(|m| {
            let mut conj = m.iter().map(|&v| self.formula_of(v));
            let first = conj.next().unwrap_or(Formula::True);
            conj.fold(first, Formula::and)
        });
        let first = disjuncts.next().unwrap_or(Formula::False);
        disjuncts.fold(first, Formula::or)
    }

    pub fn show(&self, f: &BoolFn) -> String {
        self.decode(f).to_string()
    }

    /// Non-Boolean subformulas reachable from `f`, including the variables of
    /// `f` themselves, sorted by id.
    pub fn closure(&self, f: &BoolFn) -> Vec<NbId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = f.vars();
        let mut out = Vec::new();
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v.0 as usize], true) {
                continue;
            }
            out.push(v);
            match self.node(v) {
                NbNode::Lit { .. } => {}
                NbNode::Next(g) | NbNode::Finally(g) | NbNode::Globally(g) | NbNode::Freq(_, g) => {
                    stack.extend(g.vars())
                }
                NbNode::Until(l, r) => {
                    stack.extend(l.vars());
                    stack.extend(r.vars());
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The symbolic one-step unfolding `Unf`.
    pub fn unfold(&mut self, f: &BoolFn) -> BoolFn {
        let images: Vec<(NbId, BoolFn)> = f
            .vars()
            .into_iter()
            .map(|v| (v, self.unfold_var(v)))
            .collect();
        f.substitute(|v| lookup(&images, v))
    }

    fn unfold_var(&mut self, id: NbId) -> BoolFn {
        if let Some(cached) = self.unfold_cache.get(&id) {
            return cached.clone();
        }
        let result = match self.node(id).clone() {
            NbNode::Lit { .. } | NbNode::Next(_) => BoolFn::var(id),
            NbNode::Finally(g) => {
                let again = BoolFn::var(self.intern(NbNode::Next(BoolFn::var(id))));
                self.unfold(&g).or(&again)
            }
            NbNode::Globally(g) => {
                let again = BoolFn::var(self.intern(NbNode::Next(BoolFn::var(id))));
                self.unfold(&g).and(&again)
            }
            NbNode::Until(l, r) => {
                let again = BoolFn::var(self.intern(NbNode::Next(BoolFn::var(id))));
                let hold = self.unfold(&l).and(&again);
                self.unfold(&r).or(&hold)
            }
            // tt & X G{..} g: the frequency operator is only unfolded by name.
            NbNode::Freq(..) => BoolFn::var(self.intern(NbNode::Next(BoolFn::var(id)))),
        };
        self.unfold_cache.insert(id, result.clone());
        result
    }

    /// The next-step operator `f[letter]`: literals become constants, one X is
    /// stripped, everything else is left in place.
    pub fn step(&self, f: &BoolFn, letter: Letter) -> BoolFn {
        f.substitute(|v| self.step_var(v, letter))
    }

    fn step_var(&self, id: NbId, letter: Letter) -> BoolFn {
        match self.node(id) {
            NbNode::Lit { atom, positive } => BoolFn::constant((letter >> atom & 1 == 1) == *positive),
            NbNode::Next(g) => g.clone(),
            _ => BoolFn::var(id),
        }
    }

    /// Master transition `Unf(f)[letter]`.
    pub fn unfold_step(&mut self, f: &BoolFn, letter: Letter) -> BoolFn {
        let images: Vec<(NbId, BoolFn)> = f
            .vars()
            .into_iter()
            .map(|v| {
                let u = self.unfold_var(v);
                (v, self.step(&u, letter))
            })
            .collect();
        f.substitute(|v| lookup(&images, v))
    }

    /// `assumptions ⊢ goal` under propositional reasoning.
    pub fn proves(&self, assumptions: &[BoolFn], goal: &BoolFn) -> bool {
        BoolFn::and_all(assumptions).entails(goal)
    }

    /// `f[X/ff]`.
    pub fn substitute_ff(&self, f: &BoolFn, removed: &[NbId]) -> BoolFn {
        f.assign(|v| removed.contains(&v), false)
    }

    /// True iff `f[letter] = f` for every letter.
    pub fn is_sink(&self, f: &BoolFn) -> bool {
        self.alphabet.letters().all(|l| self.step(f, l) == *f)
    }
}

fn lookup(images: &[(NbId, BoolFn)], v: NbId) -> BoolFn {
    images
        .iter()
        .find(|(k, _)| *k == v)
        .map(|(_, g)| g.clone())
        .unwrap_or_else(|| BoolFn::var(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn universe(atoms: &[&str]) -> Universe {
        Universe::new(Alphabet::new(atoms.iter().copied()).unwrap())
    }

    fn enc(u: &mut Universe, s: &str) -> BoolFn {
        u.encode(&parse_formula(s).unwrap()).unwrap()
    }

    #[test]
    fn unfold_table() {
        let mut u = universe(&["a", "b"]);
        let fa = enc(&mut u, "F a");
        let want = enc(&mut u, "a | X F a");
        assert_eq!(u.unfold(&fa), want);

        let g = enc(&mut u, "G{>=1/2,inf} a");
        let want = enc(&mut u, "X G{>=1/2,inf} a");
        assert_eq!(u.unfold(&g), want);

        let until = enc(&mut u, "b U a");
        let want = enc(&mut u, "a | (b & X(b U a))");
        assert_eq!(u.unfold(&until), want);

        let ga = enc(&mut u, "G (a | F b)");
        let want = enc(&mut u, "(a | b | X F b) & X G (a | F b)");
        assert_eq!(u.unfold(&ga), want);
    }

    #[test]
    fn step_table() {
        let mut u = universe(&["a", "b"]);
        let f = enc(&mut u, "a | (b & X(b U a))");
        let want = enc(&mut u, "b U a");
        // letter {b} = bit 1
        assert_eq!(u.step(&f, 0b10), want);
        let a = enc(&mut u, "a");
        assert!(u.step(&a, 0b01).is_tt());
        let na = enc(&mut u, "!a");
        assert!(u.step(&na, 0b01).is_ff());
    }

    #[test]
    fn propositional_proofs() {
        let mut u = universe(&["a", "b"]);
        let gfa = enc(&mut u, "G F a");
        let goal = enc(&mut u, "G F a | G b");
        assert!(u.proves(std::slice::from_ref(&gfa), &goal));
        let fa = enc(&mut u, "F a");
        assert!(!u.proves(&[gfa], &fa));
        assert!(u.proves(&[], &BoolFn::tt()));
    }

    #[test]
    fn substitution_by_ff() {
        let mut u = universe(&["a", "b"]);
        let f = enc(&mut u, "a | F a");
        let a = enc(&mut u, "a").vars()[0];
        let want = enc(&mut u, "F a");
        assert_eq!(u.substitute_ff(&f, &[a]), want);
        assert!(u.substitute_ff(&BoolFn::tt(), &[a]).is_tt());
        let ab = enc(&mut u, "a & b");
        assert!(u.substitute_ff(&ab, &[a]).is_ff());
    }

    #[test]
    fn decode_round_trips() {
        let mut u = universe(&["a", "b"]);
        for s in ["a & X(b U a)", "G{>0.3,sup} (a | X b)", "F G !a | b"] {
            let f = enc(&mut u, s);
            let back = u.decode(&f);
            assert_eq!(u.encode(&back).unwrap(), f, "{s}");
        }
    }

    #[test]
    fn unknown_atoms_are_rejected() {
        let mut u = universe(&["a"]);
        assert_eq!(
            u.encode(&parse_formula("b").unwrap()),
            Err(Error::UnknownAtom("b".into()))
        );
    }
}
