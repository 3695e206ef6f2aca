//! Ultimately periodic words `stem · cycle^ω` and exact formula evaluation on
//! them.
//!
//! Positions are folded into `stem.len() + cycle.len()` indices; the successor
//! of the last index is the first cycle index. Temporal operators are fixpoints
//! over this finite graph.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::rational::Rational;

pub type LetterSet = BTreeSet<String>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub stem: Vec<LetterSet>,
    pub cycle: Vec<LetterSet>,
}

impl Lasso {
    pub fn new(stem: Vec<LetterSet>, cycle: Vec<LetterSet>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Lasso("the loop must not be empty".into()));
        }
        Ok(Lasso { stem, cycle })
    }

    /// Parses `--stem` / `--loop` arguments, e.g. `"{a b};{}"`.
    pub fn parse(stem: &str, cycle: &str) -> Result<Self> {
        Lasso::new(parse_letters(stem)?, parse_letters(cycle)?)
    }

    pub fn positions(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    pub fn next(&self, i: usize) -> usize {
        if i + 1 == self.positions() {
            self.stem.len()
        } else {
            i + 1
        }
    }

    /// The letter at folded position `i`.
    pub fn letter(&self, i: usize) -> &LetterSet {
        if i < self.stem.len() {
            &self.stem[i]
        } else {
            &self.cycle[i - self.stem.len()]
        }
    }

    /// The letter at absolute position `i` of the infinite word.
    pub fn at(&self, i: usize) -> &LetterSet {
        self.letter(self.fold(i))
    }

    pub fn fold(&self, i: usize) -> usize {
        if i < self.stem.len() {
            i
        } else {
            self.stem.len() + (i - self.stem.len()) % self.cycle.len()
        }
    }

    /// The suffix starting at absolute position `k`.
    pub fn shift(&self, k: usize) -> Lasso {
        if k <= self.stem.len() {
            return Lasso {
                stem: self.stem[k..].to_vec(),
                cycle: self.cycle.clone(),
            };
        }
        let r = (k - self.stem.len()) % self.cycle.len();
        let mut cycle = self.cycle[r..].to_vec();
        cycle.extend_from_slice(&self.cycle[..r]);
        Lasso {
            stem: Vec::new(),
            cycle,
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.stem.iter().chain(&self.cycle).flatten().cloned().collect()
    }

    /// Truth value of `formula` at every folded position.
    pub fn eval(&self, formula: &Formula) -> Vec<bool> {
        let n = self.positions();
        match formula {
            Formula::True => vec![true; n],
            Formula::False => vec![false; n],
            Formula::Atom(a) => (0..n).map(|i| self.letter(i).contains(a)).collect(),
            Formula::NegAtom(a) => (0..n).map(|i| !self.letter(i).contains(a)).collect(),
            Formula::Not(g) => self.eval(g).into_iter().map(|b| !b).collect(),
            Formula::And(l, r) => zip_with(self.eval(l), self.eval(r), |x, y| x && y),
            Formula::Or(l, r) => zip_with(self.eval(l), self.eval(r), |x, y| x || y),
            Formula::Next(g) => {
                let v = self.eval(g);
                (0..n).map(|i| v[self.next(i)]).collect()
            }
            Formula::Until(l, r) => self.until(&self.eval(l), &self.eval(r)),
            Formula::Finally(g) => self.until(&vec![true; n], &self.eval(g)),
            Formula::Globally(g) => {
                let v = self.eval(g);
                let mut out = vec![true; n];
                loop {
                    let mut changed = false;
                    for i in (0..n).rev() {
                        let value = v[i] && out[self.next(i)];
                        if value != out[i] {
                            out[i] = value;
                            changed = true;
                        }
                    }
                    if !changed {
                        return out;
                    }
                }
            }
            Formula::FreqGlobally(bound, g) => {
                let f = self.frequency(&self.eval(g));
                vec![bound.cmp.holds(&f, &bound.p); n]
            }
        }
    }

    fn until(&self, hold: &[bool], goal: &[bool]) -> Vec<bool> {
        let n = self.positions();
        let mut out = vec![false; n];
        loop {
            let mut changed = false;
            for i in (0..n).rev() {
                let value = goal[i] || (hold[i] && out[self.next(i)]);
                if value != out[i] {
                    out[i] = value;
                    changed = true;
                }
            }
            if !changed {
                return out;
            }
        }
    }

    /// Limit frequency of an indicator sequence given on folded positions.
    pub fn frequency(&self, values: &[bool]) -> Rational {
        let hits = values[self.stem.len()..].iter().filter(|&&b| b).count();
        Rational::new(hits.into(), self.cycle.len().into())
    }

    pub fn models(&self, formula: &Formula) -> bool {
        self.eval(formula)[0]
    }

    pub fn freq_on_lasso(&self, xi: &Formula) -> Rational {
        self.frequency(&self.eval(xi))
    }

    /// The members of `rec` eventually always satisfied on this word: `F x`
    /// when `x` holds infinitely often, `G x` when it holds almost always, and
    /// frequency operators when they hold.
    pub fn rec_truth(&self, rec: &[Formula]) -> Vec<bool> {
        rec.iter()
            .map(|f| match f {
                Formula::Finally(_) => self.models(&Formula::globally(f.clone())),
                Formula::Globally(_) => self.models(&Formula::finally(f.clone())),
                Formula::FreqGlobally(..) => self.models(f),
                _ => false,
            })
            .collect()
    }
}

fn zip_with(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

/// Parses a `;`-separated list of brace sets.
pub fn parse_letters(text: &str) -> Result<Vec<LetterSet>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|item| {
            let item = item.trim();
            let inner = item
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| Error::Lasso(format!("expected a letter like {{a b}}, got `{item}`")))?;
            inner
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|atom| {
                    let ok = atom.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                        && atom.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if ok {
                        Ok(atom.to_string())
                    } else {
                        Err(Error::Lasso(format!("malformed atom `{atom}`")))
                    }
                })
                .collect()
        })
        .collect()
}

pub fn format_letters(letters: &[LetterSet]) -> String {
    letters
        .iter()
        .map(|l| format!("{{{}}}", l.iter().cloned().collect::<Vec<_>>().join(" ")))
        .collect::<Vec<_>>()
        .join(";")
}

impl fmt::Display for Lasso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})^w", format_letters(&self.stem), format_letters(&self.cycle))
    }
}

/// Seeded random lasso with `stem.len() <= max_stem` and
/// `1 <= cycle.len() <= max_loop`.
pub fn random_lasso(seed: u64, max_stem: usize, max_loop: usize, atoms: &[String]) -> Lasso {
    assert!(max_loop >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_lasso_with(&mut rng, max_stem, max_loop, atoms)
}

pub fn random_lasso_with(rng: &mut impl Rng, max_stem: usize, max_loop: usize, atoms: &[String]) -> Lasso {
    let letter = |rng: &mut dyn rand::RngCore| -> LetterSet {
        atoms.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
    };
    let stem_len = rng.gen_range(0..=max_stem);
    let loop_len = rng.gen_range(1..=max_loop);
    let stem = (0..stem_len).map(|_| letter(rng)).collect();
    let cycle = (0..loop_len).map(|_| letter(rng)).collect();
    Lasso { stem, cycle }
}
