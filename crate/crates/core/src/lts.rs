//! Deterministic labelled transition systems over the powerset alphabet.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::hash::Hash;

use crate::error::{Error, Result};

/// A letter is a subset of the alphabet's atoms, encoded as a bitmask over
/// their sorted order.
pub type Letter = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    atoms: Vec<String>,
}

impl Alphabet {
    pub const MAX_ATOMS: usize = 16;

    pub fn new<I, S>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = atoms.into_iter().map(Into::into).collect();
        if set.len() > Self::MAX_ATOMS {
            return Err(Error::Invalid(format!(
                "at most {} atomic propositions are supported",
                Self::MAX_ATOMS
            )));
        }
        Ok(Alphabet {
            atoms: set.into_iter().collect(),
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.atoms.binary_search_by(|a| a.as_str().cmp(atom)).ok()
    }

    pub fn num_letters(&self) -> usize {
        1 << self.atoms.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.num_letters() as Letter
    }

    /// Projects a set of atoms onto this alphabet; atoms outside it are dropped.
    pub fn letter_of<'a>(&self, atoms: impl IntoIterator<Item = &'a String>) -> Letter {
        atoms
            .into_iter()
            .filter_map(|a| self.index_of(a))
            .fold(0, |acc, i| acc | (1 << i))
    }

    pub fn atoms_of(&self, letter: Letter) -> BTreeSet<String> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| letter >> i & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect()
    }

    /// `{a b}` rendering, also used by the lasso syntax.
    pub fn fmt_letter(&self, letter: Letter) -> String {
        let names: Vec<&str> = self
            .atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| letter >> i & 1 == 1)
            .map(|(_, a)| a.as_str())
            .collect();
        format!("{{{}}}", names.join(" "))
    }
}

/// Deterministic LTS with an opaque payload per state. `delta[q][letter]`
/// is `None` where the transition function is undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts<S> {
    pub alphabet: Alphabet,
    pub states: Vec<S>,
    pub initial: usize,
    pub delta: Vec<Vec<Option<u32>>>,
}

impl<S> Lts<S> {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn successor(&self, state: usize, letter: Letter) -> Option<usize> {
        self.delta[state][letter as usize].map(|q| q as usize)
    }

    pub fn is_total(&self) -> bool {
        self.delta.iter().all(|row| row.iter().all(Option::is_some))
    }

    /// Same transition structure, payloads ignored.
    pub fn same_structure<T>(&self, other: &Lts<T>) -> bool {
        self.initial == other.initial && self.delta == other.delta && self.alphabet == other.alphabet
    }

    /// Graphviz rendering; parallel edges are merged into one labelled with
    /// every letter taking it.
    pub fn to_dot(
        &self,
        name: &str,
        label: impl Fn(usize, &S) -> String,
        attrs: impl Fn(usize) -> Option<String>,
    ) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(out, "  rankdir=LR;");
        let _ = writeln!(out, "  init [shape=point];");
        for (q, s) in self.states.iter().enumerate() {
            let extra = attrs(q).map(|a| format!(", {a}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "  q{q} [shape=box, label=\"{}\"{extra}];",
                escape(&label(q, s))
            );
        }
        let _ = writeln!(out, "  init -> q{};", self.initial);
        for (q, row) in self.delta.iter().enumerate() {
            let mut grouped: Vec<(u32, Vec<String>)> = Vec::new();
            for (letter, succ) in row.iter().enumerate() {
                if let Some(t) = succ {
                    let l = self.alphabet.fmt_letter(letter as Letter);
                    match grouped.iter_mut().find(|(target, _)| target == t) {
                        Some((_, ls)) => ls.push(l),
                        None => grouped.push((*t, vec![l])),
                    }
                }
            }
            for (t, ls) in grouped {
                let _ = writeln!(
                    out,
                    "  q{q} -> q{t} [label=\"{}\"];",
                    escape(&ls.join(","))
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Breadth-first construction of the reachable part of a deterministic LTS.
/// `succ` returns `None` where the transition is undefined.
pub fn explore<S, F>(
    alphabet: &Alphabet,
    initial: S,
    cap: usize,
    what: &'static str,
    mut succ: F,
) -> Result<Lts<S>>
where
    S: Clone + Eq + Hash,
    F: FnMut(&S, Letter) -> Result<Option<S>>,
{
    let mut states = vec![initial.clone()];
    let mut index: HashMap<S, u32> = HashMap::new();
    index.insert(initial, 0);
    let mut delta: Vec<Vec<Option<u32>>> = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let current = states[next].clone();
        let mut row = Vec::with_capacity(alphabet.num_letters());
        for letter in alphabet.letters() {
            let target = match succ(&current, letter)? {
                None => None,
                Some(s) => Some(match index.get(&s) {
                    Some(&i) => i,
                    None => {
                        if states.len() >= cap {
                            return Err(Error::StateCap { what, cap });
                        }
                        let i = states.len() as u32;
                        index.insert(s.clone(), i);
                        states.push(s);
                        i
                    }
                }),
            };
            row.push(target);
        }
        delta.push(row);
        next += 1;
    }
    Ok(Lts {
        alphabet: alphabet.clone(),
        states,
        initial: 0,
        delta,
    })
}
