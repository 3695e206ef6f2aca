//! Syntax of frequency LTL, negation normal form, and the syntactic fragment
//! in which until never occurs under a globally operator.

mod parser;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;

use crate::rational::{fmt_exact, Rational};

pub use parser::{parse_formula, parse_formula_raw};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cmp {
    Geq,
    Gt,
}

impl Cmp {
    pub fn holds(self, value: &Rational, bound: &Rational) -> bool {
        match self {
            Cmp::Geq => value >= bound,
            Cmp::Gt => value > bound,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Geq => ">=",
            Cmp::Gt => ">",
        }
    }
}

/// Which limit of the running average is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ext {
    Inf,
    Sup,
}

impl Ext {
    pub fn name(self) -> &'static str {
        match self {
            Ext::Inf => "inf",
            Ext::Sup => "sup",
        }
    }
}

/// Bound of a frequency-globally operator: `lr_ext(...) cmp p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreqBound {
    pub cmp: Cmp,
    pub p: Rational,
    pub ext: Ext,
}

impl FreqBound {
    pub fn new(cmp: Cmp, p: Rational, ext: Ext) -> Self {
        FreqBound { cmp, p, ext }
    }

    /// The bound satisfied exactly when this one is violated, applied to the
    /// complementary frequency `1 - f`.
    pub fn dual(&self) -> FreqBound {
        let cmp = match self.cmp {
            Cmp::Geq => Cmp::Gt,
            Cmp::Gt => Cmp::Geq,
        };
        let ext = match self.ext {
            Ext::Inf => Ext::Sup,
            Ext::Sup => Ext::Inf,
        };
        FreqBound {
            cmp,
            p: Rational::one() - &self.p,
            ext,
        }
    }
}

impl fmt::Display for FreqBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}{},{}}}",
            self.cmp.symbol(),
            fmt_exact(&self.p),
            self.ext.name()
        )
    }
}

/// A frequency-LTL syntax tree.
///
/// `Not` only appears in raw parser output; every public operation other than
/// [`push_negation`] expects negation normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    NegAtom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
    FreqGlobally(FreqBound, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn neg_atom(name: &str) -> Formula {
        Formula::NegAtom(name.to_string())
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn until(l: Formula, r: Formula) -> Formula {
        Formula::Until(Box::new(l), Box::new(r))
    }

    pub fn finally(f: Formula) -> Formula {
        Formula::Finally(Box::new(f))
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }

    pub fn freq(bound: FreqBound, f: Formula) -> Formula {
        Formula::FreqGlobally(bound, Box::new(f))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn is_boolean(&self) -> bool {
        matches!(self, Formula::And(..) | Formula::Or(..))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => vec![],
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::Finally(f)
            | Formula::Globally(f)
            | Formula::FreqGlobally(_, f) => vec![f],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Until(l, r) => vec![l, r],
        }
    }

    /// Number of syntax-tree nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) | Formula::NegAtom(a) => {
                out.insert(a.clone());
            }
            _ => self.children().iter().for_each(|c| c.collect_atoms(out)),
        }
    }

    pub fn contains_until(&self) -> bool {
        matches!(self, Formula::Until(..)) || self.children().iter().any(|c| c.contains_until())
    }
}

/// True iff no until occurs in the scope of a globally or frequency-globally
/// operator. Negations other than on atoms are rejected as well.
pub fn in_fragment(formula: &Formula) -> bool {
    fn walk(f: &Formula, under_g: bool) -> bool {
        match f {
            Formula::Not(_) => false,
            Formula::Until(l, r) => !under_g && walk(l, under_g) && walk(r, under_g),
            Formula::Globally(c) | Formula::FreqGlobally(_, c) => walk(c, true),
            _ => f.children().iter().all(|c| walk(c, under_g)),
        }
    }
    walk(formula, false)
}

/// Rewrites a formula with arbitrary negations into an equivalent one where
/// negation only sits on atoms.
pub fn push_negation(formula: &Formula) -> Formula {
    nnf(formula, false)
}

fn nnf(f: &Formula, neg: bool) -> Formula {
    use Formula::*;
    let b = |g: &Formula, n: bool| Box::new(nnf(g, n));
    match (f, neg) {
        (True, false) | (False, true) => True,
        (True, true) | (False, false) => False,
        (Atom(a), false) | (NegAtom(a), true) => Atom(a.clone()),
        (Atom(a), true) | (NegAtom(a), false) => NegAtom(a.clone()),
        (Not(g), n) => nnf(g, !n),
        (And(l, r), false) => And(b(l, false), b(r, false)),
        (And(l, r), true) => Or(b(l, true), b(r, true)),
        (Or(l, r), false) => Or(b(l, false), b(r, false)),
        (Or(l, r), true) => And(b(l, true), b(r, true)),
        (Next(g), n) => Next(b(g, n)),
        (Finally(g), false) => Finally(b(g, false)),
        (Finally(g), true) => Globally(b(g, true)),
        (Globally(g), false) => Globally(b(g, false)),
        (Globally(g), true) => Finally(b(g, true)),
        (Until(l, r), false) => Until(b(l, false), b(r, false)),
        // !(l U r) == (!r U (!l & !r)) | G !r
        (Until(l, r), true) => Or(
            Box::new(Until(
                b(r, true),
                Box::new(And(b(l, true), b(r, true))),
            )),
            Box::new(Globally(b(r, true))),
        ),
        (FreqGlobally(bound, g), false) => FreqGlobally(bound.clone(), b(g, false)),
        (FreqGlobally(bound, g), true) => FreqGlobally(bound.dual(), b(g, true)),
    }
}

/// All subformulas whose root is neither a conjunction nor a disjunction,
/// excluding the constants.
pub fn nb_subformulas(formula: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    fn walk(f: &Formula, out: &mut BTreeSet<Formula>) {
        if !f.is_boolean() && !matches!(f, Formula::True | Formula::False) {
            out.insert(f.clone());
        }
        f.children().iter().for_each(|c| walk(c, out));
    }
    walk(formula, &mut out);
    out
}

// Precedence levels: until 0, or 1, and 2, unary 3.
fn write_prec(f: &Formula, level: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let own = match f {
        Formula::Until(..) => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        _ => 3,
    };
    if own < level {
        write!(out, "(")?;
        write_prec(f, 0, out)?;
        return write!(out, ")");
    }
    let unary = |op: &str, g: &Formula, out: &mut fmt::Formatter<'_>| -> fmt::Result {
        write!(out, "{op}")?;
        if g.is_boolean() || matches!(g, Formula::Until(..)) {
            write_prec(g, 3, out)
        } else {
            write!(out, " ")?;
            write_prec(g, 3, out)
        }
    };
    match f {
        Formula::True => write!(out, "tt"),
        Formula::False => write!(out, "ff"),
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::NegAtom(a) => write!(out, "!{a}"),
        Formula::Not(g) => {
            write!(out, "!")?;
            write_prec(g, 3, out)
        }
        Formula::And(l, r) => {
            write_prec(l, 2, out)?;
            write!(out, " & ")?;
            write_prec(r, 3, out)
        }
        Formula::Or(l, r) => {
            write_prec(l, 1, out)?;
            write!(out, " | ")?;
            write_prec(r, 2, out)
        }
        Formula::Until(l, r) => {
            write_prec(l, 1, out)?;
            write!(out, " U ")?;
            write_prec(r, 0, out)
        }
        Formula::Next(g) => unary("X", g, out),
        Formula::Finally(g) => unary("F", g, out),
        Formula::Globally(g) => unary("G", g, out),
        Formula::FreqGlobally(bound, g) => unary(&format!("G{bound}"), g, out),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, 0, f)
    }
}
