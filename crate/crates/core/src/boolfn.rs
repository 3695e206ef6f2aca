//! Positive Boolean functions over interned non-Boolean formulas.
//!
//! A function is stored as the antichain of its minimal models, each model a
//! sorted set of variable ids. Two functions are propositionally equivalent
//! exactly when their antichains are equal, so `Eq`/`Hash` are the quotient.

use std::fmt;

/// Identifier of an interned non-Boolean formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NbId(pub u32);

impl fmt::Display for NbId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolFn {
    models: Vec<Vec<NbId>>,
}

impl BoolFn {
    pub fn tt() -> Self {
        BoolFn {
            models: vec![Vec::new()],
        }
    }

    pub fn ff() -> Self {
        BoolFn { models: Vec::new() }
    }

    pub fn var(id: NbId) -> Self {
        BoolFn {
            models: vec![vec![id]],
        }
    }

    pub fn constant(value: bool) -> Self {
        if value {
            Self::tt()
        } else {
            Self::ff()
        }
    }

    /// Builds a function from arbitrary (not necessarily minimal) models.
    pub fn from_models(models: impl IntoIterator<Item = Vec<NbId>>) -> Self {
        let mut models: Vec<Vec<NbId>> = models
            .into_iter()
            .map(|mut m| {
                m.sort_unstable();
                m.dedup();
                m
            })
            .collect();
        minimize(&mut models);
        BoolFn { models }
    }

    pub fn is_tt(&self) -> bool {
        self.models.len() == 1 && self.models[0].is_empty()
    }

    pub fn is_ff(&self) -> bool {
        self.models.is_empty()
    }

    /// The minimal models in canonical order.
    pub fn models(&self) -> &[Vec<NbId>] {
        &self.models
    }

    pub fn vars(&self) -> Vec<NbId> {
        let mut v: Vec<NbId> = self.models.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn or(&self, other: &BoolFn) -> BoolFn {
        if self.is_tt() || other.is_ff() {
            return self.clone();
        }
        if other.is_tt() || self.is_ff() {
            return other.clone();
        }
        let mut models = self.models.clone();
        models.extend(other.models.iter().cloned());
        minimize(&mut models);
        BoolFn { models }
    }

    pub fn and(&self, other: &BoolFn) -> BoolFn {
        if self.is_ff() || other.is_tt() {
            return self.clone();
        }
        if other.is_ff() || self.is_tt() {
            return other.clone();
        }
        let mut models = Vec::with_capacity(self.models.len() * other.models.len());
        for a in &self.models {
            for b in &other.models {
                models.push(union_sorted(a, b));
            }
        }
        minimize(&mut models);
        BoolFn { models }
    }

    pub fn and_all<'a>(items: impl IntoIterator<Item = &'a BoolFn>) -> BoolFn {
        let mut acc = BoolFn::tt();
        for f in items {
            acc = acc.and(f);
            if acc.is_ff() {
                break;
            }
        }
        acc
    }

    pub fn or_all<'a>(items: impl IntoIterator<Item = &'a BoolFn>) -> BoolFn {
        let mut acc = BoolFn::ff();
        for f in items {
            acc = acc.or(f);
            if acc.is_tt() {
                break;
            }
        }
        acc
    }

    /// Truth value under the assignment that makes exactly `true_vars` true.
    /// `true_vars` must be sorted.
    pub fn eval_sorted(&self, true_vars: &[NbId]) -> bool {
        self.models.iter().any(|m| is_subset_sorted(m, true_vars))
    }

    pub fn eval(&self, assignment: impl Fn(NbId) -> bool) -> bool {
        self.models.iter().any(|m| m.iter().all(|&v| assignment(v)))
    }

    /// Simultaneous substitution of every variable by a function.
    pub fn substitute(&self, mut image: impl FnMut(NbId) -> BoolFn) -> BoolFn {
        let mut cache: Vec<(NbId, BoolFn)> = Vec::new();
        let mut result = BoolFn::ff();
        for model in &self.models {
            let mut conj = BoolFn::tt();
            for &v in model {
                let g = match cache.iter().find(|(k, _)| *k == v) {
                    Some((_, g)) => g.clone(),
                    None => {
                        let g = image(v);
                        cache.push((v, g.clone()));
                        g
                    }
                };
                conj = conj.and(&g);
                if conj.is_ff() {
                    break;
                }
            }
            result = result.or(&conj);
            if result.is_tt() {
                break;
            }
        }
        result
    }

    /// Replaces every variable for which `pred` holds by `value`.
    pub fn assign(&self, pred: impl Fn(NbId) -> bool, value: bool) -> BoolFn {
        if value {
            BoolFn::from_models(
                self.models
                    .iter()
                    .map(|m| m.iter().copied().filter(|&v| !pred(v)).collect()),
            )
        } else {
            BoolFn::from_models(
                self.models
                    .iter()
                    .filter(|m| !m.iter().any(|&v| pred(v)))
                    .cloned(),
            )
        }
    }

    /// `self` propositionally entails `other`: every minimal model of `self`
    /// satisfies `other`. Sound and complete because both are monotone.
    pub fn entails(&self, other: &BoolFn) -> bool {
        self.models.iter().all(|m| other.eval_sorted(m))
    }
}

fn union_sorted(a: &[NbId], b: &[NbId]) -> Vec<NbId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn is_subset_sorted(small: &[NbId], big: &[NbId]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for x in small {
        while j < big.len() && big[j] < *x {
            j += 1;
        }
        if j == big.len() || big[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Keeps only minimal models, sorted canonically.
fn minimize(models: &mut Vec<Vec<NbId>>) {
    models.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    models.dedup();
    let mut kept: Vec<Vec<NbId>> = Vec::with_capacity(models.len());
    for m in models.drain(..) {
        if !kept.iter().any(|k| is_subset_sorted(k, &m)) {
            kept.push(m);
        }
    }
    kept.sort_unstable();
    *models = kept;
}
