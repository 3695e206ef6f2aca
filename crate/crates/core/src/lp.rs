//! Exact two-phase simplex over arbitrary-precision rationals.
//!
//! Variables are non-negative. Bland's rule (smallest index enters, smallest
//! basic index leaves on ties) rules out cycling.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Le => "<=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub rel: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lp {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    /// Maximized.
    pub objective: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, x: Vec<Rational> },
}

impl Lp {
    pub fn new(num_vars: usize) -> Self {
        Lp {
            num_vars,
            ..Default::default()
        }
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Rational)>, rel: Relation, rhs: Rational) {
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// Whether `x` satisfies every constraint exactly.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c.coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
                match c.rel {
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Le => lhs <= c.rhs,
                }
            })
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).solve(self)
    }
}

struct Tableau {
    /// `rows[i]` holds the coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Columns `[0, num_vars)` are structural, then slacks, then artificials.
    first_artificial: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &Lp) -> Tableau {
        let m = lp.constraints.len();
        let slacks = lp.constraints.iter().filter(|c| c.rel != Relation::Eq).count();
        let first_artificial = lp.num_vars + slacks;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_slack = lp.num_vars;
        let mut next_artificial = first_artificial;
        // artificial columns are allocated lazily: one per row needing one
        let needs_artificial: Vec<bool> = lp
            .constraints
            .iter()
            .map(|c| {
                let flip = c.rhs.is_negative();
                let rel = flipped(c.rel, flip);
                rel != Relation::Le
            })
            .collect();
        let width = first_artificial + needs_artificial.iter().filter(|&&b| b).count();
        for (c, &artificial) in lp.constraints.iter().zip(&needs_artificial) {
            let flip = c.rhs.is_negative();
            let sign = if flip { -Rational::one() } else { Rational::one() };
            let mut row = vec![Rational::zero(); width + 1];
            for (j, a) in &c.coeffs {
                row[*j] += a * &sign;
            }
            row[width] = &c.rhs * &sign;
            match flipped(c.rel, flip) {
                Relation::Le => {
                    row[next_slack] = Rational::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -Rational::one();
                    next_slack += 1;
                }
                Relation::Eq => {}
            }
            if artificial {
                row[next_artificial] = Rational::one();
                basis.push(next_artificial);
                next_artificial += 1;
            }
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            first_artificial,
            width,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nonzero: Vec<usize> = (0..=self.width).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for &j in &nonzero {
                row[j] -= &factor * &pivot_row[j];
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over the columns below `limit`, starting from the
    /// current basis. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], limit: usize) -> bool {
        loop {
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    if !row[j].is_zero() {
                        reduced -= &cost[self.basis[i]] * &row[j];
                    }
                }
                if reduced.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.width] / &row[c];
                    let better = match &leaving {
                        None => true,
                        Some((k, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k]),
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            match leaving {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn value(&self, cost: &[Rational]) -> Rational {
        self.rows
            .iter()
            .zip(&self.basis)
            .map(|(row, &b)| &cost[b] * &row[self.width])
            .sum()
    }

    fn solve(mut self, lp: &Lp) -> LpOutcome {
        // Phase one: maximize minus the sum of the artificials.
        let mut cost = vec![Rational::zero(); self.width];
        for c in cost.iter_mut().skip(self.first_artificial) {
            *c = -Rational::one();
        }
        let bounded = self.optimize(&cost, self.width);
        debug_assert!(bounded);
        if self.value(&cost).is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(c) => self.pivot(r, c),
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        let mut cost = vec![Rational::zero(); self.width];
        for (j, c) in &lp.objective {
            cost[*j] += c;
        }
        if !self.optimize(&cost, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); lp.num_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < lp.num_vars {
                x[b] = row[self.width].clone();
            }
        }
        let value = lp.objective.iter().map(|(j, c)| c * &x[*j]).sum();
        LpOutcome::Optimal { value, x }
    }
}

fn flipped(rel: Relation, flip: bool) -> Relation {
    match (rel, flip) {
        (Relation::Ge, true) => Relation::Le,
        (Relation::Le, true) => Relation::Ge,
        (r, _) => r,
    }
}
