//! Dense two-phase simplex over exact rationals with Bland's rule.
//! Dimensions here are tiny (a few dozen columns), so clarity wins over speed.

use mediatorless_game::Rational;
use num::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// `maximize c·x subject to rows, x ≥ 0`.
#[derive(Clone, Debug, Default)]
pub struct Lp {
    pub vars: usize,
    pub objective: Vec<Rational>,
    pub rows: Vec<(Vec<Rational>, Cmp, Rational)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl Lp {
    pub fn new(vars: usize) -> Self {
        Lp { vars, objective: vec![Rational::zero(); vars], rows: Vec::new() }
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, cmp: Cmp, rhs: Rational) {
        assert_eq!(coeffs.len(), self.vars);
        self.rows.push((coeffs, cmp, rhs));
    }

    pub fn maximize(&self) -> LpOutcome {
        Tableau::build(self).solve(self)
    }
}

struct Tableau {
    // m rows of [coeffs | rhs]
    a: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
    n_art_start: usize,
}

impl Tableau {
    fn build(lp: &Lp) -> Tableau {
        let m = lp.rows.len();
        let n_slack = lp.rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let art_start = lp.vars + n_slack;
        let cols = art_start + m;
        let mut a = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = lp.vars;
        for (i, (coeffs, cmp, rhs)) in lp.rows.iter().enumerate() {
            let flip = rhs.is_negative();
            let sign = if flip { -Rational::one() } else { Rational::one() };
            let mut row = vec![Rational::zero(); cols + 1];
            for (j, c) in coeffs.iter().enumerate() {
                row[j] = c * &sign;
            }
            row[cols] = rhs * &sign;
            let cmp = match (cmp, flip) {
                (Cmp::Le, true) => Cmp::Ge,
                (Cmp::Ge, true) => Cmp::Le,
                (c, _) => *c,
            };
            match cmp {
                Cmp::Le => {
                    row[slack] = Rational::one();
                    slack += 1;
                }
                Cmp::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                }
                Cmp::Eq => {}
            }
            // Every row gets an artificial; rows whose slack could serve as
            // basis still start on the artificial, keeping setup uniform.
            row[art_start + i] = Rational::one();
            basis.push(art_start + i);
            a.push(row);
        }
        Tableau { a, basis, cols, n_art_start: art_start }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v *= &inv;
        }
        let prow = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost·x` over the current basis restricted to `allowed` columns.
    /// Returns false if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            // reduced cost of column j: cost_j − Σ_i cost_{basis_i} a_ij
            let mut enter = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for (i, row) in self.a.iter().enumerate() {
                    if !row[j].is_zero() {
                        rc -= &cost[self.basis[i]] * &row[j];
                    }
                }
                if rc.is_positive() {
                    enter = Some(j);
                    break;
                }
            }
            let Some(c) = enter else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.cols] / &row[c];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn solve(mut self, lp: &Lp) -> LpOutcome {
        let total = self.cols;
        // phase 1: maximize −Σ artificials
        let mut cost1 = vec![Rational::zero(); total];
        for c in cost1.iter_mut().skip(self.n_art_start) {
            *c = -Rational::one();
        }
        self.optimize(&cost1, total);
        let infeasible = self
            .basis
            .iter()
            .zip(&self.a)
            .any(|(&b, row)| b >= self.n_art_start && !row[self.cols].is_zero());
        if infeasible {
            return LpOutcome::Infeasible;
        }
        // drive zero-valued artificials out of the basis where possible
        let mut r = 0;
        while r < self.a.len() {
            if self.basis[r] >= self.n_art_start {
                if let Some(c) = (0..self.n_art_start).find(|&c| !self.a[r][c].is_zero()) {
                    self.pivot(r, c);
                } else {
                    // redundant constraint
                    self.a.remove(r);
                    self.basis.remove(r);
                    continue;
                }
            }
            r += 1;
        }
        let mut cost2 = vec![Rational::zero(); total];
        cost2[..lp.vars].clone_from_slice(&lp.objective);
        if !self.optimize(&cost2, self.n_art_start) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); lp.vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < lp.vars {
                x[b] = self.a[i][self.cols].clone();
            }
        }
        let value = x.iter().zip(&lp.objective).map(|(v, c)| v * c).sum();
        LpOutcome::Optimal { value, x }
    }
}
