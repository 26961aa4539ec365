//! Dense exact simplex (two-phase, Bland's rule).
//!
//! Problems are given as `min c·x` subject to `A x = b`, `x >= 0`.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

/// Equality-form linear program.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, c: Vec<Rational>) -> LinearProgram {
        debug_assert_eq!(a.len(), b.len());
        debug_assert!(a.iter().all(|row| row.len() == c.len()));
        LinearProgram { a, b, c }
    }

    pub fn minimize(&self) -> LpOutcome {
        Tableau::solve(self, false)
    }

    pub fn maximize(&self) -> LpOutcome {
        match Tableau::solve(self, true) {
            LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x, value: -value },
            other => other,
        }
    }

    /// Some feasible point, if any.
    pub fn feasible_point(&self) -> Option<Vec<Rational>> {
        let zero = LinearProgram {
            a: self.a.clone(),
            b: self.b.clone(),
            c: vec![Rational::zero(); self.c.len()],
        };
        match zero.minimize() {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

struct Tableau {
    /// Rows `0..m` are constraints; each row holds `n` coefficients then the rhs.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    n: usize,
}

impl Tableau {
    fn solve(lp: &LinearProgram, negate: bool) -> LpOutcome {
        let n = lp.c.len();
        let m = lp.a.len();
        let cost: Vec<Rational> = if negate {
            lp.c.iter().map(|v| -v).collect()
        } else {
            lp.c.clone()
        };

        // Phase 1: artificial column per row, rhs made nonnegative.
        let width = n + m;
        let mut rows = Vec::with_capacity(m);
        for (i, (row, rhs)) in lp.a.iter().zip(&lp.b).enumerate() {
            let flip = rhs.is_negative();
            let mut r = Vec::with_capacity(width + 1);
            for v in row {
                r.push(if flip { -v } else { v.clone() });
            }
            for k in 0..m {
                r.push(if k == i { Rational::one() } else { Rational::zero() });
            }
            r.push(if flip { -rhs } else { rhs.clone() });
            rows.push(r);
        }
        let mut t = Tableau {
            rows,
            basis: (n..n + m).collect(),
            n: width,
        };
        let mut phase1 = vec![Rational::zero(); width];
        for v in phase1.iter_mut().skip(n) {
            *v = Rational::one();
        }
        match t.optimize(&phase1, width) {
            Ok(()) => {}
            Err(()) => unreachable!("phase 1 is bounded below by zero"),
        }
        if !t.objective(&phase1).is_zero() {
            return LpOutcome::Infeasible;
        }

        // Drive remaining artificials out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= n {
                match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }

        // Phase 2 restricted to the original columns.
        let mut phase2 = cost.clone();
        phase2.resize(width, Rational::zero());
        if t.optimize(&phase2, n).is_err() {
            return LpOutcome::Unbounded;
        }
        let x = t.solution(n);
        let value = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpOutcome::Optimal { x, value }
    }

    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.n]
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &j)| &cost[j] * self.rhs(i))
            .sum()
    }

    fn solution(&self, cols: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); cols];
        for (i, &j) in self.basis.iter().enumerate() {
            if j < cols {
                x[j] = self.rhs(i).clone();
            }
        }
        x
    }

    /// Runs simplex iterations over columns `0..cols`. `Err` means unbounded.
    fn optimize(&mut self, cost: &[Rational], cols: usize) -> Result<(), ()> {
        loop {
            let entering = (0..cols).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced: Rational = &cost[j]
                    - self
                        .basis
                        .iter()
                        .enumerate()
                        .map(|(i, &b)| &cost[b] * &self.rows[i][j])
                        .sum::<Rational>();
                reduced.is_negative()
            });
            let Some(j) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let coef = &self.rows[i][j];
                if coef.is_positive() {
                    let ratio = self.rhs(i) / coef;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((i, _)) = best else {
                return Err(());
            };
            self.pivot(i, j);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v /= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }
}
