//! Dense two-phase simplex for `min c.x, Ax = b, x >= 0`.

use crate::error::{Error, Result};
use crate::numerics::Field;

const MAX_PIVOTS: usize = 100_000;
const DEGENERATE_RUN: usize = 64;

#[derive(Clone, Debug)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    /// Basic column per row.
    pub basis: Vec<usize>,
    pub objective: T,
    /// Equality-constraint multipliers `pi` with `A^T pi <= c`.
    pub duals: Vec<T>,
    pub pivots: usize,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    obj: Vec<T>,
    basis: Vec<usize>,
    width: usize,
    tol: f64,
    pivots: usize,
}

impl<T: Field> Tableau<T> {
    fn rhs(&self) -> usize {
        self.width
    }

    fn negative(&self, v: &T) -> bool {
        *v < T::zero() && (self.tol == 0.0 || v.to_f64() < -self.tol)
    }

    fn positive(&self, v: &T) -> bool {
        *v > T::zero() && (self.tol == 0.0 || v.to_f64() > self.tol)
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.rows[r][e].clone();
        let row: Vec<T> = self.rows[r].iter().map(|v| v.clone() / p.clone()).collect();
        for (i, other) in self.rows.iter_mut().enumerate() {
            if i == r || other[e].is_zero() {
                continue;
            }
            let f = other[e].clone();
            for (o, v) in other.iter_mut().zip(&row) {
                if !v.is_zero() {
                    *o = o.clone() - &(f.clone() * v);
                }
            }
            other[e] = T::zero();
        }
        if !self.obj[e].is_zero() {
            let f = self.obj[e].clone();
            for (o, v) in self.obj.iter_mut().zip(&row) {
                if !v.is_zero() {
                    *o = o.clone() - &(f.clone() * v);
                }
            }
            self.obj[e] = T::zero();
        }
        self.rows[r] = row;
        self.basis[r] = e;
        self.pivots += 1;
    }

    /// Dantzig pricing until a run of degenerate pivots, then Bland's rule.
    fn entering(&self, allowed: usize, bland: bool) -> Option<usize> {
        if bland {
            return (0..allowed).find(|&j| self.negative(&self.obj[j]));
        }
        let mut best: Option<usize> = None;
        for j in 0..allowed {
            if self.negative(&self.obj[j]) && best.map_or(true, |b| self.obj[j] < self.obj[b]) {
                best = Some(j);
            }
        }
        best
    }

    fn run(&mut self, allowed: usize) -> Result<()> {
        let mut degenerate = 0usize;
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(Error::Solver("pivot limit exceeded".into()));
            }
            let Some(e) = self.entering(allowed, degenerate >= DEGENERATE_RUN) else {
                return Ok(());
            };
            let rhs = self.rhs();
            // pivot candidates are judged relative to the column, so that nearly
            // singular but well-posed systems still admit their small pivots
            let col_max = self
                .rows
                .iter()
                .map(|row| row[e].abs().to_f64())
                .fold(0.0, f64::max);
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let v = &self.rows[i][e];
                if *v <= T::zero() || (self.tol > 0.0 && v.to_f64() <= self.tol * col_max) {
                    continue;
                }
                let ratio = self.rows[i][rhs].clone() / self.rows[i][e].clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let gap = (ratio.clone() - &br).abs().to_f64();
                        let tie = if self.tol == 0.0 {
                            ratio == br
                        } else {
                            gap <= self.tol * (1.0 + br.abs().to_f64())
                        };
                        if (tie && self.basis[i] < self.basis[bi]) || (!tie && ratio < br) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, step)) = best else {
                return Err(Error::Solver("objective unbounded below".into()));
            };
            if self.positive(&step) {
                degenerate = 0;
            } else {
                degenerate += 1;
            }
            self.pivot(r, e);
        }
    }
}

pub fn solve_standard_form<T: Field>(a: &[Vec<T>], b: &[T], c: &[T]) -> Result<LpSolution<T>> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Solver("inconsistent LP dimensions".into()));
    }
    let tol = T::rounding_level();
    let width = n + m;
    let mut signs = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i] < T::zero();
        signs.push(flip);
        let mut row: Vec<T> = a[i]
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        row.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    let mut obj = vec![T::zero(); width + 1];
    for row in &rows {
        for j in 0..n {
            obj[j] = obj[j].clone() - &row[j];
        }
        obj[width] = obj[width].clone() - &row[width];
    }
    let mut tab = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
        width,
        tol,
        pivots: 0,
    };
    tab.run(n)?;
    // residual of the artificials still in the basis; the running objective
    // value accumulates rounding and is not used here
    let infeasibility = tab
        .basis
        .iter()
        .zip(&tab.rows)
        .filter(|(&col, _)| col >= n)
        .fold(T::zero(), |acc, (_, row)| acc + &row[width].abs());
    let scale = 1.0 + b.iter().map(|v| v.abs().to_f64()).sum::<f64>();
    if tab.positive(&infeasibility) && infeasibility.to_f64() > tol * scale {
        return Err(Error::Infeasible);
    }
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| {
                let v = &tab.rows[i][j];
                tab.positive(v) || tab.negative(v)
            }) {
                tab.pivot(i, j);
            }
        }
    }
    // phase 2 reduced costs over all columns, artificial costs zero
    let cost = |j: usize| if j < n { c[j].clone() } else { T::zero() };
    let mut obj = vec![T::zero(); width + 1];
    for (j, o) in obj.iter_mut().enumerate().take(width) {
        let mut acc = cost(j);
        for (i, row) in tab.rows.iter().enumerate() {
            let cb = cost(tab.basis[i]);
            if !cb.is_zero() && !row[j].is_zero() {
                acc = acc - &(cb * &row[j]);
            }
        }
        *o = acc;
    }
    let mut val = T::zero();
    for (i, row) in tab.rows.iter().enumerate() {
        val = val + &(cost(tab.basis[i]) * &row[width]);
    }
    obj[width] = -val;
    tab.obj = obj;
    tab.run(n)?;

    let mut x = vec![T::zero(); n];
    for (i, &bcol) in tab.basis.iter().enumerate() {
        if bcol < n {
            x[bcol] = tab.rows[i][width].clone();
        }
    }
    let objective = x
        .iter()
        .zip(c)
        .fold(T::zero(), |acc, (xi, ci)| acc + &(xi.clone() * ci));
    let duals = (0..m)
        .map(|i| {
            let d = -tab.obj[n + i].clone();
            if signs[i] {
                -d
            } else {
                d
            }
        })
        .collect();
    Ok(LpSolution {
        x,
        basis: tab.basis,
        objective,
        duals,
        pivots: tab.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn small_lp_with_known_optimum() {
        // min x1 + 2 x2 + 3 x3 s.t. x1 + x2 + x3 = 4, x1 - x2 = -2
        let a = vec![vec![q(1), q(1), q(1)], vec![q(1), q(-1), q(0)]];
        let b = vec![q(4), q(-2)];
        let c = vec![q(1), q(2), q(3)];
        let sol = solve_standard_form(&a, &b, &c).unwrap();
        // x1 = 1, x2 = 3, x3 = 0 -> 7
        assert_eq!(sol.objective, q(7));
        assert_eq!(sol.x, vec![q(1), q(3), q(0)]);
        // dual objective equals primal
        let dual_obj = sol.duals[0].clone() * &b[0] + sol.duals[1].clone() * &b[1];
        assert_eq!(dual_obj, q(7));
    }

    #[test]
    fn infeasible_is_reported() {
        let a = vec![vec![q(1), q(1)]];
        let b = vec![q(-1)];
        let c = vec![q(1), q(1)];
        assert_eq!(
            solve_standard_form(&a, &b, &c).unwrap_err(),
            Error::Infeasible
        );
    }
}
