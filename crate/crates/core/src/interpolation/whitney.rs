use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::Field;

use super::pointset::SampleFunction;

/// Default cap on divided-difference evaluations for the exhaustive search.
pub const DEFAULT_TUPLE_BUDGET: u128 = 5_000_000;

/// Result of a Whitney seminorm evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct WhitneyNorm<T> {
    /// `max |f[x_0..x_s]|` over the examined tuples, `s <= n`.
    pub value: T,
    /// Largest value per tuple size `s + 1`, `s = 0..=n`.
    pub per_order: Vec<T>,
    /// True when every tuple of at most `n + 1` distinct points was examined.
    pub exhaustive: bool,
    pub tuples_examined: u128,
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// `|f|_{n,K}`: the largest divided difference of order `<= n` over distinct nodes.
///
/// All subsets are enumerated when `C(|K|, n+1) * (n+1) <= budget`. Otherwise
/// only windows of consecutive nodes are used and the result is a lower bound
/// flagged as non-exhaustive.
pub fn whitney_seminorm<T: Field>(
    f: &SampleFunction<T>,
    n: usize,
    budget: u128,
) -> Result<WhitneyNorm<T>> {
    if f.points.multiplicities().iter().any(|&m| m != 1) {
        return Err(Error::InvalidPointSet(
            "Whitney seminorm needs simple nodes".into(),
        ));
    }
    let size = f.points.len();
    if size == 0 {
        return Err(Error::InvalidPointSet("empty point set".into()));
    }
    let cost = binomial_u128(size, n + 1).saturating_mul(n as u128 + 1);
    if cost <= budget {
        Ok(exhaustive(f, n))
    } else {
        Ok(windows(f, n))
    }
}

fn exhaustive<T: Field>(f: &SampleFunction<T>, n: usize) -> WhitneyNorm<T> {
    let size = f.points.len();
    let parts: Vec<(Vec<T>, u128)> = (0..size)
        .into_par_iter()
        .map(|first| {
            let mut best = vec![T::zero(); n + 1];
            let mut count = 0u128;
            let mut chosen = vec![first];
            let mut diag = vec![f.values[first].clone()];
            best[0] = diag[0].abs();
            count += 1;
            if n > 0 {
                descend(f, n, &mut chosen, &mut diag, &mut best, &mut count);
            }
            (best, count)
        })
        .collect();
    let mut per_order = vec![T::zero(); n + 1];
    let mut total = 0;
    for (best, count) in parts {
        for (p, b) in per_order.iter_mut().zip(best) {
            if b > *p {
                *p = b;
            }
        }
        total += count;
    }
    let value = per_order.iter().cloned().fold(T::zero(), T::max_of);
    WhitneyNorm {
        value,
        per_order,
        exhaustive: true,
        tuples_examined: total,
    }
}

/// `diag[i] = f[z_i, ..., z_last]` for the chosen nodes `z`.
fn descend<T: Field>(
    f: &SampleFunction<T>,
    n: usize,
    chosen: &mut Vec<usize>,
    diag: &mut Vec<T>,
    best: &mut [T],
    count: &mut u128,
) {
    let nodes = f.points.nodes();
    let last = *chosen.last().unwrap();
    for next in last + 1..nodes.len() {
        let z = &nodes[next];
        // new[i] = (new[i+1] - old[i]) / (z - z_i), built from the end
        let mut upper = f.values[next].clone();
        let mut new_row = vec![T::zero(); diag.len() + 1];
        new_row[diag.len()] = upper.clone();
        for i in (0..diag.len()).rev() {
            let v = (upper - &diag[i]) / (z.clone() - &nodes[chosen[i]]);
            new_row[i] = v.clone();
            upper = v;
        }
        let s = diag.len();
        *count += 1;
        let a = new_row[0].abs();
        if a > best[s] {
            best[s] = a;
        }
        if s < n {
            let saved = std::mem::replace(diag, new_row);
            chosen.push(next);
            descend(f, n, chosen, diag, best, count);
            chosen.pop();
            *diag = saved;
        }
    }
}

fn windows<T: Field>(f: &SampleFunction<T>, n: usize) -> WhitneyNorm<T> {
    let nodes = f.points.nodes();
    let size = nodes.len();
    let mut per_order = vec![T::zero(); n + 1];
    let mut row: Vec<T> = f.values.clone();
    let mut count: u128 = size as u128;
    per_order[0] = row.iter().map(|v| v.abs()).fold(T::zero(), T::max_of);
    for s in 1..=n.min(size - 1) {
        let next: Vec<T> = (0..size - s)
            .map(|i| (row[i + 1].clone() - &row[i]) / (nodes[i + s].clone() - &nodes[i]))
            .collect();
        count += next.len() as u128;
        per_order[s] = next.iter().map(|v| v.abs()).fold(T::zero(), T::max_of);
        row = next;
    }
    let value = per_order.iter().cloned().fold(T::zero(), T::max_of);
    WhitneyNorm {
        value,
        per_order,
        exhaustive: false,
        tuples_examined: count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interpolation::pointset::PointSet;
    use crate::numerics::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn budget_switches_to_windows() {
        let pts = PointSet::simple((0..8).map(|i| q(i, 1)).collect()).unwrap();
        let vals = (0..8).map(|i| q(i * i, 1)).collect();
        let f = SampleFunction::new(pts, vals).unwrap();
        let full = whitney_seminorm(&f, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        let win = whitney_seminorm(&f, 2, 1).unwrap();
        assert!(full.exhaustive);
        assert!(!win.exhaustive);
        // f = x^2: first differences peak at 13, second differences are 1
        assert_eq!(full.per_order, vec![q(49, 1), q(13, 1), q(1, 1)]);
        assert_eq!(win.per_order, full.per_order);
        assert_eq!(full.tuples_examined, 8 + 28 + 56);
    }
}
