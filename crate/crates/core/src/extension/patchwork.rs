//! `F = sum_l rho_l g_l` over the uniform partition `rho_l(x) = phi(x/h - l)`,
//! and grid estimates of `sup |F^(j)|`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::function::JetFunction;
use crate::error::{Error, Result};
use crate::interpolation::NewtonPolynomial;
use crate::numerics::{scaled_patch_jet, Jet, Real};

/// Default number of grid samples per patch support `((l-1)h, (l+1)h)`.
pub const DEFAULT_POINTS_PER_PATCH: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum Piece<T> {
    Zero,
    Polynomial(NewtonPolynomial<T>),
    /// The caller-supplied global representative.
    Representative,
}

#[derive(Clone)]
pub struct PatchworkFunction<T> {
    width: T,
    first: i64,
    pieces: Vec<Piece<T>>,
    representative: Option<Arc<dyn JetFunction<T>>>,
}

impl<T: Real> PatchworkFunction<T> {
    /// Pieces for `l = first, first + 1, ...`; patches outside carry no piece.
    pub fn new(
        width: T,
        first: i64,
        pieces: Vec<Piece<T>>,
        representative: Option<Arc<dyn JetFunction<T>>>,
    ) -> Result<Self> {
        if width <= T::zero() {
            return Err(Error::InvalidParameter("patch width must be positive".into()));
        }
        if representative.is_none() && pieces.iter().any(|p| *p == Piece::Representative) {
            return Err(Error::InvalidParameter(
                "representative piece without a representative".into(),
            ));
        }
        Ok(PatchworkFunction {
            width,
            first,
            pieces,
            representative,
        })
    }

    /// The zero function.
    pub fn zero(width: T) -> Self {
        PatchworkFunction {
            width,
            first: 0,
            pieces: Vec::new(),
            representative: None,
        }
    }

    pub fn width(&self) -> &T {
        &self.width
    }

    pub fn first(&self) -> i64 {
        self.first
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    pub fn piece(&self, ell: i64) -> Option<&Piece<T>> {
        let i = ell.checked_sub(self.first)?;
        usize::try_from(i).ok().and_then(|i| self.pieces.get(i))
    }

    /// `((l-1)h, (l+1)h)`.
    pub fn patch_interval(&self, ell: i64) -> (T, T) {
        (
            T::from_i64(ell - 1) * &self.width,
            T::from_i64(ell + 1) * &self.width,
        )
    }

    /// Patches whose open support contains `x` (at most two).
    pub fn patches_at(&self, x: &T) -> Vec<i64> {
        let t = x.clone() / self.width.clone();
        let Some(l0) = t.floor_i64() else {
            return Vec::new();
        };
        [l0, l0 + 1]
            .into_iter()
            .filter(|&l| {
                let d = t.clone() - &T::from_i64(l);
                d.abs() < T::one() && self.piece(l).is_some()
            })
            .collect()
    }

    fn piece_jet(&self, piece: &Piece<T>, x: &T, order: usize) -> Option<Jet<T>> {
        match piece {
            Piece::Zero => None,
            Piece::Polynomial(p) => Some(p.eval_jet(x, order)),
            Piece::Representative => Some(
                self.representative
                    .as_ref()
                    .expect("checked at construction")
                    .jet(x, order),
            ),
        }
    }
}

impl<T: Real> JetFunction<T> for PatchworkFunction<T> {
    fn jet(&self, x: &T, order: usize) -> Jet<T> {
        let zero = || Jet::zero(x.clone(), order);
        let Some(l0) = (x.clone() / self.width.clone()).floor_i64() else {
            return zero();
        };
        let (a, b) = (self.piece(l0), self.piece(l0 + 1));
        let ga = a.and_then(|p| self.piece_jet(p, x, order));
        let gb = b.and_then(|p| self.piece_jet(p, x, order));
        match (a, b) {
            // rho_l0 + rho_(l0+1) = 1 on [l0 h, (l0+1) h]: F = g_a + rho_b (g_b - g_a),
            // so equal neighbouring pieces are reproduced without rounding
            (Some(_), Some(_)) => {
                let ga = ga.unwrap_or_else(zero);
                let diff = gb.unwrap_or_else(zero).sub(&ga);
                if diff.coeffs.iter().all(T::is_zero) {
                    return ga;
                }
                let rho = scaled_patch_jet(x, &self.width, l0 + 1, order);
                ga.add(&rho.mul(&diff))
            }
            (Some(_), None) => match ga {
                Some(g) => scaled_patch_jet(x, &self.width, l0, order).mul(&g),
                None => zero(),
            },
            (None, Some(_)) => match gb {
                Some(g) => scaled_patch_jet(x, &self.width, l0 + 1, order).mul(&g),
                None => zero(),
            },
            (None, None) => zero(),
        }
    }

    fn support(&self) -> Option<(T, T)> {
        if self.pieces.is_empty() {
            return Some((T::zero(), T::zero()));
        }
        let last = self.first + self.pieces.len() as i64 - 1;
        Some((
            self.patch_interval(self.first).0,
            self.patch_interval(last).1,
        ))
    }
}

/// Sampling used for a norm estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    pub samples: usize,
    /// Extra sample points (nodes of `K`).
    pub nodes: usize,
}

/// Grid estimate of `sup |F^(j)|`, `j <= order`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormEstimate<T> {
    pub order: usize,
    pub per_order: Vec<T>,
    pub value: T,
    pub grid: GridSpec,
}

impl<T: Real> NormEstimate<T> {
    /// `max_{j <= order} per_order[j]`.
    pub fn up_to(&self, order: usize) -> T {
        self.per_order[..=order.min(self.order)]
            .iter()
            .cloned()
            .fold(T::zero(), T::max_of)
    }
}

/// Sup of `|f^(j)|`, `j <= order`, over `lo + i*step` in `[lo, hi]` and the given
/// nodes. Where `known` is given, the order-0 value at `nodes[i]` is `|known[i]|`.
pub fn estimate_norm<T: Real>(
    f: &dyn JetFunction<T>,
    order: usize,
    lo: &T,
    hi: &T,
    step: &T,
    nodes: &[T],
    known: Option<&[T]>,
) -> NormEstimate<T> {
    assert!(*step > T::zero(), "grid step must be positive");
    let span = (hi.clone() - lo).to_f64().max(0.0);
    let samples = (span / step.to_f64()).floor() as usize + 1;
    let fold = |mut acc: Vec<T>, jet: &Jet<T>, skip_value: bool| {
        for (j, d) in jet.derivatives().into_iter().enumerate() {
            if j == 0 && skip_value {
                continue;
            }
            acc[j] = T::max_of(acc[j].clone(), d.abs());
        }
        acc
    };
    let merge = |a: Vec<T>, b: Vec<T>| -> Vec<T> {
        a.into_iter().zip(b).map(|(x, y)| T::max_of(x, y)).collect()
    };
    let zero = || vec![T::zero(); order + 1];
    let grid = (0..samples)
        .into_par_iter()
        .map(|i| {
            let x = lo.clone() + &(T::from_i64(i as i64) * step);
            fold(zero(), &f.jet(&x, order), false)
        })
        .reduce(zero, merge);
    let node_part = nodes
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut acc = fold(zero(), &f.jet(x, order), known.is_some());
            if let Some(v) = known {
                acc[0] = v[i].abs();
            }
            acc
        })
        .reduce(zero, merge);
    let per_order = merge(grid, node_part);
    let value = per_order.iter().cloned().fold(T::zero(), T::max_of);
    NormEstimate {
        order,
        per_order,
        value,
        grid: GridSpec {
            lo: lo.to_f64(),
            hi: hi.to_f64(),
            step: step.to_f64(),
            samples,
            nodes: nodes.len(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::function::Sine;
    use crate::numerics::Scalar;

    fn constant_pieces(n: usize, c: f64) -> Vec<Piece<f64>> {
        (0..n)
            .map(|_| Piece::Polynomial(NewtonPolynomial::from_monomial(vec![c])))
            .collect()
    }

    #[test]
    fn at_most_two_patches_and_partition_of_unity() {
        let f = PatchworkFunction::new(0.25, -8, constant_pieces(17, 1.0), None).unwrap();
        for i in 0..=400 {
            let x = -1.0 + i as f64 * 0.005;
            assert!(f.patches_at(&x).len() <= 2);
            let v = f.jet(&x, 2);
            assert!((v.derivative(0) - 1.0).abs() < 1e-12, "x = {x}");
            assert!(v.derivative(1).abs() < 1e-9 && v.derivative(2).abs() < 1e-7);
        }
    }

    #[test]
    fn partition_of_unity_in_scalar() {
        let h = Scalar::pow2(-3);
        let pieces: Vec<Piece<Scalar>> = (0..9)
            .map(|_| Piece::Polynomial(NewtonPolynomial::from_monomial(vec![Scalar::one()])))
            .collect();
        let f = PatchworkFunction::new(h, -4, pieces, None).unwrap();
        for i in 0..40 {
            let x = Scalar::from_ratio(i - 20, 41);
            let v = f.jet(&x, 1);
            assert!((v.derivative(0) - Scalar::one()).abs() < Scalar::pow2(-200));
        }
    }

    #[test]
    fn norm_is_monotone_in_order_and_refinement() {
        let coarse = estimate_norm(&Sine, 3, &-1.0, &1.0, &0.1, &[], None);
        let fine = estimate_norm(&Sine, 3, &-1.0, &1.0, &0.05, &[], None);
        for j in 0..=3 {
            assert!(fine.per_order[j] >= coarse.per_order[j]);
            assert!(coarse.up_to(j + 1) >= coarse.up_to(j));
        }
        assert_eq!(coarse.grid.samples, 21);
        // sup |sin| on [-1, 1] is sin 1, attained on the grid
        assert!((coarse.per_order[0] - 1f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn known_values_replace_order_zero_on_nodes() {
        let nodes = [0.5f64];
        let est = estimate_norm(&Sine, 1, &0.0, &0.0, &1.0, &nodes, Some(&[3.0]));
        assert_eq!(est.per_order[0], 3.0);
        assert!((est.per_order[1] - 1.0).abs() < 1e-15);
    }
}
