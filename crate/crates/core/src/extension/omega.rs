//! Splitting `f` in a closed ideal into `g + (f - g)` with `g` in the ideal,
//! `f - g` small in `|.|_n` and `g` controlled in every `|.|_k` by a power of `1/eps`.

use rayon::prelude::*;

use super::function::{Difference, IdealSpec, JetFunction};
use super::patchwork::{estimate_norm, NormEstimate, PatchworkFunction, Piece, DEFAULT_POINTS_PER_PATCH};
use crate::error::{Error, Result};
use crate::interpolation::{hermite_interpolant_in_frame, HermiteData, PointSet};
use crate::numerics::Real;

/// Upper bound on the number of patches built for one decomposition.
pub const MAX_PATCHES: i64 = 1 << 24;

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaParams<T> {
    pub n: usize,
    /// Orders `k` at which `|g|_k` is estimated.
    pub ks: Vec<usize>,
    pub eps: T,
    pub points_per_patch: usize,
}

impl<T: Real> OmegaParams<T> {
    pub fn new(n: usize, ks: Vec<usize>, eps: T) -> Self {
        OmegaParams {
            n,
            ks,
            eps,
            points_per_patch: DEFAULT_POINTS_PER_PATCH,
        }
    }
}

pub struct OmegaDecomposition<T> {
    pub g: PatchworkFunction<T>,
    /// `m = 2n + 1`.
    pub m: usize,
    /// `|f - g|_n` on `[-n, n]`.
    pub residual: NormEstimate<T>,
    /// `(k, |g|_k)` on `[-k, k]`, in the order of `ks`.
    pub g_norms: Vec<(usize, NormEstimate<T>)>,
}

/// Local piece on `((l-1) eps, (l+1) eps)`.
fn patch_piece<T: Real>(
    f: &dyn JetFunction<T>,
    zeros: &PointSet<T>,
    ell: i64,
    eps: &T,
    m: usize,
) -> Result<Piece<T>> {
    let lo = T::from_i64(ell - 1) * eps;
    let hi = T::from_i64(ell + 1) * eps;
    let mid = T::from_i64(ell) * eps;
    let range = zeros.open_range(&lo, &hi);
    let mults = &zeros.multiplicities()[range.clone()];
    let count: usize = mults.iter().sum();
    if count >= m + 1 {
        // more than m+1 conditions: g_l = 0; exactly m+1: the interpolant of zeros
        return Ok(Piece::Zero);
    }
    let mut nodes: Vec<T> = zeros.nodes()[range.clone()].to_vec();
    let mut new_mults = mults.to_vec();
    let raised = if nodes.is_empty() {
        nodes.push(mid.clone());
        new_mults.push(0);
        0
    } else {
        // nearest to the midpoint, lower index on ties
        let mut best = 0;
        for i in 1..nodes.len() {
            let d = (nodes[i].clone() - &mid).abs();
            if d < (nodes[best].clone() - &mid).abs() {
                best = i;
            }
        }
        best
    };
    let original = new_mults[raised];
    new_mults[raised] += m + 1 - count;
    let derivs = nodes
        .iter()
        .zip(&new_mults)
        .enumerate()
        .map(|(i, (x, &mu))| {
            if i == raised {
                let jet = f.jet(x, mu - 1);
                (0..mu)
                    .map(|j| if j < original { T::zero() } else { jet.derivative(j) })
                    .collect()
            } else {
                vec![T::zero(); mu]
            }
        })
        .collect();
    let data = HermiteData::new(PointSet::new(nodes, new_mults)?, derivs)?;
    Ok(Piece::Polynomial(hermite_interpolant_in_frame(&data, mid, eps.clone())?))
}

/// Decomposes `f` (which must lie in `ideal`) with `m = 2n + 1` and patches of
/// half-width `eps`, `|l| <= (n+1)/eps`.
pub fn omega_decompose<T: Real>(
    f: &dyn JetFunction<T>,
    ideal: &IdealSpec<T>,
    params: &OmegaParams<T>,
) -> Result<OmegaDecomposition<T>> {
    let (n, eps) = (params.n, &params.eps);
    if *eps <= T::zero() {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    if params.points_per_patch == 0 {
        return Err(Error::InvalidParameter("points per patch must be positive".into()));
    }
    let m = 2 * n + 1;
    ideal.check_member(f, m)?;

    let g = if *eps >= T::one() {
        PatchworkFunction::zero(eps.clone())
    } else {
        let bound = T::from_i64(n as i64 + 1) / eps.clone();
        let last = bound
            .floor_i64()
            .filter(|&l| l <= MAX_PATCHES)
            .ok_or_else(|| Error::PatchOverflow(bound.to_f64()))?;
        let pieces = (-last..=last)
            .into_par_iter()
            .map(|ell| patch_piece(f, &ideal.zeros, ell, eps, m))
            .collect::<Result<Vec<_>>>()?;
        PatchworkFunction::new(eps.clone(), -last, pieces, None)?
    };

    let step = T::from_i64(2) * eps / T::from_i64(params.points_per_patch as i64);
    let nf = T::from_i64(n as i64);
    let residual = estimate_norm(
        &Difference(f, &g),
        n,
        &-nf.clone(),
        &nf,
        &step,
        &[],
        None,
    );

    // |g|_k only needs the part of [-k, k] meeting supp g; orders sharing the
    // same clipped interval share one evaluation
    let (slo, shi) = g.support().expect("patchwork support is bounded");
    let clipped = |k: usize| {
        let kf = T::from_i64(k as i64);
        (T::max_of(-kf.clone(), slo.clone()), T::min_of(kf, shi.clone()))
    };
    let mut shared: Vec<((T, T), NormEstimate<T>)> = Vec::new();
    for &k in &params.ks {
        let interval = clipped(k);
        if shared.iter().any(|(i, _)| *i == interval) {
            continue;
        }
        let top = params
            .ks
            .iter()
            .copied()
            .filter(|&k2| clipped(k2) == interval)
            .max()
            .unwrap_or(k);
        let (lo, hi) = if interval.1 < interval.0 {
            // supp g misses [-k, k]
            (T::zero(), T::zero())
        } else {
            interval.clone()
        };
        shared.push((interval, estimate_norm(&g, top, &lo, &hi, &step, &[], None)));
    }
    let g_norms = params
        .ks
        .iter()
        .map(|&k| {
            let interval = clipped(k);
            let (_, full) = shared.iter().find(|(i, _)| *i == interval).expect("computed above");
            let mut est = full.clone();
            est.per_order.truncate(k + 1);
            est.value = est.up_to(k);
            est.order = k;
            (k, est)
        })
        .collect();
    Ok(OmegaDecomposition {
        g,
        m,
        residual,
        g_norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::verdict::fit_line;
    use crate::extension::function::{Constant, ReciprocalZeros, Sine};
    use crate::numerics::Scalar;

    #[test]
    fn zero_function_gives_zero_pieces() {
        let ideal = IdealSpec::new(PointSet::simple(vec![0.0f64, 0.5]).unwrap());
        let out = omega_decompose(&Constant(0.0), &ideal, &OmegaParams::new(1, vec![2], 0.125))
            .unwrap();
        assert_eq!(out.residual.value, 0.0);
        assert_eq!(out.g_norms[0].1.value, 0.0);
        assert!(out.g.pieces().iter().all(|p| match p {
            Piece::Zero => true,
            Piece::Polynomial(q) => q.coeffs.iter().all(|c| *c == 0.0),
            Piece::Representative => false,
        }));
    }

    #[test]
    fn empty_ideal_approximates_sine() {
        let ideal = IdealSpec::everything();
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for e in 3..=8 {
            let eps = 2f64.powi(-e);
            let mut params = OmegaParams::new(1, vec![], eps);
            params.points_per_patch = 16;
            let out = omega_decompose(&Sine, &ideal, &params).unwrap();
            xs.push(eps.ln());
            ys.push(out.residual.value.ln());
        }
        let (slope, _, _) = fit_line(&xs, &ys);
        assert!(slope >= 1.0, "slope {slope}");
    }

    #[test]
    fn decomposition_stays_in_the_ideal() {
        let nodes: Vec<Scalar> = std::iter::once(Scalar::zero())
            .chain((1..=10).rev().map(|j| Scalar::from_ratio(1, j)))
            .collect();
        let ideal = IdealSpec::new(PointSet::simple(nodes).unwrap());
        let mut params = OmegaParams::new(0, vec![1], Scalar::pow2(-3));
        params.points_per_patch = 4;
        let out = omega_decompose(&ReciprocalZeros, &ideal, &params).unwrap();
        ideal.check_member(&out.g, out.m).unwrap();
        for x in ideal.zeros.nodes() {
            let jet = out.g.jet(x, 0);
            assert!(jet.derivative(0).abs() <= Scalar::pow2(-150));
        }
    }

    #[test]
    fn non_member_is_rejected() {
        let ideal = IdealSpec::new(PointSet::simple(vec![0.25f64]).unwrap());
        let err = omega_decompose(&Sine, &ideal, &OmegaParams::new(0, vec![], 0.5))
            .err()
            .unwrap();
        assert!(matches!(err, Error::NotInIdeal { node: 0, .. }));
    }

    #[test]
    fn large_eps_gives_zero() {
        let out = omega_decompose(&Sine, &IdealSpec::everything(), &OmegaParams::new(1, vec![1], 1.0))
            .unwrap();
        assert!(out.g.pieces().is_empty());
        assert!((out.residual.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn residual_shrinks_when_eps_halves() {
        let ideal = IdealSpec::new(PointSet::simple(vec![0.0f64]).unwrap());
        let f = crate::extension::function::ScaledBumpProduct { width: 0.5 };
        let residual = |eps: f64| {
            let out = omega_decompose(&f, &ideal, &OmegaParams::new(1, vec![3], eps)).unwrap();
            ideal.check_member(&out.g, out.m).unwrap();
            out.residual.value
        };
        let (a, b, c) = (residual(0.0625), residual(0.03125), residual(0.015625));
        assert!(b < a && c < b);
    }
}
