//! Extensions of data on a finite `K` built from local interpolants, and the
//! resulting two-sided estimate of the quotient norm.

use std::sync::Arc;

use rayon::prelude::*;

use super::function::JetFunction;
use super::omega::MAX_PATCHES;
use super::patchwork::{estimate_norm, NormEstimate, PatchworkFunction, Piece, DEFAULT_POINTS_PER_PATCH};
use crate::error::{Error, Result};
use crate::interpolation::{
    hermite_interpolant_in_frame, whitney_seminorm, HermiteData, NewtonPolynomial, SampleFunction,
    DEFAULT_TUPLE_BUDGET,
};
use crate::numerics::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionParams<T> {
    /// Patches with at most `n + 1` nodes are interpolated.
    pub n: usize,
    /// Order of the reported norm estimate.
    pub m: usize,
    /// Patch half-width is `eps^r`.
    pub r: u32,
    pub eps: T,
    pub points_per_patch: usize,
}

impl<T: Real> ExtensionParams<T> {
    pub fn new(n: usize, m: usize, r: u32, eps: T) -> Self {
        ExtensionParams {
            n,
            m,
            r,
            eps,
            points_per_patch: DEFAULT_POINTS_PER_PATCH,
        }
    }
}

pub struct Extension<T> {
    pub function: PatchworkFunction<T>,
    /// `sup |F^(j)|`, `j <= m`, over the hull of `K u [-n, n]` and the nodes.
    pub norms: NormEstimate<T>,
    /// Patches filled with the caller's representative.
    pub representative_patches: usize,
}

/// Builds `F = sum_l rho_l g_l` with `F = f` on `K`.
///
/// A patch with `N_l` nodes, `1 <= N_l <= n + 1`, gets the interpolant of degree
/// `N_l - 1`; a patch with more nodes gets `representative`, and without one this
/// is an error. Patches without nodes take the value of `f` at the nearest node.
pub fn construct_extension<T: Real>(
    f: &SampleFunction<T>,
    params: &ExtensionParams<T>,
    representative: Option<Arc<dyn JetFunction<T>>>,
) -> Result<Extension<T>> {
    let points = &f.points;
    if points.is_empty() {
        return Err(Error::InvalidPointSet("empty point set".into()));
    }
    if points.multiplicities().iter().any(|&m| m != 1) {
        return Err(Error::InvalidPointSet("extension data needs simple nodes".into()));
    }
    if params.eps <= T::zero() || params.points_per_patch == 0 {
        return Err(Error::InvalidParameter(
            "eps and points per patch must be positive".into(),
        ));
    }
    let h = params.eps.powi(params.r as i64);
    let nf = T::from_i64(params.n as i64);
    let nodes = points.nodes();
    let lo = T::min_of(nodes[0].clone(), -nf.clone());
    let hi = T::max_of(nodes[nodes.len() - 1].clone(), nf);
    let index = |v: &T| {
        let q = v.clone() / h.clone();
        q.floor_i64()
            .filter(|l| l.abs() <= MAX_PATCHES)
            .ok_or_else(|| Error::PatchOverflow(q.to_f64()))
    };
    // one spare patch on each side keeps the blend-out outside the hull
    let first = index(&lo)? - 1;
    let last = index(&hi)? + 2;
    if last - first > MAX_PATCHES {
        return Err(Error::PatchOverflow(((hi.clone() - &lo) / h.clone()).to_f64()));
    }

    let pieces = (first..=last)
        .into_par_iter()
        .map(|ell| -> Result<Piece<T>> {
            let a = T::from_i64(ell - 1) * &h;
            let b = T::from_i64(ell + 1) * &h;
            let mid = T::from_i64(ell) * &h;
            let range = points.open_range(&a, &b);
            let count = range.len();
            if count == 0 {
                // nearest node, lower one on ties
                let above = points.last_at_most(&mid).map_or(0, |i| i + 1);
                let i = match above.checked_sub(1) {
                    Some(below) if above < nodes.len() => {
                        if nodes[above].clone() - &mid < mid.clone() - &nodes[below] {
                            above
                        } else {
                            below
                        }
                    }
                    Some(below) => below,
                    None => above,
                };
                return Ok(Piece::Polynomial(NewtonPolynomial::from_monomial(vec![
                    f.values[i].clone(),
                ])));
            }
            if count > params.n + 1 {
                return match representative {
                    Some(_) => Ok(Piece::Representative),
                    None => Err(Error::RepresentativeRequired { patch: ell, count }),
                };
            }
            let data = HermiteData::from_samples(&SampleFunction {
                points: points.slice(range.clone()),
                values: f.values[range].to_vec(),
            });
            Ok(Piece::Polynomial(hermite_interpolant_in_frame(&data, mid, h.clone())?))
        })
        .collect::<Result<Vec<_>>>()?;
    let representative_patches = pieces
        .iter()
        .filter(|p| **p == Piece::Representative)
        .count();
    let function = PatchworkFunction::new(h.clone(), first, pieces, representative)?;
    let step = T::from_i64(2) * &h / T::from_i64(params.points_per_patch as i64);
    // F = f on K, so the data itself supplies the order-0 values there
    let norms = estimate_norm(&function, params.m, &lo, &hi, &step, nodes, Some(&f.values));
    Ok(Extension {
        function,
        norms,
        representative_patches,
    })
}

/// `lower <= inf{|F|_n : F = f on K} <= upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sandwich<T> {
    /// `|f|_{n,K}` from divided differences.
    pub lower: T,
    /// Grid estimate of `|F|_n` for the constructed extension.
    pub upper: T,
    /// False when the divided-difference search was truncated.
    pub exhaustive: bool,
}

/// Sandwich with patch half-width `eps` and interpolation up to `n + 1` nodes.
pub fn quotient_norm_sandwich<T: Real>(
    f: &SampleFunction<T>,
    n: usize,
    eps: &T,
) -> Result<Sandwich<T>> {
    let lower = whitney_seminorm(f, n, DEFAULT_TUPLE_BUDGET)?;
    let ext = construct_extension(f, &ExtensionParams::new(n, n, 1, eps.clone()), None)?;
    Ok(Sandwich {
        lower: lower.value,
        upper: ext.norms.value,
        exhaustive: lower.exhaustive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interpolation::PointSet;
    use crate::numerics::{Field, Rational};

    fn samples(nodes: Vec<f64>, values: Vec<f64>) -> SampleFunction<f64> {
        SampleFunction::new(PointSet::simple(nodes).unwrap(), values).unwrap()
    }

    #[test]
    fn two_point_blend_of_constants() {
        let f = samples(vec![0.0, 1.0], vec![2.0, -3.0]);
        let ext = construct_extension(&f, &ExtensionParams::new(1, 2, 1, 0.25), None).unwrap();
        let func = &ext.function;
        assert_eq!(func.jet(&0.0, 0).derivative(0), 2.0);
        assert_eq!(func.jet(&1.0, 0).derivative(0), -3.0);
        // flat near each node, blended in between
        assert_eq!(func.jet(&0.1, 1).derivative(1), 0.0);
        assert_eq!(func.jet(&0.5, 0).derivative(0), 2.0);
        let mid = func.jet(&0.625, 0).derivative(0);
        assert!(mid < 2.0 && mid > -3.0);
        assert_eq!(ext.representative_patches, 0);
    }

    #[test]
    fn polynomials_of_low_degree_are_reproduced() {
        // p(x) = 1 - x + 3x^2 with at most n + 1 = 3 nodes per patch
        let p = NewtonPolynomial::from_monomial(vec![
            Rational::from_i64(1),
            Rational::from_i64(-1),
            Rational::from_i64(3),
        ]);
        let xs: Vec<Rational> = (0..8).map(|i| Rational::from_ratio(i, 8)).collect();
        let f = SampleFunction::new(
            PointSet::simple(xs.clone()).unwrap(),
            xs.iter().map(|x| p.eval(x)).collect(),
        )
        .unwrap();
        let points = &f.points;
        let h = Rational::from_ratio(1, 8);
        for ell in -1..10 {
            let a = Rational::from_i64(ell - 1) * &h;
            let b = Rational::from_i64(ell + 1) * &h;
            let range = points.open_range(&a, &b);
            if range.is_empty() {
                continue;
            }
            let data = HermiteData::from_samples(&SampleFunction {
                points: points.slice(range.clone()),
                values: f.values[range.clone()].to_vec(),
            });
            let g = hermite_interpolant_in_frame(&data, Rational::from_i64(ell) * &h, h.clone())
                .unwrap();
            if range.len() == 3 {
                assert_eq!(g.monomial(), p.monomial());
            }
            for i in range {
                assert_eq!(g.eval(&xs[i]), f.values[i]);
            }
        }
        // the f64 patchwork hits the data on K
        let ff = samples(
            xs.iter().map(|x| Field::to_f64(x)).collect(),
            f.values.iter().map(|v| Field::to_f64(v)).collect(),
        );
        let ext = construct_extension(&ff, &ExtensionParams::new(2, 2, 1, 0.125), None).unwrap();
        for (x, v) in ff.points.nodes().iter().zip(&ff.values) {
            assert!((ext.function.jet(x, 0).derivative(0) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn crowded_patch_needs_representative() {
        let f = samples(vec![0.0, 0.01, 0.02], vec![0.0; 3]);
        let err = construct_extension(&f, &ExtensionParams::new(1, 1, 1, 0.25), None)
            .err()
            .unwrap();
        assert!(matches!(err, Error::RepresentativeRequired { count: 3, .. }));
        let g: Arc<dyn JetFunction<f64>> = Arc::new(super::super::function::Constant(0.0));
        let ext = construct_extension(&f, &ExtensionParams::new(1, 1, 1, 0.25), Some(g)).unwrap();
        assert!(ext.representative_patches > 0);
    }

    #[test]
    fn constant_data_is_sandwiched_exactly() {
        let nodes: Vec<f64> = std::iter::once(0.0)
            .chain((0..9).rev().map(|l| 2f64.powi(-l)))
            .collect();
        let f = samples(nodes.clone(), vec![-0.75; nodes.len()]);
        for n in 0..=2 {
            let s = quotient_norm_sandwich(&f, n, &2f64.powi(-10)).unwrap();
            assert_eq!(s.lower, 0.75);
            assert!((s.upper - s.lower).abs() < 1e-9, "n = {n}: {s:?}");
        }
    }

    #[test]
    fn jets_are_continuous_across_patch_boundaries() {
        let f = samples(vec![0.0, 0.3, 0.5, 1.0], vec![1.0, -1.0, 0.5, 2.0]);
        let m = 3;
        let ext = construct_extension(&f, &ExtensionParams::new(1, m, 1, 0.125), None).unwrap();
        let func = &ext.function;
        for boundary in [0.25, 0.375, 0.625] {
            let jump = |delta: f64| {
                let a = func.jet(&(boundary - delta), m);
                let b = func.jet(&(boundary + delta), m);
                (0..m)
                    .map(|j| (a.derivative(j) - b.derivative(j)).abs())
                    .collect::<Vec<_>>()
            };
            let (j1, j2) = (jump(1e-4), jump(5e-5));
            for (a, b) in j1.iter().zip(&j2) {
                if *a > 1e-9 {
                    let ratio = a / b;
                    assert!((ratio - 2.0).abs() < 0.1, "boundary {boundary}: {ratio}");
                }
            }
        }
    }
}
