//! The polynomials `P(x) = prod_{j=1}^k (x^2 - x_j^2)^(2n+2)`, `x_j = a_{d+j}`, used
//! to test the dominating-norm condition on `K = {0} u {a_l}`, and the probe
//! sequence `rho_d` built from them.

use serde::{Deserialize, Serialize};

use crate::conditions::sequence::{SequenceTerms, LINEAR_LOG_FLOOR};
use crate::conditions::verdict::fit_line;
use crate::error::{Error, Result};
use crate::interpolation::NewtonPolynomial;
use crate::numerics::{binomial, factorial, Jet, Scalar};

/// Samples per sup estimate on `[0, x]`; `|P^(j)|` is even so the half interval suffices.
const SUP_SAMPLES: usize = 257;

fn term(terms: &SequenceTerms, l: usize) -> Result<Scalar> {
    let log = terms.log_at(l)?;
    if log.to_f64() < -LINEAR_LOG_FLOOR {
        return Err(Error::InvalidParameter(format!(
            "a_{l} is below the linear-scale floor"
        )));
    }
    Ok(log.exp())
}

fn check_shape(terms: &SequenceTerms, d: usize, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    terms.log_at(d)?;
    terms.log_at(d + k)?;
    terms.check_halving(d, d + k)
}

/// Monomial coefficients of `(x^2 - c)^w`.
fn power_of_quadratic(c: &Scalar, w: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); 2 * w + 1];
    let minus_c = -c;
    for i in 0..=w {
        out[2 * i] = binomial::<Scalar>(w, i) * minus_c.powi((w - i) as i64);
    }
    out
}

fn convolve(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `P` in expanded form; degree `2k(2n+2)`.
pub fn build_test_polynomial(
    terms: &SequenceTerms,
    d: usize,
    k: usize,
    n: usize,
) -> Result<NewtonPolynomial<Scalar>> {
    check_shape(terms, d, k)?;
    let w = 2 * n + 2;
    let mut coeffs = vec![Scalar::one()];
    for j in 1..=k {
        let x = term(terms, d + j)?;
        coeffs = convolve(&coeffs, &power_of_quadratic(&(&x * &x), w));
    }
    Ok(NewtonPolynomial::from_monomial(coeffs))
}

/// Jet of `P` at `t` from the product form (no cancellation between coefficients).
fn product_jet(roots: &[Scalar], w: usize, t: &Scalar, order: usize) -> Jet<Scalar> {
    let v = Jet::variable(t.clone(), order);
    let sq = v.mul(&v);
    let mut acc = Jet::constant(t.clone(), Scalar::one(), order);
    for x in roots {
        acc = acc.mul(&sq.add_scalar(&-(x * x)).powi(w as u32));
    }
    acc
}

/// `max_{j <= order} sup_{0 <= t <= x} |P^(j)(t)|` on an even grid.
fn grid_sup(roots: &[Scalar], w: usize, x: &Scalar, order: usize) -> Scalar {
    let steps = Scalar::from_i64(SUP_SAMPLES as i64 - 1);
    (0..SUP_SAMPLES)
        .map(|i| {
            let t = x * &Scalar::from_i64(i as i64) / &steps;
            product_jet(roots, w, &t, order).max_abs_derivative(order)
        })
        .fold(Scalar::zero(), Scalar::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// Natural logs of both sides.
    pub lhs_ln: f64,
    pub rhs_ln: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn at_least(lhs: &Scalar, rhs: &Scalar) -> Self {
        BoundCheck {
            lhs_ln: lhs.ln_abs_f64(),
            rhs_ln: rhs.ln_abs_f64(),
            holds: lhs >= rhs,
        }
    }

    fn at_most(lhs: &Scalar, rhs: &Scalar) -> Self {
        BoundCheck {
            lhs_ln: lhs.ln_abs_f64(),
            rhs_ln: rhs.ln_abs_f64(),
            holds: lhs <= rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestPolynomialReport {
    pub d: usize,
    pub k: usize,
    pub n: usize,
    pub s: usize,
    /// `m = 2s(2n+2)`.
    pub m: usize,
    /// `|P^(m)(0)|^2 >= prod_{j <= k-s} x_j^(4(2n+2))`.
    pub alpha: BoundCheck,
    /// `sup_{|t| <= x_0} |P| <= (2 x_0)^(2k(2n+2))`.
    pub beta: BoundCheck,
    /// `ln` of the floor `(3/16)^(k(2n+2))` for `sup |P| / (2 x_0)^(2k(2n+2))`.
    pub beta_floor_ln: f64,
    pub beta_above_floor: bool,
    /// `sup_{|t| <= x_k, j <= n} |P^(j)| <= c_k x_k^(3n+4)`.
    pub gamma: BoundCheck,
    /// `ln(sup / x_k^(3n+4))`.
    pub gamma_implied_constant_ln: f64,
    /// `ln c_k`.
    pub gamma_constant_ln: f64,
}

impl TestPolynomialReport {
    pub fn all_hold(&self) -> bool {
        self.alpha.holds && self.beta.holds && self.beta_above_floor && self.gamma.holds
    }
}

/// `c_k = max_{j <= n} j! C(2N, j) 2^(3n+4) M^(2N-j-3n-4)`, `N = k(2n+2)`,
/// `M = max(1, x_1 + x_k)`: every term of `P^(j)` keeps at least `3n+4` of the
/// factors `t -+ x_k`, each at most `2 x_k` on `|t| <= x_k`.
fn gamma_constant(x1: &Scalar, xk: &Scalar, k: usize, n: usize) -> Scalar {
    let big_n = k * (2 * n + 2);
    let m = Scalar::max(Scalar::one(), x1 + xk);
    (0..=n)
        .map(|j| {
            factorial::<Scalar>(j)
                * binomial::<Scalar>(2 * big_n, j)
                * Scalar::pow2(3 * n as isize + 4)
                * m.powi((2 * big_n - j - 3 * n - 4) as i64)
        })
        .fold(Scalar::zero(), Scalar::max)
}

/// Evaluates the three bounds directly in `Scalar` arithmetic.
pub fn verify_test_polynomial_bounds(
    terms: &SequenceTerms,
    d: usize,
    k: usize,
    n: usize,
    s: usize,
) -> Result<TestPolynomialReport> {
    if s == 0 || s > k {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= s <= k (k = {k}, s = {s})"
        )));
    }
    let p = build_test_polynomial(terms, d, k, n)?;
    let w = 2 * n + 2;
    let m = 2 * s * w;
    let x0 = term(terms, d)?;
    let roots = (1..=k)
        .map(|j| term(terms, d + j))
        .collect::<Result<Vec<_>>>()?;

    let pm0 = factorial::<Scalar>(m) * &p.coeffs[m];
    let alpha_rhs = roots[..k - s]
        .iter()
        .fold(Scalar::one(), |acc, x| acc * x.powi(4 * w as i64));
    let alpha = BoundCheck::at_least(&(&pm0 * &pm0), &alpha_rhs);

    let sup_p = grid_sup(&roots, w, &x0, 0);
    let beta_rhs = (Scalar::from_i64(2) * &x0).powi((2 * k * w) as i64);
    let beta = BoundCheck::at_most(&sup_p, &beta_rhs);
    let floor = (Scalar::from_ratio(3, 16)).powi((k * w) as i64);
    let beta_above_floor = sup_p / &beta_rhs >= floor;

    let xk = &roots[k - 1];
    let sup_f = grid_sup(&roots, w, xk, n);
    let scale = xk.powi(3 * n as i64 + 4);
    let ck = gamma_constant(&roots[0], xk, k, n);
    let gamma = BoundCheck::at_most(&sup_f, &(&ck * &scale));

    Ok(TestPolynomialReport {
        d,
        k,
        n,
        s,
        m,
        alpha,
        beta,
        beta_floor_ln: floor.ln_abs_f64(),
        beta_above_floor,
        gamma,
        gamma_implied_constant_ln: (sup_f / &scale).ln_abs_f64(),
        gamma_constant_ln: ck.ln_abs_f64(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DnProbePoint {
    pub d: usize,
    /// `ln` of the lower bound for `rho_d` assembled from the closed forms.
    pub log_rho: f64,
    /// The same quantity from materialised terms, when they are representable.
    pub log_rho_direct: Option<f64>,
    /// `|log_rho - log_rho_direct|` evaluated in `Scalar`.
    pub discrepancy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DnProbe {
    pub n: usize,
    pub s: usize,
    pub r: u32,
    pub k: usize,
    pub points: Vec<DnProbePoint>,
}

impl DnProbe {
    /// Least-squares `(slope, intercept, rms)` of `log_rho` against `x(d)`.
    pub fn fit(&self, x: impl Fn(usize) -> f64) -> (f64, f64, f64) {
        let xs: Vec<f64> = self.points.iter().map(|p| x(p.d)).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p.log_rho).collect();
        fit_line(&xs, &ys)
    }
}

/// `ln rho_d >= ln q_d - 2k(2n+2) ln 2`, combining the bounds for `|P^(m)(0)|^2`,
/// `sup |P|` and `sup |f^(j)|` (constant `c_k` normalised to 1) with `eps = a_d`.
fn log_rho_closed(terms: &SequenceTerms, n: usize, s: usize, r: u32, k: usize, d: usize) -> Result<Scalar> {
    let w = 2 * n as i64 + 2;
    let mut log = Scalar::from_i64(r as i64 - 2 * k as i64 * w) * terms.log_at(d)?
        - Scalar::from_i64(3 * n as i64 + 4) * terms.log_at(d + k)?
        - Scalar::from_i64(2 * k as i64 * w) * Scalar::ln2();
    for j in 1..=k - s {
        log += Scalar::from_i64(4 * w) * terms.log_at(d + j)?;
    }
    Ok(log)
}

/// `ln( prod_{j<=k-s} x_j^(4w) x_0^r / ((2 x_0)^(2kw) x_k^(3n+4)) )` from the terms themselves.
fn log_rho_direct(terms: &SequenceTerms, n: usize, s: usize, r: u32, k: usize, d: usize) -> Result<Scalar> {
    let w = 2 * n as i64 + 2;
    let x0 = term(terms, d)?;
    let xk = term(terms, d + k)?;
    let mut num = x0.powi(r as i64);
    for j in 1..=k - s {
        num *= term(terms, d + j)?.powi(4 * w);
    }
    let den = (Scalar::from_i64(2) * &x0).powi(2 * k as i64 * w) * xk.powi(3 * n as i64 + 4);
    Ok((num / den).ln())
}

/// Trajectory of the lower bound for `rho_d` over `ds`.
pub fn dn_probe(
    terms: &SequenceTerms,
    n: usize,
    s: usize,
    r: u32,
    k: usize,
    ds: &[usize],
) -> Result<DnProbe> {
    if s == 0 || s > k {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= s <= k (k = {k}, s = {s})"
        )));
    }
    let points = ds
        .iter()
        .map(|&d| {
            check_shape(terms, d, k)?;
            let closed = log_rho_closed(terms, n, s, r, k, d)?;
            let direct = match log_rho_direct(terms, n, s, r, k, d) {
                Ok(v) => Some(v),
                Err(Error::InvalidParameter(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(DnProbePoint {
                d,
                log_rho: closed.to_f64(),
                log_rho_direct: direct.as_ref().map(Scalar::to_f64),
                discrepancy: direct.map(|v| (v - &closed).abs().to_f64()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DnProbe {
        n,
        s,
        r,
        k,
        points,
    })
}
