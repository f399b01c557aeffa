//! Local Markov factors on finite point sets and Lagrange-type quotients.

pub mod simplex;

use crate::error::{Error, Result};
use crate::interpolation::PointSet;
use crate::numerics::{Field, Jet, LogSigned, Scalar};

/// Tolerance on the equioscillation certificate `|P(t_i)| = 1`.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct MarkovQuery<T> {
    pub points: PointSet<T>,
    pub y: T,
    pub k: usize,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActivePoint<T> {
    pub index: usize,
    /// LP weight `w_s` with `P^(j)(y) = sum w_s P(t_s)`.
    pub weight: T,
    /// Sign of `P(t_s)` at the optimum.
    pub sign: i8,
}

#[derive(Clone, Debug)]
pub struct MarkovSolution<T> {
    pub value: T,
    /// Enclosing interval `[a, b]` of `S` and `y`.
    pub interval: (T, T),
    /// Extremal polynomial in the Chebyshev basis of `interval`.
    pub chebyshev_coeffs: Vec<T>,
    pub active: Vec<ActivePoint<T>>,
    /// `max_s |P(t_s)|` over all of `S`.
    pub max_abs_on_set: f64,
    /// `max ||P(t_i)| - 1|` over the active set.
    pub active_deviation: f64,
    pub certified: bool,
    pub pivots: usize,
}

impl<T: Field> MarkovSolution<T> {
    /// Value of the extremal polynomial at `x`.
    pub fn eval(&self, x: &T) -> T {
        let tau = to_chebyshev_variable(x, &self.interval);
        chebyshev_values(&tau, self.chebyshev_coeffs.len() - 1)
            .iter()
            .zip(&self.chebyshev_coeffs)
            .fold(T::zero(), |acc, (t, c)| acc + &(t.clone() * c))
    }
}

fn enclosing_interval<T: Field>(points: &PointSet<T>, y: &T) -> (T, T) {
    let lo = T::min_of(points.min().unwrap().clone(), y.clone());
    let hi = T::max_of(points.max().unwrap().clone(), y.clone());
    if hi > lo {
        (lo, hi)
    } else {
        (lo.clone() - &T::one(), hi + &T::one())
    }
}

fn to_chebyshev_variable<T: Field>(x: &T, (a, b): &(T, T)) -> T {
    (x.clone() * &T::from_i64(2) - a - b) / (b.clone() - a)
}

/// `T_0(t), ..., T_k(t)`.
pub fn chebyshev_values<T: Field>(t: &T, k: usize) -> Vec<T> {
    let mut v = vec![T::one()];
    if k >= 1 {
        v.push(t.clone());
    }
    for i in 2..=k {
        let next = T::from_i64(2) * t * &v[i - 1] - &v[i - 2];
        v.push(next);
    }
    v
}

/// `d^j/dt^j T_i(t)` for `i = 0..=k`.
pub fn chebyshev_derivatives<T: Field>(t: &T, k: usize, j: usize) -> Vec<T> {
    let var = Jet::variable(t.clone(), j);
    let mut v = vec![Jet::constant(t.clone(), T::one(), j)];
    if k >= 1 {
        v.push(var.clone());
    }
    for i in 2..=k {
        let next = var.mul(&v[i - 1]).scale(&T::from_i64(2)).sub(&v[i - 2]);
        v.push(next);
    }
    v.iter().map(|jet| jet.derivative(j)).collect()
}

/// Exact extremal value `sup { |P^(j)(y)| : deg P <= k, |P| <= 1 on S }` by linear programming.
///
/// The LP is solved in its dual form `min |w|_1` subject to
/// `sum_s w_s T(t_s) = (T^(j)(y))`, whose multipliers are the Chebyshev
/// coefficients of the extremal polynomial.
pub fn markov_factor_lp<T: Field>(q: &MarkovQuery<T>) -> Result<MarkovSolution<T>> {
    let s = q.points.len();
    if q.j > q.k {
        return Err(Error::InvalidParameter(format!(
            "derivative order {} exceeds degree {}",
            q.j, q.k
        )));
    }
    if s < q.k + 1 {
        return Err(Error::Unbounded { points: s, k: q.k });
    }
    let interval = enclosing_interval(&q.points, &q.y);
    let (a, b) = interval.clone();
    let taus: Vec<T> = q
        .points
        .nodes()
        .iter()
        .map(|x| to_chebyshev_variable(x, &interval))
        .collect();
    let basis_at: Vec<Vec<T>> = taus.iter().map(|t| chebyshev_values(t, q.k)).collect();
    let tau_y = to_chebyshev_variable(&q.y, &interval);
    let scale = T::from_i64(2) / (b - &a);
    let mut g = chebyshev_derivatives(&tau_y, q.k, q.j);
    let factor = Field::powi(&scale, q.j as i64);
    for gi in g.iter_mut() {
        *gi = gi.clone() * &factor;
    }

    let rows = q.k + 1;
    let mut mat = vec![Vec::with_capacity(2 * s); rows];
    for vals in &basis_at {
        for (r, v) in vals.iter().enumerate() {
            mat[r].push(v.clone());
            mat[r].push(-v.clone());
        }
    }
    let cost = vec![T::one(); 2 * s];
    let lp = simplex::solve_standard_form(&mat, &g, &cost)?;

    let coeffs = lp.duals.clone();
    let eval = |vals: &Vec<T>| {
        vals.iter()
            .zip(&coeffs)
            .fold(T::zero(), |acc, (t, c)| acc + &(t.clone() * c))
    };
    let max_abs_on_set = basis_at
        .iter()
        .map(|v| eval(v).abs().to_f64())
        .fold(0.0, f64::max);
    let mut active = Vec::new();
    let mut deviation: f64 = 0.0;
    let mut cols: Vec<usize> = lp.basis.iter().copied().filter(|&c| c < 2 * s).collect();
    cols.sort_unstable();
    for col in cols {
        let idx = col / 2;
        let p = eval(&basis_at[idx]);
        deviation = deviation.max((p.abs().to_f64() - 1.0).abs());
        let w = if col % 2 == 0 {
            lp.x[col].clone()
        } else {
            -lp.x[col].clone()
        };
        active.push(ActivePoint {
            index: idx,
            weight: w,
            sign: if p < T::zero() { -1 } else { 1 },
        });
    }
    let certified = deviation <= CERTIFICATE_TOLERANCE
        && max_abs_on_set <= 1.0 + CERTIFICATE_TOLERANCE
        && active.len() >= 1;
    Ok(MarkovSolution {
        value: lp.objective,
        interval,
        chebyshev_coeffs: coeffs,
        active,
        max_abs_on_set,
        active_deviation: deviation,
        certified,
        pivots: lp.pivots,
    })
}

/// `sum_nu |L_nu^(j)(y)|` for the Lagrange basis on `S` (degree `|S| - 1`).
pub fn markov_factor_lagrange<T: Field>(points: &PointSet<T>, y: &T, j: usize) -> Result<T> {
    let nodes = points.nodes();
    if nodes.is_empty() {
        return Err(Error::SizeMismatch {
            expected: 1,
            got: 0,
        });
    }
    let mut total = T::zero();
    for (nu, x_nu) in nodes.iter().enumerate() {
        let var = Jet::variable(y.clone(), j);
        let mut num = Jet::constant(y.clone(), T::one(), j);
        let mut den = T::one();
        for (i, x_i) in nodes.iter().enumerate() {
            if i != nu {
                num = num.mul(&var.add_scalar(&-x_i.clone()));
                den = den * &(x_nu.clone() - x_i);
            }
        }
        total = total + &(num.derivative(j) / den).abs();
    }
    Ok(total)
}

/// Distinct nodes drawn from `K` together with the exponents `m <= k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularTuple {
    pub nodes: Vec<Scalar>,
    pub m: usize,
    pub k: usize,
}

impl RegularTuple {
    pub fn new(mut nodes: Vec<Scalar>, m: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidParameter("empty tuple".into()));
        }
        nodes.sort();
        let k = nodes.len() - 1;
        if m > k {
            return Err(Error::InvalidParameter(format!("m = {m} exceeds k = {k}")));
        }
        Ok(RegularTuple { nodes, m, k })
    }

    pub fn min_gap(&self) -> Scalar {
        self.nodes
            .windows(2)
            .map(|w| &w[1] - &w[0])
            .min()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn max_gap(&self) -> Scalar {
        &self.nodes[self.nodes.len() - 1] - &self.nodes[0]
    }
}

/// `log( max_gap^(k-m) / min_gap^k )`, computed in log space.
pub fn lagrange_quotient(t: &RegularTuple) -> Result<LogSigned> {
    if t.k == 0 {
        return Ok(LogSigned::one());
    }
    if let Some(i) = t.nodes.windows(2).position(|w| w[0] == w[1]) {
        return Err(Error::DuplicateNode { index: i + 1 });
    }
    let min_gap = t.min_gap();
    let max_gap = t.max_gap();
    let km = Scalar::from_i64((t.k - t.m) as i64);
    let k = Scalar::from_i64(t.k as i64);
    let mut log = -(k * min_gap.ln());
    if t.k > t.m {
        log += km * max_gap.ln();
    }
    Ok(LogSigned::from_log(1, log))
}
