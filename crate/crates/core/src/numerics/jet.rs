use super::field::{factorial, Field, Real};

/// Truncated Taylor expansion at a base point.
///
/// `coeffs[j]` holds `f^(j)(base) / j!` for `j = 0..=order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    pub base: T,
    pub coeffs: Vec<T>,
}

impl<T: Field> Jet<T> {
    pub fn new(base: T, coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Jet { base, coeffs }
    }

    pub fn zero(base: T, order: usize) -> Self {
        Jet::new(base, vec![T::zero(); order + 1])
    }

    pub fn constant(base: T, value: T, order: usize) -> Self {
        let mut j = Jet::zero(base, order);
        j.coeffs[0] = value;
        j
    }

    /// The identity function `t -> t` expanded at `base`.
    pub fn variable(base: T, order: usize) -> Self {
        let mut j = Jet::zero(base.clone(), order);
        j.coeffs[0] = base;
        if order >= 1 {
            j.coeffs[1] = T::one();
        }
        j
    }

    /// Build from derivative values `f^(j)(base)`.
    pub fn from_derivatives(base: T, derivs: &[T]) -> Self {
        let mut fact = T::one();
        let coeffs = derivs
            .iter()
            .enumerate()
            .map(|(j, d)| {
                if j > 1 {
                    fact = fact.clone() * &T::from_i64(j as i64);
                }
                d.clone() / fact.clone()
            })
            .collect();
        Jet::new(base, coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> &T {
        &self.coeffs[0]
    }

    /// `f^(j)(base)`.
    pub fn derivative(&self, j: usize) -> T {
        self.coeffs[j].clone() * &factorial::<T>(j)
    }

    /// All derivatives `f^(0..=order)(base)`.
    pub fn derivatives(&self) -> Vec<T> {
        let mut fact = T::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j > 1 {
                    fact = fact.clone() * &T::from_i64(j as i64);
                }
                c.clone() * &fact
            })
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order());
        Jet::new(self.base.clone(), self.coeffs[..=order].to_vec())
    }

    pub fn add(&self, other: &Jet<T>) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|j| self.coeffs[j].clone() + &other.coeffs[j])
            .collect();
        Jet::new(self.base.clone(), coeffs)
    }

    pub fn sub(&self, other: &Jet<T>) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|j| self.coeffs[j].clone() - &other.coeffs[j])
            .collect();
        Jet::new(self.base.clone(), coeffs)
    }

    pub fn neg(&self) -> Self {
        Jet::new(
            self.base.clone(),
            self.coeffs.iter().map(|c| -c.clone()).collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Jet::new(
            self.base.clone(),
            self.coeffs.iter().map(|c| c.clone() * s).collect(),
        )
    }

    pub fn add_scalar(&self, s: &T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].clone() + s;
        out
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Jet<T>) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = T::zero();
            for i in 0..=k {
                let (a, b) = (&self.coeffs[i], &other.coeffs[k - i]);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + &(a.clone() * b);
                }
            }
            coeffs.push(acc);
        }
        Jet::new(self.base.clone(), coeffs)
    }

    /// `1/f`; requires `f(base) != 0`.
    pub fn recip(&self) -> Self {
        let n = self.order();
        let inv0 = T::one() / self.coeffs[0].clone();
        let mut out: Vec<T> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = T::zero();
            for i in 1..=k {
                acc = acc + &(self.coeffs[i].clone() * &out[k - i]);
            }
            out.push(-(acc * &inv0));
        }
        Jet::new(self.base.clone(), out)
    }

    pub fn div(&self, other: &Jet<T>) -> Self {
        self.mul(&other.recip())
    }

    pub fn powi(&self, n: u32) -> Self {
        let order = self.order();
        let mut acc = Jet::constant(self.base.clone(), T::one(), order);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `g o f`, where `outer[i] = g^(i)(f(base)) / i!`.
    pub fn compose(&self, outer: &[T]) -> Self {
        let n = self.order().min(outer.len() - 1);
        let mut h = self.truncate(n);
        h.coeffs[0] = T::zero();
        let mut acc = Jet::constant(self.base.clone(), outer[n].clone(), n);
        for i in (0..n).rev() {
            acc = acc.mul(&h).add_scalar(&outer[i]);
        }
        acc
    }

    /// Rescale the variable: the jet of `t -> f(t)` seen as a jet in `x = base_x + t*h`
    /// has coefficients `c_j * h^(-j)`.
    pub fn rescale(&self, new_base: T, inv_h: &T) -> Self {
        let mut p = T::one();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j > 0 {
                    p = p.clone() * inv_h;
                }
                c.clone() * &p
            })
            .collect();
        Jet::new(new_base, coeffs)
    }

    /// `max_j |f^(j)(base)|` for `j <= order`.
    pub fn max_abs_derivative(&self, order: usize) -> T {
        self.derivatives()
            .into_iter()
            .take(order + 1)
            .map(|d| d.abs())
            .fold(T::zero(), T::max_of)
    }
}

impl<T: Real> Jet<T> {
    pub fn exp(&self) -> Self {
        let n = self.order();
        let mut out: Vec<T> = Vec::with_capacity(n + 1);
        out.push(self.coeffs[0].exp());
        for k in 1..=n {
            let mut acc = T::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    acc = acc
                        + &(T::from_i64(i as i64) * &self.coeffs[i] * &out[k - i]);
                }
            }
            out.push(acc / T::from_i64(k as i64));
        }
        Jet::new(self.base.clone(), out)
    }

    /// `(sin f, cos f)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.order();
        let (s0, c0) = self.coeffs[0].sin_cos();
        let mut s = vec![s0];
        let mut c = vec![c0];
        for k in 1..=n {
            let (mut a, mut b) = (T::zero(), T::zero());
            for i in 1..=k {
                if self.coeffs[i].is_zero() {
                    continue;
                }
                let iu = T::from_i64(i as i64) * &self.coeffs[i];
                a = a + &(iu.clone() * &c[k - i]);
                b = b - &(iu * &s[k - i]);
            }
            let kk = T::from_i64(k as i64);
            s.push(a / kk.clone());
            c.push(b / kk);
        }
        (Jet::new(self.base.clone(), s), Jet::new(self.base.clone(), c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::field::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn product_of_polynomials_is_exact() {
        // (1 + 2t)(3 - t + t^2) at t = 1/2, order 3
        let x = q(1, 2);
        let t = Jet::variable(x.clone(), 3);
        let a = t.scale(&q(2, 1)).add_scalar(&q(1, 1));
        let b = t.mul(&t).sub(&t).add_scalar(&q(3, 1));
        let p = a.mul(&b);
        // p(t) = 2t^3 - t^2 + 5t + 3 ; p' = 6t^2 - 2t + 5 ; p'' = 12t - 2 ; p''' = 12
        assert_eq!(p.derivative(0), q(2, 8) - q(1, 4) + q(5, 2) + q(3, 1));
        assert_eq!(p.derivative(1), q(6, 4) - q(1, 1) + q(5, 1));
        assert_eq!(p.derivative(2), q(4, 1));
        assert_eq!(p.derivative(3), q(12, 1));
    }

    #[test]
    fn sin_cos_of_linear_map() {
        // sin(2t) at t = 0.3: derivatives 2^j sin(0.6 + j pi/2)
        let t = Jet::variable(0.3f64, 4).scale(&2.0);
        let (s, c) = t.sin_cos();
        for j in 0..=4 {
            let phase = 0.6 + j as f64 * std::f64::consts::FRAC_PI_2;
            let scale = 2f64.powi(j as i32);
            assert!((s.derivative(j) - scale * phase.sin()).abs() < 1e-12);
            assert!((c.derivative(j) - scale * phase.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn recip_times_self_is_one() {
        let t = Jet::variable(q(1, 3), 5);
        let f = t.mul(&t).add_scalar(&q(2, 1));
        let one = f.mul(&f.recip());
        assert_eq!(one.coeffs[0], q(1, 1));
        assert!(one.coeffs[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn exp_of_linear() {
        let t = Jet::variable(0.25f64, 6).scale(&3.0);
        let e = t.exp();
        for j in 0..=6 {
            let want = 3f64.powi(j as i32) * (0.75f64).exp();
            assert!((e.derivative(j) - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn compose_with_square() {
        // g(y) = y^2 at y0 = f(base); f = 1 + t
        let t = Jet::variable(q(2, 1), 4);
        let f = t.add_scalar(&q(1, 1));
        let y0 = q(3, 1);
        let g = [y0.clone() * &y0, q(2, 1) * &y0, q(1, 1)];
        let h = f.compose(&g);
        assert_eq!(h.coeffs, vec![q(9, 1), q(6, 1), q(1, 1)]);
    }

    #[test]
    fn derivatives_round_trip() {
        let d = vec![q(1, 1), q(-2, 1), q(6, 1), q(24, 1)];
        let j = Jet::from_derivatives(q(0, 1), &d);
        assert_eq!(j.coeffs, vec![q(1, 1), q(-2, 1), q(3, 1), q(4, 1)]);
        assert_eq!(j.derivatives(), d);
    }
}
