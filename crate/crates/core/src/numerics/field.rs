use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use super::scalar::Scalar;

/// Exact rationals, used for oracle computations and small exact problems.
pub type Rational = RBig;

/// Ordered field arithmetic shared by [`Scalar`], [`Rational`] and `f64`.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `ln|x|` in double precision; must stay finite outside the `f64` range.
    fn ln_abs_f64(&self) -> f64 {
        self.to_f64().abs().ln()
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    /// `x^n` by repeated squaring; negative `n` inverts.
    fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }

    /// Largest integer `<= x`, if it fits in `i64`.
    fn floor_i64(&self) -> Option<i64>;

    /// Relative rounding level used for pivoting and tie decisions; zero when exact.
    fn rounding_level() -> f64 {
        0.0
    }
}

/// Fields with transcendental functions.
pub trait Real: Field {
    fn from_f64(v: f64) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn pi() -> Self;
    /// Tolerance used when a value is meant to vanish exactly.
    fn vanishing_tolerance() -> f64;
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn from_i64(v: i64) -> Self {
        Scalar::from_i64(v)
    }
    fn to_f64(&self) -> f64 {
        Scalar::to_f64(self)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn abs(&self) -> Self {
        Scalar::abs(self)
    }
    fn ln_abs_f64(&self) -> f64 {
        Scalar::ln_abs_f64(self)
    }
    fn powi(&self, n: i64) -> Self {
        Scalar::powi(self, n)
    }
    fn floor_i64(&self) -> Option<i64> {
        i64::try_from(self.floor().to_ibig()).ok()
    }
    fn rounding_level() -> f64 {
        2f64.powi(32 - super::scalar::precision() as i32)
    }
}

impl Real for Scalar {
    fn from_f64(v: f64) -> Self {
        Scalar::from_f64(v)
    }
    fn exp(&self) -> Self {
        Scalar::exp(self)
    }
    fn ln(&self) -> Self {
        Scalar::ln(self)
    }
    fn sqrt(&self) -> Self {
        Scalar::sqrt(self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        Scalar::sin_cos(self)
    }
    fn pi() -> Self {
        Scalar::pi()
    }
    fn vanishing_tolerance() -> f64 {
        2f64.powi(-150)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        RBig::ZERO
    }
    fn one() -> Self {
        RBig::ONE
    }
    fn from_i64(v: i64) -> Self {
        RBig::from(v)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        RBig::from_parts(IBig::from(num), UBig::from(den.unsigned_abs()))
            * RBig::from(den.signum())
    }
    fn to_f64(&self) -> f64 {
        RBig::to_f64(self).value()
    }
    fn floor_i64(&self) -> Option<i64> {
        i64::try_from(self.floor()).ok()
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn powi(&self, n: i64) -> Self {
        f64::powi(*self, n as i32)
    }
    fn floor_i64(&self) -> Option<i64> {
        let f = self.floor();
        (f.abs() < 9.2e18).then_some(f as i64)
    }
    fn rounding_level() -> f64 {
        1e-12
    }
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn vanishing_tolerance() -> f64 {
        1e-9
    }
}

/// `n!` in the field.
pub fn factorial<T: Field>(n: usize) -> T {
    (2..=n as i64).fold(T::one(), |acc, i| acc * &T::from_i64(i))
}

/// Binomial coefficient in the field.
pub fn binomial<T: Field>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * &T::from_i64((n - i) as i64) / T::from_i64((i + 1) as i64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_ratio_normalises_sign() {
        let r = Rational::from_ratio(3, -6);
        assert_eq!(r, Rational::from_ratio(-1, 2));
        assert_eq!(Rational::from_ratio(7, 2).floor_i64(), Some(3));
        assert_eq!(Rational::from_ratio(-7, 2).floor_i64(), Some(-4));
    }

    #[test]
    fn generic_powi_matches_builtin() {
        let r = Rational::from_ratio(2, 3);
        assert_eq!(r.powi(-3), Rational::from_ratio(27, 8));
        assert_eq!(Field::powi(&1.5f64, 4), 5.0625);
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial::<Rational>(10), Rational::from_i64(3628800));
        assert_eq!(binomial::<Rational>(10, 3), Rational::from_i64(120));
        assert_eq!(binomial::<f64>(5, 7), 0.0);
    }

    #[test]
    fn scalar_floor() {
        assert_eq!(Scalar::from_ratio(-1, 3).floor_i64(), Some(-1));
        assert_eq!(Scalar::from_ratio(5, 2).floor_i64(), Some(2));
    }
}
