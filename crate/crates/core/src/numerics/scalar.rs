use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Mutex;

use dashu_float::round::mode::HalfEven;
use dashu_float::{DBig, FBig};
use dashu_int::ops::BitTest;
use dashu_int::IBig;

use crate::error::Error;

type Inner = FBig<HalfEven, 2>;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 256;

static PRECISION: AtomicUsize = AtomicUsize::new(DEFAULT_PRECISION);

static LN2: Mutex<Option<Scalar>> = Mutex::new(None);
static PI: Mutex<Option<Scalar>> = Mutex::new(None);

/// Current working precision in bits for newly constructed scalars.
pub fn precision() -> usize {
    PRECISION.load(AtomicOrdering::Relaxed)
}

/// Set the working precision. Values below 64 bits are rejected.
pub fn set_precision(bits: usize) -> Result<(), Error> {
    if bits < 64 {
        return Err(Error::InvalidParameter(format!(
            "precision must be at least 64 bits, got {bits}"
        )));
    }
    PRECISION.store(bits, AtomicOrdering::Relaxed);
    Ok(())
}

/// Arbitrary precision binary float with round-half-even semantics.
///
/// The exponent range is that of `isize`, so quantities such as `exp(-60!)`
/// are representable without underflow.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Scalar(Inner);

impl Scalar {
    fn wrap(v: Inner) -> Self {
        let p = precision();
        if v.precision() == p {
            Scalar(v)
        } else {
            Scalar(v.with_precision(p).value())
        }
    }

    pub fn zero() -> Self {
        Self::wrap(Inner::ZERO)
    }

    pub fn one() -> Self {
        Self::wrap(Inner::ONE)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::wrap(Inner::from(v))
    }

    pub fn from_ibig(v: IBig) -> Self {
        Self::wrap(Inner::from(v))
    }

    /// Exact conversion of a finite `f64`. Non-finite input panics.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite f64 {v}");
        Self::wrap(Inner::try_from(v).expect("finite f64"))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// `2^e` exactly.
    pub fn pow2(e: isize) -> Self {
        Self::wrap(Inner::from_parts(IBig::ONE, e))
    }

    /// Parse a decimal literal such as `-1.25e-40`.
    pub fn parse_decimal(s: &str) -> Result<Self, Error> {
        let d = DBig::from_str(s.trim())
            .map_err(|e| Error::Parse(format!("invalid number '{s}': {e:?}")))?;
        let b = d.with_base_and_precision::<2>(precision()).value();
        Ok(Self::wrap(b.with_rounding::<HalfEven>()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.repr().significand().is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&Inner::ZERO) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn exp(&self) -> Self {
        Self::wrap(self.0.exp())
    }

    pub fn exp_m1(&self) -> Self {
        Self::wrap(self.0.exp_m1())
    }

    /// Natural logarithm. Panics on non-positive input.
    pub fn ln(&self) -> Self {
        assert!(self.signum() > 0, "ln of non-positive value");
        Self::wrap(self.0.ln())
    }

    /// `ln 2` at the current precision, cached.
    pub fn ln2() -> Self {
        let mut cache = LN2.lock().unwrap();
        match cache.as_ref() {
            Some(v) if v.0.precision() == precision() => v.clone(),
            _ => {
                let v = Scalar::from_i64(2).ln();
                *cache = Some(v.clone());
                v
            }
        }
    }

    /// `pi` at the current precision (Machin's formula), cached.
    pub fn pi() -> Self {
        let mut cache = PI.lock().unwrap();
        if let Some(v) = cache.as_ref().filter(|v| v.0.precision() == precision()) {
            return v.clone();
        }
        // atan(1/q) = sum (-1)^i / ((2i+1) q^(2i+1))
        let atan_inv = |q: i64| {
            let q2 = Scalar::from_i64(q * q);
            let mut pow = Scalar::from_ratio(1, q);
            let mut acc = Scalar::zero();
            let stop = Scalar::pow2(-(precision() as isize) - 8);
            let mut i = 0i64;
            while pow > stop {
                let term = &pow / &Scalar::from_i64(2 * i + 1);
                acc = if i % 2 == 0 { acc + term } else { acc - term };
                pow = pow / q2.clone();
                i += 1;
            }
            acc
        };
        let v = Scalar::from_i64(4) * (Scalar::from_i64(4) * atan_inv(5) - atan_inv(239));
        *cache = Some(v.clone());
        v
    }

    pub fn ln_1p(&self) -> Self {
        Self::wrap(self.0.ln_1p())
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.0.sqrt())
    }

    pub fn powi(&self, n: i64) -> Self {
        if n == 0 {
            return Self::one();
        }
        Self::wrap(self.0.powi(IBig::from(n)))
    }

    pub fn powf(&self, y: &Scalar) -> Self {
        Self::wrap(self.0.powf(&y.0))
    }

    pub fn floor(&self) -> Self {
        Self::wrap(self.0.floor())
    }

    pub fn to_ibig(&self) -> IBig {
        self.0.to_int().value()
    }

    /// Nearest `f64`; saturates to `±inf` and flushes to zero outside range.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// Fast `ln|x|` in double precision, valid far outside the `f64` range.
    pub fn ln_abs_f64(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let repr = self.0.repr();
        let sig = repr.significand();
        let bits = sig.bit_len();
        let shift = bits.saturating_sub(60);
        let top: IBig = sig.clone() >> shift;
        let top = i64::try_from(top).expect("60-bit mantissa").unsigned_abs() as f64;
        top.ln() + (repr.exponent() as f64 + shift as f64) * std::f64::consts::LN_2
    }

    /// Binary exponent `e` with `2^e <= |x| < 2^(e+1)`; `None` for zero.
    pub fn ilog2(&self) -> Option<isize> {
        if self.is_zero() {
            return None;
        }
        let repr = self.0.repr();
        Some(repr.exponent() + repr.significand().bit_len() as isize - 1)
    }

    /// Sine and cosine by Taylor series after halving the argument.
    pub fn sin_cos(&self) -> (Scalar, Scalar) {
        let mut halvings = 0isize;
        let mut x = self.clone();
        let quarter = Scalar::pow2(-2);
        while x.abs() > quarter {
            x = x * Scalar::pow2(-1);
            halvings += 1;
        }
        let eps = Scalar::pow2(-(precision() as isize) - 8);
        let x2 = &x * &x;
        let mut term = x.clone();
        let mut s = x.clone();
        let mut k = 1i64;
        loop {
            term = -(term * &x2) / Scalar::from_i64((2 * k) * (2 * k + 1));
            s += &term;
            if term.abs() < eps {
                break;
            }
            k += 1;
        }
        let mut term = Scalar::one();
        let mut c = Scalar::one();
        let mut k = 1i64;
        loop {
            term = -(term * &x2) / Scalar::from_i64((2 * k - 1) * (2 * k));
            c += &term;
            if term.abs() < eps {
                break;
            }
            k += 1;
        }
        for _ in 0..halvings {
            let s2 = Scalar::from_i64(2) * &s * &c;
            let c2 = &c * &c - &s * &s;
            s = s2;
            c = c2;
        }
        (s, c)
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Precision of this value in bits.
    pub fn bits(&self) -> usize {
        self.0.precision()
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_f64();
        if self.is_zero() || (v != 0.0 && v.is_finite()) {
            write!(f, "{v:e}")
        } else {
            let sign = if self.signum() < 0 { "-" } else { "" };
            write!(f, "{sign}exp({:e})", self.ln_abs_f64())
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Scalar::parse_decimal(s)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_i64(v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $asg:ident, $am:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            #[inline]
            fn $m(self, rhs: Scalar) -> Scalar {
                Scalar::wrap($tr::$m(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            #[inline]
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                Scalar::wrap($tr::$m(self.0, &rhs.0))
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            #[inline]
            fn $m(self, rhs: Scalar) -> Scalar {
                Scalar::wrap($tr::$m(&self.0, rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            #[inline]
            fn $m(self, rhs: &'b Scalar) -> Scalar {
                Scalar::wrap($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $asg<Scalar> for Scalar {
            #[inline]
            fn $am(&mut self, rhs: Scalar) {
                *self = $tr::$m(&*self, rhs);
            }
        }
        impl<'a> $asg<&'a Scalar> for Scalar {
            #[inline]
            fn $am(&mut self, rhs: &'a Scalar) {
                *self = $tr::$m(&*self, rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        Scalar::wrap(self.0 / rhs.0)
    }
}
impl<'a> Div<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        Scalar::wrap(self.0 / &rhs.0)
    }
}
impl<'a> Div<Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        Scalar::wrap(&self.0 / rhs.0)
    }
}
impl<'a, 'b> Div<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'b Scalar) -> Scalar {
        Scalar::wrap(&self.0 / &rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}
impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0.clone())
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_ratio_keeps_working_precision() {
        let a = Scalar::from_ratio(3, 7);
        assert_eq!(a.bits(), DEFAULT_PRECISION);
        assert!((a.to_f64() - 3.0 / 7.0).abs() < 1e-16);
    }

    #[test]
    fn exp_ln_round_trip() {
        let x = Scalar::from_ratio(-123456789, 1000);
        let back = x.exp().ln();
        assert!((back - &x).abs() < Scalar::pow2(-220));
    }

    #[test]
    fn far_underflow_is_representable() {
        let big = Scalar::from_i64(-1_000_000_000_000);
        let tiny = big.exp();
        assert!(tiny.signum() > 0);
        assert_eq!(tiny.to_f64(), 0.0);
        let l = tiny.ln_abs_f64();
        assert!((l + 1e12).abs() < 1e-3, "{l}");
    }

    #[test]
    fn ln_abs_f64_matches_ln() {
        for v in ["0.3", "17", "1e-30", "-2.5e40"] {
            let s = Scalar::parse_decimal(v).unwrap();
            let expect = s.abs().ln().to_f64();
            assert!((s.ln_abs_f64() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn sin_cos_known_values() {
        let (s, c) = Scalar::one().sin_cos();
        assert!((s.to_f64() - 1f64.sin()).abs() < 1e-15);
        assert!((c.to_f64() - 1f64.cos()).abs() < 1e-15);
        let (s, c) = Scalar::from_i64(7).sin_cos();
        let one = &s * &s + &c * &c;
        assert!((one - Scalar::one()).abs() < Scalar::pow2(-230));
    }

    #[test]
    fn pi_is_a_zero_of_sine() {
        let pi = Scalar::pi();
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        let (s, c) = pi.sin_cos();
        assert!(s.abs() < Scalar::pow2(-240));
        assert!((c + Scalar::one()).abs() < Scalar::pow2(-240));
    }

    #[test]
    fn precision_floor() {
        assert!(set_precision(10).is_err());
    }
}
