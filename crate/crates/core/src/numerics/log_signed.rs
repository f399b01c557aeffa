use std::cmp::Ordering;
use std::fmt;

use super::scalar::Scalar;

/// A real number stored as `sign * exp(log_mag)`.
///
/// Used wherever magnitudes leave the exponent range of any fixed format,
/// e.g. quotients built from `exp(-l!)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LogSigned {
    sign: i8,
    log_mag: Scalar,
}

/// `ln(1 - exp(x))` for `x < 0`, accurate near both ends.
pub fn ln_1m_exp(x: &Scalar) -> Scalar {
    assert!(x.signum() < 0, "ln_1m_exp needs a negative argument");
    let ln2 = Scalar::ln2();
    if *x > -ln2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

impl LogSigned {
    pub fn zero() -> Self {
        LogSigned {
            sign: 0,
            log_mag: Scalar::zero(),
        }
    }

    pub fn one() -> Self {
        LogSigned {
            sign: 1,
            log_mag: Scalar::zero(),
        }
    }

    /// Build from a sign in `{-1, 0, 1}` and `ln|x|`.
    pub fn from_log(sign: i8, log_mag: Scalar) -> Self {
        assert!((-1..=1).contains(&sign));
        if sign == 0 {
            Self::zero()
        } else {
            LogSigned { sign, log_mag }
        }
    }

    pub fn from_scalar(x: &Scalar) -> Self {
        match x.signum() {
            0 => Self::zero(),
            s => LogSigned {
                sign: s as i8,
                log_mag: x.abs().ln(),
            },
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// `ln|x|`; `None` for zero.
    pub fn log_mag(&self) -> Option<&Scalar> {
        (self.sign != 0).then_some(&self.log_mag)
    }

    /// `ln|x|` as `f64`, `-inf` for zero.
    pub fn log_mag_f64(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.log_mag.to_f64()
        }
    }

    /// Linear value; may be zero or huge in `Scalar` terms but never lossy in exponent.
    pub fn to_scalar(&self) -> Scalar {
        match self.sign {
            0 => Scalar::zero(),
            1 => self.log_mag.exp(),
            _ => -self.log_mag.exp(),
        }
    }

    pub fn abs(&self) -> Self {
        LogSigned {
            sign: self.sign.abs(),
            log_mag: self.log_mag.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        LogSigned {
            sign: -self.sign,
            log_mag: self.log_mag.clone(),
        }
    }

    pub fn mul(&self, other: &LogSigned) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::zero();
        }
        LogSigned {
            sign: self.sign * other.sign,
            log_mag: &self.log_mag + &other.log_mag,
        }
    }

    /// Division; panics on a zero divisor.
    pub fn div(&self, other: &LogSigned) -> Self {
        assert!(other.sign != 0, "division by zero");
        if self.sign == 0 {
            return Self::zero();
        }
        LogSigned {
            sign: self.sign * other.sign,
            log_mag: &self.log_mag - &other.log_mag,
        }
    }

    pub fn powi(&self, n: i64) -> Self {
        if n == 0 {
            return Self::one();
        }
        assert!(self.sign != 0 || n > 0, "zero to a negative power");
        if self.sign == 0 {
            return Self::zero();
        }
        let sign = if self.sign < 0 && n % 2 != 0 { -1 } else { 1 };
        LogSigned {
            sign,
            log_mag: &self.log_mag * &Scalar::from_i64(n),
        }
    }

    /// `|x|^y` for real `y`.
    pub fn abs_pow(&self, y: &Scalar) -> Self {
        if self.sign == 0 {
            return Self::zero();
        }
        LogSigned {
            sign: 1,
            log_mag: &self.log_mag * y,
        }
    }

    pub fn add(&self, other: &LogSigned) -> Self {
        if self.sign == 0 {
            return other.clone();
        }
        if other.sign == 0 {
            return self.clone();
        }
        let (big, small) = if self.log_mag >= other.log_mag {
            (self, other)
        } else {
            (other, self)
        };
        let delta = &small.log_mag - &big.log_mag;
        if self.sign == other.sign {
            LogSigned {
                sign: big.sign,
                log_mag: &big.log_mag + delta.exp().ln_1p(),
            }
        } else if delta.is_zero() {
            Self::zero()
        } else {
            LogSigned {
                sign: big.sign,
                log_mag: &big.log_mag + ln_1m_exp(&delta),
            }
        }
    }

    pub fn sub(&self, other: &LogSigned) -> Self {
        self.add(&other.neg())
    }
}

impl PartialOrd for LogSigned {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogSigned {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Ordering::Equal,
                1 => self.log_mag.cmp(&other.log_mag),
                _ => other.log_mag.cmp(&self.log_mag),
            },
            o => o,
        }
    }
}

impl fmt::Debug for LogSigned {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.log_mag),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &LogSigned, b: f64) -> bool {
        (a.to_scalar().to_f64() - b).abs() <= 1e-14 * b.abs().max(1.0)
    }

    #[test]
    fn arithmetic_matches_linear() {
        let a = LogSigned::from_scalar(&Scalar::from_f64(3.5));
        let b = LogSigned::from_scalar(&Scalar::from_f64(-1.25));
        assert!(close(&a.add(&b), 2.25));
        assert!(close(&b.add(&a), 2.25));
        assert!(close(&a.sub(&b), 4.75));
        assert!(close(&b.sub(&a), -4.75));
        assert!(close(&a.mul(&b), -4.375));
        assert!(close(&a.div(&b), -2.8));
        assert!(close(&b.powi(3), -1.953125));
        assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn ordering() {
        let vals = [-3.0, -0.5, 0.0, 1e-300, 2.0];
        for (i, x) in vals.iter().enumerate() {
            for (j, y) in vals.iter().enumerate() {
                let a = LogSigned::from_scalar(&Scalar::from_f64(*x));
                let b = LogSigned::from_scalar(&Scalar::from_f64(*y));
                assert_eq!(a.cmp(&b), i.cmp(&j));
            }
        }
    }

    #[test]
    fn ln_1m_exp_branches() {
        for x in [-1e-30, -0.1, -0.69, -0.7, -5.0, -80.0] {
            let got = ln_1m_exp(&Scalar::from_f64(x)).to_f64();
            let want = if x > -0.5 {
                (-f64::exp_m1(x)).ln()
            } else {
                (-x.exp()).ln_1p()
            };
            assert!((got - want).abs() <= 1e-13 * want.abs(), "{x}");
        }
    }
}
