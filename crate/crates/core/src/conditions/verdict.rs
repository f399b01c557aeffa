use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::numerics::Scalar;

/// A JSON-safe number: plain when `|log10 x| <= 300`, otherwise sign and natural log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Value(f64),
    Log { sign: i8, log: f64 },
}

impl Num {
    pub fn from_scalar(x: &Scalar) -> Num {
        if x.is_zero() {
            return Num::Value(0.0);
        }
        let ln = x.ln_abs_f64();
        if (ln / std::f64::consts::LN_10).abs() > 300.0 {
            Num::Log {
                sign: x.signum() as i8,
                log: ln,
            }
        } else {
            Num::Value(x.to_f64())
        }
    }

    pub fn from_f64(v: f64) -> Num {
        Num::Value(v)
    }

    /// Natural log of the magnitude.
    pub fn ln_abs(&self) -> f64 {
        match self {
            Num::Value(v) => v.abs().ln(),
            Num::Log { log, .. } => *log,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    HoldsOnGrid,
    Fails,
    HeuristicHolds,
    /// The check's hypotheses are not met on this input.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A grid cell `(x, eps)`.
    Cell {
        x_index: usize,
        x: Num,
        eps_exp: f64,
        reason: String,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        value: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        threshold: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        tuple: Option<Vec<usize>>,
    },
    /// A sequence index `l` (or `d`).
    Index {
        index: usize,
        value: f64,
        threshold: f64,
        reason: String,
    },
    /// A parameter combination.
    Parameters {
        params: BTreeMap<String, f64>,
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub name: String,
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub allowed: Option<f64>,
}

/// Plot data: one `(x, y)` series per check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub parameters: BTreeMap<String, f64>,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    /// Total number of witnesses found; `witnesses` may be truncated.
    pub witness_count: usize,
    pub slopes: Vec<SlopeFit>,
    pub series: Vec<Series>,
    pub notes: Vec<String>,
}

/// At most this many witnesses are stored per verdict.
pub const MAX_WITNESSES: usize = 32;

impl Verdict {
    pub fn new(check: &str, parameters: &[(&str, f64)]) -> Self {
        Verdict {
            check: check.to_string(),
            parameters: parameters
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            status: Status::HoldsOnGrid,
            witnesses: Vec::new(),
            witness_count: 0,
            slopes: Vec::new(),
            series: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_witness(&mut self, w: Witness) {
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
        self.witness_count += 1;
    }

    pub fn fail(&mut self) {
        debug_assert!(!self.witnesses.is_empty(), "fails without witness");
        self.status = Status::Fails;
    }
}

/// Least-squares line `y = slope x + intercept` with RMS residual.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    if x.len() < 2 {
        return (0.0, y.first().copied().unwrap_or(0.0), 0.0);
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rms = (x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - slope * a - intercept;
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, intercept, rms)
}

pub fn slope_fit(name: &str, x: &[f64], y: &[f64], allowed: Option<f64>) -> SlopeFit {
    let (slope, intercept, residual_rms) = fit_line(x, y);
    SlopeFit {
        name: name.to_string(),
        slope,
        intercept,
        residual_rms,
        points: x.len(),
        allowed,
    }
}

/// Outcome of the divergence rule on a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct Trend {
    pub diverging: bool,
    /// First position of the examined tail.
    pub tail_start: usize,
    pub tail_slope: f64,
}

/// A trajectory diverges when, over its last quarter (at least 4 points), every
/// increment is positive beyond rounding noise and the fitted slope is positive.
pub fn trend(values: &[f64]) -> Trend {
    let n = values.len();
    if n < 4 {
        return Trend {
            diverging: false,
            tail_start: 0,
            tail_slope: 0.0,
        };
    }
    let tail = (n / 4).max(4).min(n);
    let start = n - tail;
    let ys = &values[start..];
    let xs: Vec<f64> = (start..n).map(|i| i as f64).collect();
    let (slope, _, _) = fit_line(&xs, ys);
    let increasing = ys
        .windows(2)
        .all(|w| w[1] - w[0] > 1e-9 * w[0].abs().max(1.0));
    Trend {
        diverging: increasing && slope > 0.0 && ys.iter().all(|v| v.is_finite()),
        tail_start: start,
        tail_slope: slope,
    }
}

/// Geometric grid `eps = 2^(-e)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsGrid {
    pub exps: Vec<f64>,
    pub values: Vec<Scalar>,
}

impl EpsGrid {
    /// Exponents `min_exp..=max_exp` with `per_octave` points per factor of two.
    pub fn geometric(min_exp: u32, max_exp: u32, per_octave: u32) -> Self {
        let per = per_octave.max(1);
        let exps: Vec<f64> = (min_exp * per..=max_exp * per)
            .map(|i| i as f64 / per as f64)
            .collect();
        Self::from_exponents(exps)
    }

    pub fn from_exponents(exps: Vec<f64>) -> Self {
        let values = exps.iter().map(|&e| pow2_neg(e, 1)).collect();
        EpsGrid { exps, values }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// `log(1/eps_i)`.
    pub fn log_inv(&self, i: usize) -> f64 {
        self.exps[i] * std::f64::consts::LN_2
    }

    /// `eps_i^power`.
    pub fn power(&self, i: usize, power: u32) -> Scalar {
        pow2_neg(self.exps[i], power)
    }
}

impl Default for EpsGrid {
    fn default() -> Self {
        EpsGrid::geometric(2, 40, 1)
    }
}

/// `2^(-e * power)`, exact when the exponent is an integer.
fn pow2_neg(e: f64, power: u32) -> Scalar {
    let total = e * power as f64;
    if total == total.round() {
        Scalar::pow2(-(total as isize))
    } else {
        (Scalar::from_f64(-total) * Scalar::ln2()).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn num_switches_to_log_form() {
        assert_eq!(Num::from_scalar(&Scalar::from_f64(0.5)), Num::Value(0.5));
        let tiny = Scalar::from_i64(-1000).exp();
        match Num::from_scalar(&tiny) {
            Num::Log { sign, log } => {
                assert_eq!(sign, 1);
                assert!((log + 1000.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
        let json = serde_json_like(&Num::Log { sign: -1, log: 2.0 });
        assert_eq!(json, "Log { sign: -1, log: 2.0 }");
    }

    fn serde_json_like(n: &Num) -> String {
        format!("{n:?}")
    }

    #[test]
    fn trend_rule() {
        let lin: Vec<f64> = (0..20).map(|i| i as f64).collect();
        assert!(trend(&lin).diverging);
        let flat = vec![1.0; 20];
        assert!(!trend(&flat).diverging);
        let dec: Vec<f64> = (0..20).map(|i| -(i as f64)).collect();
        assert!(!trend(&dec).diverging);
        assert!(!trend(&[1.0, 2.0, 3.0]).diverging);
    }

    #[test]
    fn line_fit_is_exact_on_lines() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [3.0, 5.0, 7.0, 9.0];
        let (s, b, r) = fit_line(&x, &y);
        assert!((s - 2.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12 && r < 1e-12);
    }

    #[test]
    fn grid_values() {
        let g = EpsGrid::geometric(2, 4, 2);
        assert_eq!(g.exps, vec![2.0, 2.5, 3.0, 3.5, 4.0]);
        assert_eq!(g.values[0], Scalar::pow2(-2));
        assert!((g.values[1].to_f64() - 2f64.powf(-2.5)).abs() < 1e-15);
        assert_eq!(g.power(1, 2), Scalar::pow2(-5));
    }
}
