//! The sequence `q_d` whose boundedness in `d` is necessary for a dominating norm
//! on `K = {0} ∪ {a_l}`.

use rayon::prelude::*;

use super::sequence::SequenceTerms;
use super::verdict::{slope_fit, trend, Series, Status, Verdict, Witness};
use crate::error::{Error, Result};
use crate::numerics::{LogSigned, Scalar};

/// `log q_d = (r - 2k(2n+2)) log a_d - (3n+4) log a_{d+k} + 4(2n+2) sum_{j=1}^{k-s} log a_{d+j}`.
pub fn dn_sequence_q(
    terms: &SequenceTerms,
    n: usize,
    s: usize,
    r: u32,
    k: usize,
    d: usize,
) -> Result<LogSigned> {
    if s < 1 || k < s {
        return Err(Error::InvalidParameter(format!(
            "need k >= s >= 1 (k = {k}, s = {s})"
        )));
    }
    terms.check_halving(d, d + k)?;
    log_q(terms, n, s, r, k, d).map(|log| LogSigned::from_log(1, log))
}

fn log_q(terms: &SequenceTerms, n: usize, s: usize, r: u32, k: usize, d: usize) -> Result<Scalar> {
    let w = 2 * n as i64 + 2;
    let mut log = Scalar::from_i64(r as i64 - 2 * k as i64 * w) * terms.log_at(d)?
        - Scalar::from_i64(3 * n as i64 + 4) * terms.log_at(d + k)?;
    let four_w = Scalar::from_i64(4 * w);
    for j in 1..=k - s {
        log += &four_w * terms.log_at(d + j)?;
    }
    Ok(log)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DnSweep {
    pub ns: Vec<usize>,
    pub ss: Vec<usize>,
    pub r_max: u32,
    pub k_max: usize,
}

impl Default for DnSweep {
    fn default() -> Self {
        DnSweep {
            ns: (0..=3).collect(),
            ss: (1..=6).collect(),
            r_max: 200,
            k_max: 12,
        }
    }
}

/// `log q_d` in f64 for `d` in `ds`, without `r log a_d`; `logs[i]` is `log a_{first + i}`.
fn base_trajectory(logs: &[f64], first: usize, n: usize, s: usize, k: usize, ds: &[usize]) -> Vec<f64> {
    let w = (2 * n + 2) as f64;
    let mut prefix = vec![0.0; logs.len() + 1];
    for (i, l) in logs.iter().enumerate() {
        prefix[i + 1] = prefix[i] + l;
    }
    ds.iter()
        .map(|&d| {
            let i = d - first;
            -2.0 * k as f64 * w * logs[i] - (3 * n + 4) as f64 * logs[i + k]
                + 4.0 * w * (prefix[i + k - s + 1] - prefix[i + 1])
        })
        .collect()
}

/// Whether `d -> log q_d` diverges for `(n, s, r, k)` over `ds`.
pub fn dn_diverges(
    terms: &SequenceTerms,
    n: usize,
    s: usize,
    r: u32,
    k: usize,
    ds: &[usize],
) -> Result<bool> {
    let traj = ds
        .iter()
        .map(|&d| dn_sequence_q(terms, n, s, r, k, d).map(|q| q.log_mag_f64()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(trend(&traj).diverging)
}

/// Per `(n, s)`: the list of `(r, k)` with a diverging trajectory (smallest `k` per `r`).
struct Refutation {
    n: usize,
    s: usize,
    by_r: Vec<Option<usize>>,
}

/// Searches for `(n, s)` such that every `r <= r_max` has some `k <= k_max` with
/// unbounded `q_d`. Fails when such an `s` exists for every tested `n`.
pub fn check_dn(terms: &SequenceTerms, sweep: &DnSweep) -> Verdict {
    let mut v = Verdict::new(
        "dn-sequence",
        &[("r_max", sweep.r_max as f64), ("k_max", sweep.k_max as f64)],
    );
    if let Err(e) = terms.halving_holds() {
        v.status = Status::NotApplicable;
        v.notes.push(e.to_string());
        return v;
    }
    let first = terms.first_index();
    let last = terms.last_index();
    if last < first + sweep.k_max + 4 {
        v.status = Status::NotApplicable;
        v.notes.push("truncation too short for the k range".into());
        return v;
    }
    let ds: Vec<usize> = (first..=last - sweep.k_max).collect();
    let all_logs: Vec<f64> = terms.log_values.iter().map(Scalar::to_f64).collect();
    let logs = &all_logs[..ds.len()];

    let pairs: Vec<(usize, usize)> = sweep
        .ns
        .iter()
        .flat_map(|&n| sweep.ss.iter().map(move |&s| (n, s)))
        .collect();
    let refutations: Vec<Refutation> = pairs
        .par_iter()
        .map(|&(n, s)| {
            let bases: Vec<(usize, Vec<f64>)> = (s.max(1)..=sweep.k_max)
                .map(|k| (k, base_trajectory(&all_logs, first, n, s, k, &ds)))
                .collect();
            let by_r = (1..=sweep.r_max)
                .map(|r| {
                    bases.iter().find_map(|(k, base)| {
                        let traj: Vec<f64> = base
                            .iter()
                            .zip(logs)
                            .map(|(b, l)| b + r as f64 * l)
                            .collect();
                        trend(&traj).diverging.then_some(*k)
                    })
                })
                .collect();
            Refutation { n, s, by_r }
        })
        .collect();

    let mut all_n_refuted = true;
    for &n in &sweep.ns {
        let found = refutations
            .iter()
            .find(|f| f.n == n && f.by_r.iter().all(Option::is_some));
        match found {
            Some(f) => {
                for (ri, k) in f.by_r.iter().enumerate() {
                    let k = k.unwrap();
                    v.push_witness(Witness::Parameters {
                        params: [
                            ("n".to_string(), n as f64),
                            ("s".to_string(), f.s as f64),
                            ("r".to_string(), (ri + 1) as f64),
                            ("k".to_string(), k as f64),
                        ]
                        .into_iter()
                        .collect(),
                        reason: "q_d unbounded in d".into(),
                    });
                }
                let k = f.by_r[sweep.r_max as usize - 1].unwrap();
                let base = base_trajectory(&all_logs, first, n, f.s, k, &ds);
                let y: Vec<f64> = base
                    .iter()
                    .zip(logs)
                    .map(|(b, l)| b + sweep.r_max as f64 * l)
                    .collect();
                let x: Vec<f64> = ds.iter().map(|&d| d as f64).collect();
                v.slopes.push(slope_fit(
                    &format!("log q_d[n={n},s={},r={},k={k}]", f.s, sweep.r_max),
                    &x,
                    &y,
                    None,
                ));
                v.series.push(Series {
                    name: format!("dn-sequence[n={n},s={},r={},k={k}]", f.s, sweep.r_max),
                    x_label: "d".into(),
                    y_label: "log q_d".into(),
                    x,
                    y,
                });
            }
            None => {
                all_n_refuted = false;
                // an r under which every k stays bounded, for the smallest s
                if let Some(f) = refutations.iter().find(|f| f.n == n) {
                    if let Some(r) = f.by_r.iter().position(Option::is_none) {
                        v.notes.push(format!(
                            "n = {n}: no s refutes; e.g. s = {}, r = {} keeps q_d bounded for k <= {}",
                            f.s,
                            r + 1,
                            sweep.k_max
                        ));
                    }
                }
            }
        }
    }
    if all_n_refuted && v.witness_count > 0 {
        v.fail();
    } else {
        v.status = Status::HeuristicHolds;
        v.witnesses.clear();
        v.witness_count = 0;
        v.slopes.clear();
        v.series.clear();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::sequence::{Family, SequenceSpec};

    fn terms(f: Family) -> SequenceTerms {
        SequenceSpec::new(f).generate().unwrap()
    }

    #[test]
    fn empty_product_case() {
        let t = terms(Family::ExpGeometric { p: 2.0 });
        let (n, k, r, d) = (1usize, 3usize, 5u32, 4usize);
        let q = dn_sequence_q(&t, n, k, r, k, d).unwrap();
        let want = Scalar::from_i64(r as i64 - 2 * k as i64 * 4) * t.log_at(d).unwrap()
            - Scalar::from_i64(7) * t.log_at(d + k).unwrap();
        assert_eq!(q.log_mag().unwrap(), &want);
    }

    #[test]
    fn geometric_log_q_over_p_power_is_constant() {
        for p in [2i64, 3] {
            let t = terms(Family::ExpGeometric { p: p as f64 });
            let (n, s, r, k) = (1usize, 3usize, 10u32, 8usize);
            let w = 4i64;
            let pf = Scalar::from_i64(p);
            // (2kw - r) + (3n+4) p^k - 4w p (p^{k-s} - 1)/(p - 1)
            let c = Scalar::from_i64(2 * k as i64 * w - r as i64)
                + Scalar::from_i64(7) * pf.powi(k as i64)
                - Scalar::from_i64(4 * w) * &pf * (pf.powi((k - s) as i64) - Scalar::one())
                    / Scalar::from_i64(p - 1);
            for d in 5..=40 {
                let q = dn_sequence_q(&t, n, s, r, k, d).unwrap();
                let ratio = q.log_mag().unwrap() / &pf.powi(d as i64);
                assert!((ratio - &c).abs() < Scalar::pow2(-200) * c.abs());
            }
        }
    }

    #[test]
    fn halving_violation_names_index() {
        let t = terms(Family::InvLog { alpha: 1.0 });
        assert_eq!(
            dn_sequence_q(&t, 0, 1, 1, 1, 1).unwrap_err(),
            Error::HalvingViolated { index: 2 }
        );
    }

    #[test]
    fn gaussian_decay_is_bounded_for_large_r() {
        let t = terms(Family::ExpPower { alpha: 2.0 });
        let ds: Vec<usize> = (1..=40).collect();
        for k in 1..=6 {
            let r = 4 * k as u32 * 4;
            assert!(!dn_diverges(&t, 1, 1, r, k, &ds).unwrap());
        }
    }

    #[test]
    fn sweep_separates_examples() {
        let sweep = DnSweep::default();
        let v = check_dn(&terms(Family::ExpGeometric { p: 2.0 }), &sweep);
        assert_eq!(v.status, Status::Fails);
        let v = check_dn(&terms(Family::ExpPower { alpha: 2.0 }), &sweep);
        assert_eq!(v.status, Status::HeuristicHolds);
        let v = check_dn(&terms(Family::InvLog { alpha: 1.0 }), &sweep);
        assert_eq!(v.status, Status::NotApplicable);
    }
}
