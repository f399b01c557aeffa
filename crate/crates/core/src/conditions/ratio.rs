//! Ratio-type tests on `log a_l`: boundedness of `a_l^p / a_{l+1}` and the
//! classical convexity / ratio / power conditions.

use super::sequence::SequenceTerms;
use super::verdict::{slope_fit, trend, Series, Status, Verdict, Witness};
use crate::numerics::{LogSigned, Scalar};

/// Largest exponent tried for the power condition.
pub const MAX_POWER: u32 = 10;

fn indices_f64(terms: &SequenceTerms, len: usize) -> Vec<f64> {
    terms.indices[..len].iter().map(|&l| l as f64).collect()
}

/// Applies the divergence rule to a trajectory indexed like `terms`.
fn judge(v: &mut Verdict, terms: &SequenceTerms, name: &str, values: Vec<f64>) {
    let xs = indices_f64(terms, values.len());
    let t = trend(&values);
    if values.len() >= 2 {
        v.slopes.push(slope_fit(name, &xs[t.tail_start..], &values[t.tail_start..], None));
    }
    if t.diverging {
        let last = values.len() - 1;
        v.push_witness(Witness::Index {
            index: terms.indices[last],
            value: values[last],
            threshold: values[t.tail_start],
            reason: format!("{name} increases monotonically over the tail"),
        });
        v.fail();
    }
    v.series.push(Series {
        name: name.to_string(),
        x_label: "l".into(),
        y_label: format!("log {name}"),
        x: xs,
        y: values,
    });
}

/// Trajectory `l -> p log a_l - log a_{l+1}`.
pub fn ratio_trajectory(terms: &SequenceTerms, p: f64) -> Vec<Scalar> {
    let ps = Scalar::from_f64(p);
    terms
        .log_values
        .windows(2)
        .map(|w| &ps * &w[0] - &w[1])
        .collect()
}

/// Fails when `log(a_l^p / a_{l+1})` diverges along the truncation.
pub fn check_ratio(terms: &SequenceTerms, p: f64) -> Verdict {
    let mut v = Verdict::new("ratio", &[("p", p)]);
    let traj: Vec<f64> = ratio_trajectory(terms, p).iter().map(Scalar::to_f64).collect();
    if let Some(sup) = traj.iter().copied().reduce(f64::max) {
        v.notes.push(format!("sup over truncation: {sup:e}"));
    }
    judge(&mut v, terms, "a_l^p/a_(l+1)", traj);
    v
}

#[derive(Clone, Debug)]
pub struct VogtReport {
    /// (a) `a_l - a_{l+1}` decreasing.
    pub convexity: Verdict,
    /// (b) `a_l / a_{l+1}` bounded.
    pub ratio: Verdict,
    /// (c) `a_l^q / (a_l - a_{l+1})` bounded for some `q <= MAX_POWER`.
    pub power: Verdict,
    pub minimal_q: Option<u32>,
}

impl VogtReport {
    pub fn verdicts(&self) -> [&Verdict; 3] {
        [&self.convexity, &self.ratio, &self.power]
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts().iter().all(|v| v.status != Status::Fails)
    }
}

pub fn check_vogt(terms: &SequenceTerms) -> VogtReport {
    let a: Vec<LogSigned> = terms
        .log_values
        .iter()
        .map(|l| LogSigned::from_log(1, l.clone()))
        .collect();
    let diffs: Vec<LogSigned> = a.windows(2).map(|w| w[0].sub(&w[1])).collect();

    let mut convexity = Verdict::new("vogt-convexity", &[]);
    for (i, w) in diffs.windows(2).enumerate() {
        if w[1] > w[0] {
            convexity.push_witness(Witness::Index {
                index: terms.indices[i + 1],
                value: w[1].log_mag_f64(),
                threshold: w[0].log_mag_f64(),
                reason: "a_l - a_(l+1) increases".into(),
            });
        }
    }
    if convexity.witness_count > 0 {
        convexity.fail();
    }

    let mut ratio = Verdict::new("vogt-ratio", &[]);
    let steps: Vec<f64> = terms
        .log_values
        .windows(2)
        .map(|w| (&w[0] - &w[1]).to_f64())
        .collect();
    judge(&mut ratio, terms, "a_l/a_(l+1)", steps);

    let log_diffs: Vec<Scalar> = diffs
        .iter()
        .map(|d| d.log_mag().expect("strictly decreasing terms").clone())
        .collect();
    let mut minimal_q = None;
    let mut power = Verdict::new("vogt-power", &[("q_max", MAX_POWER as f64)]);
    let mut last = None;
    for q in 1..=MAX_POWER {
        let qs = Scalar::from_i64(q as i64);
        let traj: Vec<f64> = terms
            .log_values
            .iter()
            .zip(&log_diffs)
            .map(|(l, d)| (&qs * l - d).to_f64())
            .collect();
        let mut probe = Verdict::new("vogt-power", &[("q", q as f64)]);
        judge(&mut probe, terms, "a_l^q/(a_l-a_(l+1))", traj);
        if probe.status != Status::Fails {
            minimal_q = Some(q);
            power.parameters.insert("q".into(), q as f64);
            power.slopes = probe.slopes;
            power.series = probe.series;
            break;
        }
        last = Some(probe);
    }
    match minimal_q {
        Some(q) => power.notes.push(format!("minimal q = {q}")),
        None => {
            let probe = last.expect("at least one q tried");
            for w in probe.witnesses {
                power.push_witness(w);
            }
            power.slopes = probe.slopes;
            power.series = probe.series;
            power.notes.push(format!("none <= {MAX_POWER}"));
            power.fail();
        }
    }
    VogtReport {
        convexity,
        ratio,
        power,
        minimal_q,
    }
}
