use serde::{Deserialize, Serialize};

use super::dn::{check_dn, DnSweep};
use super::necessary::check_necessary_points;
use super::ratio::{check_ratio, check_vogt};
use super::sequence::{Family, SequenceSpec};
use super::sufficient::{check_sufficient_multi, SufficientParams};
use super::verdict::{EpsGrid, Status, Verdict};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overall {
    Positive,
    Negative,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyParams {
    /// `n`, `r`, `gamma` of the sufficient check; `k` is swept over `1..=k_max`.
    pub sufficient: SufficientParams,
    pub k_max: usize,
    pub grid: EpsGrid,
    pub ratio_ps: Vec<f64>,
    pub necessary_ns: Vec<usize>,
    pub necessary_ss: Vec<u32>,
    pub dn: DnSweep,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams {
            sufficient: SufficientParams::default(),
            k_max: 4,
            grid: EpsGrid::default(),
            ratio_ps: vec![1.0, 2.0, 4.0, 8.0],
            necessary_ns: (0..=3).collect(),
            necessary_ss: (2..=6).collect(),
            dn: DnSweep::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub family: String,
    pub length: usize,
    pub verdicts: Vec<Verdict>,
    pub overall: Overall,
    /// Known answer for catalog families.
    pub expected: Option<Overall>,
    /// `Some(true)` / `Some(false)` when both `overall` and `expected` are decided.
    pub consistent: Option<bool>,
    pub reasons: Vec<String>,
}

/// Known answer for the catalog families.
pub fn expected_outcome(family: &Family) -> Option<Overall> {
    match family {
        Family::PowerLog { beta, .. } if *beta > 0.0 => Some(Overall::Positive),
        Family::ExpPower { alpha } | Family::InvLog { alpha } if *alpha > 0.0 => {
            Some(Overall::Positive)
        }
        Family::ExpFactorial | Family::AlmostAccumulation => Some(Overall::Negative),
        Family::ExpGeometric { p } if *p > 1.0 => Some(Overall::Negative),
        _ => None,
    }
}

pub fn classify(spec: &SequenceSpec, params: &ClassifyParams) -> Result<Classification> {
    let terms = spec.generate()?;
    let points = terms.point_set();
    let mut verdicts = Vec::new();
    let mut reasons = Vec::new();

    let vogt = check_vogt(&terms);
    verdicts.extend(vogt.verdicts().into_iter().cloned());

    let ratios: Vec<Verdict> = params
        .ratio_ps
        .iter()
        .map(|&p| check_ratio(&terms, p))
        .collect();
    let halving = terms.halving_holds().is_ok();
    let ratio_refutes =
        halving && !ratios.is_empty() && ratios.iter().all(|v| v.status == Status::Fails);
    if ratio_refutes {
        reasons.push("a_l^p/a_(l+1) unbounded for every tested p".into());
    }
    verdicts.extend(ratios);

    // every catalog set is a truncation of an infinite sequence
    let truncated_below = points.nodes().get(1).cloned();
    let mut sufficient_holds = true;
    for k in 1..=params.k_max {
        let sp = SufficientParams {
            k,
            truncated_below: truncated_below.clone(),
            ..params.sufficient.clone()
        };
        let ms: Vec<usize> = (1..=k).collect();
        for v in check_sufficient_multi(&points, &sp, &ms, &params.grid) {
            sufficient_holds &= v.status == Status::HoldsOnGrid;
            verdicts.push(v);
        }
    }
    if sufficient_holds {
        reasons.push(format!(
            "sufficient condition holds on grid for k <= {}",
            params.k_max
        ));
    }

    let necessary = check_necessary_points(
        &points,
        &params.necessary_ns,
        &params.necessary_ss,
        &params.grid,
    );
    let necessary_refutes =
        !necessary.is_empty() && necessary.iter().all(|v| v.status == Status::Fails);
    if necessary_refutes {
        reasons.push("point-cluster condition fails for every tested (n, s)".into());
    }
    verdicts.extend(necessary);

    let dn = check_dn(&terms, &params.dn);
    let dn_refutes = dn.status == Status::Fails;
    if dn_refutes {
        reasons.push("q_d unbounded for every tested r".into());
    }
    verdicts.push(dn);

    let negative = ratio_refutes || necessary_refutes || dn_refutes;
    // A refutation is an explicit violation of a necessary condition, while the
    // sufficient check only ever sees a truncation; the refutation wins.
    let overall = match (sufficient_holds, negative) {
        (_, true) => {
            if sufficient_holds {
                reasons.push("sufficient check holds on the truncation but is overridden by the refutation".into());
            }
            Overall::Negative
        }
        (true, false) => Overall::Positive,
        (false, false) => Overall::Unknown,
    };
    let expected = expected_outcome(&spec.family);
    let consistent = match (overall, expected) {
        (Overall::Unknown, _) | (_, None) | (_, Some(Overall::Unknown)) => None,
        (o, Some(e)) => Some(o == e),
    };
    Ok(Classification {
        family: spec.family.name().to_string(),
        length: spec.length,
        verdicts,
        overall,
        expected,
        consistent,
        reasons,
    })
}
