use std::path::Path;

use serde_json::{json, Value};
use whitney::conditions::{
    check_necessary_points, check_sufficient_multi, classify, trend,
    ClassifyParams, EpsGrid, Family, Overall, Series, SequenceSpec, SequenceTerms, SlopeFit, Status,
    SufficientParams, Verdict, Witness,
};
use whitney::extension::{
    construct_extension, dn_probe, omega_decompose, Constant, ExtensionParams, IdealSpec,
    JetFunction, OmegaParams, ReciprocalZeros, ScaledBumpProduct, Sine,
};
use whitney::interpolation::{
    whitney_seminorm, PointSet, SampleFunction, DEFAULT_TUPLE_BUDGET,
};
use whitney::conditions::verdict::slope_fit;
use whitney::markov::{markov_factor_lagrange, markov_factor_lp, MarkovQuery};
use whitney::numerics::Scalar;

use crate::args::*;
use crate::input::{self, InputError};
use crate::report::{file_digest, finite, FileDigest, Outcome};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(InputError),
    Compute(whitney::Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<whitney::Error> for Failure {
    fn from(e: whitney::Error) -> Self {
        Failure::Compute(e)
    }
}

/// What a command hands back for the report.
pub struct Output {
    pub parameters: Value,
    pub files: Vec<FileDigest>,
    pub outcome: Outcome,
    pub verdicts: Vec<Verdict>,
    pub result: Value,
}

/// Reads a file and records its digest.
fn load(path: &Path, files: &mut Vec<FileDigest>) -> Result<String, InputError> {
    let text = input::read(path)?;
    files.push(file_digest(&path.display().to_string(), &text));
    Ok(text)
}

fn located<T>(path: &Path, r: Result<T, InputError>) -> Result<T, InputError> {
    r.map_err(|e| InputError {
        path: Some(path.display().to_string()),
        ..e
    })
}

fn grid(args: &GridArgs, min: u32, max: u32) -> Result<(u32, u32, EpsGrid), Failure> {
    let lo = args.eps_min_exp.unwrap_or(min);
    let hi = args.eps_max_exp.unwrap_or(max);
    if lo == 0 || lo > hi {
        return Err(Failure::Usage(format!(
            "need 1 <= --eps-min-exp <= --eps-max-exp, got {lo} and {hi}"
        )));
    }
    Ok((lo, hi, EpsGrid::geometric(lo, hi, 1)))
}

fn family(args: &SequenceArgs, files: &mut Vec<FileDigest>) -> Result<(Family, Value), Failure> {
    let name = args
        .family
        .ok_or_else(|| Failure::Usage("--family is required".into()))?;
    let (family, params) = match name {
        FamilyName::PowerLog => (
            Family::PowerLog {
                alpha: args.alpha,
                beta: args.beta,
            },
            json!({"alpha": args.alpha, "beta": args.beta}),
        ),
        FamilyName::ExpPower => (Family::ExpPower { alpha: args.alpha }, json!({"alpha": args.alpha})),
        FamilyName::InvLog => (Family::InvLog { alpha: args.alpha }, json!({"alpha": args.alpha})),
        FamilyName::ExpFactorial => (Family::ExpFactorial, json!({})),
        FamilyName::ExpGeometric => (Family::ExpGeometric { p: args.p }, json!({"p": args.p})),
        FamilyName::AlmostAccumulation => (Family::AlmostAccumulation, json!({})),
        FamilyName::Custom => {
            let path = args
                .log_values
                .as_ref()
                .ok_or_else(|| Failure::Usage("--family custom needs --log-values".into()))?;
            let text = load(path, files)?;
            let log_values = located(path, input::parse_logs_str(&text))?;
            (Family::Custom { log_values }, json!({}))
        }
    };
    Ok((family, params))
}

fn spec(args: &SequenceArgs, files: &mut Vec<FileDigest>) -> Result<(SequenceSpec, Value), Failure> {
    let (family, params) = family(args, files)?;
    let mut spec = SequenceSpec::new(family);
    if let Some(l) = args.length {
        spec = spec.with_length(l);
    }
    let echo = json!({
        "family": spec.family.name(),
        "family_parameters": params,
        "length": spec.length,
    });
    Ok((spec, echo))
}

fn overall_name(o: Overall) -> &'static str {
    match o {
        Overall::Positive => "positive",
        Overall::Negative => "negative",
        Overall::Unknown => "unknown",
    }
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Output, Failure> {
    let (lo, hi, eps_grid) = grid(&args.grid, 2, 40)?;
    if args.k_max == 0 {
        return Err(Failure::Usage("--k-max must be positive".into()));
    }
    let sufficient = SufficientParams {
        n: args.n,
        r: args.r,
        gamma: args.gamma,
        ..SufficientParams::default()
    };
    let mut files = Vec::new();
    let common = json!({
        "n": args.n, "r": args.r, "gamma": args.gamma, "k_max": args.k_max,
        "eps_min_exp": lo, "eps_max_exp": hi,
    });

    if let Some(path) = &args.points {
        let text = load(path, &mut files)?;
        let points = located(path, input::parse_pointset_str(&text))?;
        let mut verdicts = Vec::new();
        for k in 1..=args.k_max {
            let sp = SufficientParams {
                k,
                ..sufficient.clone()
            };
            let ms: Vec<usize> = (1..=k).collect();
            verdicts.extend(check_sufficient_multi(&points, &sp, &ms, &eps_grid));
        }
        verdicts.extend(check_necessary_points(
            &points,
            &[0, 1, 2, 3],
            &[2, 3, 4, 5, 6],
            &eps_grid,
        ));
        let outcome = Outcome::of(&verdicts);
        return Ok(Output {
            parameters: json!({"source": "points", "checks": common}),
            files,
            outcome,
            verdicts,
            result: json!({"points": points.len()}),
            });
    }

    let (spec, echo) = spec(&args.sequence, &mut files)?;
    let params = ClassifyParams {
        sufficient,
        k_max: args.k_max,
        grid: eps_grid,
        ..ClassifyParams::default()
    };
    let c = classify(&spec, &params)?;
    let outcome = match c.overall {
        Overall::Positive => Outcome::Holds,
        Overall::Negative => Outcome::Fails,
        Overall::Unknown => Outcome::Unknown,
    };
    Ok(Output {
        parameters: json!({"source": "family", "sequence": echo, "checks": common}),
        files,
        outcome,
        result: json!({
            "family": c.family,
            "length": c.length,
            "overall": overall_name(c.overall),
            "expected": c.expected.map(overall_name),
            "consistent_with_known": c.consistent,
            "reasons": c.reasons,
        }),
        verdicts: c.verdicts,
    })
}

pub fn markov(args: &MarkovArgs) -> Result<Output, Failure> {
    let mut files = Vec::new();
    let text = load(&args.points, &mut files)?;
    let set = located(&args.points, input::parse_pointset_str(&text))?;
    let y = Scalar::parse_decimal(&args.at)
        .map_err(|_| Failure::Usage(format!("--at: malformed number '{}'", args.at)))?;
    // the LP runs in double precision
    let nodes: Vec<f64> = set.nodes().iter().map(Scalar::to_f64).collect();
    let points = PointSet::simple(nodes.clone()).map_err(|_| {
        Failure::Input(InputError {
            path: None,
            line: None,
            message: "nodes collide in double precision".into(),
        })
    })?;
    let y = y.to_f64();
    let q = MarkovQuery {
        points: points.clone(),
        y,
        k: args.degree,
        j: args.deriv,
    };
    let sol = markov_factor_lp(&q)?;
    let lagrange = if points.len() == args.degree + 1 {
        Some(markov_factor_lagrange(&points, &y, args.deriv)?)
    } else {
        None
    };
    let mut v = Verdict::new(
        "markov-certificate",
        &[("k", args.degree as f64), ("j", args.deriv as f64), ("y", y)],
    );
    if !sol.certified {
        v.status = Status::HeuristicHolds;
        v.notes.push(format!(
            "equioscillation certificate off by {:e}",
            sol.active_deviation
        ));
    }
    let active: Vec<Value> = sol
        .active
        .iter()
        .map(|a| json!({"index": a.index, "x": nodes[a.index], "weight": finite(a.weight), "sign": a.sign}))
        .collect();
    Ok(Output {
        parameters: json!({"degree": args.degree, "deriv": args.deriv, "at": args.at}),
        files,
        outcome: if sol.certified { Outcome::Holds } else { Outcome::Unknown },
        verdicts: vec![v],
        result: json!({
            "value": finite(sol.value),
            "lagrange_value": lagrange.map(finite),
            "interval": [sol.interval.0, sol.interval.1],
            "chebyshev_coeffs": sol.chebyshev_coeffs.iter().map(|c| finite(*c)).collect::<Vec<_>>(),
            "active": active,
            "max_abs_on_set": finite(sol.max_abs_on_set),
            "active_deviation": finite(sol.active_deviation),
            "certified": sol.certified,
            "pivots": sol.pivots,
        }),
    })
}

fn function(name: FunctionName) -> Box<dyn JetFunction<f64>> {
    match name {
        FunctionName::ReciprocalZeros => Box::new(ReciprocalZeros),
        FunctionName::Bump => Box::new(ScaledBumpProduct { width: 1.0 }),
        FunctionName::Sine => Box::new(Sine),
        FunctionName::Zero => Box::new(Constant(0.0)),
    }
}

/// Slope tolerance of the scaling laws.
const SCALING_TOLERANCE: f64 = 0.3;

pub fn decompose(args: &DecomposeArgs) -> Result<Output, Failure> {
    let (lo, hi, _) = grid(&args.grid, 3, 12)?;
    if args.k.is_empty() || args.points_per_patch == 0 {
        return Err(Failure::Usage("need at least one --k and a positive --points-per-patch".into()));
    }
    let mut files = Vec::new();
    let zeros = match &args.zeros {
        Some(path) => {
            let text = load(path, &mut files)?;
            let set = located(path, input::parse_pointset_str(&text))?;
            let nodes: Vec<f64> = set.nodes().iter().map(Scalar::to_f64).collect();
            PointSet::new(nodes, set.multiplicities().to_vec()).map_err(|_| {
                Failure::Input(InputError {
                    path: None,
                    line: None,
                    message: "zero-set nodes collide in double precision".into(),
                })
            })?
        }
        None => {
            let nodes = std::iter::once(0.0).chain((1..=30).map(|j| 1.0 / j as f64)).collect();
            PointSet::from_unsorted(nodes)
        }
    };
    let ideal = IdealSpec::new(zeros);
    let f = function(args.function);

    let mut log_eps = Vec::new();
    let mut residual = Vec::new();
    let mut growth: Vec<Vec<f64>> = vec![Vec::new(); args.k.len()];
    let mut rows = Vec::new();
    for e in lo..=hi {
        let eps = 2f64.powi(-(e as i32));
        let mut params = OmegaParams::new(args.n, args.k.clone(), eps);
        params.points_per_patch = args.points_per_patch;
        let out = omega_decompose(f.as_ref(), &ideal, &params)?;
        log_eps.push(eps.ln());
        residual.push(out.residual.value.ln());
        let norms: Vec<f64> = out.g_norms.iter().map(|(_, est)| est.value).collect();
        for (g, v) in growth.iter_mut().zip(&norms) {
            g.push(v.ln());
        }
        rows.push(json!({
            "eps_exp": e,
            "residual": finite(out.residual.value),
            "residual_per_order": out.residual.per_order.iter().map(|v| finite(*v)).collect::<Vec<_>>(),
            "g_norms": args.k.iter().zip(&norms).map(|(k, v)| json!({"k": k, "value": finite(*v)})).collect::<Vec<_>>(),
            "grid_samples": out.residual.grid.samples,
        }));
    }

    let log_inv: Vec<f64> = log_eps.iter().map(|v| -v).collect();
    let mut verdicts = vec![scaling_verdict(
        Verdict::new("omega-residual", &[("n", args.n as f64)]),
        ("omega-residual", "log eps", "log residual"),
        &log_eps,
        &residual,
        Bound::AtLeast(1.0 - SCALING_TOLERANCE),
    )];
    for (k, ys) in args.k.iter().zip(&growth) {
        verdicts.push(scaling_verdict(
            Verdict::new("omega-growth", &[("n", args.n as f64), ("k", *k as f64)]),
            (&format!("omega-growth-k{k}"), "log 1/eps", "log norm"),
            &log_inv,
            ys,
            Bound::AtMost(*k as f64 + SCALING_TOLERANCE),
        ));
    }
    Ok(Output {
        parameters: json!({
            "function": format!("{:?}", args.function),
            "zeros": if args.zeros.is_some() { "file" } else { "reciprocal-30" },
            "n": args.n, "k": args.k, "points_per_patch": args.points_per_patch,
            "eps_min_exp": lo, "eps_max_exp": hi,
        }),
        files,
        outcome: Outcome::of(&verdicts),
        verdicts,
        result: json!({"m": 2 * args.n + 1, "levels": rows}),
    })
}

fn finite_pairs(x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    x.iter()
        .zip(y)
        .filter(|(a, b)| a.is_finite() && b.is_finite())
        .map(|(a, b)| (*a, *b))
        .unzip()
}

enum Bound {
    AtLeast(f64),
    AtMost(f64),
}

/// Fits `y` against `x` over the finite points and compares the slope with `bound`.
fn scaling_verdict(
    mut v: Verdict,
    (name, x_label, y_label): (&str, &str, &str),
    x: &[f64],
    y: &[f64],
    bound: Bound,
) -> Verdict {
    let s = series(name, x_label, y_label, x, y);
    if s.x.len() < 2 {
        v.status = Status::NotApplicable;
        v.notes.push("fewer than two nonzero levels".into());
    } else {
        let fit = slope_fit(&format!("{y_label} vs {x_label}"), &s.x, &s.y, None);
        let (limit, ok, reason) = match bound {
            Bound::AtLeast(b) => (b, fit.slope >= b, "slope below"),
            Bound::AtMost(b) => (b, fit.slope <= b, "slope above"),
        };
        if !ok {
            v.push_witness(Witness::Parameters {
                params: [("slope".to_string(), fit.slope)].into_iter().collect(),
                reason: format!("{reason} {limit}"),
            });
            v.fail();
        }
        v.slopes.push(SlopeFit {
            allowed: Some(limit),
            ..fit
        });
    }
    v.series.push(s);
    v
}

fn series(name: &str, x_label: &str, y_label: &str, x: &[f64], y: &[f64]) -> Series {
    let (x, y) = finite_pairs(x, y);
    Series {
        name: name.into(),
        x_label: x_label.into(),
        y_label: y_label.into(),
        x,
        y,
    }
}

pub fn extend(args: &ExtendArgs) -> Result<Output, Failure> {
    let mut files = Vec::new();
    let text = load(&args.points, &mut files)?;
    let set = located(&args.points, input::parse_pointset_str(&text))?;
    let vtext = load(&args.values, &mut files)?;
    let values = located(&args.values, input::parse_values_str(&vtext))?;
    if values.len() != set.len() {
        return Err(Failure::Input(InputError {
            path: None,
            line: None,
            message: format!("{} values for {} nodes", values.len(), set.len()),
        }));
    }
    if set.multiplicities().iter().any(|&m| m != 1) {
        return Err(Failure::Input(InputError {
            path: None,
            line: None,
            message: "extension data needs multiplicity 1 at every node".into(),
        }));
    }
    let nodes: Vec<f64> = set.nodes().iter().map(Scalar::to_f64).collect();
    let points = PointSet::simple(nodes).map_err(|_| {
        Failure::Input(InputError {
            path: None,
            line: None,
            message: "nodes collide in double precision".into(),
        })
    })?;
    let f = SampleFunction::new(points, values.iter().map(Scalar::to_f64).collect())?;
    let m = args.m.unwrap_or(args.n);
    let eps = 2f64.powi(-(args.eps_exp as i32));
    let lower = whitney_seminorm(&f, m, DEFAULT_TUPLE_BUDGET)?;
    let mut params = ExtensionParams::new(args.n, m, args.r, eps);
    params.points_per_patch = args.points_per_patch;
    let ext = construct_extension(&f, &params, None)?;
    let upper = ext.norms.value;

    let mut v = Verdict::new("sandwich", &[("n", args.n as f64), ("m", m as f64)]);
    if lower.value > upper {
        v.push_witness(Witness::Parameters {
            params: [("lower".to_string(), lower.value), ("upper".to_string(), upper)]
                .into_iter()
                .collect(),
            reason: "divided differences exceed the extension's grid norm".into(),
        });
        v.fail();
    }
    if !lower.exhaustive {
        v.notes.push("tuple budget exhausted; lower bound is partial".into());
    }
    let max_miss = f
        .points
        .nodes()
        .iter()
        .zip(&f.values)
        .map(|(x, y)| (ext.function.jet(x, 0).derivative(0) - y).abs())
        .fold(0.0, f64::max);
    Ok(Output {
        parameters: json!({
            "n": args.n, "m": m, "r": args.r, "eps_exp": args.eps_exp,
            "points_per_patch": args.points_per_patch,
        }),
        files,
        outcome: Outcome::of(std::slice::from_ref(&v)),
        verdicts: vec![v],
        result: json!({
            "lower": finite(lower.value),
            "lower_per_order": lower.per_order.iter().map(|v| finite(*v)).collect::<Vec<_>>(),
            "lower_exhaustive": lower.exhaustive,
            "upper": finite(upper),
            "upper_per_order": ext.norms.per_order.iter().map(|v| finite(*v)).collect::<Vec<_>>(),
            "grid": ext.norms.grid,
            "max_interpolation_error": finite(max_miss),
        }),
    })
}

/// Slope in `d` at or below which the probe counts as bounded.
const BOUNDED_SLOPE: f64 = 0.05;

pub fn probe_dn(args: &ProbeArgs) -> Result<Output, Failure> {
    let mut files = Vec::new();
    let (spec, echo) = spec(&args.sequence, &mut files)?;
    let terms: SequenceTerms = spec.generate()?;
    let last = terms
        .last_index()
        .checked_sub(args.k)
        .ok_or_else(|| Failure::Usage("k exceeds the truncation".into()))?;
    let d_max = args.d_max.unwrap_or(last).min(last);
    let d_min = args.d_min.max(terms.first_index());
    if d_min > d_max {
        return Err(Failure::Usage(format!("empty d range {d_min}..={d_max}")));
    }
    let ds: Vec<usize> = (d_min..=d_max).collect();
    let probe = dn_probe(&terms, args.n, args.s, args.r, args.k, &ds)?;
    let xs: Vec<f64> = ds.iter().map(|&d| d as f64).collect();
    let ys: Vec<f64> = probe.points.iter().map(|p| p.log_rho).collect();
    // |log a_d| is the natural growth scale (p^d for the geometric family)
    let scale: Vec<f64> = ds
        .iter()
        .map(|&d| terms.log_at(d).map(|l| -l.to_f64()))
        .collect::<Result<_, _>>()?;

    let mut v = Verdict::new(
        "dn-probe",
        &[
            ("n", args.n as f64),
            ("s", args.s as f64),
            ("r", args.r as f64),
            ("k", args.k as f64),
        ],
    );
    let linear = slope_fit("log rho vs d", &xs, &ys, Some(BOUNDED_SLOPE));
    let scaled = slope_fit("log rho vs -log a_d", &scale, &ys, None);
    let t = trend(&ys);
    let outcome = if t.diverging {
        v.push_witness(Witness::Index {
            index: ds[ds.len() - 1],
            value: ys[ys.len() - 1],
            threshold: ys[t.tail_start],
            reason: "log rho_d increases through the tail".into(),
        });
        v.fail();
        Outcome::Fails
    } else if linear.slope <= BOUNDED_SLOPE {
        Outcome::Holds
    } else {
        v.status = Status::HeuristicHolds;
        Outcome::Unknown
    };
    v.slopes.push(linear);
    v.slopes.push(scaled);
    v.series.push(series("dn-probe", "d", "log rho_d", &xs, &ys));
    let max_gap = probe
        .points
        .iter()
        .filter_map(|p| p.discrepancy)
        .fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.max(g))));
    let points: Vec<Value> = probe
        .points
        .iter()
        .map(|p| json!({"d": p.d, "log_rho": finite(p.log_rho), "log_rho_direct": p.log_rho_direct.map(finite)}))
        .collect();
    Ok(Output {
        parameters: json!({
            "sequence": echo, "n": args.n, "s": args.s, "r": args.r, "k": args.k,
            "d_min": d_min, "d_max": d_max,
        }),
        files,
        outcome,
        verdicts: vec![v],
        result: json!({"points": points, "max_direct_discrepancy": max_gap.map(finite)}),
    })
}

/// Families with a known answer.
pub fn catalog_families() -> Vec<Family> {
    vec![
        Family::ExpPower { alpha: 0.5 },
        Family::ExpPower { alpha: 1.0 },
        Family::ExpPower { alpha: 2.0 },
        Family::InvLog { alpha: 1.0 },
        Family::PowerLog {
            alpha: 1.0,
            beta: 1.0,
        },
        Family::ExpFactorial,
        Family::ExpGeometric { p: 2.0 },
        Family::ExpGeometric { p: 3.0 },
        Family::AlmostAccumulation,
    ]
}

pub fn catalog(args: &CatalogArgs) -> Result<Output, Failure> {
    let (lo, hi, eps_grid) = grid(&args.grid, 2, 40)?;
    let params = ClassifyParams {
        k_max: args.k_max,
        grid: eps_grid,
        ..ClassifyParams::default()
    };
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    let mut any_unknown = false;
    let mut any_inconsistent = false;
    for family in catalog_families() {
        let parameters: serde_json::Map<String, Value> = family
            .parameters()
            .into_iter()
            .map(|(k, v)| (k.to_string(), Value::from(v)))
            .collect();
        let mut spec = SequenceSpec::new(family);
        if let Some(l) = args.length {
            spec = spec.with_length(l);
        }
        let c = classify(&spec, &params)?;
        any_unknown |= c.consistent.is_none();
        any_inconsistent |= c.consistent == Some(false);
        let mut v = Verdict::new(&format!("catalog-{}", c.family), &[]);
        v.parameters = spec
            .family
            .parameters()
            .into_iter()
            .map(|(k, x)| (k.to_string(), x))
            .collect();
        match c.consistent {
            Some(true) => {}
            Some(false) => {
                v.push_witness(Witness::Parameters {
                    params: v.parameters.clone(),
                    reason: format!(
                        "classified {} against known {}",
                        overall_name(c.overall),
                        c.expected.map_or("none", overall_name)
                    ),
                });
                v.fail();
            }
            None => v.status = Status::HeuristicHolds,
        }
        verdicts.push(v);
        rows.push(json!({
            "family": c.family,
            "parameters": parameters,
            "length": c.length,
            "overall": overall_name(c.overall),
            "expected": c.expected.map(overall_name),
            "consistent_with_known": c.consistent,
            "reasons": c.reasons,
            "checks": c.verdicts.iter().map(|v| json!({
                "check": v.check, "parameters": v.parameters, "status": v.status, "witness_count": v.witness_count,
            })).collect::<Vec<_>>(),
        }));
    }
    let outcome = if any_inconsistent {
        Outcome::Fails
    } else if any_unknown {
        Outcome::Unknown
    } else {
        Outcome::Holds
    };
    Ok(Output {
        parameters: json!({"length": args.length, "k_max": args.k_max, "eps_min_exp": lo, "eps_max_exp": hi}),
        files: Vec::new(),
        outcome,
        verdicts,
        result: json!({"families": rows}),
    })
}
