use whitney::conditions::*;
use whitney::interpolation::PointSet;
use whitney::numerics::Scalar;

fn sufficient_params(v: &Verdict, points: &PointSet<Scalar>) -> (SufficientParams, usize) {
    let p = |k: &str| v.parameters[k];
    (
        SufficientParams {
            n: p("n") as usize,
            r: p("r") as u32,
            gamma: p("gamma"),
            k: p("k") as usize,
            truncated_below: points.nodes().get(1).cloned(),
        },
        p("m") as usize,
    )
}

/// Re-runs the single-cell check behind every witness of a failing verdict.
fn revalidate(v: &Verdict, terms: &SequenceTerms, points: &PointSet<Scalar>) {
    assert_eq!(v.status, Status::Fails);
    assert!(!v.witnesses.is_empty(), "{} fails without witness", v.check);
    for w in &v.witnesses {
        match (v.check.as_str(), w) {
            ("sufficient", Witness::Cell { x_index, eps_exp, value, threshold, .. }) => {
                let (params, m) = sufficient_params(v, points);
                match sufficient_cell(points, *x_index, *eps_exp, &params, m) {
                    CellOutcome::NoTuple => assert!(value.is_none()),
                    CellOutcome::Excess { values, .. } => {
                        assert_eq!(Some(values[0]), *value);
                        assert!(values[0] > threshold.unwrap());
                    }
                    other => panic!("witness cell re-evaluates to {other:?}"),
                }
            }
            ("necessary-point", Witness::Cell { x_index, eps_exp, .. }) => {
                let n = v.parameters["n"] as usize;
                let s = v.parameters["s"] as u32;
                assert!(necessary_point_cell(points, *x_index, *eps_exp, n, s));
            }
            ("ratio", Witness::Index { index, value, .. }) => {
                let traj = ratio_trajectory(terms, v.parameters["p"]);
                let i = index - terms.first_index();
                assert_eq!(traj[i].to_f64(), *value);
            }
            ("dn-sequence", Witness::Parameters { params, .. }) => {
                let g = |k: &str| params[k] as usize;
                let last = terms.last_index() - v.parameters["k_max"] as usize;
                let ds: Vec<usize> = (terms.first_index()..=last).collect();
                assert!(dn_diverges(terms, g("n"), g("s"), g("r") as u32, g("k"), &ds).unwrap());
            }
            (check, w) => panic!("unexpected witness {w:?} for {check}"),
        }
    }
}

fn classify_and_revalidate(f: Family) -> Classification {
    let spec = SequenceSpec::new(f);
    let terms = spec.generate().unwrap();
    let points = terms.point_set();
    let c = classify(&spec, &ClassifyParams::default()).unwrap();
    for v in c.verdicts.iter().filter(|v| v.status == Status::Fails) {
        if v.check.starts_with("vogt") {
            continue;
        }
        revalidate(v, &terms, &points);
    }
    c
}

#[test]
fn exp_factorial_is_negative_with_valid_witnesses() {
    let c = classify_and_revalidate(Family::ExpFactorial);
    assert_eq!(c.overall, Overall::Negative);
    assert_eq!(c.consistent, Some(true));
    let ratio: Vec<_> = c.verdicts.iter().filter(|v| v.check == "ratio").collect();
    assert!(ratio.iter().all(|v| v.status == Status::Fails));
}

#[test]
fn exp_geometric_is_negative_via_dn() {
    for p in [2.0, 3.0] {
        let c = classify_and_revalidate(Family::ExpGeometric { p });
        assert_eq!(c.overall, Overall::Negative);
        let dn = c.verdicts.iter().find(|v| v.check == "dn-sequence").unwrap();
        assert_eq!(dn.status, Status::Fails);
    }
}

#[test]
fn almost_accumulation_is_negative_via_clusters() {
    let c = classify_and_revalidate(Family::AlmostAccumulation);
    assert_eq!(c.overall, Overall::Negative);
    let nec: Vec<_> = c
        .verdicts
        .iter()
        .filter(|v| v.check == "necessary-point")
        .collect();
    assert_eq!(nec.len(), 20);
    assert!(nec.iter().all(|v| v.status == Status::Fails));
}

#[test]
fn gaussian_decay_is_positive() {
    let c = classify_and_revalidate(Family::ExpPower { alpha: 2.0 });
    assert_eq!(c.overall, Overall::Positive);
    assert!(c
        .verdicts
        .iter()
        .filter(|v| v.check == "sufficient")
        .all(|v| v.status == Status::HoldsOnGrid));
}

#[test]
fn factorial_terms_stay_in_log_domain() {
    let terms = SequenceSpec::new(Family::ExpFactorial).generate().unwrap();
    assert_eq!(terms.len(), 60);
    // only l! <= 2^40 is ever exponentiated
    assert_eq!(terms.point_set().len(), 15);
}

/// Doubling the eps-grid density never turns holds-on-grid into fails.
#[test]
fn grid_refinement_is_stable_for_positives() {
    let coarse = EpsGrid::default();
    let fine = EpsGrid::geometric(2, 40, 2);
    assert_eq!(fine.len(), 2 * coarse.len() - 1);
    for f in [
        Family::ExpPower { alpha: 0.5 },
        Family::ExpPower { alpha: 1.0 },
        Family::ExpPower { alpha: 2.0 },
        Family::InvLog { alpha: 1.0 },
    ] {
        let points = SequenceSpec::new(f.clone()).generate().unwrap().point_set();
        for k in 1..=4 {
            let params = SufficientParams {
                k,
                truncated_below: points.nodes().get(1).cloned(),
                ..Default::default()
            };
            let ms: Vec<usize> = (1..=k).collect();
            let a = check_sufficient_multi(&points, &params, &ms, &coarse);
            let b = check_sufficient_multi(&points, &params, &ms, &fine);
            for (va, vb) in a.iter().zip(&b) {
                assert_eq!(va.status, Status::HoldsOnGrid, "{f:?} {:?}", va.parameters);
                assert_ne!(vb.status, Status::Fails, "{f:?} {:?}", vb.parameters);
            }
        }
    }
}

#[test]
fn verdicts_do_not_depend_on_worker_count() {
    let spec = SequenceSpec::new(Family::PowerLog { alpha: 0.0, beta: 2.0 }).with_length(300);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| classify(&spec, &ClassifyParams::default()).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(8));
}
