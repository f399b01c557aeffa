//! Point-cluster necessary condition: a cluster of `n + 2` points within `eps^s`
//! must see another point of `K` at distance in `[eps^s, eps)`.

use rayon::prelude::*;

use super::verdict::{EpsGrid, Num, Series, Verdict, Witness};
use crate::interpolation::PointSet;
use crate::numerics::Scalar;

/// Counts `(inner, outer)` of `K` in `(z - eps^s, z + eps^s)` and `(z - eps, z + eps)`.
fn counts(points: &PointSet<Scalar>, z: &Scalar, eps: &Scalar, eps_s: &Scalar) -> (usize, usize) {
    let inner = points.count_open(&(z - eps_s), &(z + eps_s));
    let outer = if inner >= 2 {
        points.count_open(&(z - eps), &(z + eps))
    } else {
        0
    };
    (inner, outer)
}

/// `true` when the cell `(z, eps)` violates the condition for `(n, s)`.
pub fn necessary_point_cell(
    points: &PointSet<Scalar>,
    z_index: usize,
    eps_exp: f64,
    n: usize,
    s: u32,
) -> bool {
    let grid = EpsGrid::from_exponents(vec![eps_exp]);
    let (inner, outer) = counts(
        points,
        &points.nodes()[z_index],
        &grid.values[0],
        &grid.power(0, s),
    );
    inner >= n + 2 && outer == inner
}

/// Runs the check for all `(n, s)` pairs, sharing the counts across `n`.
/// Verdicts are ordered by `s`, then `n`.
pub fn check_necessary_points(
    points: &PointSet<Scalar>,
    ns: &[usize],
    ss: &[u32],
    grid: &EpsGrid,
) -> Vec<Verdict> {
    let half = Scalar::from_ratio(1, 2);
    let levels: Vec<usize> = (0..grid.len())
        .filter(|&e| grid.values[e] < half)
        .collect();
    let mut out = Vec::new();
    for &s in ss {
        assert!(s >= 2, "s must be at least 2");
        // per level: failing z indices with their inner count
        let fails: Vec<Vec<(usize, usize)>> = levels
            .par_iter()
            .map(|&e| {
                let eps = &grid.values[e];
                let eps_s = grid.power(e, s);
                (0..points.len())
                    .filter_map(|i| {
                        let (inner, outer) = counts(points, &points.nodes()[i], eps, &eps_s);
                        (inner >= 2 && outer == inner).then_some((i, inner))
                    })
                    .collect()
            })
            .collect();
        for &n in ns {
            let mut v = Verdict::new("necessary-point", &[("n", n as f64), ("s", s as f64)]);
            let mut ys = Vec::with_capacity(levels.len());
            for (li, &e) in levels.iter().enumerate() {
                let mut count = 0usize;
                for &(i, inner) in &fails[li] {
                    if inner >= n + 2 {
                        count += 1;
                        v.push_witness(Witness::Cell {
                            x_index: i,
                            x: Num::from_scalar(&points.nodes()[i]),
                            eps_exp: grid.exps[e],
                            reason: "empty-annulus".into(),
                            value: Some(inner as f64),
                            threshold: Some((n + 2) as f64),
                            tuple: None,
                        });
                    }
                }
                ys.push(count as f64);
            }
            v.series.push(Series {
                name: format!("necessary-point[n={n},s={s}]"),
                x_label: "log(1/eps)".into(),
                y_label: "violating points".into(),
                x: levels.iter().map(|&e| grid.log_inv(e)).collect(),
                y: ys,
            });
            if v.witness_count > 0 {
                v.fail();
            }
            out.push(v);
        }
    }
    out
}

pub fn check_necessary_point(
    points: &PointSet<Scalar>,
    n: usize,
    s: u32,
    grid: &EpsGrid,
) -> Verdict {
    check_necessary_points(points, &[n], &[s], grid)
        .pop()
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::sequence::{Family, SequenceSpec};
    use crate::conditions::verdict::Status;

    #[test]
    fn almost_accumulation_fails_at_a_cluster() {
        let k = SequenceSpec::new(Family::AlmostAccumulation)
            .generate()
            .unwrap()
            .point_set();
        let v = check_necessary_point(&k, 1, 3, &EpsGrid::default());
        assert_eq!(v.status, Status::Fails);
        let Witness::Cell { x_index, eps_exp, .. } = &v.witnesses[0] else {
            panic!()
        };
        assert!(necessary_point_cell(&k, *x_index, *eps_exp, 1, 3));
        // witness is the left end of some cluster 1/c
        let z = k.nodes()[*x_index].to_f64();
        let c = (1.0 / z).round();
        assert!((z - 1.0 / c).abs() < 1e-12);
    }

    #[test]
    fn equispaced_grid_holds() {
        let pts: Vec<Scalar> = (0..200).map(|i| Scalar::from_ratio(i, 199)).collect();
        let k = PointSet::simple(pts).unwrap();
        for v in check_necessary_points(&k, &[0, 1, 2, 3], &[2, 3, 4], &EpsGrid::default()) {
            assert_eq!(v.status, Status::HoldsOnGrid);
        }
    }

    #[test]
    fn exp_power_two_holds_for_s_at_least_three() {
        let k = SequenceSpec::new(Family::ExpPower { alpha: 2.0 })
            .generate()
            .unwrap()
            .point_set();
        for v in check_necessary_points(&k, &[0, 1, 2, 3], &[3, 4, 5, 6], &EpsGrid::default()) {
            assert_eq!(v.status, Status::HoldsOnGrid, "{:?}", v.parameters);
        }
    }
}
