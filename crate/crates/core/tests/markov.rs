use proptest::prelude::*;
use whitney::interpolation::PointSet;
use whitney::markov::{markov_factor_lagrange, markov_factor_lp, MarkovQuery, CERTIFICATE_TOLERANCE};

fn uniform_grid(n: usize) -> PointSet<f64> {
    PointSet::simple((0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect()).unwrap()
}

#[test]
fn dense_grid_recovers_chebyshev_extremal() {
    let grid = uniform_grid(401);
    for k in 2..=5usize {
        let q = MarkovQuery {
            points: grid.clone(),
            y: 1.0,
            k,
            j: 1,
        };
        let sol = markov_factor_lp(&q).unwrap();
        let want = (k * k) as f64;
        assert!((sol.value - want).abs() <= 0.01 * want, "k = {k}: {}", sol.value);
        // |P| <= 1 on a subset of [-1, 1] is a weaker constraint
        assert!(sol.value >= want * (1.0 - 1e-9), "k = {k}: {}", sol.value);
        assert!(sol.certified);
        assert!(sol.active.len() >= k + 1, "k = {k}: {} active", sol.active.len());
        for a in &sol.active {
            let p = sol.eval(&grid.nodes()[a.index]);
            assert!((p.abs() - 1.0).abs() <= CERTIFICATE_TOLERANCE);
        }
    }
}

/// Nodes on the lattice `i / 40` in `[-1, 1]`; coarser lattices keep the
/// `(k+1)`-node systems well conditioned in f64.
fn distinct_nodes(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(-40i64..=40, min..=max)
        .prop_map(|s| s.into_iter().map(|i| i as f64 / 40.0).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn lp_agrees_with_lagrange_formula_on_k_plus_one_nodes(
        (k, nodes) in (1usize..=5).prop_flat_map(|k| (Just(k), distinct_nodes(k + 1, k + 1))),
        y in -1.5f64..1.5,
        j in 0usize..=2,
    ) {
        let j = j.min(k);
        let points = PointSet::simple(nodes).unwrap();
        let lp = markov_factor_lp(&MarkovQuery { points: points.clone(), y, k, j }).unwrap();
        let lagrange = markov_factor_lagrange(&points, &y, j).unwrap();
        prop_assert!((lp.value - lagrange).abs() <= 1e-8 * lagrange.abs().max(1e-300), "{} vs {}", lp.value, lagrange);
    }

    #[test]
    fn affine_maps_scale_the_factor(
        (k, nodes) in (1usize..=4).prop_flat_map(|k| (Just(k), distinct_nodes(k + 1, k + 4))),
        y in -1.0f64..1.0,
        a in prop_oneof![-3.0f64..-0.25, 0.25f64..3.0],
        b in -2.0f64..2.0,
        j in 1usize..=2,
    ) {
        let j = j.min(k);
        let points = PointSet::simple(nodes.clone()).unwrap();
        let base = markov_factor_lp(&MarkovQuery { points, y, k, j }).unwrap().value;
        let mapped = PointSet::from_unsorted(nodes.iter().map(|x| a * x + b).collect());
        let got = markov_factor_lp(&MarkovQuery { points: mapped, y: a * y + b, k, j }).unwrap().value;
        let want = base * a.abs().powi(-(j as i32));
        prop_assert!((got - want).abs() <= 1e-8 * want.abs(), "{got} vs {want}");
    }

    #[test]
    fn adding_points_never_increases_the_factor(
        (k, nodes) in (1usize..=4).prop_flat_map(|k| (Just(k), distinct_nodes(k + 2, k + 8))),
        y in -1.0f64..1.0,
    ) {
        let mut prev = f64::INFINITY;
        for size in k + 1..=nodes.len() {
            let points = PointSet::from_unsorted(nodes[..size].to_vec());
            let v = markov_factor_lp(&MarkovQuery { points, y, k, j: 1 }).unwrap().value;
            prop_assert!(v <= prev * (1.0 + 1e-9), "{v} after {prev}");
            prev = v;
        }
    }
}
