use criterion::{black_box, criterion_group, criterion_main, Criterion};
use whitney::conditions::{Family, SequenceSpec};
use whitney::extension::{dn_probe, omega_decompose, IdealSpec, OmegaParams, ReciprocalZeros};
use whitney::interpolation::{
    hermite_interpolant, whitney_seminorm, HermiteData, PointSet, SampleFunction, DEFAULT_TUPLE_BUDGET,
};
use whitney::markov::{markov_factor_lp, MarkovQuery};

fn interpolation(c: &mut Criterion) {
    let xs: Vec<f64> = (0..6).map(|i| i as f64 / 5.0).collect();
    let mu = vec![2, 1, 3, 1, 2, 1];
    let derivs: Vec<Vec<f64>> = mu.iter().enumerate().map(|(i, &m)| (0..m).map(|j| (i + j) as f64).collect()).collect();
    let data = HermiteData::new(PointSet::new(xs, mu).unwrap(), derivs).unwrap();
    c.bench_function("hermite_interpolant_10", |b| b.iter(|| hermite_interpolant(black_box(&data)).unwrap()));

    let nodes: Vec<f64> = (0..24).map(|i| (i as f64 * 0.37).sin()).collect();
    let pts = PointSet::from_unsorted(nodes);
    let values: Vec<f64> = pts.nodes().iter().map(|x| (3.0 * x).cos()).collect();
    let f = SampleFunction::new(pts, values).unwrap();
    c.bench_function("whitney_seminorm_24_n2", |b| {
        b.iter(|| whitney_seminorm(black_box(&f), 2, DEFAULT_TUPLE_BUDGET).unwrap())
    });
}

fn markov(c: &mut Criterion) {
    let grid = PointSet::simple((0..101).map(|i| -1.0 + i as f64 / 50.0).collect()).unwrap();
    let q = MarkovQuery { points: grid, y: 1.0, k: 4, j: 1 };
    c.bench_function("markov_lp_101_k4", |b| b.iter(|| markov_factor_lp(black_box(&q)).unwrap()));
}

fn extension(c: &mut Criterion) {
    let mut nodes = vec![0.0];
    nodes.extend((1..=30).map(|j| 1.0 / j as f64));
    let ideal = IdealSpec::new(PointSet::from_unsorted(nodes));
    let params = OmegaParams::new(1, vec![3, 5], 2f64.powi(-6));
    let mut group = c.benchmark_group("extension");
    group.sample_size(10);
    group.bench_function("omega_decompose_eps_2^-6", |b| {
        b.iter(|| omega_decompose(&ReciprocalZeros, &ideal, black_box(&params)).unwrap())
    });
    let terms = SequenceSpec::new(Family::ExpPower { alpha: 1.0 }).generate().unwrap();
    let ds: Vec<usize> = (1..=10).collect();
    group.bench_function("dn_probe_k3", |b| b.iter(|| dn_probe(&terms, 1, 2, 20, 3, black_box(&ds)).unwrap()));
    group.finish();
}

criterion_group!(benches, interpolation, markov, extension);
criterion_main!(benches);
