use proptest::prelude::*;
use whitney::interpolation::NewtonPolynomial;
use whitney::numerics::{bump_value, scaled_patch_jet, Field, Jet, Rational, Scalar};

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=8).prop_map(|(p, q)| Rational::from_ratio(p, q))
}

fn poly(max_degree: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), 1..=max_degree + 1)
}

fn product(p: &[Rational], q: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] = out[i + j].clone() + &(a.clone() * b);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bumps_sum_to_one(x in -3.0f64..3.0) {
        let x = Scalar::from_f64(x);
        let total: Scalar = (-4..=4)
            .map(|l| bump_value(&(&x - &Scalar::from_i64(l))))
            .sum();
        prop_assert!((total - Scalar::one()).abs() <= Scalar::pow2(-200));
    }
}

proptest! {
    #[test]
    fn jet_products_match_polynomial_products(p in poly(6), q in poly(6), x in rational()) {
        let order = p.len() + q.len();
        let jp = NewtonPolynomial::from_monomial(p.clone()).eval_jet(&x, order);
        let jq = NewtonPolynomial::from_monomial(q.clone()).eval_jet(&x, order);
        let jpq = NewtonPolynomial::from_monomial(product(&p, &q)).eval_jet(&x, order);
        prop_assert_eq!(jp.mul(&jq).coeffs, jpq.coeffs);
    }
}

#[test]
fn scaled_bump_derivatives_scale_with_width() {
    // sup_x |rho^(j)(x)| eps^j over a grid that is the same in the variable x/eps
    let samples = 10_000;
    let order = 4;
    let sups = |eps: f64| -> Vec<f64> {
        let mut best = vec![0.0f64; order + 1];
        for i in 0..samples {
            let t = -1.0 + (i as f64 + 0.5) * 2.0 / samples as f64;
            let x = (3.0 + t) * eps;
            let jet: Jet<f64> = scaled_patch_jet(&x, &eps, 3, order);
            for (j, b) in best.iter_mut().enumerate() {
                *b = b.max(jet.derivative(j).abs() * eps.powi(j as i32));
            }
        }
        best
    };
    let all: Vec<Vec<f64>> = (2..=20).map(|e| sups(2f64.powi(-e))).collect();
    for j in 0..=order {
        let col: Vec<f64> = all.iter().map(|s| s[j]).collect();
        let max = col.iter().cloned().fold(f64::MIN, f64::max);
        let min = col.iter().cloned().fold(f64::MAX, f64::min);
        assert!(min > 0.0 && max / min <= 1.0 + 1e-6, "order {j}: {min} .. {max}");
    }
}
