use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use satotate_core::chebyshev::{eval_u, quadrature::st_quadrature, st_inner, st_moment, t_to_u, u_product, MAX_DEGREE};
use satotate_core::{ChebSeries, Error, MonomialPoly, RationalChebSeries, RationalMonomialPoly};

/// `int f d mu_ST` by tanh-sinh in the angle, independent of the crate's
/// Gauss rule.
fn st_oracle(f: impl Fn(f64) -> f64) -> f64 {
    let g = |th: f64| 2.0 / PI * th.sin().powi(2) * f(th.cos());
    // split at the midpoint to keep each half well resolved
    let left = quadrature::integrate(g, 0.0, PI / 2.0, 1e-14).integral;
    let right = quadrature::integrate(g, PI / 2.0, PI, 1e-14).integral;
    left + right
}

fn naive(b: &[f64], t: f64) -> f64 {
    b.iter().enumerate().map(|(n, c)| c * eval_u(n, &t)).sum()
}

#[test]
fn eval_u_examples() {
    assert_eq!(eval_u(0, &0.7), 1.0);
    assert_eq!(eval_u(4, &1.0), 5.0);
    assert_eq!(eval_u(2, &0.5), 0.0);
    let th: f64 = 0.9;
    assert!((eval_u(7, &th.cos()) - (8.0 * th).sin() / th.sin()).abs() < 1e-12);
}

#[test]
fn eval_series_examples() {
    assert_eq!(ChebSeries::new(vec![1.0]).eval(&0.3), 1.0);
    assert_eq!(ChebSeries::new(vec![0.0, 1.0]).eval(&0.25), 0.5);
    for t in [-1.0, -0.3, 0.0, 0.6, 1.0] {
        let v = ChebSeries::new(vec![1.0, 0.0, -1.0]).eval(&t);
        assert!((v - (2.0 - 4.0 * t * t)).abs() < 1e-14);
    }
}

#[test]
fn clenshaw_matches_naive_up_to_256() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [1, 5, 64, 256] {
        let b: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = ChebSeries::new(b.clone());
        for _ in 0..20 {
            let t: f64 = rng.gen_range(-1.0..1.0);
            let (c, r) = (s.eval(&t), naive(&b, t));
            let scale: f64 = b.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
            assert!((c - r).abs() <= 1e-12 * scale * (n as f64 + 1.0), "n={n} t={t}");
        }
    }
}

#[test]
fn u_product_examples() {
    assert_eq!(u_product::<f64>(0, 3).coeffs(), &[0.0, 0.0, 0.0, 1.0]);
    assert_eq!(u_product::<f64>(1, 1).coeffs(), &[1.0, 0.0, 1.0]);
    assert_eq!(u_product::<f64>(2, 3).coeffs(), &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
}

#[test]
fn linearization_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (m, n) in [(3, 4), (10, 7), (25, 30)] {
        let p = u_product::<f64>(m, n);
        for _ in 0..100 {
            let t: f64 = rng.gen_range(-1.0..1.0);
            let want = eval_u(m, &t) * eval_u(n, &t);
            let got = p.eval(&t);
            assert!((got - want).abs() <= 1e-11 * want.abs().max(1.0), "m={m} n={n} t={t}");
        }
    }
}

#[test]
fn inner_products() {
    assert_eq!(st_inner(3, 3), 1.0);
    assert_eq!(st_inner(2, 5), 0.0);
    assert_eq!(st_inner(0, 0), 1.0);
}

#[test]
fn orthonormality_by_quadrature() {
    for m in 0..=30 {
        for n in 0..=30 {
            let q = st_oracle(|t| eval_u(m, &t) * eval_u(n, &t));
            let d = if m == n { 1.0 } else { 0.0 };
            assert!((q - d).abs() < 1e-10, "m={m} n={n} q={q}");
        }
    }
}

#[test]
fn st_integral_examples() {
    assert_eq!(ChebSeries::new(vec![1.0, 0.0, 0.0]).st_integral(), 1.0);
    assert_eq!(ChebSeries::new(vec![0.3, -2.0, 7.0]).st_integral(), 0.3);
    let x2 = ChebSeries::from_monomial(&MonomialPoly::new(vec![0.0, 0.0, 1.0])).unwrap();
    assert_eq!(x2.coeffs(), &[0.25, 0.0, 0.25]);
    assert!((x2.st_integral() - st_oracle(|t| t * t)).abs() < 1e-13);
}

#[test]
fn st_integral_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [3, 12, 40] {
        let b: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = ChebSeries::new(b);
        assert!((s.st_integral() - st_oracle(|t| s.eval(&t))).abs() < 1e-10);
    }
}

#[test]
fn moments() {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    assert_eq!(st_moment(0), r(1, 1));
    assert_eq!(st_moment(1), r(1, 4));
    assert_eq!(st_moment(2), r(1, 8));
    for m in 0..=15usize {
        let mut c = vec![0.0; 2 * m + 1];
        c[2 * m] = 1.0;
        let s = ChebSeries::from_monomial(&MonomialPoly::new(c)).unwrap();
        let exact = st_moment(m as u64).to_f64().unwrap();
        assert!((s.st_integral() - exact).abs() < 1e-12, "m={m}");
        assert!((st_oracle(|t| t.powi(2 * m as i32)) - exact).abs() < 1e-12, "m={m}");
    }
}

#[test]
fn exact_rational_basis_change() {
    // U_2 = 4x^2 - 1 with no rounding anywhere
    let r = |n: i64| BigRational::from_integer(n.into());
    let u2 = RationalChebSeries::new(vec![r(0), r(0), r(1)]);
    assert_eq!(u2.to_monomial().unwrap(), RationalMonomialPoly::new(vec![r(-1), r(0), r(4)]));
    let x10 = RationalMonomialPoly::new((0..=10).map(|k| r(i64::from(k == 10))).collect());
    let s = RationalChebSeries::from_monomial(&x10).unwrap();
    assert_eq!(s.st_integral(), st_moment(5));
}

#[test]
fn basis_examples() {
    let u2 = ChebSeries::new(vec![0.0, 0.0, 1.0]).to_monomial().unwrap();
    assert_eq!(u2.coeffs(), &[-1.0, 0.0, 4.0]);
    let x = ChebSeries::from_monomial(&MonomialPoly::new(vec![0.0, 1.0])).unwrap();
    assert_eq!(x.coeffs(), &[0.0, 0.5]);
    let one = ChebSeries::from_monomial(&MonomialPoly::new(vec![1.0])).unwrap();
    assert_eq!(one.coeffs(), &[1.0]);
}

#[test]
fn t_to_u_examples() {
    assert_eq!(t_to_u::<f64>(0).coeffs(), &[1.0]);
    assert_eq!(t_to_u::<f64>(1).coeffs(), &[0.0, 0.5]);
    assert_eq!(t_to_u::<f64>(2).coeffs(), &[-0.5, 0.0, 0.5]);
    for k in 0..12usize {
        let s = t_to_u::<f64>(k);
        for t in [-0.9, -0.2, 0.4, 0.99] {
            let want = (k as f64 * f64::acos(t)).cos();
            assert!((s.eval(&t) - want).abs() < 1e-13);
        }
    }
}

#[test]
fn degree_cap() {
    let big = MonomialPoly::new(vec![1.0; MAX_DEGREE + 2]);
    assert!(matches!(ChebSeries::from_monomial(&big), Err(Error::DegreeTooLarge { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    // Power-basis coefficients of U_n grow like 2^n, so a binary64 round trip
    // loses about n bits; 1e-12 is reachable up to degree 12 or so.
    #[test]
    fn roundtrip_through_monomials(b in prop::collection::vec(-1.0f64..1.0, 1..=13)) {
        let s = ChebSeries::new(b.clone());
        let back = ChebSeries::from_monomial(&s.to_monomial().unwrap()).unwrap();
        for (n, &c) in b.iter().enumerate() {
            prop_assert!((back.coeff(n) - c).abs() < 1e-12, "n={} {} vs {}", n, back.coeff(n), c);
        }
    }

    #[test]
    fn exact_roundtrip_through_monomials(b in prop::collection::vec(-1.0f64..1.0, 1..=65)) {
        let exact: Vec<BigRational> = b.iter().map(|&x| BigRational::from_float(x).unwrap()).collect();
        let s = RationalChebSeries::new(exact.clone());
        let back = RationalChebSeries::from_monomial(&s.to_monomial().unwrap()).unwrap();
        prop_assert_eq!(back.coeffs(), s.coeffs());
    }

    #[test]
    fn parseval(b in prop::collection::vec(-1.0f64..1.0, 1..=20)) {
        let s = ChebSeries::new(b.clone());
        let q = st_quadrature(|t| s.eval(&t).powi(2), 2 * b.len());
        let sum: f64 = b.iter().map(|x| x * x).sum();
        prop_assert!((q - sum).abs() < 1e-9);
    }

    #[test]
    fn product_matches_pointwise(m in 0usize..40, n in 0usize..40, t in -1.0f64..1.0) {
        let got = u_product::<f64>(m, n).eval(&t);
        let want = eval_u(m, &t) * eval_u(n, &t);
        prop_assert!((got - want).abs() <= 1e-11 * want.abs().max(1.0));
    }
}
