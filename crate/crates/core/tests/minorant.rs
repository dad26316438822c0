use proptest::prelude::*;
use satotate_core::measure::st_quantile;
use satotate_core::minorant::{
    compute_b, extreme_integral, extreme_minorant, extreme_threshold, selberg_minorant, selberg_n_for, solve_majorant,
    solve_minorant, verify_certificate, Kind, MinorantCertificate, Status, DEFAULT_TOL,
};
use satotate_core::{sym4, ChebSeries, IntervalSet, MonomialPoly};

fn iv(a: f64, b: f64) -> IntervalSet {
    IntervalSet::single(a, b).unwrap()
}

/// Max of `p - 1_I` on a uniform grid, endpoints of `I` included.
fn dense_slack(c: &MinorantCertificate, points: usize) -> f64 {
    let s = c.series();
    let grid = (0..=points).map(|i| -1.0 + 2.0 * i as f64 / points as f64);
    grid.chain(c.target.endpoints())
        .map(|t| s.eval(&t) - f64::from(c.target.indicator(t)))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn solver_examples() {
    let c = solve_minorant(&IntervalSet::full(), 4, DEFAULT_TOL).unwrap();
    assert_eq!((c.status, c.b0, c.b_ratio), (Status::Feasible, 1.0, Some(1.0)));
    assert_eq!(solve_minorant(&iv(0.3, 0.3), 10, DEFAULT_TOL).unwrap().status, Status::Infeasible);
    assert_eq!(solve_minorant(&iv(-1.0 / 3.0, 0.6), 4, DEFAULT_TOL).unwrap().status, Status::Feasible);
    assert_eq!(solve_minorant(&iv(-1.0 / 3.0, 0.4), 4, DEFAULT_TOL).unwrap().status, Status::Infeasible);
}

#[test]
fn rejects_bad_tolerance() {
    assert!(solve_minorant(&iv(0.0, 1.0), 4, 1e-13).is_err());
    assert!(solve_minorant(&iv(0.0, 1.0), 4, 1e-2).is_err());
}

#[test]
fn feasible_certificates_survive_dense_scan() {
    for (a, b, n) in [(-1.0 / 3.0, 0.6, 4), (-0.5, 0.9, 6), (-0.2, 0.7, 10), (-1.0, 0.1, 8)] {
        let c = solve_minorant(&iv(a, b), n, DEFAULT_TOL).unwrap();
        assert!(c.is_sound(), "{c:?}");
        assert!(dense_slack(&c, 1_000_000) <= 1e-9, "[{a}, {b}] N={n}");
        let v = verify_certificate(&c);
        assert!((v.slack - c.worst_slack).abs() <= 1e-10);
    }
}

#[test]
fn case_three_certificate_verifies() {
    // the closed-form case-3 polynomial for [-1/3, 0.6], scaled below 1 on I
    let (f, b0) = sym4::certificate(-1.0 / 3.0, 0.6).unwrap();
    let series = ChebSeries::from_monomial(&f).unwrap();
    let peak = (0..=10_000).map(|i| series.eval(&(-1.0 + 2.0 * i as f64 / 10_000.0))).fold(0.0_f64, f64::max);
    let scale = 1.0 / (2.0 * peak);
    let coeffs: Vec<f64> = series.coeffs().iter().map(|x| x * scale).collect();
    let c = MinorantCertificate {
        kind: Kind::Minorant,
        target: iv(-1.0 / 3.0, 0.6),
        n: 4,
        b0: coeffs[0],
        b_ratio: None,
        coeffs,
        worst_slack: 0.0,
        status: Status::Feasible,
        tol: DEFAULT_TOL,
        reason: None,
    };
    assert!((c.b0 - b0 * scale).abs() < 1e-14);
    let v = verify_certificate(&c);
    assert!(v.certified && v.slack <= 1e-12, "{v:?}");
    assert!(dense_slack(&c, 1_000_000) <= 1e-12);
}

#[test]
fn b_is_stable_across_reruns() {
    let i = iv(-1.0 / 3.0, 0.6);
    let first = compute_b(&solve_minorant(&i, 4, DEFAULT_TOL).unwrap()).unwrap();
    for _ in 0..3 {
        let again = compute_b(&solve_minorant(&i, 4, DEFAULT_TOL).unwrap()).unwrap();
        assert!(first >= 1.0);
        assert!((again - first).abs() <= 1e-6);
    }
}

#[test]
fn b_is_scale_invariant() {
    let mut c = solve_minorant(&iv(-0.5, 0.9), 6, DEFAULT_TOL).unwrap();
    let b = compute_b(&c).unwrap();
    for s in [0.125, 3.0, 1e6] {
        c.coeffs.iter_mut().for_each(|x| *x *= s);
        assert!((compute_b(&c).unwrap() - b).abs() <= 1e-12 * b);
        c.coeffs.iter_mut().for_each(|x| *x /= s);
    }
}

#[test]
fn duality_bracket() {
    for (a, b, n) in [(0.0, 1.0, 4), (-0.5, 0.9, 6), (-0.8, 0.3, 8), (-1.0, -0.2, 5)] {
        let i = iv(a, b);
        let lo = solve_minorant(&i, n, DEFAULT_TOL).unwrap();
        let hi = solve_majorant(&i, n, DEFAULT_TOL).unwrap();
        assert_eq!(hi.status, Status::Feasible);
        assert!(hi.is_sound());
        if lo.is_feasible() {
            assert!(lo.b0 <= i.mu_st() + DEFAULT_TOL);
        }
        assert!(hi.b0 >= i.mu_st() - DEFAULT_TOL, "[{a}, {b}] {} < {}", hi.b0, i.mu_st());
    }
    let m = solve_majorant(&IntervalSet::full(), 7, DEFAULT_TOL).unwrap();
    assert!((m.b0 - 1.0).abs() < 1e-12);
    let half = iv(0.0, 1.0);
    let m = solve_majorant(&half, 4, DEFAULT_TOL).unwrap();
    assert!(half.mu_st() <= m.b0 + DEFAULT_TOL && m.b0 <= 1.0 + 1e-12);
}

fn b0_or_zero(c: &MinorantCertificate) -> f64 {
    if c.is_feasible() {
        c.b0
    } else {
        0.0
    }
}

#[test]
fn monotone_in_degree() {
    for (a, b) in [(-0.5, 0.9), (-0.2, 0.7), (0.1, 1.0)] {
        let i = iv(a, b);
        let b0: Vec<f64> = (2..=12).map(|n| b0_or_zero(&solve_minorant(&i, n, DEFAULT_TOL).unwrap())).collect();
        for w in b0.windows(2) {
            assert!(w[1] >= w[0] - DEFAULT_TOL, "[{a}, {b}] {b0:?}");
        }
    }
}

#[test]
fn monotone_in_interval() {
    let nested = [(-0.1, 0.6), (-0.3, 0.7), (-0.5, 0.9), (-0.7, 0.95), (-1.0, 1.0)];
    let b0: Vec<f64> =
        nested.iter().map(|&(a, b)| b0_or_zero(&solve_minorant(&iv(a, b), 6, DEFAULT_TOL).unwrap())).collect();
    for w in b0.windows(2) {
        assert!(w[0] <= w[1] + DEFAULT_TOL, "{b0:?}");
    }
    assert_eq!(b0[4], 1.0);
}

#[test]
fn unions_are_supported() {
    let two = IntervalSet::new([(-1.0, -0.3), (0.3, 1.0)]).unwrap();
    let c = solve_minorant(&two, 6, DEFAULT_TOL).unwrap();
    assert!(c.is_sound(), "{c:?}");
    assert!(c.b0 <= two.mu_st() + DEFAULT_TOL);
}

#[test]
fn certificate_json_round_trip() {
    for c in [
        solve_minorant(&iv(-0.5, 0.9), 6, DEFAULT_TOL).unwrap(),
        solve_majorant(&iv(0.1, 0.4), 5, DEFAULT_TOL).unwrap(),
        extreme_minorant(3, 0.4).unwrap(),
    ] {
        let text = serde_json::to_string(&c).unwrap();
        let back: MinorantCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

#[test]
fn extreme_examples() {
    assert!((extreme_integral(1, 0.0) - 0.25).abs() < 1e-15);
    assert!(extreme_integral(1, 0.5).abs() < 1e-15);
    assert!((extreme_threshold(1) - 0.5).abs() < 1e-15);
    // (n=2, a=0.7): C_1 / 4 = 1/4, times 1 - 0.49 - 0.5
    assert!((extreme_integral(2, 0.7) - 0.0025).abs() < 1e-15);
    let c = extreme_minorant(2, 0.7).unwrap();
    assert_eq!(c.status, Status::Feasible);
    // the certificate carries a rounding shift of a few ulps of 1e-2
    assert!(c.b0 <= 0.0025 && 0.0025 - c.b0 < 1e-14);
    let f = MonomialPoly::new(vec![0.0, 0.0, -0.49, 0.0, 1.0]);
    let q = satotate_core::chebyshev::quadrature::st_quadrature(|t| f.eval(&t), 5);
    assert!((q - 0.0025).abs() < 1e-15);
    assert_eq!(extreme_minorant(1, 0.5).unwrap().status, Status::Infeasible);
    assert!(extreme_minorant(0, 0.1).is_err());
}

#[test]
fn selberg_grid() {
    for mu in [0.81, 0.85, 0.9] {
        for delta in [0.5, 1.0] {
            let s = st_quantile(0.5 + mu / 2.0);
            let i = iv(-s, s);
            let n = selberg_n_for(mu, delta);
            let c = selberg_minorant(&i, n).unwrap();
            assert!(c.is_sound() && c.b0 > 0.0, "mu={mu} delta={delta} {c:?}");
            assert!(c.b_ratio.unwrap() <= (2.0 + 3.0 / delta) / mu);
        }
    }
}

#[test]
fn selberg_full_interval() {
    for n in [1, 4, 9] {
        let c = selberg_minorant(&IntervalSet::full(), n).unwrap();
        assert_eq!(c.b0, 1.0);
        assert!(c.worst_slack <= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn feasible_is_sound(a in -1.0f64..0.5, w in 0.3f64..1.5, n in 2usize..10) {
        let b = (a + w).min(1.0);
        let c = solve_minorant(&iv(a, b), n, DEFAULT_TOL).unwrap();
        prop_assert!(c.status != Status::Unresolved, "{:?}", c);
        if c.is_feasible() {
            prop_assert!(c.is_sound());
            prop_assert!(c.b0 <= iv(a, b).mu_st() + DEFAULT_TOL);
            prop_assert!(c.b_ratio.unwrap() >= 1.0);
        }
    }

    #[test]
    fn selberg_is_sound(a in -1.0f64..0.6, w in 0.2f64..2.0, n in 1usize..30) {
        let b = (a + w).min(1.0);
        let c = selberg_minorant(&iv(a, b), n).unwrap();
        prop_assert!(verify_certificate(&c).slack <= 1e-9);
        if c.is_feasible() {
            prop_assert!(c.b0 > 0.0);
        }
    }
}
