use std::fs;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use satotate_core::arithmetic::{
    angles, cache_path, ec_ap, is_prime, load_file, primes_up_to, symn_lambda, tau, tau_series, AngleSource, Caps,
    EllipticCurve,
};
use satotate_core::Error;

/// `prod (1 - q^n)` by multiplying in one factor at a time.
fn euler_product_direct(len: usize) -> Vec<i128> {
    let mut c = vec![0i128; len];
    c[0] = 1;
    for n in 1..len {
        for i in (n..len).rev() {
            c[i] -= c[i - n];
        }
    }
    c
}

/// `tau(1..=len)` as the coefficients of `q P^24`, multiplying by the sparse
/// `P` twenty-four times in checked `i128`.
fn tau_oracle(len: usize) -> Vec<i128> {
    let p = euler_product_direct(len);
    let support: Vec<(usize, i128)> = p.iter().copied().enumerate().filter(|(_, c)| *c != 0).collect();
    let mut acc = vec![0i128; len];
    acc[0] = 1;
    for _ in 0..24 {
        let mut next = vec![0i128; len];
        for (i, &a) in acc.iter().enumerate().filter(|(_, a)| **a != 0) {
            for &(j, c) in support.iter().take_while(|(j, _)| i + j < len) {
                next[i + j] = next[i + j].checked_add(a.checked_mul(c).unwrap()).unwrap();
            }
        }
        acc = next;
    }
    acc
}

#[test]
fn tau_matches_sparse_oracle() {
    let n = 10_000;
    let fast = tau_series(n as u64).unwrap();
    let slow = tau_oracle(n);
    for i in 0..n {
        assert_eq!(fast[i], BigInt::from(slow[i]), "tau({})", i + 1);
    }
    for p in primes_up_to(n as u64) {
        // Deligne: |tau(p)| <= 2 p^{11/2}, compared as squares
        let t = &fast[(p - 1) as usize];
        assert!(t * t <= BigInt::from(4) * BigInt::from(p).pow(11), "p={p}");
    }
}

#[test]
fn tau_examples() {
    assert_eq!(tau(2, 100).unwrap(), BigInt::from(-24));
    assert_eq!(tau(3, 100).unwrap(), BigInt::from(252));
    assert_eq!(tau(11, 100).unwrap(), BigInt::from(534_612));
    assert!(matches!(tau(101, 100), Err(Error::SizeTooLarge { .. })));
    assert!(tau(0, 100).is_err());
}

fn brute_count(a: i64, b: i64, p: u64) -> i64 {
    let p = p as i64;
    let mut affine = 0;
    for x in 0..p {
        let rhs = (x * x % p * x + a.rem_euclid(p) * x + b.rem_euclid(p)) % p;
        for y in 0..p {
            if y * y % p == rhs {
                affine += 1;
            }
        }
    }
    affine + 1
}

#[test]
fn ec_ap_matches_enumeration() {
    for (a, b) in [(1, 1), (-1, 0), (0, 7), (-7, 10), (2, -3), (-43, 166)] {
        let e = EllipticCurve::new(a, b).unwrap();
        for p in primes_up_to(97) {
            match ec_ap(&e, p) {
                Some(ap) => {
                    assert_eq!(ap, p as i64 + 1 - brute_count(a, b, p), "({a},{b}) p={p}");
                    assert!((ap * ap) as u64 <= 4 * p);
                }
                None => assert!(e.is_bad_prime(p)),
            }
        }
    }
    let e = EllipticCurve::new(1, 1).unwrap();
    assert_eq!(ec_ap(&e, 5), Some(-3));
    assert_eq!(ec_ap(&e, 2), None);
    assert!(EllipticCurve::new(0, 0).is_err());
    assert!(EllipticCurve::new(-3, 2).is_err());
}

#[test]
fn delta_angles() {
    let set = angles(&AngleSource::Delta, 10, None, &Caps::default()).unwrap();
    let ps: Vec<u64> = set.records.iter().map(|r| r.p).collect();
    assert_eq!(ps, vec![2, 3, 5, 7]);
    assert!((set.records[0].cos_theta - -24.0 / (2.0 * 2f64.powf(5.5))).abs() < 1e-16);
    assert!((set.records[0].cos_theta - -0.265165).abs() < 1e-6);
}

#[test]
fn elliptic_angles() {
    let e = AngleSource::Elliptic(EllipticCurve::new(1, 1).unwrap());
    let set = angles(&e, 5, None, &Caps::default()).unwrap();
    let r = set.records.iter().find(|r| r.p == 5).unwrap();
    assert_eq!(r.a_raw, BigInt::from(-3));
    assert!((r.cos_theta - -3.0 / (2.0 * 5f64.sqrt())).abs() < 1e-16);
    assert!(set.records[0].ramified);
}

/// `cos^2 = a^2 / (4 p^{k-1})`, checked in exact rationals.
fn check_normalization(set: &satotate_core::arithmetic::AngleSet, k: u32) {
    for r in set.good() {
        assert!(r.cos_theta.abs() <= 1.0);
        if r.a_raw.is_zero() {
            assert_eq!(r.cos_theta, 0.0);
            continue;
        }
        let c = BigRational::from_float(r.cos_theta).unwrap();
        let want = BigRational::new(&r.a_raw * &r.a_raw, BigInt::from(4) * BigInt::from(r.p).pow(k - 1));
        let rel = ((&c * &c - &want) / &want).abs();
        assert!(rel <= BigRational::from_float(2.5e-15).unwrap(), "p={} rel={rel}", r.p);
    }
}

#[test]
fn normalization_identity() {
    let caps = Caps::default();
    check_normalization(&angles(&AngleSource::Delta, 5000, None, &caps).unwrap(), 12);
    let e = AngleSource::Elliptic(EllipticCurve::new(-1, 1).unwrap());
    check_normalization(&angles(&e, 20_000, None, &caps).unwrap(), 2);
}

#[test]
fn caps_are_enforced() {
    let caps = Caps { delta: 1000, elliptic: 5000 };
    assert!(matches!(angles(&AngleSource::Delta, 1001, None, &caps), Err(Error::SizeTooLarge { .. })));
    let e = AngleSource::Elliptic(EllipticCurve::new(1, 1).unwrap());
    assert!(matches!(angles(&e, 5001, None, &caps), Err(Error::SizeTooLarge { .. })));
    assert!(angles(&AngleSource::Delta, 1, None, &caps).is_err());
}

#[test]
fn cache_is_byte_deterministic() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let caps = Caps::default();
    for src in [AngleSource::Delta, AngleSource::Elliptic(EllipticCurve::new(2, 3).unwrap())] {
        let a = angles(&src, 3000, Some(d1.path()), &caps).unwrap();
        let b = angles(&src, 3000, Some(d2.path()), &caps).unwrap();
        let (f1, f2) = (cache_path(d1.path(), &src, 3000), cache_path(d2.path(), &src, 3000));
        assert_eq!(fs::read(&f1).unwrap(), fs::read(&f2).unwrap());
        // the second call is served from the cache and agrees bit for bit
        let again = angles(&src, 3000, Some(d1.path()), &caps).unwrap();
        assert_eq!(again, a);
        assert_eq!(a, b);
        assert_eq!(fs::read(&f1).unwrap(), fs::read(&f2).unwrap());
    }
}

fn write(dir: &tempfile::TempDir, body: &str) -> std::path::PathBuf {
    let p = dir.path().join("angles.csv");
    fs::write(&p, body).unwrap();
    p
}

fn schema_line(r: satotate_core::Result<Vec<satotate_core::arithmetic::AngleRecord>>) -> u64 {
    match r {
        Err(Error::Schema { line, .. }) => line,
        other => panic!("expected a schema error, got {other:?}"),
    }
}

#[test]
fn file_source() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "p,a_raw,weight,ramified\n11,0,2,true\n");
    let recs = load_file(&p).unwrap();
    assert_eq!(recs.len(), 1);
    assert!(recs[0].ramified);

    let p = write(&dir, "p,a_raw,weight,ramified\n2,-24,12,false\n3,252,12,no\n5,4830,12,0\n");
    let set = angles(&AngleSource::File(p), 1000, None, &Caps::default()).unwrap();
    assert_eq!(set.limit, 5);
    assert_eq!(set.records.len(), 3);
    assert!((set.records[0].cos_theta - -0.2651650429449553).abs() < 1e-15);

    let cases = [
        ("p,a,weight,ramified\n2,1,2,false\n", 1),
        ("p,a_raw,weight,ramified\n2,1,2,false\n4,1,2,false\n", 3),
        ("p,a_raw,weight,ramified\n3,1,2,false\n2,1,2,false\n", 3),
        ("p,a_raw,weight,ramified\n2,1,2,false\n3,9,2,false\n", 3),
        ("p,a_raw,weight,ramified\n2,1,2,maybe\n", 2),
        ("p,a_raw,weight,ramified\n2,x,2,false\n", 2),
        ("p,a_raw,weight,ramified\n2,1,0,false\n", 2),
        ("p,a_raw,weight,ramified\n2,1,2\n", 2),
    ];
    for (body, line) in cases {
        assert_eq!(schema_line(load_file(&write(&dir, body))), line, "{body:?}");
    }
    // a large a_p is fine when the row is flagged ramified
    assert!(load_file(&write(&dir, "p,a_raw,weight,ramified\n3,9,2,true\n")).is_ok());
}

#[test]
fn symn_lambda_values() {
    assert_eq!(symn_lambda(0, 1, 0.37), 1.0);
    assert_eq!(symn_lambda(1, 1, 0.37), 0.74);
    assert_eq!(symn_lambda(2, 1, 0.5), 0.0);
    for (n, m, th) in [(3, 2, 0.7f64), (4, 3, 1.9), (1, 5, 2.5)] {
        let want = ((n as f64 + 1.0) * m as f64 * th).sin() / (m as f64 * th).sin();
        assert!((symn_lambda(n, m, th.cos()) - want).abs() < 1e-12);
    }
}

#[test]
fn primality_helpers_agree() {
    let ps = primes_up_to(10_000);
    assert_eq!(ps.len(), 1229);
    assert!((0..10_000).all(|n| is_prime(n) == ps.binary_search(&n).is_ok()));
}
