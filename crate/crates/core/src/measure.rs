//! Interval sets in `[-1, 1]` and their Sato-Tate measure.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Finite union of closed subintervals of `[-1, 1]`.
///
/// Components are kept sorted and disjoint; overlapping or touching
/// components are merged on construction. Degenerate components `[a, a]`
/// survive (they carry no measure but still count for [`IntervalSet::contains`]).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn new(intervals: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut v: Vec<(f64, f64)> = Vec::new();
        for (a, b) in intervals {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::invalid(format!("non-finite endpoint in {a}:{b}")));
            }
            if !(-1.0..=1.0).contains(&a) || !(-1.0..=1.0).contains(&b) {
                return Err(Error::invalid(format!("interval {a}:{b} leaves [-1,1]")));
            }
            if a > b {
                return Err(Error::invalid(format!("interval {a}:{b} has a > b")));
            }
            v.push((a, b));
        }
        Ok(Self::normalize(v))
    }

    pub fn single(a: f64, b: f64) -> Result<Self> {
        Self::new([(a, b)])
    }

    pub fn full() -> Self {
        Self { intervals: vec![(-1.0, 1.0)] }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    fn normalize(mut v: Vec<(f64, f64)>) -> Self {
        v.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Components with positive length.
    pub fn proper_intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.intervals.iter().copied().filter(|(a, b)| b > a)
    }

    /// Indicator `1_I(t)` with closed endpoints.
    pub fn contains(&self, t: f64) -> bool {
        // Components are sorted by left endpoint.
        let idx = self.intervals.partition_point(|&(a, _)| a <= t);
        idx > 0 && t <= self.intervals[idx - 1].1
    }

    pub fn indicator(&self, t: f64) -> u8 {
        u8::from(self.contains(t))
    }

    /// `mu_ST(I)`.
    pub fn mu_st(&self) -> f64 {
        self.intervals.iter().map(|&(a, b)| mu_st_interval(a, b)).sum()
    }

    /// Closure of `[-1, 1] \ I`.
    pub fn complement_closure(&self) -> IntervalSet {
        let mut out = Vec::new();
        let mut cursor = -1.0;
        for (a, b) in self.proper_intervals() {
            if a > cursor {
                out.push((cursor, a));
            }
            cursor = b;
        }
        if cursor < 1.0 {
            out.push((cursor, 1.0));
        }
        IntervalSet::normalize(out)
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.intervals.iter().all(|&(a, b)| other.intervals.iter().any(|&(c, d)| c <= a && b <= d))
    }

    /// All component endpoints, sorted and deduplicated.
    pub fn endpoints(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.intervals.iter().flat_map(|&(a, b)| [a, b]).collect();
        e.sort_by(f64::total_cmp);
        e.dedup();
        e
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.intervals.iter().map(|(a, b)| format!("{a:?}:{b:?}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for IntervalSet {
    type Err = Error;

    /// Parses comma-separated `a:b` pairs, e.g. `-1:-0.61,0.61:1`. The empty
    /// string is the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let mut pairs = Vec::new();
        for part in s.split(',') {
            let (a, b) = part.split_once(':').ok_or_else(|| Error::invalid(format!("expected a:b, got {part:?}")))?;
            let parse =
                |x: &str| x.trim().parse::<f64>().map_err(|_| Error::invalid(format!("bad number {x:?} in {part:?}")));
            pairs.push((parse(a)?, parse(b)?));
        }
        Self::new(pairs)
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Antiderivative of the density `(2/pi) sqrt(1 - t^2)`, normalized to 0 at -1.
pub fn st_cdf(t: f64) -> f64 {
    let t = t.clamp(-1.0, 1.0);
    (t * (1.0 - t * t).sqrt() + t.asin()) / PI + 0.5
}

pub fn st_density(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        2.0 / PI * (1.0 - t * t).sqrt()
    }
}

/// `mu_ST([a, b])` for `a <= b`.
pub fn mu_st_interval(a: f64, b: f64) -> f64 {
    let f = |t: f64| t * (1.0 - t * t).sqrt() + t.asin();
    ((f(b) - f(a)) / PI).max(0.0)
}

/// Inverse of [`st_cdf`] by bisection, accurate to a few ulps.
pub fn st_quantile(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if st_cdf(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest gap between the empirical fraction of `samples` in `[g_i, g_j]`
/// and `mu_ST([g_i, g_j])`, over all pairs from a uniform grid of
/// `grid_size` cells on `[-1, 1]`.
pub fn empirical_discrepancy(samples: &[f64], grid_size: usize) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("empty sample list"));
    }
    if grid_size == 0 {
        return Err(Error::invalid("grid size must be positive"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let grid: Vec<f64> = (0..=grid_size).map(|i| -1.0 + 2.0 * i as f64 / grid_size as f64).collect();
    let below = |x: f64| sorted.partition_point(|&s| s < x);
    let upto = |x: f64| sorted.partition_point(|&s| s <= x);
    let mut worst = 0.0_f64;
    for i in 0..grid.len() {
        let lo = below(grid[i]);
        for j in i + 1..grid.len() {
            let count = upto(grid[j]) - lo;
            let gap = (count as f64 / n - mu_st_interval(grid[i], grid[j])).abs();
            worst = worst.max(gap);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> IntervalSet {
        s.parse().unwrap()
    }

    #[test]
    fn mu_st_examples() {
        assert!((set("-1:1").mu_st() - 1.0).abs() < 1e-15);
        assert!((set("0:1").mu_st() - 0.5).abs() < 1e-15);
        let expect = 1.0 / 3.0 + 3f64.sqrt() / (2.0 * PI);
        assert!((set("-0.5:0.5").mu_st() - expect).abs() < 1e-15);
        assert!((expect - 0.608998).abs() < 1e-6);
    }

    #[test]
    fn mu_st_matches_adaptive_quadrature() {
        for (a, b) in [(-0.5, 0.5), (-1.0, -0.3), (0.2, 0.97), (-0.99, 1.0)] {
            let q = quadrature::integrate(st_density, a, b, 1e-14).integral;
            assert!((mu_st_interval(a, b) - q).abs() < 1e-12, "{a}:{b}");
        }
    }

    #[test]
    fn indicator_examples() {
        let i = set("0.2:0.5");
        assert_eq!(i.indicator(0.2), 1);
        assert_eq!(i.indicator(0.5), 1);
        assert_eq!(i.indicator(0.19), 0);
        assert_eq!(IntervalSet::empty().indicator(0.0), 0);
        assert!(set("0.3:0.3").contains(0.3));
    }

    #[test]
    fn complement_closure_examples() {
        assert!(set("-1:1").complement_closure().is_empty());
        assert_eq!(set("0.2:0.5").complement_closure().intervals(), &[(-1.0, 0.2), (0.5, 1.0)]);
        assert_eq!(set("-1:-0.3,0.3:1").complement_closure().intervals(), &[(-0.3, 0.3)]);
        assert_eq!(IntervalSet::empty().complement_closure(), IntervalSet::full());
        // a point has no interior; its complement closure is everything
        assert_eq!(set("0.3:0.3").complement_closure(), IntervalSet::full());
        assert_eq!(set("-1:0").complement_closure().intervals(), &[(0.0, 1.0)]);
    }

    #[test]
    fn normalization_merges() {
        let s = set("0.5:0.7,-0.2:0.1,0.1:0.3,0.6:0.9");
        assert_eq!(s.intervals(), &[(-0.2, 0.3), (0.5, 0.9)]);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!("0.5:0.2".parse::<IntervalSet>().is_err());
        assert!("-1.5:0".parse::<IntervalSet>().is_err());
        assert!("0:1.01".parse::<IntervalSet>().is_err());
        assert!("abc".parse::<IntervalSet>().is_err());
        assert!("0:x".parse::<IntervalSet>().is_err());
    }

    #[test]
    fn display_round_trips() {
        let s = set("-1:-0.61,0.61:1");
        assert_eq!(s.to_string().parse::<IntervalSet>().unwrap(), s);
        let odd = IntervalSet::single(-1.0 / 3.0, 0.1 + 0.2).unwrap();
        assert_eq!(odd.to_string().parse::<IntervalSet>().unwrap(), odd);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for &u in &[0.0, 0.01, 0.3, 0.5, 0.77, 1.0] {
            assert!((st_cdf(st_quantile(u)) - u).abs() < 1e-14);
        }
    }

    #[test]
    fn discrepancy_of_quantile_samples() {
        let n = 2000;
        let samples: Vec<f64> = (0..n).map(|i| st_quantile((i as f64 + 0.5) / n as f64)).collect();
        let d = empirical_discrepancy(&samples, 200).unwrap();
        assert!(d <= 1.0 / n as f64, "{d}");
    }

    #[test]
    fn discrepancy_of_point_mass() {
        let d = empirical_discrepancy(&[0.0; 10], 4).unwrap();
        assert!(d >= 1.0 - mu_st_interval(-0.5, 0.0) - 1e-15);
        assert!(empirical_discrepancy(&[], 4).is_err());
    }

    #[test]
    fn discrepancy_of_random_draws() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let samples: Vec<f64> = (0..100_000).map(|_| st_quantile(rng.gen::<f64>())).collect();
        assert!(empirical_discrepancy(&samples, 50).unwrap() <= 0.01);
    }
}
