//! Real-root isolation and certified maxima of U-series on subintervals.
//!
//! Roots are isolated by the derivative chain: between consecutive real
//! roots of `q'` the polynomial `q` is monotone, so each such bracket holds
//! at most one root of `q` and a sign test decides whether it does. The
//! chain is carried in the Chebyshev-T basis and evaluated by Clenshaw's
//! recurrence, which stays well conditioned at degrees where power-basis
//! coefficients would swamp binary64.

use crate::chebyshev::ChebSeriesOf;

/// `sum c_k T_k(t)`.
#[derive(Clone, Debug)]
pub struct ChebTSeries {
    c: Vec<f64>,
}

impl ChebTSeries {
    pub fn new(mut c: Vec<f64>) -> Self {
        while c.len() > 1 && c.last() == Some(&0.0) {
            c.pop();
        }
        if c.is_empty() {
            c.push(0.0);
        }
        Self { c }
    }

    /// Rewrites a U-series: `U_m = 2 sum_{j = m mod 2, 0 < j <= m} T_j + [m even] T_0`.
    pub fn from_u(b: &[f64]) -> Self {
        let n = b.len();
        let mut c = vec![0.0; n.max(1)];
        // suffix sums over indices of equal parity
        let mut tail = [0.0_f64; 2];
        for j in (0..n).rev() {
            tail[j % 2] += b[j];
            c[j] = if j == 0 { tail[0] } else { 2.0 * tail[j % 2] };
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut y1 = 0.0;
        let mut y2 = 0.0;
        for &ck in self.c.iter().skip(1).rev() {
            let y0 = ck + 2.0 * t * y1 - y2;
            y2 = y1;
            y1 = y0;
        }
        self.c[0] + t * y1 - y2
    }

    /// `d/dt`, using `T_k' = k U_{k-1}`.
    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return Self::new(vec![0.0]);
        }
        let u: Vec<f64> = self.c.iter().enumerate().skip(1).map(|(k, ck)| k as f64 * ck).collect();
        Self::from_u(&u)
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }

    /// Same roots, largest coefficient scaled to one. Keeps deep derivative
    /// chains (whose coefficients grow like a factorial) inside binary64.
    fn rescaled(mut self) -> Self {
        let m = self.c.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if m > 0.0 {
            for x in &mut self.c {
                *x /= m;
            }
        }
        self
    }
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let lo_neg = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign-changing real roots of `q` in `[lo, hi]`, sorted.
pub fn real_roots(q: &ChebTSeries, lo: f64, hi: f64) -> Vec<f64> {
    if q.is_zero() || q.degree() == 0 || lo > hi {
        return Vec::new();
    }
    if q.degree() == 1 {
        let (c0, c1) = (q.c[0], q.c[1]);
        let r = -c0 / c1;
        return if (lo..=hi).contains(&r) { vec![r] } else { Vec::new() };
    }
    let crit = real_roots(&q.derivative().rescaled(), lo, hi);
    let mut pts = Vec::with_capacity(crit.len() + 2);
    pts.push(lo);
    pts.extend(crit.into_iter().filter(|&x| x > lo && x < hi));
    pts.push(hi);
    let f = |t: f64| q.eval(t);
    let mut roots = Vec::new();
    let mut fl = f(pts[0]);
    for w in pts.windows(2) {
        let (l, r) = (w[0], w[1]);
        let fr = f(r);
        if fl == 0.0 {
            roots.push(l);
        } else if fl * fr < 0.0 {
            roots.push(bisect(&f, l, r, fl));
        }
        fl = fr;
    }
    if fl == 0.0 {
        roots.push(hi);
    }
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    roots
}

/// A candidate extremum: a region endpoint or a critical point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub t: f64,
    pub value: f64,
}

/// Critical points of `p` in `(lo, hi)` together with the two endpoints,
/// each with the value of `p` computed in the U basis. The maximum of `p` on
/// `[lo, hi]` is attained at one of them.
pub fn extremum_candidates(p: &ChebSeriesOf<f64>, lo: f64, hi: f64) -> Vec<Candidate> {
    let dp = ChebTSeries::from_u(p.coeffs()).derivative().rescaled();
    let mut ts = vec![lo];
    if hi > lo {
        ts.extend(real_roots(&dp, lo, hi).into_iter().filter(|&x| x > lo && x < hi));
        ts.push(hi);
    }
    ts.into_iter().map(|t| Candidate { t, value: p.eval(&t) }).collect()
}

/// Certified maximum of `p` over `[lo, hi]`.
pub fn max_on(p: &ChebSeriesOf<f64>, lo: f64, hi: f64) -> Candidate {
    extremum_candidates(p, lo, hi).into_iter().fold(Candidate { t: lo, value: f64::NEG_INFINITY }, |best, c| {
        if c.value > best.value {
            c
        } else {
            best
        }
    })
}
