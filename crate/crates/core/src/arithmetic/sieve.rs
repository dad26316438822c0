//! Segmented sieve of Eratosthenes.

const SEGMENT: u64 = 1 << 16;

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// All primes `p <= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    primes_in(2, limit)
}

/// All primes in `[lo, hi]`, ascending, sieved one segment at a time.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let lo = lo.max(2);
    let base = simple_sieve(hi.isqrt());
    let mut out = Vec::new();
    let mut seg = vec![false; SEGMENT as usize];
    let mut start = lo;
    while start <= hi {
        let end = (start + SEGMENT - 1).min(hi);
        let len = (end - start + 1) as usize;
        seg[..len].fill(true);
        for &q in &base {
            if q * q > end {
                break;
            }
            let first = (start.div_ceil(q) * q).max(q * q);
            let mut m = first;
            while m <= end {
                seg[(m - start) as usize] = false;
                m += q;
            }
        }
        out.extend((0..len).filter(|&i| seg[i]).map(|i| start + i as u64));
        start = end + 1;
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
