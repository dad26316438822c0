//! Ramanujan's `tau(n)` from `q prod (1 - q^n)^24`.
//!
//! `prod (1 - q^n)` is read off Euler's pentagonal series, raised to the
//! 24th power as `P^16 P^8` by repeated squaring with number-theoretic
//! transforms modulo three 62-bit primes, and lifted back to integers by
//! CRT. The lift is exact while `|tau(n)| < M / 2` with `M ~ 2^185`, far
//! beyond the Deligne bound at any supported size.

use num_bigint::BigInt;

use crate::error::{Error, Result};

/// `(p, primitive root, 2-adic valuation of p - 1)`.
const PRIMES: [(u64, u64, u32); 3] =
    [(4611686018326724609, 3, 25), (4611686018309947393, 5, 24), (4611686018058289153, 5, 25)];

/// Largest transform length available for every prime.
const MAX_LOG_LEN: u32 = 24;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Montgomery arithmetic modulo an odd `p < 2^62`, `R = 2^64`.
#[derive(Clone, Copy)]
struct Mont {
    p: u64,
    p_inv: u64,
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r1 = ((1u128 << 64) % p as u128) as u64;
        Mont { p, p_inv: inv, r2: mul_mod(r1, r1, p) }
    }

    #[inline(always)]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.p_inv);
        let mp = m as u128 * self.p as u128;
        let (r, borrow) = ((t >> 64) as u64).overflowing_sub((mp >> 64) as u64);
        if borrow {
            r.wrapping_add(self.p)
        } else {
            r
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mont_in(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    fn mont_out(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }
}

struct Ntt {
    m: Mont,
    /// Twiddles `w^j`, `j < n/2`, for the forward and inverse transforms.
    fwd: Vec<u64>,
    inv: Vec<u64>,
    n_inv: u64,
}

impl Ntt {
    fn new(p: u64, g: u64, log_n: u32) -> Self {
        let m = Mont::new(p);
        let n = 1u64 << log_n;
        let w = pow_mod(g, (p - 1) >> log_n, p);
        let w_inv = pow_mod(w, p - 2, p);
        let powers = |w: u64| {
            let wm = m.mont_in(w);
            let mut v = Vec::with_capacity((n / 2) as usize);
            let mut cur = m.mont_in(1);
            for _ in 0..n / 2 {
                v.push(cur);
                cur = m.mul(cur, wm);
            }
            v
        };
        Ntt { m, fwd: powers(w), inv: powers(w_inv), n_inv: m.mont_in(pow_mod(n % p, p - 2, p)) }
    }

    /// Decimation in frequency: natural order in, bit-reversed order out.
    fn dif(&self, a: &mut [u64]) {
        let n = a.len();
        let m = self.m;
        let mut len = n;
        while len >= 2 {
            let half = len / 2;
            let step = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let u = a[start + k];
                    let v = a[start + k + half];
                    a[start + k] = m.add(u, v);
                    a[start + k + half] = m.mul(m.sub(u, v), self.fwd[k * step]);
                }
            }
            len /= 2;
        }
    }

    /// Decimation in time with inverse twiddles: bit-reversed in, natural
    /// order out, scaled by `1/n`.
    fn dit_inverse(&self, a: &mut [u64]) {
        let n = a.len();
        let m = self.m;
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let u = a[start + k];
                    let v = m.mul(a[start + k + half], self.inv[k * step]);
                    a[start + k] = m.add(u, v);
                    a[start + k + half] = m.sub(u, v);
                }
            }
            len <<= 1;
        }
        for x in a.iter_mut() {
            *x = m.mul(*x, self.n_inv);
        }
    }

    /// Forward transform of `a` (Montgomery form) zero-padded to `n`.
    fn forward(&self, a: &[u64]) -> Vec<u64> {
        let mut v = vec![0u64; self.fwd.len() * 2];
        v[..a.len()].copy_from_slice(a);
        self.dif(&mut v);
        v
    }

    /// Inverse transform of a pointwise product, truncated to `len`.
    fn back(&self, mut v: Vec<u64>, len: usize) -> Vec<u64> {
        self.dit_inverse(&mut v);
        v.truncate(len);
        v
    }

    fn pointwise(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.m.mul(x, y)).collect()
    }
}

/// Signed coefficients of `prod_{n >= 1} (1 - q^n)` below `q^len`.
pub fn euler_product_coeffs(len: usize) -> Vec<i8> {
    let mut c = vec![0i8; len];
    // q^{k(3k -+ 1)/2} with sign (-1)^k
    for k in 0usize.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let e1 = (3 * k * k - k) / 2;
        if e1 >= len {
            break;
        }
        c[e1] = sign;
        if k > 0 {
            let e2 = k * (3 * k + 1) / 2;
            if e2 < len {
                c[e2] = sign;
            }
        }
    }
    c
}

/// `P^24 mod (p, q^len)` in ordinary (non-Montgomery) residues.
fn eta24_residues(ntt: &Ntt, len: usize) -> Vec<u64> {
    let m = ntt.m;
    let one = m.mont_in(1);
    let minus_one = m.sub(0, one);
    let base: Vec<u64> = euler_product_coeffs(len)
        .into_iter()
        .map(|c| match c {
            1 => one,
            -1 => minus_one,
            _ => 0,
        })
        .collect();
    let square = |a: &[u64]| {
        let f = ntt.forward(a);
        let sq = ntt.pointwise(&f, &f);
        (ntt.back(sq, len), f)
    };
    let (p2, _) = square(&base);
    let (p4, _) = square(&p2);
    let (p8, _) = square(&p4);
    let (p16, f8) = square(&p8);
    let f16 = ntt.forward(&p16);
    let p24 = ntt.back(ntt.pointwise(&f16, &f8), len);
    p24.into_iter().map(|x| m.mont_out(x)).collect()
}

/// Garner reconstruction of the symmetric residue in `(-M/2, M/2]`.
struct Crt {
    inv_p1_mod_p2: u64,
    inv_p1p2_mod_p3: u64,
    p1p2: BigInt,
    modulus: BigInt,
}

impl Crt {
    fn new() -> Self {
        let (p1, p2, p3) = (PRIMES[0].0, PRIMES[1].0, PRIMES[2].0);
        let p1p2_mod_p3 = mul_mod(p1 % p3, p2 % p3, p3);
        let p1p2 = BigInt::from(p1) * BigInt::from(p2);
        Crt {
            inv_p1_mod_p2: pow_mod(p1 % p2, p2 - 2, p2),
            inv_p1p2_mod_p3: pow_mod(p1p2_mod_p3, p3 - 2, p3),
            modulus: &p1p2 * BigInt::from(p3),
            p1p2,
        }
    }

    fn lift(&self, r: [u64; 3]) -> BigInt {
        let (p1, p2, p3) = (PRIMES[0].0, PRIMES[1].0, PRIMES[2].0);
        let v2 = mul_mod((r[1] + p2 - r[0] % p2) % p2, self.inv_p1_mod_p2, p2);
        let low = r[0] as u128 + p1 as u128 * v2 as u128;
        let low_mod_p3 = (low % p3 as u128) as u64;
        let v3 = mul_mod((r[2] + p3 - low_mod_p3) % p3, self.inv_p1p2_mod_p3, p3);
        if v3 == 0 {
            return BigInt::from(low);
        }
        let x = BigInt::from(low) + &self.p1p2 * BigInt::from(v3);
        if &x * 2 > self.modulus {
            x - &self.modulus
        } else {
            x
        }
    }
}

/// `tau(1), .., tau(limit)`; entry `i` is `tau(i + 1)`.
pub fn tau_series(limit: u64) -> Result<Vec<BigInt>> {
    if limit == 0 {
        return Ok(Vec::new());
    }
    let len = limit as usize;
    let log_n = (2 * len - 1).next_power_of_two().trailing_zeros().max(1);
    if log_n > MAX_LOG_LEN {
        return Err(Error::SizeTooLarge { requested: limit, cap: 1 << (MAX_LOG_LEN - 1) });
    }
    let residues: Vec<Vec<u64>> = PRIMES.iter().map(|&(p, g, _)| eta24_residues(&Ntt::new(p, g, log_n), len)).collect();
    let crt = Crt::new();
    Ok((0..len).map(|i| crt.lift([residues[0][i], residues[1][i], residues[2][i]])).collect())
}

/// `tau(n)` for `1 <= n <= cap`.
pub fn tau(n: u64, cap: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::invalid("tau is defined for n >= 1"));
    }
    if n > cap {
        return Err(Error::SizeTooLarge { requested: n, cap });
    }
    Ok(tau_series(n)?.pop().expect("non-empty series"))
}
