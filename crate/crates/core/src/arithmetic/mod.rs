//! Satake-angle data for GL(2) objects over Q.
//!
//! `angles` sieves the primes up to a limit, asks the source for the Hecke
//! eigenvalue at each one and normalizes it to `cos theta_p`. Generated
//! datasets are cached as CSV keyed by a hash of the source description.

mod elliptic;
mod sieve;
mod tau;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use elliptic::{ec_ap, EllipticCurve};
pub use sieve::{is_prime, primes_in, primes_up_to};
pub use tau::{euler_product_coeffs, tau, tau_series};

use crate::chebyshev::{eval_t, eval_u};
use crate::error::{Error, Result};

pub const CACHE_HEADER: &str = "p,a_raw,cos_theta,ramified";
pub const FILE_HEADER: &str = "p,a_raw,weight,ramified";

/// Size limits on generated datasets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub delta: u64,
    pub elliptic: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { delta: 100_000, elliptic: 10_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AngleSource {
    Elliptic(EllipticCurve),
    Delta,
    File(PathBuf),
}

impl AngleSource {
    pub fn weight(&self) -> Option<u32> {
        match self {
            AngleSource::Elliptic(_) => Some(2),
            AngleSource::Delta => Some(12),
            AngleSource::File(_) => None,
        }
    }
}

impl fmt::Display for AngleSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleSource::Elliptic(e) => write!(f, "ec:{},{}", e.a, e.b),
            AngleSource::Delta => write!(f, "delta"),
            AngleSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// One prime of a dataset. Ramified records carry whatever the source gave
/// (zero for bad primes of generated curves) and are skipped by every sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleRecord {
    pub p: u64,
    #[serde(with = "bigint_string")]
    pub a_raw: BigInt,
    pub cos_theta: f64,
    pub ramified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleSet {
    pub source_id: String,
    /// Every prime up to here is present.
    pub limit: u64,
    pub records: Vec<AngleRecord>,
}

impl AngleSet {
    pub fn good(&self) -> impl Iterator<Item = &AngleRecord> + '_ {
        self.records.iter().filter(|r| !r.ramified)
    }

    /// Records with `lo < p <= hi`, in order.
    pub fn window(&self, lo: f64, hi: f64) -> &[AngleRecord] {
        let start = self.records.partition_point(|r| (r.p as f64) <= lo);
        let end = self.records.partition_point(|r| (r.p as f64) <= hi);
        &self.records[start..end.max(start)]
    }

    pub fn require_coverage(&self, hi: f64) -> Result<()> {
        if hi > self.limit as f64 {
            return Err(Error::IncompleteRange { covered: self.limit, needed: hi.ceil() as u64 });
        }
        Ok(())
    }
}

/// `a / (2 p^{(k-1)/2})`.
pub fn normalize(a: &BigInt, p: u64, weight: u32) -> f64 {
    let pf = p as f64;
    let e = weight.saturating_sub(1);
    let mut denom = 2.0 * pf.powi((e / 2) as i32);
    if e % 2 == 1 {
        denom *= pf.sqrt();
    }
    a.to_f64().unwrap_or(f64::NAN) / denom
}

fn checked_record(p: u64, a_raw: BigInt, weight: u32) -> Result<AngleRecord> {
    let cos_theta = normalize(&a_raw, p, weight);
    if !(cos_theta.abs() <= 1.0) {
        return Err(Error::RamanujanBound { p, value: cos_theta });
    }
    Ok(AngleRecord { p, a_raw, cos_theta, ramified: false })
}

fn generate(source: &AngleSource, limit: u64, caps: &Caps) -> Result<Vec<AngleRecord>> {
    let primes = primes_up_to(limit);
    match source {
        AngleSource::Delta => {
            if limit > caps.delta {
                return Err(Error::SizeTooLarge { requested: limit, cap: caps.delta });
            }
            let taus = tau_series(limit)?;
            primes.iter().map(|&p| checked_record(p, taus[(p - 1) as usize].clone(), 12)).collect()
        }
        AngleSource::Elliptic(e) => {
            if limit > caps.elliptic {
                return Err(Error::SizeTooLarge { requested: limit, cap: caps.elliptic });
            }
            primes
                .par_iter()
                .map(|&p| match ec_ap(e, p) {
                    Some(a) => checked_record(p, BigInt::from(a), 2),
                    None => Ok(AngleRecord { p, a_raw: BigInt::zero(), cos_theta: 0.0, ramified: true }),
                })
                .collect()
        }
        AngleSource::File(path) => {
            let mut records = load_file(path)?;
            records.retain(|r| r.p <= limit);
            Ok(records)
        }
    }
}

/// Satake angles of `source` at every prime up to `limit`, sorted by `p`.
///
/// With a cache directory, generated sources are read from or written to
/// `angles-<hash>.csv` there. File sources are never cached.
pub fn angles(source: &AngleSource, limit: u64, cache_dir: Option<&Path>, caps: &Caps) -> Result<AngleSet> {
    if limit < 2 {
        return Err(Error::invalid(format!("prime limit {limit} is below 2")));
    }
    let source_id = source.to_string();
    let records = match (source, cache_dir) {
        (AngleSource::File(_), _) | (_, None) => generate(source, limit, caps)?,
        (_, Some(dir)) => {
            let path = cache_path(dir, source, limit);
            if path.exists() {
                read_cache(&path)?
            } else {
                let records = generate(source, limit, caps)?;
                write_cache(&path, &records)?;
                records
            }
        }
    };
    let limit = match source {
        // a file only vouches for primes up to its last row
        AngleSource::File(_) => records.last().map_or(1, |r| r.p).min(limit),
        _ => limit,
    };
    Ok(AngleSet { source_id, limit, records })
}

pub fn cache_key(source: &AngleSource, limit: u64) -> String {
    let digest = Sha256::digest(format!("{source}|{limit}").as_bytes());
    hex::encode(&digest[..16])
}

pub fn cache_path(dir: &Path, source: &AngleSource, limit: u64) -> PathBuf {
    dir.join(format!("angles-{}.csv", cache_key(source, limit)))
}

pub fn records_to_csv(records: &[AngleRecord]) -> String {
    let mut out = String::with_capacity(48 * records.len() + 32);
    out.push_str(CACHE_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!("{},{},{:.16e},{}\n", r.p, r.a_raw, r.cos_theta, r.ramified));
    }
    out
}

fn write_cache(path: &Path, records: &[AngleRecord]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension(format!("csv.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(records_to_csv(records).as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn schema(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_path_buf(), line, message: message.into() }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

/// Reads rows of a four-column CSV with the given header, calling `row`
/// with the line number and fields.
fn read_rows<F>(path: &Path, header: &str, mut row: F) -> Result<Vec<AngleRecord>>
where
    F: FnMut(u64, &csv::StringRecord) -> Result<AngleRecord>,
{
    let mut rdr =
        csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_path(path).map_err(|e| {
            match e.kind() {
                csv::ErrorKind::Io(_) => e.into(),
                _ => schema(path, 1, e.to_string()),
            }
        })?;
    let got = rdr.headers().map_err(|e| schema(path, 1, e.to_string()))?.clone();
    let want: Vec<&str> = header.split(',').collect();
    if got.iter().collect::<Vec<_>>() != want {
        return Err(schema(
            path,
            1,
            format!("expected header `{header}`, found `{}`", got.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut out: Vec<AngleRecord> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            schema(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let r = row(line, &rec)?;
        if let Some(prev) = out.last() {
            if r.p <= prev.p {
                return Err(schema(path, line, format!("p = {} is not above the previous row's {}", r.p, prev.p)));
            }
        }
        out.push(r);
    }
    Ok(out)
}

fn field<'a>(path: &Path, line: u64, rec: &'a csv::StringRecord, i: usize, name: &str) -> Result<&'a str> {
    rec.get(i).ok_or_else(|| schema(path, line, format!("missing column `{name}`")))
}

fn parse_prime(path: &Path, line: u64, s: &str) -> Result<u64> {
    let p: u64 = s.parse().map_err(|_| schema(path, line, format!("p = `{s}` is not a positive integer")))?;
    if !is_prime(p) {
        return Err(schema(path, line, format!("p = {p} is not prime")));
    }
    Ok(p)
}

fn read_cache(path: &Path) -> Result<Vec<AngleRecord>> {
    read_rows(path, CACHE_HEADER, |line, rec| {
        let p = parse_prime(path, line, field(path, line, rec, 0, "p")?)?;
        let a = field(path, line, rec, 1, "a_raw")?;
        let a_raw: BigInt = a.parse().map_err(|_| schema(path, line, format!("a_raw = `{a}` is not an integer")))?;
        let c = field(path, line, rec, 2, "cos_theta")?;
        let cos_theta: f64 = c.parse().map_err(|_| schema(path, line, format!("cos_theta = `{c}` is not a number")))?;
        let f = field(path, line, rec, 3, "ramified")?;
        let ramified = parse_bool(f).ok_or_else(|| schema(path, line, format!("ramified = `{f}` is not a boolean")))?;
        Ok(AngleRecord { p, a_raw, cos_theta, ramified })
    })
}

/// Loads a `p,a_raw,weight,ramified` file and normalizes each row.
pub fn load_file(path: &Path) -> Result<Vec<AngleRecord>> {
    read_rows(path, FILE_HEADER, |line, rec| {
        let p = parse_prime(path, line, field(path, line, rec, 0, "p")?)?;
        let a = field(path, line, rec, 1, "a_raw")?;
        let a_raw: BigInt = a.parse().map_err(|_| schema(path, line, format!("a_raw = `{a}` is not an integer")))?;
        let w = field(path, line, rec, 2, "weight")?;
        let weight: u32 = w
            .parse()
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| schema(path, line, format!("weight = `{w}` is not a positive integer")))?;
        let f = field(path, line, rec, 3, "ramified")?;
        let ramified = parse_bool(f).ok_or_else(|| schema(path, line, format!("ramified = `{f}` is not a boolean")))?;
        let cos_theta = normalize(&a_raw, p, weight);
        if !ramified && !(cos_theta.abs() <= 1.0) {
            return Err(schema(
                path,
                line,
                format!("|cos theta| = {} exceeds 1 at an unramified prime", cos_theta.abs()),
            ));
        }
        Ok(AngleRecord { p, a_raw, cos_theta, ramified })
    })
}

/// `U_n(cos(m theta))` for `cos theta = c`: the coefficient of `log p` at
/// `p^m` in `-L'/L` of the `n`-th symmetric power.
pub fn symn_lambda(n: usize, m: usize, c: f64) -> f64 {
    if m == 1 {
        eval_u(n, &c)
    } else {
        eval_u(n, &eval_t(m, &c))
    }
}
