// `!(x >= c)` is the NaN-rejecting form of `x < c` and is used on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod render;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context};
use clap::Parser;
use num_complex::Complex64;
use satotate_core::arithmetic::{self, AngleSet, AngleSource, Caps, EllipticCurve};
use satotate_core::harness::{self, BoundInputs};
use satotate_core::minorant::{self, MinorantCertificate, Status};
use satotate_core::toolkit::{self, DeltaTheorem, EffectiveConstants, RepresentationParams};
use satotate_core::{measure, sym4, Error, IntervalSet};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use args::{Cli, Command, SourceArgs};

const EXIT_OTHER: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_UNRESOLVED: u8 = 3;

/// What a subcommand produced: a CSV body or a JSON result, plus whether a
/// solver gave up.
enum Output {
    Json { result: Value, unresolved: bool },
    Csv(String),
}

fn json_of<T: Serialize>(v: &T) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(v)?)
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'static str,
    flags: &'a Cli,
    input_hashes: BTreeMap<String, String>,
    timestamp: Option<u64>,
}

fn sha256_file(path: &Path) -> anyhow::Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

fn input_hashes(cli: &Cli) -> anyhow::Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut add = |p: &PathBuf| -> anyhow::Result<()> {
        if p.exists() {
            out.insert(p.display().to_string(), sha256_file(p)?);
        }
        Ok(())
    };
    let source = match &cli.command {
        Command::Angles { source, .. }
        | Command::Moments { source, .. }
        | Command::Scan { source, .. }
        | Command::Leastprime { source, .. } => Some(source),
        _ => None,
    };
    if let Some(s) = source {
        if s.source.first().map(String::as_str) == Some("file") {
            if let Some(p) = s.source.get(1) {
                add(&PathBuf::from(p))?;
            }
        }
    }
    match &cli.command {
        Command::Leastprime { config: Some(p), .. } | Command::Constants { config: Some(p), .. } => add(p)?,
        _ => {}
    }
    Ok(out)
}

fn interval(s: &str) -> anyhow::Result<IntervalSet> {
    Ok(s.parse::<IntervalSet>()?)
}

fn parse_source(s: &SourceArgs) -> anyhow::Result<AngleSource> {
    let v: Vec<&str> = s.source.iter().map(String::as_str).collect();
    let bad = || Error::InvalidInput(format!("unknown source {:?}; expected delta, ec A B or file PATH", v.join(" ")));
    Ok(match v.as_slice() {
        ["delta"] => AngleSource::Delta,
        ["ec", a, b] => {
            let a: i64 = a.parse().map_err(|_| bad())?;
            let b: i64 = b.parse().map_err(|_| bad())?;
            AngleSource::Elliptic(EllipticCurve::new(a, b)?)
        }
        ["file", path] => AngleSource::File(PathBuf::from(path)),
        _ => return Err(bad().into()),
    })
}

fn load_angles(cli: &Cli, source: &AngleSource, limit: u64) -> anyhow::Result<AngleSet> {
    let caps = Caps { delta: cli.global.delta_cap, elliptic: cli.global.elliptic_cap };
    Ok(arithmetic::angles(source, limit, cli.global.cache_dir.as_deref(), &caps)?)
}

/// Archimedean data of the weight-`k` newform attached to a source.
fn representation(source: &AngleSource, conductor: Option<f64>) -> RepresentationParams {
    let (k, q) = match source {
        AngleSource::Delta => (12.0, 1.0),
        // the conductor divides the discriminant
        AngleSource::Elliptic(e) => (2.0, e.discriminant().unsigned_abs() as f64),
        AngleSource::File(_) => (2.0, 1.0),
    };
    let kappa = |x: f64| Complex64::new(x, 0.0);
    RepresentationParams {
        d: 2,
        q: conductor.unwrap_or(q),
        kappas: vec![kappa((k - 1.0) / 2.0), kappa((k + 1.0) / 2.0)],
        field_degree: 1,
        disc: 1.0,
        self_dual: true,
        satisfies_grc: true,
    }
}

fn load_constants(path: Option<&Path>) -> anyhow::Result<EffectiveConstants> {
    Ok(match path {
        Some(p) => EffectiveConstants::load(p)?,
        None => EffectiveConstants::default(),
    })
}

fn certificate_output(c: &MinorantCertificate) -> anyhow::Result<Output> {
    Ok(Output::Json { result: json_of(c)?, unresolved: c.status == Status::Unresolved })
}

fn done(result: Value) -> anyhow::Result<Output> {
    Ok(Output::Json { result, unresolved: false })
}

fn execute(cli: &Cli) -> anyhow::Result<Output> {
    match &cli.command {
        Command::Measure { interval: i } => {
            let i = interval(i)?;
            done(json!({ "I": i, "mu_st": i.mu_st() }))
        }
        Command::Minorize { interval: i, n, tol } => {
            certificate_output(&minorant::solve_minorant(&interval(i)?, *n, *tol)?)
        }
        Command::Majorize { interval: i, n, tol } => {
            certificate_output(&minorant::solve_majorant(&interval(i)?, *n, *tol)?)
        }
        Command::Classify { a, b } => {
            let v = sym4::classify(*a, *b)?;
            let mut out = json_of(&v)?;
            out["guard"] = json!(sym4::GUARD);
            done(out)
        }
        Command::Proportion { samples } => {
            if *samples == 0 {
                return Err(Error::InvalidInput("samples must be positive".into()).into());
            }
            let p = sym4::proportion_minorizable(*samples);
            let mut out = json_of(&p)?;
            out["difference"] = json!((p.quadrature - p.quasi_random).abs());
            done(out)
        }
        Command::Thresholds => done(json_of(&sym4::measure_thresholds())?),
        Command::Selberg { interval: i, n, delta } => {
            let i = interval(i)?;
            let mu = i.mu_st();
            let n = match (n, delta) {
                (Some(n), _) => *n,
                (None, Some(d)) => minorant::selberg_n_for(mu, *d),
                (None, None) => return Err(Error::InvalidInput("give a degree N or --delta".into()).into()),
            };
            let c = minorant::selberg_minorant(&i, n)?;
            let bound = delta.map(|d| (2.0 + 3.0 / d) / mu);
            let mut out = json!({ "certificate": json_of(&c)?, "mu_st": mu, "delta": delta, "b_bound": bound });
            out["b_within_bound"] = json!(bound.zip(c.b_ratio).map(|(bd, b)| b <= bd));
            Ok(Output::Json { result: out, unresolved: c.status == Status::Unresolved })
        }
        Command::Extreme { n, a } => {
            let c = minorant::extreme_minorant(*n, *a)?;
            done(json!({
                "certificate": json_of(&c)?,
                "closed_form_integral": minorant::extreme_integral(*n, *a),
                "threshold": minorant::extreme_threshold(*n),
            }))
        }
        Command::Angles { source, limit, csv } => {
            let s = load_angles(cli, &parse_source(source)?, *limit)?;
            if *csv {
                return Ok(Output::Csv(arithmetic::records_to_csv(&s.records)));
            }
            let max_cos = s.good().map(|r| r.cos_theta.abs()).fold(0.0, f64::max);
            done(json!({
                "source_id": s.source_id,
                "limit": s.limit,
                "records": s.records.len(),
                "good": s.good().count(),
                "max_abs_cos_theta": max_cos,
                "angles": json_of(&s.records)?,
            }))
        }
        Command::Moments { source, nmax, limit, x } => {
            let s = load_angles(cli, &parse_source(source)?, *limit)?;
            let x = x.unwrap_or(*limit as f64);
            let means = harness::chebyshev_moment_test(&s, *nmax, x)?;
            let rows: Vec<Value> = means.iter().enumerate().map(|(i, m)| json!({ "n": i + 1, "mean": m })).collect();
            done(json!({ "source_id": s.source_id, "x": x, "n_max": nmax, "moments": rows }))
        }
        Command::Scan { source, interval: i, delta, x0, steps, limit, degree, csv } => {
            let i = interval(i)?;
            if *steps == 0 || !(0.0..1.0).contains(delta) || !(*x0 >= 2.0) {
                return Err(Error::InvalidInput("need steps >= 1, 0 <= delta < 1 and x0 >= 2".into()).into());
            }
            let last = x0 * 2f64.powi(*steps as i32 - 1);
            let needed = (last + last.powf(1.0 - delta)).ceil() as u64;
            let s = load_angles(cli, &parse_source(source)?, limit.unwrap_or(needed))?;
            let cert = degree
                .map(|n| minorant::solve_minorant(&i, n, minorant::DEFAULT_TOL))
                .transpose()?
                .filter(MinorantCertificate::is_feasible);
            let reports = harness::hoheisel_scan(&s, &i, *x0, *delta, *steps, cert.as_ref())?;
            if *csv {
                return Ok(Output::Csv(harness::reports_to_csv(&reports)));
            }
            done(json!({
                "source_id": s.source_id,
                "floor_label": harness::FLOOR_LABEL,
                "certificate_b0": cert.as_ref().map(|c| c.b0),
                "windows": json_of(&reports)?,
            }))
        }
        Command::Leastprime { source, interval: i, limit, degree, config, conductor } => {
            let i = interval(i)?;
            let src = parse_source(source)?;
            let s = load_angles(cli, &src, *limit)?;
            let consts = load_constants(config.as_deref())?;
            let rep = representation(&src, *conductor);
            let cert = degree.map(|n| minorant::solve_minorant(&i, n, minorant::DEFAULT_TOL)).transpose()?;
            let b = cert.as_ref().and_then(|c| c.b_ratio);
            let bound = match (degree, b) {
                (Some(n), Some(b)) => {
                    Some(BoundInputs { n: *n as u32, b, rep: &rep, constants: &consts, squarefree: false })
                }
                _ => None,
            };
            let report = harness::least_prime_report(&s, &i, bound)?;
            let mut out = json_of(&report)?;
            out["B"] = json!(b);
            out["constants"] = json_of(&consts)?;
            done(out)
        }
        Command::Constants { config, n, b, d, q, field_degree, disc, squarefree } => {
            let consts = load_constants(config.as_deref())?;
            let k = (*d * *field_degree) as usize;
            let rep = RepresentationParams {
                d: *d,
                q: *q,
                kappas: vec![Complex64::new(0.0, 0.0); k],
                field_degree: *field_degree,
                disc: *disc,
                self_dual: false,
                satisfies_grc: true,
            };
            let warnings = rep.validate()?;
            done(json!({
                "constants": json_of(&consts)?,
                "warnings": warnings,
                "delta_hoheisel": toolkit::delta_bound(DeltaTheorem::Hoheisel, *d, None, *field_degree, &consts)?,
                "delta_satotate": toolkit::delta_bound(DeltaTheorem::SatoTate, *n, Some(*b), *field_degree, &consts)?,
                "log_least_prime_bound": toolkit::least_prime_log_bound(*n, *b, &rep, &consts, *squarefree)?,
                "log_symn_conductor": toolkit::symn_conductor_log_bound(*q, *n, *squarefree, consts.symn_multiplier),
                "mu_st_full": measure::mu_st_interval(-1.0, 1.0),
            }))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_invalid_input() => EXIT_INVALID,
        _ => EXIT_OTHER,
    }
}

fn run(cli: &Cli) -> anyhow::Result<(String, u8)> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads.max(1))
        .build_global()
        .map_err(|e| anyhow!("thread pool: {e}"))?;
    let output = execute(cli)?;
    let (result, unresolved) = match output {
        Output::Csv(body) => return Ok((body, 0)),
        Output::Json { result, unresolved } => (result, unresolved),
    };
    let manifest = Manifest {
        tool: "satotate",
        version: env!("CARGO_PKG_VERSION"),
        subcommand: cli.command.name(),
        flags: cli,
        input_hashes: input_hashes(cli)?,
        timestamp: cli.global.stamp.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())),
    };
    let doc = json!({ "manifest": json_of(&manifest)?, "result": result });
    let text =
        if cli.global.pretty && !cli.global.json { render::pretty(&doc) } else { serde_json::to_string(&doc)? + "\n" };
    Ok((text, if unresolved { EXIT_UNRESOLVED } else { 0 }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(EXIT_OTHER);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
