use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "satotate",
    version,
    about = "Sato-Tate minorants, Sym^4 classification and short-interval prime experiments",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Aligned text tables instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Force JSON output (the default).
    #[arg(long, global = true)]
    pub json: bool,
    /// Record the wall-clock time in the manifest. Off by default so output
    /// depends only on the inputs.
    #[arg(long, global = true)]
    pub stamp: bool,
    /// Where generated angle datasets are cached.
    #[arg(long, global = true, env = "SATOTATE_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Largest prime limit for the Delta source.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub delta_cap: u64,
    /// Largest prime limit for elliptic-curve sources.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub elliptic_cap: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Sato-Tate measure of an interval set such as `-1:-0.5,0.5:1`.
    Measure {
        #[arg(allow_hyphen_values = true)]
        interval: String,
    },
    /// Degree-N minorant of an interval indicator by linear programming.
    Minorize {
        #[arg(allow_hyphen_values = true)]
        interval: String,
        n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Degree-N majorant of an interval indicator.
    Majorize {
        #[arg(allow_hyphen_values = true)]
        interval: String,
        n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Sym^4 minorizability of [a, b] by the closed-form case analysis.
    #[command(allow_negative_numbers = true)]
    Classify { a: f64, b: f64 },
    /// Proportion of minorizable intervals, by quadrature and quasi-random sampling.
    Proportion {
        #[arg(long, default_value_t = 10_000_000)]
        samples: u64,
    },
    /// Extreme Sato-Tate measures of minorizable and non-minorizable intervals.
    Thresholds,
    /// Beurling-Selberg type minorant of a single interval.
    Selberg {
        #[arg(allow_hyphen_values = true)]
        interval: String,
        /// Degree; defaults to ceil(4(1 + delta)/mu - 1).
        n: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// The even minorant (x^2 - a^2) x^(2n-2) of |x| >= a.
    #[command(allow_negative_numbers = true)]
    Extreme { n: usize, a: f64 },
    /// Satake angles of a source up to a prime limit.
    #[command(allow_negative_numbers = true)]
    Angles {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        limit: u64,
        /// Emit the cache-format CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Log-weighted means of U_n(cos theta_p) over p <= x.
    #[command(allow_negative_numbers = true)]
    Moments {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        limit: u64,
        /// Upper end of the sum; defaults to the limit.
        #[arg(long)]
        x: Option<f64>,
    },
    /// Counts in windows (x, x + x^(1 - delta)] at x = x0 2^i.
    #[command(allow_negative_numbers = true)]
    Scan {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_hyphen_values = true)]
        interval: String,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        x0: f64,
        #[arg(long)]
        steps: usize,
        /// Prime limit; defaults to the end of the last window.
        #[arg(long)]
        limit: Option<u64>,
        /// Degree of the minorant whose floor is reported.
        #[arg(long)]
        degree: Option<usize>,
        /// Emit the per-window CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Least prime with cos theta_p in the interval.
    #[command(allow_negative_numbers = true)]
    Leastprime {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_hyphen_values = true)]
        interval: String,
        #[arg(long)]
        limit: u64,
        /// Minorant degree for the parametric bound comparison.
        #[arg(long)]
        degree: Option<usize>,
        /// Effective-constants JSON for the bound.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Arithmetic conductor; defaults to 1 for Delta and |disc| for curves.
        #[arg(long)]
        conductor: Option<f64>,
    },
    /// Validate an effective-constants file and evaluate the parametric bounds.
    Constants {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Symmetric-power degree N.
        #[arg(long, default_value_t = 4)]
        n: u32,
        /// Coefficient ratio B of the minorant.
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Degree d of the representation.
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, default_value_t = 1)]
        field_degree: u32,
        #[arg(long, default_value_t = 1.0)]
        disc: f64,
        #[arg(long)]
        squarefree: bool,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct SourceArgs {
    /// `delta`, `ec A B` or `file PATH`.
    #[arg(long, num_args = 1..=3, required = true)]
    pub source: Vec<String>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Measure { .. } => "measure",
            Command::Minorize { .. } => "minorize",
            Command::Majorize { .. } => "majorize",
            Command::Classify { .. } => "classify",
            Command::Proportion { .. } => "proportion",
            Command::Thresholds => "thresholds",
            Command::Selberg { .. } => "selberg",
            Command::Extreme { .. } => "extreme",
            Command::Angles { .. } => "angles",
            Command::Moments { .. } => "moments",
            Command::Scan { .. } => "scan",
            Command::Leastprime { .. } => "leastprime",
            Command::Constants { .. } => "constants",
        }
    }
}
