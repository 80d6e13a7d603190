use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Node count on the shortest Nyström interval unless overridden.
pub const DEFAULT_QUAD_POINTS: usize = 50;
pub const QUAD_POINTS_ENV: &str = "GINEDGE_QUAD_POINTS";

#[derive(Debug, Parser)]
#[command(
    name = "ginedge",
    version,
    about = "Edge law of the largest retained real eigenvalue in the thinned real Ginibre ensemble",
    after_help = "Exit status: 0 ok, 1 invalid flags, 2 numerical failure, 3 identity check failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Nyström nodes on the shortest interval; longer intervals scale up.
    #[arg(long, global = true, env = QUAD_POINTS_ENV, default_value_t = DEFAULT_QUAD_POINTS)]
    pub quad_points: usize,

    /// Output format; defaults to csv for tables and json for mc and check.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads; 1 runs sequentially, 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args, Clone)]
pub struct Grid {
    #[arg(long, default_value_t = -8.0, allow_negative_numbers = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub t_step: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// P(t; gamma) on a grid. Columns: gamma,t,cdf
    Cdf {
        /// Retention probabilities, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        gamma: Vec<f64>,
        #[command(flatten)]
        grid: Grid,
    },
    /// Density of the law on a grid. Columns: gamma,t,pdf
    Pdf {
        #[arg(long, value_delimiter = ',', default_value = "1")]
        gamma: Vec<f64>,
        #[command(flatten)]
        grid: Grid,
    },
    /// Moments of the law.
    /// Columns: gamma,mean,variance,skewness,kurtosis,excess_kurtosis
    Moments {
        #[arg(long, value_delimiter = ',', default_value = "1,0.8,0.6,0.4")]
        gamma: Vec<f64>,
    },
    /// Exact law against both tail expansions, then the tail constants.
    /// Curve columns: gamma,t,exact,right_tail,left_tail.
    /// Constant columns: gamma,c1,c0_integral,c0_series
    Tails {
        #[arg(long, value_delimiter = ',', default_value = "0.5,1")]
        gamma: Vec<f64>,
        #[command(flatten)]
        grid: Grid,
        /// Which table to print.
        #[arg(long, value_enum, default_value_t = TailsPart::Both)]
        only: TailsPart,
        /// Terms of the c0 series.
        #[arg(long, default_value_t = 20_000)]
        series_terms: usize,
    },
    /// Laws of the m largest real eigenvalues at full retention.
    /// Columns: t,F_1,...,F_m
    Mth {
        /// Number of orders, at most 4.
        #[arg(long, short, default_value_t = 2)]
        m: usize,
        #[command(flatten)]
        grid: Grid,
    },
    /// Generating function E((t, inf); lambda). Columns: lambda,generating_function
    Gen {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")]
        lambda: Vec<f64>,
    },
    /// Sample real Ginibre matrices and compare the edge-shifted maximum with the law.
    Mc {
        /// Single retention probability.
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 100)]
        matrix_size: usize,
        #[arg(long, default_value_t = 5000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the identity checks; JSON lines, one per check.
    Check {
        /// Grid of parameters; only "default" is available.
        #[arg(long, default_value = "default")]
        grid: String,
        /// Replace every check's own tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Moments against stored reference values.
    /// Columns: gamma,statistic,computed,reference,deviation,tolerance,within
    Table1 {
        #[arg(long, value_delimiter = ',', default_value = "1,0.8,0.6,0.4")]
        gamma: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailsPart {
    Curve,
    Constants,
    Both,
}

/// A flag that failed validation.
#[derive(Debug)]
pub struct Invalid {
    pub flag: &'static str,
    pub message: String,
}

fn invalid(flag: &'static str, message: String) -> Invalid {
    Invalid { flag, message }
}

pub fn check_gammas(flag: &'static str, values: &[f64]) -> Result<(), Invalid> {
    if values.is_empty() {
        return Err(invalid(flag, "needs at least one value".into()));
    }
    for &g in values {
        if !(0.0..=1.0).contains(&g) {
            return Err(invalid(flag, format!("value {g} is outside [0, 1]")));
        }
    }
    Ok(())
}

/// Largest number of grid points accepted.
const MAX_GRID: usize = 1_000_000;

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>, Invalid> {
        for (flag, v) in [("--t-min", self.t_min), ("--t-max", self.t_max), ("--t-step", self.t_step)] {
            if !v.is_finite() {
                return Err(invalid(flag, format!("value {v} is not finite")));
            }
        }
        if self.t_min >= self.t_max {
            return Err(invalid(
                "--t-min",
                format!("must be below --t-max ({} >= {})", self.t_min, self.t_max),
            ));
        }
        if self.t_step <= 0.0 {
            return Err(invalid("--t-step", format!("must be positive, got {}", self.t_step)));
        }
        let span = (self.t_max - self.t_min) / self.t_step;
        if span >= MAX_GRID as f64 {
            return Err(invalid("--t-step", format!("gives more than {MAX_GRID} points")));
        }
        let count = (span + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| self.t_min + i as f64 * self.t_step).collect())
    }
}

impl Common {
    pub fn validate(&self) -> Result<(), Invalid> {
        if !(4..=400).contains(&self.quad_points) {
            return Err(invalid(
                "--quad-points",
                format!("must lie in 4..=400, got {} (also settable via {QUAD_POINTS_ENV})", self.quad_points),
            ));
        }
        if self.threads > 1024 {
            return Err(invalid("--threads", format!("at most 1024, got {}", self.threads)));
        }
        Ok(())
    }
}
