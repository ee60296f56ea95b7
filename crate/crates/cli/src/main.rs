//! `laguerre`: error curves, rules and rate checks as CSV or JSON tables.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use laguerre_core::Error;

/// Laguerre spectral approximation experiments.
#[derive(Debug, Parser)]
#[command(name = "laguerre", version)]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Emit a single JSON object instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the table to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gauss-Laguerre or Gauss-Laguerre-Radau nodes and weights.
    Nodes {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Number of points.
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        kind: RuleArg,
    },
    /// Expansion coefficients of a registry function.
    Coeffs {
        #[arg(long = "fn", value_name = "NAME")]
        function: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        nmax: usize,
        /// Scaling factor.
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long, value_enum, default_value_t = FormArg::Poly)]
        form: FormArg,
    },
    /// Projection error against degree.
    Project {
        #[arg(long = "fn", value_name = "NAME")]
        function: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        nmax: usize,
        #[arg(long, value_enum)]
        norm: NormArg,
        /// Scaling factor (maximum norm only).
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        /// Basis form; the weighted norm is computed for the polynomial form.
        #[arg(long, value_enum)]
        form: Option<FormArg>,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Interpolation error against degree, or interpolant values with --at.
    Interp {
        #[arg(long = "fn", value_name = "NAME")]
        function: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = PointsArg::Laguerre)]
        points: PointsArg,
        #[arg(long, value_enum, default_value_t = FormArg::Poly)]
        form: FormArg,
        #[arg(long)]
        nmax: usize,
        /// Evaluate the degree-nmax interpolant at these points; values
        /// beyond the largest node are flagged as extrapolated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        at: Vec<f64>,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Quadrature error against degree.
    Quad {
        #[arg(long = "fn", value_name = "NAME")]
        function: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = RuleArg::Gauss)]
        kind: RuleArg,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Error of the m-th derivative of the projection against degree.
    Diff {
        #[arg(long = "fn", value_name = "NAME")]
        function: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        nmax: usize,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Weeks inversion of a registry Laplace pair.
    Weeks {
        #[arg(long)]
        pair: String,
        /// Defaults to the pair's recorded sigma.
        #[arg(long, allow_negative_numbers = true)]
        sigma: Option<f64>,
        /// Defaults to the pair's recorded nu.
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// Fit the root-exponential rate of an error curve and compare it with
    /// the prediction; exits with status 3 when outside tolerance.
    Rate(RateArgs),
    /// Contour-integral coefficients against projected ones.
    Oracle {
        #[arg(long = "fn", value_name = "NAME")]
        function: String,
        /// Largest degree.
        #[arg(long)]
        k: usize,
        #[arg(long)]
        rho: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        alpha: f64,
    },
    /// Registry functions and Laplace pairs.
    List,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    /// Smallest degree in the sweep.
    #[arg(long, default_value_t = 1)]
    pub nmin: usize,
    #[arg(long, default_value_t = 1)]
    pub step: usize,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long = "fn", value_name = "NAME")]
    pub function: Option<String>,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 25)]
    pub nmin: usize,
    #[arg(long, default_value_t = 300)]
    pub nmax: usize,
    #[arg(long, default_value_t = 1)]
    pub step: usize,
    /// Scaling factor for `scaled` and `weeks`.
    #[arg(long)]
    pub nu: Option<f64>,
    /// Weeks abscissa shift.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Laplace pair for `weeks`.
    #[arg(long)]
    pub pair: Option<String>,
    /// Evaluation time for `weeks`.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Derivative order for `diff`.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Interpolation points for `interp`.
    #[arg(long, value_enum, default_value_t = PointsArg::Laguerre)]
    pub points: PointsArg,
    /// Relative tolerance on the root-exponential slope.
    #[arg(long, default_value_t = 0.10)]
    pub tol: f64,
    /// Errors at or below this value are excluded from the fit.
    #[arg(long, default_value_t = laguerre_core::verify::DEFAULT_FLOOR)]
    pub floor: f64,
    #[arg(long, value_enum, default_value_t = FitArg::Envelope)]
    pub fit: FitArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Gauss,
    Radau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Poly,
    Glf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Max,
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PointsArg {
    Laguerre,
    Radau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Coeff,
    ProjWeighted,
    ProjMax,
    Interp,
    Quad,
    Weeks,
    Diff,
    Scaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitArg {
    /// Upper envelope with the power held at its predicted value.
    Envelope,
    /// Free three-parameter fit of the raw curve.
    Free,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
    Io(String),
    OutOfTolerance,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownName { .. } | Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Numerical(_) | Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::OutOfTolerance => 3,
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}\n\nRun `laguerre --help` for usage."),
                Failure::Numerical(m) | Failure::Io(m) => eprintln!("error: {m}"),
                Failure::OutOfTolerance => {}
            }
            ExitCode::from(f.code())
        }
    }
}
