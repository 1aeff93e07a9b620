use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Gaussian rationals.
    Exact,
    /// Double-precision complex numbers.
    Approx,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// Truncated power series, germ calculus and planar foliations.
#[derive(Debug, Parser, Serialize)]
#[command(name = "germcalc", version)]
pub struct Cli {
    /// Scalar arithmetic; defaults to exact, or approx for holonomy.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,

    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Factorial a-norm of a series.
    Norm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
    },
    /// The derivative constant D(k, alpha, beta).
    Dconst {
        #[arg(short, long)]
        k: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
    },
    /// f(g_1, ..., g_m); G holds one series or an array of m.
    Compose {
        f: PathBuf,
        g: PathBuf,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Compositional inverse of a one-variable diffeomorphism germ.
    Invert {
        d: PathBuf,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Checks [f, [f, g∘g]] = id up to an order.
    Solvable2 {
        f: PathBuf,
        g: PathBuf,
        #[arg(long)]
        order: u32,
    },
    /// Rank scan of the cofactor matrices.
    Coprime {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        dmax: Option<u32>,
        /// Also estimate the quotient dimension at this degree.
        #[arg(long)]
        milnor: Option<u32>,
    },
    /// Lie series of a vector field; X holds an array of components.
    Flow {
        x: PathBuf,
        #[arg(long)]
        order: u32,
    },
    /// Solves P(z, f − f(0), f′, …, f⁽ᵏ⁾) = 0 around a jet.
    Odesolve {
        p: PathBuf,
        #[arg(short, long)]
        k: usize,
        /// Initial jet; zero when omitted.
        #[arg(long)]
        jet: Option<PathBuf>,
        #[arg(long)]
        order: u32,
    },
    /// Blow-up, singular points and holonomy of the foliation of (P, Q).
    Foliation(FoliationArgs),
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("task").required(true).args(["check", "singular", "holonomy"])))]
pub struct FoliationArgs {
    pub p: PathBuf,
    pub q: PathBuf,
    /// Exceptional-divisor data and the membership test.
    #[arg(long)]
    pub check: bool,
    /// Singular points on the exceptional line.
    #[arg(long)]
    pub singular: bool,
    /// Holonomy of one loop, or the solvability report without --loop.
    #[arg(long)]
    pub holonomy: bool,
    /// `around:j` for the loop around the j-th singular point.
    #[arg(long = "loop", requires = "holonomy")]
    pub loop_spec: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub fit_degree: u32,
    /// Relative tolerance of the integrator.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
    /// Order of the solvability relation; defaults to the fit degree.
    #[arg(long)]
    pub order: Option<u32>,
}
