//! `polylog-hodge`: command-line front end for the verification harnesses.
//!
//! Exit status is 0 when every check passes, 1 when a verification fails
//! and 2 on usage or domain errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "polylog-hodge",
    version,
    about = "Polylogarithm and logarithm-sheaf verification harnesses"
)]
struct Cli {
    /// Report format; each command has its own default.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Function {
    #[value(name = "li")]
    #[serde(rename = "li")]
    Li,
    #[value(name = "L")]
    #[serde(rename = "L")]
    L,
    #[value(name = "D")]
    #[serde(rename = "D")]
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `D_m(1/t) = D_m(t)` (even m), `+ (log|t|)^m/m!` (odd m)
    Stated,
    /// `D_m(1/t) = -D_m(t)` (even m), `+ (-1)^{(m-1)/2} (log|t|)^m/m!` (odd m)
    Inversion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Above,
    Below,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate Li_k, L_m or D_m at a complex point.
    Eval {
        function: Function,
        /// Order k (for li) or m (for L and D).
        order: u32,
        /// Point such as 0.5, -2, 0.3+0.4i or 2i.
        #[arg(allow_hyphen_values = true)]
        t: String,
        /// Side of the cut [1, ∞) for points exactly on it.
        #[arg(long)]
        cut_side: Option<Side>,
    },
    /// Check the inversion relation of D_m at seeded sample points.
    FeCheck {
        /// Largest order m.
        #[arg(long = "m", default_value_t = 10)]
        m_max: u32,
        #[arg(long, default_value_t = 500)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Relation::Stated)]
        relation: Relation,
    },
    /// Compare exact dim H^m(X, Log^N) with the closed formula.
    Cohomology {
        #[arg(long)]
        g: usize,
        #[arg(long = "N")]
        n: u32,
    },
    /// Check ∇α = η - ξ, ∇η = 0 and ∇ξ = 0 at random points.
    CocycleVerify {
        #[arg(long)]
        g: usize,
        #[arg(long = "N")]
        n: u32,
        /// Defaults to 100 for g = 1 and 50 otherwise.
        #[arg(long)]
        points: Option<usize>,
        /// Defaults to 1e-6 for g = 1 and 1e-5 otherwise.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long = "fd-step", default_value_t = polylog_hodge::cocycle::DEFAULT_FD_STEP)]
        fd_step: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Specialize the polylogarithm to the nontrivial d-th roots of unity.
    Specialize {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 8)]
        kmax: u32,
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
    },
}

/// Parameters of a run, embedded in every JSON report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<Function>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_side: Option<Side>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<Relation>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn validate(&self) -> anyhow::Result<()> {
        if let Some(tol) = self.tol {
            anyhow::ensure!(
                tol >= 0.0 && tol.is_finite(),
                "tolerance must be finite and non-negative, got {tol}"
            );
        }
        if let Some(h) = self.h {
            anyhow::ensure!(
                h > 0.0 && h.is_finite(),
                "finite-difference step must be positive, got {h}"
            );
        }
        if let Some(g) = self.g {
            anyhow::ensure!(g >= 1, "g must be at least 1");
        }
        if let Some(points) = self.points {
            anyhow::ensure!(points >= 1, "need at least one sample point");
        }
        Ok(())
    }
}

/// Whether every check in a report passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl From<bool> for Outcome {
    fn from(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("POLYLOG_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("POLYLOG_THREADS must be a positive integer, got {v:?}"))?;
        anyhow::ensure!(n >= 1, "POLYLOG_THREADS must be a positive integer, got {v:?}");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    configure_threads()?;
    let out = cli.out;
    let format = cli.format;
    match cli.command {
        Command::Eval {
            function,
            order,
            t,
            cut_side,
        } => commands::eval(function, order, &t, cut_side, format, out),
        Command::FeCheck {
            m_max,
            points,
            seed,
            tol,
            relation,
        } => commands::fe_check(m_max, points, seed, tol, relation, format, out),
        Command::Cohomology { g, n } => commands::cohomology(g, n, format, out),
        Command::CocycleVerify {
            g,
            n,
            points,
            tol,
            fd_step,
            seed,
        } => commands::cocycle_verify(g, n, points, tol, fd_step, seed, format, out),
        Command::Specialize { d, kmax, tol } => commands::specialize(d, kmax, tol, format, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
