//! Command-line front end for `walkforge`.

pub mod acceptance;
pub mod commands;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::report::Format;

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "walkforge", version, about = "Discrete-time walks for Hermitian matrices and walk-based simulation")]
pub struct Cli {
    /// Seed for every randomized stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance profile.
    #[arg(long, global = true, value_enum, default_value_t = TolProfile::Default)]
    pub tol: TolProfile,
    /// Leave wall-clock fields out of the report.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TolProfile {
    Strict,
    Default,
    Loose,
}

impl TolProfile {
    pub fn tolerances(self) -> walkforge_core::Tolerances {
        match self {
            TolProfile::Strict => walkforge_core::Tolerances::STRICT,
            TolProfile::Default => walkforge_core::Tolerances::DEFAULT,
            TolProfile::Loose => walkforge_core::Tolerances::LOOSE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Perron,
    ColumnSum,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Compare the walk spectrum with the predicted eigenvalues.
    SpectrumCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Perron)]
        variant: Variant,
    },
    /// Lazy-walk limit error against its bound over a grid of τ and ε.
    LimitSweep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
        tau: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,0.25,0.0625")]
        eps: Vec<f64>,
        /// Basis state the procedure is applied to.
        #[arg(long, default_value_t = 0)]
        state: usize,
    },
    /// Product-formula error against the number of steps.
    TrotterBench {
        /// Matrix split into its diagonal and off-diagonal parts.
        #[arg(long, conflicts_with = "tree", required_unless_present = "tree")]
        input: Option<PathBuf>,
        /// Weighted tree split into two star forests.
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1)]
        order: u32,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64,128,256")]
        steps: Vec<usize>,
    },
    /// Phase-estimation simulation of e^{-iHt} on a basis state.
    PhaseSim {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        t: f64,
        /// Register size; defaults to the size required for `delta`.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        state: usize,
        /// Also require fidelity ≥ 1 - δ.
        #[arg(long)]
        strict: bool,
    },
    /// Spectrum, dynamics and query count of the element-distinctness walk.
    EdRun {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 2001)]
        points: usize,
    },
    /// Project the full Johnson-graph walk onto the reduced subspace.
    EdOracle {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_pair, default_value = "0,1")]
        pair: (usize, usize),
    },
    /// Paley-type Cayley graph Hamiltonian and its Fourier spectrum.
    Paley {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        c: u64,
    },
    /// Association-scheme axioms, idempotents and hiding success.
    SchemeVerify {
        #[arg(long)]
        p: u64,
    },
    /// Every acceptance criterion.
    AllAcceptance,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// Exit status for a finished run.
pub fn exit_code(result: &walkforge_core::Result<report::ExperimentReport>) -> i32 {
    match result {
        Ok(r) if r.passed => 0,
        Ok(_) => 2,
        Err(_) => 1,
    }
}
