use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use moc_core::Complex64;
use serde::Serialize;

use crate::complex::parse_complex;

#[derive(Debug, Parser)]
#[command(name = "moc-lab", version, about = "Determinant-in-hull checks for normal matrix pairs")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunConfig {
    /// Relative membership tolerance.
    #[arg(long, global = true, default_value_t = 1e-8, value_parser = positive)]
    pub tol: f64,
    /// Maximum number of sigma-points to enumerate.
    #[arg(long, global = true, default_value_t = 3_628_800, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    /// Haar samples for the fiedler pipeline.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long = "out", global = true)]
    #[serde(skip)]
    pub out_path: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Suppress the summary line.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the normal dilation N(X, s) of a matrix file.
    Dilate {
        input: PathBuf,
        #[arg(long = "s", default_value = "0", allow_hyphen_values = true, value_parser = parse_complex)]
        s: Complex64,
    },
    /// Run a verification pipeline and write its report.
    Verify {
        #[command(subcommand)]
        pipeline: Pipeline,
    },
    /// Convert a report into plot-ready CSV.
    Export { report: PathBuf },
    /// Run a pipeline on random instances with seeds seed, seed+1, ...
    Batch {
        #[arg(value_enum)]
        pipeline: BatchPipeline,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        dim: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Pipeline {
    /// det(A + B) against the sigma-points of a normal pair.
    Moc { a: PathBuf, b: PathBuf },
    /// The dilation pair (N(X,s), N(Y,t)).
    Theorem1 {
        x: PathBuf,
        y: PathBuf,
        #[arg(long = "s", default_value = "0", allow_hyphen_values = true, value_parser = parse_complex)]
        s: Complex64,
        #[arg(long = "t", default_value = "0", allow_hyphen_values = true, value_parser = parse_complex)]
        t: Complex64,
    },
    /// det(A + U B U*) over Haar samples for a hermitian pair.
    Fiedler { a: PathBuf, b: PathBuf },
    /// Polynomial-coefficient hull for a hermitian pair.
    Drury { a: PathBuf, b: PathBuf },
    /// (A, B) against (VAV*, VBV*).
    Similarity { a: PathBuf, b: PathBuf, v: PathBuf },
    /// Composed certificate for (A⊕C, B⊕D).
    DirectSum {
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        d: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BatchPipeline {
    Moc,
    Theorem1,
    Fiedler,
    Drury,
    Similarity,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be positive and finite".into())
    }
}
