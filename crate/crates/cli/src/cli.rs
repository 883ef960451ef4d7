use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qam", version, about = "Quantum analogue associative memory toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    #[value(name = "REAL", alias = "real")]
    Real,
    #[value(name = "COMPLEX", alias = "complex")]
    Complex,
}

impl From<FieldArg> for qam::Field {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Real => qam::Field::Real,
            FieldArg::Complex => qam::Field::Complex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Deterministic,
    Sampled,
    Multicopy,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Store labeled graymaps as a pattern bank.
    #[command(name = "bank-build")]
    BankBuild {
        #[arg(long)]
        out: PathBuf,
        /// A label followed by the image stored under it; repeat per pattern.
        #[arg(long = "label", num_args = 2, value_names = ["LABEL", "IMAGE"], action = clap::ArgAction::Append, required = true)]
        entries: Vec<String>,
        #[arg(long, value_enum, default_value = "REAL")]
        field: FieldArg,
    },

    /// Recognize an input against a bank.
    Recognize {
        #[arg(long)]
        bank: PathBuf,
        /// PGM image or QAMSTATE file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "deterministic")]
        mode: ModeArg,
        /// Copies of the signal for multicopy mode.
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        copies: u64,
        /// Measurement shots for sampled mode.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, env = "QAM_SEED", default_value_t = 0)]
        seed: u64,
    },

    /// Correct an input by projecting it onto the span of stored images.
    Correct {
        #[arg(long, num_args = 1.., required = true)]
        images: Vec<PathBuf>,
        #[arg(long)]
        input: PathBuf,
        /// Relative tolerance for dropping dependent images.
        #[arg(long, default_value_t = qam::aaam::DEPENDENCE_TOL)]
        tol: f64,
        /// Where to write the corrected state.
        #[arg(long, default_value = "corrected.qam")]
        out: PathBuf,
    },

    /// Histogram of repeated measurements in the basis of an orthogonal bank.
    Measure {
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, env = "QAM_SEED", default_value_t = 0)]
        seed: u64,
    },

    /// Survival probability through a sequence of filters.
    Chain {
        #[arg(long, num_args = 1.., required = true)]
        filters: Vec<PathBuf>,
        #[arg(long)]
        input: PathBuf,
        /// Also simulate this many particles.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: Option<u64>,
        #[arg(long, env = "QAM_SEED", default_value_t = 0)]
        seed: u64,
    },

    /// Overlap statistics of random unit vectors.
    Stats {
        /// Comma-separated dimensions, each at least 2.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, env = "QAM_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "REAL")]
        field: FieldArg,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },

    /// Absolute Gram matrix of a bank.
    Gram {
        #[arg(long)]
        bank: PathBuf,
    },
}
