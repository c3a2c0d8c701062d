use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "vclab",
    version,
    about = "Builds groups in which a finite group is verbally but not algebraically closed, and checks the result"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Centre, purity witness, special set and n for a group.
    Analyze {
        #[arg(value_name = "GROUP")]
        target: Option<String>,
    },
    /// Builds the construction for a group and reports its parameters.
    Construct {
        #[arg(value_name = "GROUP")]
        target: Option<String>,
    },
    /// Certifies that the diagonal copy is not algebraically closed.
    VerifyNac {
        #[arg(value_name = "GROUP")]
        target: Option<String>,
    },
    /// Runs the verbal-closedness audit.
    VerifyVc {
        #[arg(value_name = "GROUP")]
        target: Option<String>,
    },
    /// Checks the function lemma for --p, --k, --n and --m.
    Fnlemma {
        #[arg(long, conflicts_with = "sample")]
        enumerate: bool,
        #[arg(long)]
        sample: bool,
    },
    /// Construction, non-closedness certificate and audit in one run.
    Demo {
        #[arg(value_name = "GROUP")]
        target: Option<String>,
    },
    /// Re-checks a stored certificate (or a report carrying one).
    Verify { path: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Construct { .. } => "construct",
            Command::VerifyNac { .. } => "verify-nac",
            Command::VerifyVc { .. } => "verify-vc",
            Command::Fnlemma { .. } => "fnlemma",
            Command::Demo { .. } => "demo",
            Command::Verify { .. } => "verify",
        }
    }

    pub fn group(&self) -> Option<&str> {
        match self {
            Command::Analyze { target }
            | Command::Construct { target }
            | Command::VerifyNac { target }
            | Command::VerifyVc { target }
            | Command::Demo { target } => target.as_deref(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct Common {
    /// Catalog name (q8, d4, s3xz2, heis3, ...) or @path to a Cayley file.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Witness element, by name.
    #[arg(long, global = true)]
    pub b: Option<String>,
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true)]
    pub k: Option<u32>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Dimension of the point set.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    #[arg(long, global = true, env = "VCLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, global = true, default_value_t = 10)]
    pub max_len: usize,
    #[arg(long, global = true, default_value_t = 3)]
    pub max_vars: usize,
    /// Search nodes for the solver over H.
    #[arg(long, global = true, default_value_t = 1 << 24)]
    pub cap_nodes: u64,
    /// Largest function family enumerated.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    pub cap_family: usize,
    /// Largest point set listed explicitly.
    #[arg(long, global = true, default_value_t = 1 << 12)]
    pub cap_points: usize,
    /// Point sets or members examined by the function-lemma checks.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub cap_lemma: usize,
    /// Largest |G| swept completely by the power-word audit.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    pub cap_elements: u64,
    /// Largest number of assignments swept completely per curated word.
    #[arg(long, global = true, default_value_t = 1 << 23)]
    pub cap_pairs: u64,
    /// Largest group order whose subgroup lattice is enumerated.
    #[arg(long, global = true, default_value_t = 64)]
    pub cap_lattice: usize,
    /// Writes the report as JSON.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Writes the certificate alone as JSON (demo, verify-nac).
    #[arg(long, global = true)]
    pub cert_out: Option<PathBuf>,
}
