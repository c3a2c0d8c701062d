use serde::{Deserialize, Serialize};
use vclab_core::group::NSearch;
use vclab_core::solvers::{Certificate, CertificateCheck, VcEvidence};
use vclab_core::zpk::FunctionLemmaReport;

use crate::args::Common;

/// Everything one invocation produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub argv: Vec<String>,
    pub command: Option<String>,
    pub parameters: Option<Common>,
    pub seed: u64,
    pub exit_code: i32,
    pub elapsed_ms: u64,
    pub result: Option<Outcome>,
    pub error: Option<String>,
    pub messages: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Analysis(Analysis),
    Construction(Box<Construction>),
    Certificate(Box<Certificate>),
    Audit(Audit),
    FunctionLemma(FnLemma),
    Check(CertificateCheck),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub b: String,
    pub p: u64,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub group: String,
    pub order: usize,
    pub abelian: bool,
    pub exponent: usize,
    pub centre: Vec<String>,
    pub centre_is_pure: bool,
    pub witness: Option<WitnessSummary>,
    pub special_set: Vec<String>,
    pub n: Option<NSearch>,
    pub generators_mod_centre: Vec<String>,
    /// A complement of the centre; `None` when there is none or it was not
    /// searched for.
    pub centre_direct_factor: Option<Vec<String>>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub group: String,
    pub witness: WitnessSummary,
    pub n_search: NSearch,
    pub n_used: usize,
    pub dim_m: usize,
    pub points: usize,
    pub family_size: usize,
    pub gens: Vec<String>,
    /// `|G|`, when it fits in 64 bits.
    pub order_g: Option<u64>,
    pub equations: usize,
    pub tag_counts: [usize; 5],
    pub certification: FunctionLemmaReport,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    pub group: String,
    pub order_g: Option<u64>,
    pub evidence: VcEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FnLemma {
    pub report: FunctionLemmaReport,
    /// Value tables of every member, listed when the family is small.
    pub functions: Option<Vec<Vec<u32>>>,
}
