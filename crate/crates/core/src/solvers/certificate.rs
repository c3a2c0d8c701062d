use serde::{Deserialize, Serialize};

use super::audit::VcEvidence;
use super::backtrack::backtracking_solve;
use crate::construction::{build_equation_system, obvious_solution, BigElement, CounterexampleSpec, SpecDocument};
use crate::{Error, Group, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSummary {
    pub nvars: usize,
    pub equations: usize,
    pub tag_counts: [usize; 5],
}

/// A solution over `G` with the value of every equation, as element indices
/// of `G` (0 is the identity).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSolution {
    pub assignment: Vec<BigElement>,
    pub residuals: Vec<u64>,
    pub all_identity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnsatRecord {
    pub budget: u64,
    pub nodes: u64,
    pub domain_sizes: Vec<usize>,
    pub forced: u64,
    pub exhausted: bool,
}

/// Record of a run showing that the diagonal `H` is not algebraically
/// closed in `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub spec: SpecDocument,
    pub system: SystemSummary,
    pub g_solution: GSolution,
    pub h_unsat: UnsatRecord,
    pub vc_evidence: Option<VcEvidence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub equations: usize,
    pub residuals_identity: bool,
    pub residuals_match: bool,
    pub unsat_exhausted: bool,
    pub ok: bool,
    pub problems: Vec<String>,
}

fn residual_index(spec: &CounterexampleSpec, x: &BigElement) -> u64 {
    if *x == spec.identity() {
        0
    } else {
        // identity sits at index 0 only up to the zero function's position
        spec.index_of(x).max(1)
    }
}

/// Solves the non-closedness system over `G` with the obvious assignment and proves
/// it unsolvable over `H` by exhaustive search.
pub fn certify_not_algebraically_closed(spec: &CounterexampleSpec, budget: u64, seed: u64) -> Result<Certificate> {
    let system = build_equation_system(spec);
    let assignment = obvious_solution(spec);
    let one = spec.identity();
    let mut residuals = Vec::with_capacity(system.len());
    for eq in system.equations() {
        let v = eq.word.evaluate(spec, &assignment, |c| spec.diag(c))?;
        residuals.push(if v == one { 0 } else { residual_index(spec, &v) });
    }
    if residuals.iter().any(|&r| r != 0) {
        return Err(Error::Internal("the obvious assignment does not solve the system over G".into()));
    }
    let outcome = backtracking_solve(&system, spec.h(), budget);
    if let Some(sol) = outcome.solution {
        return Err(Error::Internal(format!(
            "the system is solvable over H ({} variables assigned)",
            sol.len()
        )));
    }
    if !outcome.exhausted {
        return Err(Error::budget("search nodes", format!("more than {budget}"), budget));
    }
    Ok(Certificate {
        tool: "vclab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        spec: spec.to_document(),
        system: SystemSummary {
            nvars: system.nvars(),
            equations: system.len(),
            tag_counts: system.tag_counts(),
        },
        g_solution: GSolution {
            assignment,
            residuals,
            all_identity: true,
        },
        h_unsat: UnsatRecord {
            budget,
            nodes: outcome.stats.nodes,
            domain_sizes: outcome.stats.domain_sizes,
            forced: outcome.stats.forced,
            exhausted: true,
        },
        vc_evidence: None,
    })
}

/// Rebuilds the spec and the system from a stored certificate and re-checks
/// the recorded solution over `G`. The search over `H` is not re-run.
pub fn verify_certificate(cert: &Certificate) -> Result<CertificateCheck> {
    let spec = CounterexampleSpec::from_document(&cert.spec)?;
    let system = build_equation_system(&spec);
    let mut problems = Vec::new();
    if system.nvars() != cert.system.nvars || system.len() != cert.system.equations {
        problems.push(format!(
            "system has {} variables and {} equations, certificate says {} and {}",
            system.nvars(),
            system.len(),
            cert.system.nvars,
            cert.system.equations
        ));
    }
    if cert.g_solution.assignment.len() < system.nvars() {
        return Err(Error::MissingAssignment(cert.g_solution.assignment.len()));
    }
    for x in &cert.g_solution.assignment {
        spec.validate_element(x)?;
    }
    let one = spec.identity();
    let mut recomputed = Vec::with_capacity(system.len());
    for eq in system.equations() {
        let v = eq.word.evaluate(&spec, &cert.g_solution.assignment, |c| spec.diag(c))?;
        recomputed.push(if v == one { 0 } else { residual_index(&spec, &v) });
    }
    let residuals_identity = recomputed.iter().all(|&r| r == 0);
    if !residuals_identity {
        let bad = recomputed.iter().position(|&r| r != 0).unwrap_or(0);
        problems.push(format!("equation {} is not solved over G", system.equations()[bad].label));
    }
    let residuals_match = recomputed == cert.g_solution.residuals;
    if !residuals_match {
        problems.push("recorded residuals differ from the recomputed ones".into());
    }
    if cert.g_solution.all_identity != residuals_identity {
        problems.push("all_identity flag is wrong".into());
    }
    let unsat_exhausted = cert.h_unsat.exhausted;
    if !unsat_exhausted {
        problems.push("the search over H was not exhaustive".into());
    }
    if let Some(ev) = &cert.vc_evidence {
        if ev.violations > 0 {
            problems.push(format!("verbal-closedness audit recorded {} violations", ev.violations));
        }
    }
    Ok(CertificateCheck {
        equations: system.len(),
        residuals_identity,
        residuals_match,
        unsat_exhausted,
        ok: problems.is_empty(),
        problems,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::construction::{build_spec, SpecOptions};

    fn q8_cert() -> Certificate {
        let spec = build_spec(&catalog::quaternion(), &SpecOptions::default()).unwrap();
        certify_not_algebraically_closed(&spec, 1 << 22, 7).unwrap()
    }

    #[test]
    fn q8_certificate() {
        let cert = q8_cert();
        assert_eq!(cert.system.equations, 58);
        assert!(cert.g_solution.all_identity);
        assert!(cert.h_unsat.exhausted);
        let check = verify_certificate(&cert).unwrap();
        assert!(check.ok, "{:?}", check.problems);
    }

    #[test]
    fn d4_certificate() {
        let spec = build_spec(&catalog::dihedral(4), &SpecOptions::default()).unwrap();
        let cert = certify_not_algebraically_closed(&spec, 1 << 22, 0).unwrap();
        assert!(verify_certificate(&cert).unwrap().ok);
    }

    #[test]
    fn tiny_budget_is_not_a_proof() {
        let spec = build_spec(&catalog::quaternion(), &SpecOptions::default()).unwrap();
        let e = certify_not_algebraically_closed(&spec, 2, 0).unwrap_err();
        assert!(e.is_budget());
    }

    #[test]
    fn tampering_is_caught() {
        let mut cert = q8_cert();
        cert.g_solution.assignment.swap(0, 1);
        cert.g_solution.assignment[0].f = cert.g_solution.assignment[1].f;
        let check = verify_certificate(&cert).unwrap();
        assert!(!check.ok);

        let mut cert = q8_cert();
        cert.h_unsat.exhausted = false;
        assert!(!verify_certificate(&cert).unwrap().ok);

        let mut cert = q8_cert();
        cert.spec.family.pop();
        assert!(verify_certificate(&cert).is_err() || !verify_certificate(&cert).unwrap().ok);
    }

    #[test]
    fn json_round_trip_is_stable() {
        let cert = q8_cert();
        let a = serde_json::to_string_pretty(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&a).unwrap();
        assert_eq!(back, cert);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), a);
    }
}
