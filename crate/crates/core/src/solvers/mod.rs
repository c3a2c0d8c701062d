//! Evaluation and solving of equations over finite groups, the certificate
//! that `H` is not algebraically closed in `G`, and the verbal-closedness
//! audit with its solution-transfer pipeline.

mod audit;
mod backtrack;
mod certificate;
mod transfer;

pub use audit::{curated_words, verbal_closedness_audit, AuditOptions, TierKind, TierReport, VcEvidence};
pub use backtrack::{backtracking_solve, enumerate_solve, SolveOutcome, SolveStats};
pub use certificate::{
    certify_not_algebraically_closed, verify_certificate, Certificate, CertificateCheck, GSolution,
    SystemSummary, UnsatRecord,
};
pub use transfer::{solution_transfer, Transfer, TransferOutcome};

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::construction::{BigElement, CounterexampleSpec, EquationSystem};
use crate::words::MixedWord;
use crate::{Elem, FiniteGroup, Group, Result};

/// Whether each equation evaluates to the identity.
pub fn eval_system<G: Group>(
    system: &EquationSystem,
    carrier: &G,
    assignment: &[G::Element],
    embed: impl Fn(Elem) -> G::Element,
) -> Result<Vec<bool>> {
    if assignment.len() < system.nvars() {
        return Err(crate::Error::MissingAssignment(assignment.len()));
    }
    let one = carrier.identity();
    system
        .equations()
        .iter()
        .map(|eq| Ok(eq.word.evaluate(carrier, assignment, &embed)? == one))
        .collect()
}

/// [`eval_system`] over `H`, coefficients standing for themselves.
pub fn eval_system_in_h(system: &EquationSystem, h: &FiniteGroup, assignment: &[Elem]) -> Result<Vec<bool>> {
    eval_system(system, h, assignment, |c| c)
}

/// [`eval_system`] over `G`, coefficients embedded diagonally.
pub fn eval_system_in_g(
    system: &EquationSystem,
    spec: &CounterexampleSpec,
    assignment: &[BigElement],
) -> Result<Vec<bool>> {
    eval_system(system, spec, assignment, |c| spec.diag(c))
}

/// Values of a word over a finite group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueSet {
    pub values: Vec<Elem>,
    /// All `|carrier|^vars` assignments were evaluated.
    pub complete: bool,
    pub evaluated: u64,
}

/// Every value of `w`, by full enumeration when `|carrier|^vars <= budget`,
/// otherwise from `budget` seeded random assignments.
pub fn value_set(w: &MixedWord, carrier: &FiniteGroup, budget: u64) -> Result<ValueSet> {
    let nvars = w.nvars();
    let order = carrier.order() as u64;
    let total = (0..nvars).try_fold(1u64, |acc, _| acc.checked_mul(order));
    let mut values = BTreeSet::new();
    let mut assignment = vec![Elem::IDENTITY; nvars];
    match total {
        Some(total) if total <= budget => {
            for idx in 0..total {
                let mut rest = idx;
                for v in (0..nvars).rev() {
                    assignment[v] = Elem((rest % order) as u32);
                    rest /= order;
                }
                values.insert(w.evaluate_in(carrier, &assignment)?);
            }
            Ok(ValueSet {
                values: values.into_iter().collect(),
                complete: true,
                evaluated: total,
            })
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(budget);
            for _ in 0..budget {
                for a in assignment.iter_mut() {
                    *a = Elem(rng.gen_range(0..order as u32));
                }
                values.insert(w.evaluate_in(carrier, &assignment)?);
            }
            Ok(ValueSet {
                values: values.into_iter().collect(),
                complete: false,
                evaluated: budget,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::construction::{build_equation_system, build_spec, obvious_solution, SpecOptions};

    fn names(g: &FiniteGroup, v: &ValueSet) -> Vec<String> {
        v.values.iter().map(|&e| g.name(e).to_string()).collect()
    }

    #[test]
    fn value_set_examples() {
        let q8 = catalog::quaternion();
        let x = MixedWord::parse("x", None).unwrap();
        assert_eq!(value_set(&x, &q8, 1000).unwrap().values.len(), 8);
        let sq = MixedWord::parse("x^2", None).unwrap();
        let v = value_set(&sq, &q8, 1000).unwrap();
        assert!(v.complete);
        assert_eq!(names(&q8, &v), ["1", "-1"]);
        let s3 = catalog::symmetric(3);
        let comm = MixedWord::parse("x^-1 y^-1 x y", None).unwrap();
        let v = value_set(&comm, &s3, 1000).unwrap();
        assert_eq!(v.evaluated, 36);
        assert_eq!(names(&s3, &v), ["1", "(123)", "(132)"]);
        let sampled = value_set(&comm, &s3, 10).unwrap();
        assert!(!sampled.complete);
    }

    #[test]
    fn eval_system_examples() {
        let spec = build_spec(&catalog::quaternion(), &SpecOptions::default()).unwrap();
        let sys = build_equation_system(&spec);
        let sol = obvious_solution(&spec);
        assert!(eval_system_in_g(&sys, &spec, &sol).unwrap().iter().all(|&ok| ok));
        let ones = vec![Elem::IDENTITY; sys.nvars()];
        let res = eval_system_in_h(&sys, spec.h(), &ones).unwrap();
        for (eq, ok) in sys.equations().iter().zip(res) {
            assert_eq!(ok, eq.tag != 3);
        }
        assert!(eval_system_in_h(&sys, spec.h(), &ones[1..]).is_err());
    }

    #[test]
    fn eval_system_matches_word_evaluation() {
        use rand::{Rng, SeedableRng};
        let spec = build_spec(&catalog::dihedral(4), &SpecOptions::default()).unwrap();
        let sys = build_equation_system(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a: Vec<Elem> = (0..sys.nvars()).map(|_| Elem(rng.gen_range(0..8))).collect();
            let res = eval_system_in_h(&sys, spec.h(), &a).unwrap();
            for (eq, ok) in sys.equations().iter().zip(res) {
                assert_eq!(ok, eq.word.evaluate_in(spec.h(), &a).unwrap() == Elem::IDENTITY);
            }
        }
    }
}
