use serde::{Deserialize, Serialize};

use crate::construction::{beta_to_b, BigElement, CounterexampleSpec};
use crate::words::{MixedWord, VariableSubstitution};
use crate::{Elem, Error, Result};

/// A coefficient-free word prepared for transfer: its normal form
/// `σ(w) = x^m·u` with `u` in the commutator subgroup.
#[derive(Clone, Debug)]
pub struct Transfer {
    word: MixedWord,
    m: u64,
    sub: VariableSubstitution,
    sub_inv: VariableSubstitution,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferOutcome {
    pub assignment: Vec<Elem>,
    /// Index of the point of `S` whose coordinate map was used.
    pub point: usize,
    pub m: u64,
}

impl Transfer {
    pub fn new(word: &MixedWord) -> Result<Self> {
        let (m, sub) = word.normalize_power_form()?;
        let sub_inv = sub.inverse();
        Ok(Transfer {
            word: word.clone(),
            m,
            sub,
            sub_inv,
        })
    }

    pub fn word(&self) -> &MixedWord {
        &self.word
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Turns a solution of `w = diag(h)` in `G` into a solution of `w = h`
    /// in `H`.
    pub fn run(&self, spec: &CounterexampleSpec, target: Elem, gsol: &[BigElement]) -> Result<TransferOutcome> {
        let h = spec.h();
        let w = &self.word;
        let nvars = w.nvars();
        if gsol.len() < nvars {
            return Err(Error::MissingAssignment(gsol.len()));
        }
        for x in gsol {
            spec.validate_element(x)?;
        }
        if w.evaluate(spec, gsol, |_| unreachable!("no coefficients"))? != spec.diag(target) {
            return Err(Error::NotASolution);
        }
        if nvars == 0 {
            return Ok(TransferOutcome {
                assignment: Vec::new(),
                point: 0,
                m: 0,
            });
        }
        // w(ĝ) = σ(w)(g') with g'_i = σ⁻¹(x_i)(ĝ)
        let moved = self.sub_inv.precompose(spec, &gsol[..nvars])?;
        // σ(w) = x^m·u: the point must kill the F-part of x
        let point = if self.m == 0 {
            0
        } else {
            spec.vanishing_point(moved[0].f)
                .ok_or_else(|| Error::Internal("a member of F vanishes nowhere on S".into()))?
        };
        let witness = spec.witness();
        let in_h: Vec<Elem> = moved
            .iter()
            .map(|x| beta_to_b(h, &witness, spec.phi(point, x)))
            .collect();
        // back through σ: a_i = σ(x_i)(in_h), so w(a) = σ(w)(in_h)
        let assignment = self.sub.precompose(h, &in_h)?;
        if w.evaluate_in(h, &assignment)? != target {
            return Err(Error::Internal(format!(
                "transferred assignment does not solve {} = {}",
                w,
                h.name(target)
            )));
        }
        Ok(TransferOutcome {
            assignment,
            point,
            m: self.m,
        })
    }
}

/// One-shot [`Transfer::run`].
pub fn solution_transfer(
    spec: &CounterexampleSpec,
    w: &MixedWord,
    target: Elem,
    gsol: &[BigElement],
) -> Result<TransferOutcome> {
    Transfer::new(w)?.run(spec, target, gsol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::construction::{build_spec, SpecOptions};
    use crate::words::random_word;
    use crate::Group;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q8_spec() -> CounterexampleSpec {
        build_spec(&catalog::quaternion(), &SpecOptions::default()).unwrap()
    }

    fn w(s: &str) -> MixedWord {
        MixedWord::parse(s, None).unwrap()
    }

    #[test]
    fn identity_pipeline() {
        let spec = q8_spec();
        for x in spec.h().elements() {
            let out = solution_transfer(&spec, &w("x"), x, &[spec.diag(x)]).unwrap();
            assert_eq!(out.assignment, [x]);
        }
    }

    #[test]
    fn diagonal_square_root() {
        let spec = q8_spec();
        let h = spec.h();
        let i = h.elem_by_name("i").unwrap();
        let out = solution_transfer(&spec, &w("x^2"), h.elem_by_name("-1").unwrap(), &[spec.diag(i)]).unwrap();
        assert_eq!(out.assignment, [i]);
    }

    #[test]
    fn square_roots_with_nonzero_f_part() {
        let spec = q8_spec();
        let h = spec.h();
        let minus = spec.diag(h.elem_by_name("-1").unwrap());
        let square = w("x^2");
        let t = Transfer::new(&square).unwrap();
        let mut hits = 0;
        for idx in 0..spec.element_count().unwrap() {
            let x = spec.element(idx);
            if x.f != spec.zero_function() && spec.mul(&x, &x) == minus {
                let out = t.run(&spec, h.elem_by_name("-1").unwrap(), &[x]).unwrap();
                let r = out.assignment[0];
                assert!(["i", "-i", "j", "-j", "k", "-k"].contains(&h.name(r)));
                hits += 1;
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn rejects_non_solutions() {
        let spec = q8_spec();
        let e = solution_transfer(&spec, &w("x"), Elem::IDENTITY, &[spec.pure_f(1)]).unwrap_err();
        assert!(matches!(e, Error::NotASolution));
    }

    #[test]
    fn random_words_with_random_solutions() {
        let spec = q8_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut hits = 0;
        for _ in 0..400 {
            let nvars = rng.gen_range(1..=3);
            let word = random_word(&mut rng, 8, nvars);
            let t = Transfer::new(&word).unwrap();
            for _ in 0..64 {
                let a: Vec<BigElement> = (0..word.nvars())
                    .map(|_| spec.element(rng.gen_range(0..spec.element_count().unwrap())))
                    .collect();
                let v = word.evaluate(&spec, &a, |_| unreachable!()).unwrap();
                if let Some(target) = spec.is_diagonal(&v) {
                    t.run(&spec, target, &a).unwrap();
                    hits += 1;
                }
            }
        }
        assert!(hits > 0);
    }
}
