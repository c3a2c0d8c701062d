use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::transfer::Transfer;
use super::value_set;
use crate::construction::{BigElement, CounterexampleSpec};
use crate::words::{random_word, MixedWord};
use crate::{Elem, Group, Result};

/// `[x,y]`, `x²y²`, `(xy)²`, `x²y⁻²`.
pub fn curated_words() -> Vec<MixedWord> {
    ["x^-1 y^-1 x y", "x^2 y^2", "x y x y", "x^2 y^-2"]
        .iter()
        .map(|w| MixedWord::parse(w, None).expect("curated word"))
        .collect()
}

#[derive(Clone, Debug)]
pub struct AuditOptions {
    pub curated: Vec<MixedWord>,
    /// Largest `|G|` swept completely for power words.
    pub element_cap: u64,
    /// Largest `|G|^2` swept completely for the curated words.
    pub pair_cap: u64,
    /// Random words in the sampled tier; also the sample size of a
    /// downgraded tier.
    pub trials: usize,
    pub max_len: usize,
    pub max_vars: usize,
    /// Random assignments tried per random word.
    pub samples_per_word: usize,
    pub seed: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            curated: curated_words(),
            element_cap: 1 << 16,
            pair_cap: 1 << 23,
            trials: 200,
            max_len: 10,
            max_vars: 3,
            samples_per_word: 64,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TierKind {
    Power,
    Curated,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TierReport {
    pub kind: TierKind,
    pub word: String,
    /// Every assignment over `G` was evaluated.
    pub complete: bool,
    pub assignments: u64,
    /// Assignments whose value lies in the diagonal copy of `H`.
    pub diagonal_hits: u64,
    /// Hits turned into a verified solution in `H`.
    pub transferred: u64,
    pub violations: u64,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcEvidence {
    pub exponent_g: Option<u64>,
    pub tiers: Vec<TierReport>,
    /// Word classes for which every assignment over `G` was checked.
    pub complete_classes: Vec<String>,
    pub sampled_assignments: u64,
    pub violations: u64,
    pub seed: u64,
}

#[derive(Default)]
struct Tally {
    assignments: u64,
    hits: u64,
    transferred: u64,
    violations: u64,
    first: Option<String>,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.assignments += o.assignments;
        self.hits += o.hits;
        self.transferred += o.transferred;
        self.violations += o.violations;
        self.first = self.first.or(o.first);
        self
    }

    /// Records one evaluation of `t`'s word at `a`; `h_values` are the values
    /// of the word over `H` when known.
    fn record(&mut self, spec: &CounterexampleSpec, t: &Transfer, a: &[BigElement], h_values: Option<&BTreeSet<Elem>>) -> Result<()> {
        self.assignments += 1;
        let v = t.word().evaluate(spec, a, |_| unreachable!("no coefficients"))?;
        let Some(target) = spec.is_diagonal(&v) else {
            return Ok(());
        };
        self.hits += 1;
        let mut bad = h_values.is_some_and(|s| !s.contains(&target));
        match t.run(spec, target, a) {
            Ok(_) => self.transferred += 1,
            Err(e) => {
                bad = true;
                self.first.get_or_insert_with(|| e.to_string());
            }
        }
        if bad {
            self.violations += 1;
            self.first
                .get_or_insert_with(|| format!("{} = {} has no solution in H", t.word(), spec.h().name(target)));
        }
        Ok(())
    }

    fn report(self, kind: TierKind, word: String, complete: bool, note: Option<String>) -> TierReport {
        TierReport {
            kind,
            word,
            complete,
            assignments: self.assignments,
            diagonal_hits: self.hits,
            transferred: self.transferred,
            violations: self.violations,
            note: note.or(self.first),
        }
    }
}

fn random_element<R: Rng>(spec: &CounterexampleSpec, rng: &mut R) -> BigElement {
    let f = rng.gen_range(0..spec.family().len() as u32);
    let order = spec.h().order() as u32;
    BigElement {
        f,
        comps: (0..spec.npoints()).map(|_| Elem(rng.gen_range(0..order))).collect(),
    }
}

fn element_order(spec: &CounterexampleSpec, g: &BigElement) -> u64 {
    let one = spec.identity();
    let mut x = g.clone();
    let mut n = 1;
    while x != one {
        x = spec.mul(&x, g);
        n += 1;
    }
    n
}

fn power_tier(spec: &CounterexampleSpec, count: u64, exponent: u64) -> Result<Vec<TierReport>> {
    let h = spec.h();
    let mut out = Vec::new();
    for e in 1..=exponent {
        let word = MixedWord::from_powers(&[(0, e as i64)], 1);
        let t = Transfer::new(&word)?;
        let h_powers: BTreeSet<Elem> = h.elements().map(|x| h.power(x, e as i64)).collect();
        let tally = (0..count)
            .into_par_iter()
            .map(|i| -> Result<(Tally, BTreeSet<Elem>)> {
                let mut tally = Tally::default();
                let g = spec.element(i);
                tally.record(spec, &t, std::slice::from_ref(&g), Some(&h_powers))?;
                let mut seen = BTreeSet::new();
                if let Some(d) = spec.is_diagonal(&spec.pow(&g, e as i64)) {
                    seen.insert(d);
                }
                Ok((tally, seen))
            })
            .try_reduce(
                || (Tally::default(), BTreeSet::new()),
                |(a, mut sa), (b, sb)| {
                    sa.extend(sb);
                    Ok((a.merge(b), sa))
                },
            )?;
        let (mut tally, seen) = tally;
        // diag(H) ∩ {g^e} must be exactly {diag(h^e)}
        if seen != h_powers {
            tally.violations += 1;
            tally.first.get_or_insert_with(|| format!("diagonal {e}-th powers differ from those of H"));
        }
        out.push(tally.report(TierKind::Power, word.to_string(), true, None));
    }
    Ok(out)
}

fn curated_tier(spec: &CounterexampleSpec, word: &MixedWord, opts: &AuditOptions, rng: &mut ChaCha8Rng) -> Result<TierReport> {
    let t = Transfer::new(word)?;
    let nvars = word.nvars();
    let h_values: BTreeSet<Elem> = value_set(word, spec.h(), u64::MAX)?.values.into_iter().collect();
    let count = spec.element_count();
    let total = count.and_then(|c| c.checked_pow(nvars as u32));
    match (count, total) {
        (Some(count), Some(total)) if nvars == 2 && total <= opts.pair_cap => {
            let tally = (0..count)
                .into_par_iter()
                .map(|i| -> Result<Tally> {
                    let mut tally = Tally::default();
                    let a = spec.element(i);
                    for j in 0..count {
                        tally.record(spec, &t, &[a.clone(), spec.element(j)], Some(&h_values))?;
                    }
                    Ok(tally)
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
            Ok(tally.report(TierKind::Curated, word.to_string(), true, None))
        }
        (Some(count), Some(total)) if total <= opts.pair_cap => {
            let mut tally = Tally::default();
            let mut a = vec![spec.identity(); nvars];
            for idx in 0..total {
                let mut rest = idx;
                for v in (0..nvars).rev() {
                    a[v] = spec.element(rest % count);
                    rest /= count;
                }
                tally.record(spec, &t, &a, Some(&h_values))?;
            }
            Ok(tally.report(TierKind::Curated, word.to_string(), true, None))
        }
        _ => {
            let mut tally = Tally::default();
            for _ in 0..opts.trials {
                let a: Vec<BigElement> = (0..nvars).map(|_| random_element(spec, rng)).collect();
                tally.record(spec, &t, &a, Some(&h_values))?;
            }
            let note = format!(
                "|G|^{nvars} exceeds the cap {}; downgraded to {} sampled assignments",
                opts.pair_cap, opts.trials
            );
            Ok(tally.report(TierKind::Curated, word.to_string(), false, Some(note)))
        }
    }
}

/// Evidence that the diagonal `H` is verbally closed in `G`:
///
/// * power words `x^e`, `e = 1..exp(G)`, over all of `G`;
/// * the curated words over all of `G^2`;
/// * random words on random assignments, plus assignments drawn from the
///   diagonal itself.
///
/// Every diagonal value found is pushed through the solution transfer and
/// re-checked in `H`. Tiers whose sweep would exceed its cap are sampled
/// instead, and say so.
pub fn verbal_closedness_audit(spec: &CounterexampleSpec, opts: &AuditOptions) -> Result<VcEvidence> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut tiers = Vec::new();
    let mut complete_classes = Vec::new();
    let count = spec.element_count().filter(|&c| c <= opts.element_cap);

    let exponent_g = match count {
        Some(count) => {
            let exp = (0..count)
                .into_par_iter()
                .map(|i| element_order(spec, &spec.element(i)))
                .reduce(|| 1, num_integer::lcm);
            tiers.extend(power_tier(spec, count, exp)?);
            complete_classes.push(format!("x^e for e = 1..{exp}"));
            Some(exp)
        }
        None => {
            let exp = spec.h().exponent() as u64 * spec.ring().modulus() as u64;
            for e in 1..=exp {
                let word = MixedWord::from_powers(&[(0, e as i64)], 1);
                let t = Transfer::new(&word)?;
                let mut tally = Tally::default();
                for _ in 0..opts.trials {
                    tally.record(spec, &t, &[random_element(spec, &mut rng)], None)?;
                }
                let note = format!("|G| exceeds the cap {}; downgraded to sampling", opts.element_cap);
                tiers.push(tally.report(TierKind::Power, word.to_string(), false, Some(note)));
            }
            None
        }
    };

    for word in &opts.curated {
        let report = curated_tier(spec, word, opts, &mut rng)?;
        if report.complete {
            complete_classes.push(report.word.clone());
        }
        tiers.push(report);
    }

    let mut tally = Tally::default();
    for _ in 0..opts.trials {
        let nvars = rng.gen_range(1..=opts.max_vars.max(1));
        let word = random_word(&mut rng, opts.max_len, nvars);
        let t = Transfer::new(&word)?;
        for k in 0..opts.samples_per_word.max(1) {
            let a: Vec<BigElement> = if k == 0 {
                // seeded from the diagonal: always a hit
                (0..nvars)
                    .map(|_| spec.diag(Elem(rng.gen_range(0..spec.h().order() as u32))))
                    .collect()
            } else {
                (0..nvars).map(|_| random_element(spec, &mut rng)).collect()
            };
            tally.record(spec, &t, &a, None)?;
        }
    }
    tiers.push(tally.report(
        TierKind::Random,
        format!("random words, length <= {}, variables <= {}", opts.max_len, opts.max_vars),
        false,
        None,
    ));

    let sampled_assignments = tiers.iter().filter(|t| !t.complete).map(|t| t.assignments).sum();
    let violations = tiers.iter().map(|t| t.violations).sum();
    Ok(VcEvidence {
        exponent_g,
        tiers,
        complete_classes,
        sampled_assignments,
        violations,
        seed: opts.seed,
    })
}
