use serde::{Deserialize, Serialize};

use super::{BigElement, CounterexampleSpec};
use crate::words::{var_name, Letter, MixedWord};
use crate::FiniteGroup;

/// One equation `word = 1`, with the family it belongs to (1 to 5 for the
/// non-closedness system, 0 otherwise).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub tag: u8,
    pub label: String,
    pub word: MixedWord,
}

/// Equations `w = 1` over a coefficient group. Evaluated in `G`, the
/// coefficients go through the diagonal embedding; in `H` they stand for
/// themselves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationSystem {
    nvars: usize,
    var_names: Vec<String>,
    equations: Vec<Equation>,
}

impl EquationSystem {
    /// An untagged system with default variable names.
    pub fn new(nvars: usize, words: Vec<MixedWord>) -> Self {
        EquationSystem {
            nvars,
            var_names: (0..nvars).map(var_name).collect(),
            equations: words
                .into_iter()
                .enumerate()
                .map(|(i, word)| Equation {
                    tag: 0,
                    label: format!("e{i}"),
                    word,
                })
                .collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Number of equations carrying each tag 1..=5.
    pub fn tag_counts(&self) -> [usize; 5] {
        let mut out = [0; 5];
        for e in &self.equations {
            if (1..=5).contains(&e.tag) {
                out[e.tag as usize - 1] += 1;
            }
        }
        out
    }

    /// `word = 1` with this system's variable names.
    pub fn render(&self, eq: &Equation, h: &FiniteGroup) -> String {
        let mut parts = Vec::new();
        for l in eq.word.letters() {
            parts.push(match *l {
                Letter::Var { id, inverse: false } => self.var_names[id as usize].clone(),
                Letter::Var { id, inverse: true } => format!("{}^-1", self.var_names[id as usize]),
                Letter::Coeff(c) => format!("`{}`", h.name(c)),
            });
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        format!("{} = 1", parts.join(" "))
    }
}

/// The non-closedness system over `H`, variables `x_f` (family order) followed by
/// `y_{i,s}` (generator major, points in `S`-order):
///
/// 1. `x_f^{p^k} = 1`
/// 2. `x_f⁻¹ y_{i,s} x_f = b^{-f(s)} y_{i,s} b^{f(s)}`
/// 3. `∏_{s∈S} y_{i,s} = h_i`
/// 4. `[y_{i,s}, y_{j,s'}] = 1` for `s ≠ s'`
/// 5. `[x_f, b] = 1`
pub fn build_equation_system(spec: &CounterexampleSpec) -> EquationSystem {
    let h = spec.h();
    let nf = spec.family().len();
    let ns = spec.npoints();
    let g = spec.gens().len();
    let nvars = nf + g * ns;
    let q = spec.witness().prime_power() as i64;
    let b = spec.witness().b;
    let x = |f: usize| f;
    let y = |i: usize, s: usize| nf + i * ns + s;
    let word = |letters: Vec<Letter>| MixedWord::new(letters, nvars, Some(h));

    let mut var_names: Vec<String> = (0..nf).map(|f| format!("x_f{f}")).collect();
    for i in 0..g {
        for s in 0..ns {
            var_names.push(format!("y_{i}_{s}"));
        }
    }

    let mut equations = Vec::new();
    let mut push = |tag: u8, label: String, w: MixedWord| equations.push(Equation { tag, label, word: w });

    for f in 0..nf {
        push(1, format!("x_f{f}^{q}"), MixedWord::from_powers(&[(x(f), q)], nvars));
    }
    for i in 0..g {
        for s in 0..ns {
            for f in 0..nf {
                let e = spec.value(f as u32, s) as i64;
                push(
                    2,
                    format!("y_{i}_{s}^x_f{f}"),
                    word(vec![
                        Letter::inv_var(x(f)),
                        Letter::var(y(i, s)),
                        Letter::var(x(f)),
                        Letter::Coeff(h.power(b, -e)),
                        Letter::inv_var(y(i, s)),
                        Letter::Coeff(h.power(b, e)),
                    ]),
                );
            }
        }
    }
    for (i, &hi) in spec.gens().iter().enumerate() {
        let mut letters: Vec<Letter> = (0..ns).map(|s| Letter::var(y(i, s))).collect();
        letters.push(Letter::Coeff(h.inverse(hi)));
        push(3, format!("prod y_{i} = {}", h.name(hi)), word(letters));
    }
    for i in 0..g {
        for j in 0..g {
            for s in 0..ns {
                for t in (0..ns).filter(|&t| t != s) {
                    push(
                        4,
                        format!("[y_{i}_{s}, y_{j}_{t}]"),
                        word(vec![
                            Letter::inv_var(y(i, s)),
                            Letter::inv_var(y(j, t)),
                            Letter::var(y(i, s)),
                            Letter::var(y(j, t)),
                        ]),
                    );
                }
            }
        }
    }
    for f in 0..nf {
        push(
            5,
            format!("[x_f{f}, b]"),
            word(vec![
                Letter::inv_var(x(f)),
                Letter::Coeff(h.inverse(b)),
                Letter::var(x(f)),
                Letter::Coeff(b),
            ]),
        );
    }
    EquationSystem {
        nvars,
        var_names,
        equations,
    }
}

/// `x_f = (f, 1)` and `y_{i,s} = (h_i)_s`.
pub fn obvious_solution(spec: &CounterexampleSpec) -> Vec<BigElement> {
    let mut out: Vec<BigElement> = (0..spec.family().len() as u32).map(|f| spec.pure_f(f)).collect();
    for &hi in spec.gens() {
        for s in 0..spec.npoints() {
            out.push(spec.at_point(s, hi));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_spec, SpecOptions};
    use crate::{catalog, Elem, Group};

    #[test]
    fn q8_system_counts() {
        let spec = build_spec(&catalog::quaternion(), &SpecOptions::default()).unwrap();
        let sys = build_equation_system(&spec);
        assert_eq!(sys.len(), 58);
        assert_eq!(sys.tag_counts(), [4, 24, 2, 24, 4]);
        assert_eq!(sys.nvars(), 4 + 2 * 3);
        let h = spec.h();
        assert_eq!(sys.render(&sys.equations()[0], h), "x_f0 x_f0 = 1");
        let tag3 = sys.equations().iter().find(|e| e.tag == 3).unwrap();
        assert_eq!(sys.render(tag3, h), "y_0_0 y_0_1 y_0_2 `-i` = 1");
    }

    #[test]
    fn obvious_solution_solves_everything() {
        for name in ["q8", "d4"] {
            let spec = build_spec(&catalog::by_name(name).unwrap(), &SpecOptions::default()).unwrap();
            let sys = build_equation_system(&spec);
            let sol = obvious_solution(&spec);
            for eq in sys.equations() {
                let v = eq.word.evaluate(&spec, &sol, |c| spec.diag(c)).unwrap();
                assert_eq!(v, spec.identity(), "{name}: {}", eq.label);
            }
        }
    }

    #[test]
    fn tag_two_by_hand() {
        let spec = build_spec(&catalog::quaternion(), &SpecOptions::default()).unwrap();
        let b = spec.diag(spec.witness().b);
        for (i, &hi) in spec.gens().iter().enumerate() {
            for s in 0..spec.npoints() {
                let y = spec.at_point(s, hi);
                for f in 0..spec.family().len() as u32 {
                    let lhs = spec.conj(&y, &spec.pure_f(f));
                    let rhs = spec.conj(&y, &spec.pow(&b, spec.value(f, s) as i64));
                    assert_eq!(lhs, rhs, "generator {i}, point {s}, function {f}");
                }
            }
        }
    }

    #[test]
    fn identity_assignment_fails_tag_three() {
        let spec = build_spec(&catalog::quaternion(), &SpecOptions::default()).unwrap();
        let sys = build_equation_system(&spec);
        let a = vec![Elem::IDENTITY; sys.nvars()];
        for eq in sys.equations() {
            let ok = eq.word.evaluate_in(spec.h(), &a).unwrap() == Elem::IDENTITY;
            assert_eq!(ok, eq.tag != 3, "{}", eq.label);
        }
    }
}
