//! Words in `H ∗ F(x, y, …)` and Nielsen changes of variables.

use std::fmt;

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::group::{Elem, FiniteGroup, Group};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    Var { id: u32, inverse: bool },
    Coeff(Elem),
}

impl Letter {
    pub fn var(id: usize) -> Self {
        Letter::Var {
            id: id as u32,
            inverse: false,
        }
    }

    pub fn inv_var(id: usize) -> Self {
        Letter::Var {
            id: id as u32,
            inverse: true,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        matches!(
            (self, other),
            (Letter::Var { id: a, inverse: x }, Letter::Var { id: b, inverse: y }) if a == b && x != y
        )
    }

    fn inverted(self, coeff: Option<&FiniteGroup>) -> Letter {
        match self {
            Letter::Var { id, inverse } => Letter::Var {
                id,
                inverse: !inverse,
            },
            Letter::Coeff(h) => Letter::Coeff(
                coeff
                    .expect("inverting a coefficient letter needs its group")
                    .inverse(h),
            ),
        }
    }
}

/// A freely reduced word over variables `0..nvars` and coefficients.
///
/// Adjacent coefficients are fused and identity coefficients dropped, as
/// long as the coefficient group was supplied at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MixedWord {
    letters: Vec<Letter>,
    nvars: usize,
}

pub fn var_name(id: usize) -> String {
    match id {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        _ => format!("x{id}"),
    }
}

impl MixedWord {
    pub fn empty(nvars: usize) -> Self {
        MixedWord {
            letters: Vec::new(),
            nvars,
        }
    }

    /// Reduces `letters`; `nvars` is raised to cover every variable used.
    pub fn new(letters: Vec<Letter>, nvars: usize, coeff: Option<&FiniteGroup>) -> Self {
        let used = letters
            .iter()
            .filter_map(|l| match l {
                Letter::Var { id, .. } => Some(*id as usize + 1),
                Letter::Coeff(_) => None,
            })
            .max()
            .unwrap_or(0);
        MixedWord {
            letters: reduce_letters(letters, coeff),
            nvars: nvars.max(used),
        }
    }

    /// `∏ x_id^e` over the given pairs, reduced.
    pub fn from_powers(powers: &[(usize, i64)], nvars: usize) -> Self {
        let letters = powers
            .iter()
            .flat_map(|&(id, e)| {
                let l = if e < 0 { Letter::inv_var(id) } else { Letter::var(id) };
                std::iter::repeat_n(l, e.unsigned_abs() as usize)
            })
            .collect();
        Self::new(letters, nvars, None)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn has_coefficients(&self) -> bool {
        self.letters.iter().any(|l| matches!(l, Letter::Coeff(_)))
    }

    /// Variables that actually occur, ascending.
    pub fn variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .letters
            .iter()
            .filter_map(|l| match l {
                Letter::Var { id, .. } => Some(*id as usize),
                Letter::Coeff(_) => None,
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn reduce(&self, coeff: Option<&FiniteGroup>) -> MixedWord {
        MixedWord {
            letters: reduce_letters(self.letters.clone(), coeff),
            nvars: self.nvars,
        }
    }

    pub fn concat(&self, other: &MixedWord, coeff: Option<&FiniteGroup>) -> MixedWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        MixedWord::new(letters, self.nvars.max(other.nvars), coeff)
    }

    pub fn inverse(&self, coeff: Option<&FiniteGroup>) -> MixedWord {
        MixedWord {
            letters: self.letters.iter().rev().map(|l| l.inverted(coeff)).collect(),
            nvars: self.nvars,
        }
    }

    /// Signed occurrence count of every variable; coefficients ignored.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.nvars];
        for l in &self.letters {
            if let Letter::Var { id, inverse } = l {
                sums[*id as usize] += if *inverse { -1 } else { 1 };
            }
        }
        sums
    }

    /// Finds a change of variables taking this word to one with exponent
    /// sums `(m, 0, …, 0)`, `m = gcd` of the original sums (`m ≥ 0`).
    pub fn normalize_power_form(&self) -> Result<(u64, VariableSubstitution)> {
        if self.has_coefficients() {
            return Err(Error::Precondition(
                "normal form is defined for coefficient-free words only".into(),
            ));
        }
        let mut e = self.exponent_sums();
        let mut sub = VariableSubstitution::identity(self.nvars);
        if e.iter().all(|&x| x == 0) {
            return Ok((0, sub));
        }
        loop {
            // pivot: smallest nonzero absolute value, lowest index first
            let pivot = (0..e.len())
                .filter(|&i| e[i] != 0)
                .min_by_key(|&i| (e[i].unsigned_abs(), i))
                .unwrap();
            let mut done = true;
            for j in 0..e.len() {
                if j == pivot || e[j] == 0 {
                    continue;
                }
                done = false;
                // e_j ← e_j - q·e_p, one Nielsen move per unit of q
                let q = Integer::div_floor(&e[j], &e[pivot]);
                let sign = if q > 0 { -1 } else { 1 };
                for _ in 0..q.unsigned_abs() {
                    sub.push(NielsenMove::Multiply {
                        target: pivot,
                        by: j,
                        sign,
                    });
                }
                e[j] -= q * e[pivot];
            }
            if done {
                if pivot != 0 {
                    sub.push(NielsenMove::Swap(0, pivot));
                    e.swap(0, pivot);
                }
                if e[0] < 0 {
                    sub.push(NielsenMove::Invert(0));
                    e[0] = -e[0];
                }
                return Ok((e[0] as u64, sub));
            }
        }
    }

    /// Evaluates the word in `carrier`, variables from `assignment` and
    /// coefficients through `embed`.
    pub fn evaluate<G: Group>(
        &self,
        carrier: &G,
        assignment: &[G::Element],
        embed: impl Fn(Elem) -> G::Element,
    ) -> Result<G::Element> {
        let mut acc = carrier.identity();
        for l in &self.letters {
            let x = match *l {
                Letter::Var { id, inverse } => {
                    let v = assignment
                        .get(id as usize)
                        .ok_or(Error::MissingAssignment(id as usize))?;
                    if inverse {
                        carrier.inv(v)
                    } else {
                        v.clone()
                    }
                }
                Letter::Coeff(h) => embed(h),
            };
            acc = carrier.mul(&acc, &x);
        }
        Ok(acc)
    }

    /// Evaluates a word whose coefficients live in the carrier itself.
    pub fn evaluate_in(&self, h: &FiniteGroup, assignment: &[Elem]) -> Result<Elem> {
        self.evaluate(h, assignment, |c| c)
    }

    /// Parses whitespace-separated letters: `x`, `y`, `z`, `x3`, … with an
    /// optional `^e`, and backquoted coefficient names such as `` `b` ``.
    pub fn parse(text: &str, coeff: Option<&FiniteGroup>) -> Result<MixedWord> {
        let mut letters = Vec::new();
        for (i, tok) in text.split_whitespace().enumerate() {
            let err = |m: String| Error::Parse {
                line: 1,
                column: i + 1,
                message: m,
            };
            let split_at = if tok.starts_with('`') {
                tok[1..].find('`').map(|p| p + 2)
            } else {
                tok.find('^')
            };
            let (base, exp) = match split_at {
                Some(pos) if pos < tok.len() => {
                    let e: i64 = tok[pos..]
                        .strip_prefix('^')
                        .and_then(|e| e.parse().ok())
                        .ok_or_else(|| err(format!("bad exponent in '{tok}'")))?;
                    (&tok[..pos], e)
                }
                _ => (tok, 1),
            };
            if base == "1" {
                continue;
            }
            let letter = if let Some(name) = base.strip_prefix('`').and_then(|b| b.strip_suffix('`')) {
                let g = coeff.ok_or_else(|| err("coefficient without a coefficient group".into()))?;
                let e = match name.strip_prefix('#') {
                    Some(idx) => idx
                        .parse::<usize>()
                        .ok()
                        .filter(|&i| i < g.order())
                        .map(Elem::from),
                    None => g.elem_by_name(name),
                }
                .ok_or_else(|| err(format!("unknown element '{name}'")))?;
                Letter::Coeff(e)
            } else {
                let id = match base {
                    "x" => 0,
                    "y" => 1,
                    "z" => 2,
                    _ => base
                        .strip_prefix('x')
                        .and_then(|d| d.parse::<usize>().ok())
                        .ok_or_else(|| err(format!("unknown variable '{base}'")))?,
                };
                Letter::var(id)
            };
            let unit = if exp < 0 { letter.inverted(coeff) } else { letter };
            letters.extend(std::iter::repeat_n(unit, exp.unsigned_abs() as usize));
        }
        Ok(MixedWord::new(letters, 0, coeff))
    }

    /// Text form; runs of one letter are written as powers.
    pub fn to_text(&self, coeff: Option<&FiniteGroup>) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            let (base, sign) = match l {
                Letter::Var { id, inverse } => (var_name(id as usize), if inverse { -1 } else { 1 }),
                Letter::Coeff(h) => (
                    match coeff {
                        Some(g) => format!("`{}`", g.name(h)),
                        None => format!("`#{}`", h.0),
                    },
                    1,
                ),
            };
            let e = sign * run as i64;
            parts.push(if e == 1 { base } else { format!("{base}^{e}") });
            i += run;
        }
        parts.join(" ")
    }
}

impl fmt::Display for MixedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(None))
    }
}

fn reduce_letters(letters: Vec<Letter>, coeff: Option<&FiniteGroup>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for l in letters {
        match (out.last().copied(), l, coeff) {
            (_, Letter::Coeff(h), Some(_)) if h == Elem::IDENTITY => {}
            (Some(Letter::Coeff(a)), Letter::Coeff(b), Some(g)) => {
                out.pop();
                let c = g.op(a, b);
                if c != Elem::IDENTITY {
                    out.push(Letter::Coeff(c));
                }
            }
            (Some(top), _, _) if top.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

/// An elementary automorphism of the free group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NielsenMove {
    Swap(usize, usize),
    Invert(usize),
    /// `x_target ↦ x_target · x_by^sign`
    Multiply { target: usize, by: usize, sign: i8 },
}

impl NielsenMove {
    pub fn inverse(self) -> Self {
        match self {
            NielsenMove::Multiply { target, by, sign } => NielsenMove::Multiply {
                target,
                by,
                sign: -sign,
            },
            m => m,
        }
    }

    fn image(self, letter: Letter) -> Vec<Letter> {
        let Letter::Var { id, inverse } = letter else {
            return vec![letter];
        };
        let id = id as usize;
        let flip = |l: Letter| if inverse { l.inverted(None) } else { l };
        match self {
            NielsenMove::Swap(i, j) if id == i => vec![flip(Letter::var(j))],
            NielsenMove::Swap(i, j) if id == j => vec![flip(Letter::var(i))],
            NielsenMove::Invert(i) if id == i => vec![flip(Letter::inv_var(i))],
            NielsenMove::Multiply { target, by, sign } if id == target => {
                let extra = if sign > 0 { Letter::var(by) } else { Letter::inv_var(by) };
                if inverse {
                    vec![extra.inverted(None), Letter::inv_var(target)]
                } else {
                    vec![Letter::var(target), extra]
                }
            }
            _ => vec![letter],
        }
    }

    fn act(self, e: &mut [i64]) {
        match self {
            NielsenMove::Swap(i, j) => e.swap(i, j),
            NielsenMove::Invert(i) => e[i] = -e[i],
            NielsenMove::Multiply { target, by, sign } => e[by] += i64::from(sign) * e[target],
        }
    }

    fn indices_ok(self, nvars: usize) -> bool {
        match self {
            NielsenMove::Swap(i, j) => i != j && i < nvars && j < nvars,
            NielsenMove::Invert(i) => i < nvars,
            NielsenMove::Multiply { target, by, sign } => {
                target != by && target < nvars && by < nvars && sign.abs() == 1
            }
        }
    }
}

/// A free-group automorphism as a sequence of Nielsen moves, applied in
/// order: the first move is substituted first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSubstitution {
    nvars: usize,
    moves: Vec<NielsenMove>,
}

impl VariableSubstitution {
    pub fn identity(nvars: usize) -> Self {
        VariableSubstitution {
            nvars,
            moves: Vec::new(),
        }
    }

    pub fn from_moves(nvars: usize, moves: Vec<NielsenMove>) -> Result<Self> {
        if let Some(m) = moves.iter().find(|m| !m.indices_ok(nvars)) {
            return Err(Error::Precondition(format!(
                "invalid move {m:?} for {nvars} variables"
            )));
        }
        Ok(VariableSubstitution { nvars, moves })
    }

    pub fn push(&mut self, m: NielsenMove) {
        debug_assert!(m.indices_ok(self.nvars));
        self.moves.push(m);
    }

    pub fn moves(&self) -> &[NielsenMove] {
        &self.moves
    }

    pub fn is_identity(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn inverse(&self) -> Self {
        VariableSubstitution {
            nvars: self.nvars,
            moves: self.moves.iter().rev().map(|m| m.inverse()).collect(),
        }
    }

    /// Image of `w`, reduced. Coefficient letters pass through unchanged.
    pub fn apply(&self, w: &MixedWord) -> MixedWord {
        let mut letters = w.letters.clone();
        for &m in &self.moves {
            let next = letters.iter().flat_map(|&l| m.image(l)).collect();
            letters = reduce_letters(next, None);
        }
        MixedWord {
            letters,
            nvars: w.nvars.max(self.nvars),
        }
    }

    /// The image `σ(x_i)` of one generator.
    pub fn image_of(&self, i: usize) -> MixedWord {
        self.apply(&MixedWord::new(vec![Letter::var(i)], self.nvars, None))
    }

    /// How exponent-sum vectors transform: `sums(σ(w)) = act(sums(w))`.
    pub fn act_on_exponents(&self, sums: &[i64]) -> Vec<i64> {
        let mut e = sums.to_vec();
        e.resize(self.nvars.max(e.len()), 0);
        for &m in &self.moves {
            m.act(&mut e);
        }
        e
    }

    /// The assignment `a'` with `w(a') = σ(w)(a)` for every `w`, that is
    /// `a'_i = σ(x_i)(a)`.
    pub fn precompose<G: Group>(&self, carrier: &G, assignment: &[G::Element]) -> Result<Vec<G::Element>> {
        (0..self.nvars)
            .map(|i| {
                self.image_of(i)
                    .evaluate(carrier, assignment, |_| unreachable!("no coefficients"))
            })
            .collect()
    }
}

/// A uniformly random reduced word of length `1..=max_len` in `nvars`
/// variables; cancelling letters are rejected and redrawn.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, max_len: usize, nvars: usize) -> MixedWord {
    let len = rng.gen_range(1..=max_len.max(1));
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let id = rng.gen_range(0..nvars);
        let l = if rng.gen_bool(0.5) { Letter::var(id) } else { Letter::inv_var(id) };
        if letters.last().is_none_or(|&t| !t.cancels(l)) {
            letters.push(l);
        }
    }
    MixedWord { letters, nvars }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn w(s: &str) -> MixedWord {
        MixedWord::parse(s, None).unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert!(w("x x^-1").is_empty());
        let q8 = catalog::quaternion();
        let i = q8.elem_by_name("i").unwrap();
        let j = q8.elem_by_name("j").unwrap();
        let fused = MixedWord::new(vec![Letter::Coeff(i), Letter::Coeff(j)], 0, Some(&q8));
        assert_eq!(fused.letters(), &[Letter::Coeff(q8.elem_by_name("k").unwrap())]);
        let word = MixedWord::parse("x `i` `-i` x", Some(&q8)).unwrap();
        assert_eq!(word, w("x^2"));
        assert_eq!(word.reduce(Some(&q8)), word);
    }

    #[test]
    fn exponent_sum_examples() {
        assert_eq!(w("x^-1 y^-1 x y").exponent_sums(), [0, 0]);
        assert_eq!(w("x^2 y^-2").exponent_sums(), [2, -2]);
        assert_eq!(w("x^3").exponent_sums(), [3]);
    }

    #[test]
    fn normal_form_examples() {
        let (m, sub) = w("x^-1 y^-1 x y").normalize_power_form().unwrap();
        assert_eq!(m, 0);
        assert!(sub.is_identity());
        let (m, sub) = w("x^3").normalize_power_form().unwrap();
        assert_eq!(m, 3);
        assert!(sub.is_identity());
        let word = w("x^2 y^-2");
        let (m, sub) = word.normalize_power_form().unwrap();
        assert_eq!(m, 2);
        assert_eq!(sub.apply(&word).exponent_sums(), [2, 0]);
        let word = w("y^-4 z^6");
        let (m, sub) = word.normalize_power_form().unwrap();
        assert_eq!(m, 2);
        assert_eq!(sub.apply(&word).exponent_sums(), [2, 0, 0]);
    }

    #[test]
    fn normal_form_rejects_coefficients() {
        let q8 = catalog::quaternion();
        let word = MixedWord::parse("x `i`", Some(&q8)).unwrap();
        assert!(word.normalize_power_form().is_err());
    }

    #[test]
    fn substitution_examples() {
        let id = VariableSubstitution::identity(2);
        assert_eq!(id.apply(&w("x y x^-1")), w("x y x^-1"));
        let inv = VariableSubstitution::from_moves(1, vec![NielsenMove::Invert(0)]).unwrap();
        assert_eq!(inv.apply(&w("x")), w("x^-1"));
        let mul = VariableSubstitution::from_moves(
            2,
            vec![NielsenMove::Multiply { target: 1, by: 0, sign: -1 }],
        )
        .unwrap();
        assert_eq!(mul.apply(&w("x y")), w("x y x^-1"));
        assert!(VariableSubstitution::from_moves(2, vec![NielsenMove::Swap(1, 1)]).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let q8 = catalog::quaternion();
        let i = q8.elem_by_name("i").unwrap();
        assert_eq!(MixedWord::empty(0).evaluate_in(&q8, &[]).unwrap(), Elem::IDENTITY);
        assert_eq!(w("x^2").evaluate_in(&q8, &[i]).unwrap(), q8.elem_by_name("-1").unwrap());
        let comm = w("x^-1 y^-1 x y");
        for g in q8.elements() {
            assert_eq!(comm.evaluate_in(&q8, &[g, Elem::IDENTITY]).unwrap(), Elem::IDENTITY);
        }
        assert!(matches!(comm.evaluate_in(&q8, &[i]), Err(Error::MissingAssignment(1))));
    }

    #[test]
    fn text_round_trip() {
        let q8 = catalog::quaternion();
        let word = MixedWord::parse("x^-1 y^-1 x y `i` x3^2", Some(&q8)).unwrap();
        assert_eq!(word.to_text(Some(&q8)), "x^-1 y^-1 x y `i` x3^2");
        assert_eq!(MixedWord::parse(&word.to_text(Some(&q8)), Some(&q8)).unwrap(), word);
        assert_eq!(word.nvars(), 4);
        assert!(MixedWord::parse("q", None).is_err());
    }

    fn arb_word_in(nvars: usize) -> impl Strategy<Value = MixedWord> {
        proptest::collection::vec((0..nvars, any::<bool>()), 0..=20).prop_map(move |raw| {
            let letters = raw
                .into_iter()
                .map(|(id, inv)| if inv { Letter::inv_var(id) } else { Letter::var(id) })
                .collect();
            MixedWord::new(letters, nvars, None)
        })
    }

    fn arb_word() -> impl Strategy<Value = MixedWord> {
        (1usize..=4).prop_flat_map(arb_word_in)
    }

    fn arb_sub(nvars: usize) -> impl Strategy<Value = VariableSubstitution> {
        proptest::collection::vec((0u8..3, 0..nvars, 0..nvars, any::<bool>()), 0..8).prop_map(
            move |raw| {
                let moves = raw
                    .into_iter()
                    .filter_map(|(kind, i, j, s)| match kind {
                        0 if i != j => Some(NielsenMove::Swap(i, j)),
                        1 => Some(NielsenMove::Invert(i)),
                        2 if i != j => Some(NielsenMove::Multiply {
                            target: i,
                            by: j,
                            sign: if s { 1 } else { -1 },
                        }),
                        _ => None,
                    })
                    .collect();
                VariableSubstitution::from_moves(nvars, moves).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn normal_form_round_trip(word in arb_word()) {
            let (m, sub) = word.normalize_power_form().unwrap();
            let image = sub.apply(&word);
            let sums = word.exponent_sums();
            let g = sums.iter().fold(0i64, |acc, &x| acc.gcd(&x)) as u64;
            prop_assert_eq!(m, g);
            let mut expected = vec![0i64; word.nvars()];
            expected[0] = m as i64;
            prop_assert_eq!(image.exponent_sums(), expected);
            prop_assert_eq!(sub.inverse().apply(&image), word);
        }

        #[test]
        fn exponent_action_matches_substitution(
            (word, sub) in (1usize..=4).prop_flat_map(|n| (arb_word_in(n), arb_sub(n)))
        ) {
            prop_assert_eq!(
                sub.apply(&word).exponent_sums(),
                sub.act_on_exponents(&word.exponent_sums())
            );
        }

        #[test]
        fn reduce_is_idempotent(word in arb_word()) {
            prop_assert_eq!(word.reduce(None), word.clone());
        }
    }
}
