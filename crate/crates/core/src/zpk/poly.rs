use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Residue, Zpk};
use crate::{Error, Result};

/// `∏ x_var^exp` as `(var, exp)` pairs sorted by variable, exponents > 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        Monomial(vec![(v as u32, 1)])
    }

    /// From `(var, exp)` pairs in any order; zero exponents are dropped.
    pub fn from_pairs(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(a, ea)), Some(&(b, eb))) if a == b => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
                (Some(&(a, ea)), Some(&(b, _))) if a < b => {
                    out.push((a, ea));
                    i += 1;
                }
                (Some(_), Some(&(b, eb))) => {
                    out.push((b, eb));
                    j += 1;
                }
                (Some(&t), None) => {
                    out.push(t);
                    i += 1;
                }
                (None, Some(&t)) => {
                    out.push(t);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    /// All monomials in `dim` variables of total degree exactly `d`, in
    /// lexicographic order of exponent vectors, `x1^d` first.
    pub fn of_degree(dim: usize, d: u32) -> Vec<Monomial> {
        fn rec(v: usize, dim: usize, left: u32, cur: &mut Vec<(u32, u32)>, out: &mut Vec<Monomial>) {
            if left == 0 {
                out.push(Monomial(cur.clone()));
                return;
            }
            if v == dim {
                return;
            }
            for e in (0..=left).rev() {
                if e > 0 {
                    cur.push((v as u32, e));
                }
                rec(v + 1, dim, left - e, cur, out);
                if e > 0 {
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(0, dim, d, &mut Vec::new(), &mut out);
        out
    }
}

/// A polynomial over `Z_{p^k}` in `dim` variables `x1..x_dim`.
///
/// Members of the family `F` have no free term; intermediate values of the
/// interpolation may carry one.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyZpk {
    ring: Zpk,
    dim: usize,
    #[serde(with = "term_list")]
    terms: BTreeMap<Monomial, Residue>,
}

// JSON maps need string keys, so terms travel as a list of pairs
mod term_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{Monomial, Residue};

    pub fn serialize<S: Serializer>(terms: &BTreeMap<Monomial, Residue>, s: S) -> Result<S::Ok, S::Error> {
        let list: Vec<(&Monomial, &Residue)> = terms.iter().collect();
        list.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Monomial, Residue>, D::Error> {
        let list = Vec::<(Monomial, Residue)>::deserialize(d)?;
        Ok(list.into_iter().filter(|&(_, c)| c != 0).collect())
    }
}

impl PolyZpk {
    pub fn zero(ring: Zpk, dim: usize) -> Self {
        PolyZpk {
            ring,
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: Zpk, dim: usize, c: Residue) -> Self {
        Self::monomial(ring, dim, Monomial::one(), c)
    }

    /// The variable `x_{v+1}` (variables are 0-based internally).
    pub fn var(ring: Zpk, dim: usize, v: usize) -> Self {
        assert!(v < dim, "variable {v} out of range for {dim} variables");
        Self::monomial(ring, dim, Monomial::var(v), 1)
    }

    pub fn monomial(ring: Zpk, dim: usize, m: Monomial, c: Residue) -> Self {
        let mut p = Self::zero(ring, dim);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(ring: Zpk, dim: usize, terms: impl IntoIterator<Item = (Monomial, Residue)>) -> Self {
        let mut p = Self::zero(ring, dim);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Residue) {
        debug_assert!(m.pairs().iter().all(|&(v, _)| (v as usize) < self.dim));
        let c = c % self.ring.modulus();
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert(0);
        *entry = self.ring.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn ring(&self) -> Zpk {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Residue)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn free_term(&self) -> Residue {
        self.terms.get(&Monomial::one()).copied().unwrap_or(0)
    }

    pub fn without_free_term(&self) -> Self {
        let mut p = self.clone();
        p.terms.remove(&Monomial::one());
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, &c) in &other.terms {
            p.add_term(m.clone(), c);
        }
        p
    }

    pub fn neg(&self) -> Self {
        PolyZpk {
            ring: self.ring,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), self.ring.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Residue) -> Self {
        Self::from_terms(
            self.ring,
            self.dim,
            self.terms.iter().map(|(m, &a)| (m.clone(), self.ring.mul(a, c))),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::<Monomial, Residue>::new();
        for (ma, &a) in &self.terms {
            for (mb, &b) in &other.terms {
                let c = self.ring.mul(a, b);
                if c != 0 {
                    let e = out.entry(ma.times(mb)).or_insert(0);
                    *e = self.ring.add(*e, c);
                }
            }
        }
        out.retain(|_, c| *c != 0);
        PolyZpk {
            ring: self.ring,
            dim: self.dim.max(other.dim),
            terms: out,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::constant(self.ring, self.dim, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Residue]) -> Result<Residue> {
        if point.len() != self.dim {
            return Err(Error::Precondition(format!(
                "point of length {} for a polynomial in {} variables",
                point.len(),
                self.dim
            )));
        }
        let r = self.ring;
        Ok(self.terms.iter().fold(0, |acc, (m, &c)| {
            let v = m
                .pairs()
                .iter()
                .fold(c, |t, &(var, e)| r.mul(t, r.pow(point[var as usize], e as u64)));
            r.add(acc, v)
        }))
    }

    /// Substitutes `x_{j+1} ↦ Σ_l rows[j][l]·x_{l+1}` for each variable of
    /// `self`; the result lives in `rows[j].len()` variables.
    pub fn compose_linear(&self, rows: &[Vec<Residue>]) -> Self {
        assert_eq!(rows.len(), self.dim, "one linear form per variable");
        let out_dim = rows.first().map_or(0, Vec::len);
        let linear: Vec<PolyZpk> = rows
            .iter()
            .map(|row| {
                Self::from_terms(
                    self.ring,
                    out_dim,
                    row.iter().enumerate().map(|(l, &c)| (Monomial::var(l), c)),
                )
            })
            .collect();
        let mut powers: BTreeMap<(u32, u32), PolyZpk> = BTreeMap::new();
        let mut result = Self::zero(self.ring, out_dim);
        for (m, &c) in &self.terms {
            let mut t = Self::constant(self.ring, out_dim, c);
            for &(v, e) in m.pairs() {
                let p = powers
                    .entry((v, e))
                    .or_insert_with(|| linear[v as usize].pow(e as u64));
                t = t.mul(p);
            }
            result = result.add(&t);
        }
        result
    }

    /// Reduces every coefficient modulo `p` and reads it back in `Z_{p^k}`.
    pub fn coefficients_mod_p(&self) -> Self {
        let p = self.ring.p();
        Self::from_terms(
            self.ring,
            self.dim,
            self.terms.iter().map(|(m, &c)| (m.clone(), c % p)),
        )
    }

    /// Parses e.g. `x1^2*x3 + 3*x2` (an optional trailing `(mod q)` must
    /// match the ring).
    pub fn parse(text: &str, ring: Zpk, dim: usize) -> Result<Self> {
        let perr = |m: String| Error::Parse {
            line: 1,
            column: 1,
            message: m,
        };
        let mut body = text.trim();
        if let Some(pos) = body.find("(mod") {
            let q: u32 = body[pos + 4..]
                .trim()
                .trim_end_matches(')')
                .trim()
                .parse()
                .map_err(|_| perr(format!("bad modulus in '{text}'")))?;
            if q != ring.modulus() {
                return Err(perr(format!("modulus {q} does not match {}", ring.modulus())));
            }
            body = body[..pos].trim();
        }
        let mut p = Self::zero(ring, dim);
        if body.is_empty() || body == "0" {
            return Ok(p);
        }
        let normalized = body.replace('-', "+-");
        for raw in normalized.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                continue;
            }
            let (negate, term) = match term.strip_prefix('-') {
                Some(t) => (true, t.trim()),
                None => (false, term),
            };
            let mut coeff: Residue = 1;
            let mut pairs = Vec::new();
            for factor in term.split('*').map(str::trim) {
                if let Some(rest) = factor.strip_prefix('x') {
                    let (v, e) = match rest.split_once('^') {
                        Some((v, e)) => (v, e),
                        None => (rest, "1"),
                    };
                    let v: usize = v.parse().map_err(|_| perr(format!("bad variable '{factor}'")))?;
                    let e: u32 = e.parse().map_err(|_| perr(format!("bad exponent '{factor}'")))?;
                    if v == 0 || v > dim {
                        return Err(perr(format!("variable x{v} outside x1..x{dim}")));
                    }
                    pairs.push((v as u32 - 1, e));
                } else {
                    let c: u64 = factor.parse().map_err(|_| perr(format!("bad factor '{factor}'")))?;
                    coeff = ring.mul(coeff, (c % ring.modulus() as u64) as Residue);
                }
            }
            if negate {
                coeff = ring.neg(coeff);
            }
            p.add_term(Monomial::from_pairs(pairs), coeff);
        }
        Ok(p)
    }
}

impl fmt::Display for PolyZpk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Monomial, Residue)> = self.terms().collect();
        // higher degree first, then by exponent vector (x1 before x2)
        terms.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then_with(|| a.cmp(b)));
        if terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (m, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = m
                .pairs()
                .iter()
                .map(|&(v, e)| {
                    if e == 1 {
                        format!("x{}", v + 1)
                    } else {
                        format!("x{}^{e}", v + 1)
                    }
                })
                .collect();
            match (c, vars.is_empty()) {
                (c, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                (c, false) => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        write!(f, " (mod {})", self.ring.modulus())
    }
}

impl fmt::Debug for PolyZpk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
