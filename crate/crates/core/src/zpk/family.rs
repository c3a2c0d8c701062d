use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    choose_m, degree_cap, interpolate_f_t, schanuel_root, Monomial, PointSet, PolyZpk, Residue, Zpk,
};
use crate::{Error, Result};

/// Largest `|S|` stored explicitly by [`verify_function_lemma`].
const POINT_CAP: usize = 1 << 16;

/// A function `S → Z_{p^k}` as its values in the lexicographic order of `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionTable {
    pub values: Vec<Residue>,
    pub provenance: Option<PolyZpk>,
}

impl FunctionTable {
    pub fn from_poly(f: &PolyZpk, points: &PointSet) -> Result<Self> {
        let values = points
            .explicit_points()?
            .iter()
            .map(|s| f.eval(s))
            .collect::<Result<_>>()?;
        Ok(FunctionTable {
            values,
            provenance: Some(f.clone()),
        })
    }

    /// First position where the function vanishes.
    pub fn zero_position(&self) -> Option<usize> {
        self.values.iter().position(|&v| v == 0)
    }
}

/// A finite set of function tables on `S`, indexed by table contents.
#[derive(Clone, Debug)]
pub struct FunctionFamily {
    ring: Zpk,
    npoints: usize,
    tables: Vec<FunctionTable>,
    index: HashMap<Vec<Residue>, usize>,
}

impl FunctionFamily {
    /// Duplicate tables are dropped, keeping the first occurrence.
    pub fn new(ring: Zpk, npoints: usize, tables: Vec<FunctionTable>) -> Result<Self> {
        let mut fam = FunctionFamily {
            ring,
            npoints,
            tables: Vec::new(),
            index: HashMap::new(),
        };
        for t in tables {
            if t.values.len() != npoints || t.values.iter().any(|&v| v >= ring.modulus()) {
                return Err(Error::Precondition(format!(
                    "table {:?} is not a function on {npoints} points into Z_{}",
                    t.values,
                    ring.modulus()
                )));
            }
            fam.push(t);
        }
        Ok(fam)
    }

    fn push(&mut self, t: FunctionTable) -> bool {
        if self.index.contains_key(&t.values) {
            return false;
        }
        self.index.insert(t.values.clone(), self.tables.len());
        self.tables.push(t);
        true
    }

    pub fn ring(&self) -> Zpk {
        self.ring
    }

    pub fn npoints(&self) -> usize {
        self.npoints
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn tables(&self) -> &[FunctionTable] {
        &self.tables
    }

    pub fn table(&self, i: usize) -> &FunctionTable {
        &self.tables[i]
    }

    pub fn position(&self, values: &[Residue]) -> Option<usize> {
        self.index.get(values).copied()
    }

    pub fn zero(&self) -> Option<usize> {
        self.position(&vec![0; self.npoints])
    }

    /// Index of the pointwise sum, if the family contains it.
    pub fn add(&self, i: usize, j: usize) -> Option<usize> {
        let r = self.ring;
        let sum: Vec<Residue> = self.tables[i]
            .values
            .iter()
            .zip(&self.tables[j].values)
            .map(|(&a, &b)| r.add(a, b))
            .collect();
        self.position(&sum)
    }

    pub fn neg(&self, i: usize) -> Option<usize> {
        let r = self.ring;
        let neg: Vec<Residue> = self.tables[i].values.iter().map(|&a| r.neg(a)).collect();
        self.position(&neg)
    }

    /// Contains zero and is closed under addition and negation.
    pub fn check_group(&self) -> Result<()> {
        if self.zero().is_none() {
            return Err(Error::Certification("the zero function is missing".into()));
        }
        for i in 0..self.len() {
            if self.neg(i).is_none() {
                return Err(Error::Certification(format!("negative of function {i} is missing")));
            }
            for j in 0..self.len() {
                if self.add(i, j).is_none() {
                    return Err(Error::Certification(format!("sum of functions {i} and {j} is missing")));
                }
            }
        }
        Ok(())
    }
}

/// All monomials of degree `1..=cap` in graded lexicographic order.
fn monomials_up_to(dim: usize, cap: u64) -> Vec<Monomial> {
    (1..=cap as u32).flat_map(|d| Monomial::of_degree(dim, d)).collect()
}

/// Number of monomials of degree `1..=cap` in `dim` variables, saturating.
fn monomial_count(dim: usize, cap: u64) -> u128 {
    // C(dim + cap, cap) − 1
    let mut c: u128 = 1;
    for i in 1..=cap as u128 {
        c = match c.checked_mul(dim as u128 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    c - 1
}

/// The family `F` of functions on `S` induced by polynomials without free
/// term of degree at most `n(p−1)p^{k−1}`, deduplicated as tables.
///
/// Built as the additive closure of the monomial tables, breadth first from
/// zero. Refuses once more than `cap` distinct tables would be needed.
pub fn enumerate_family(ring: Zpk, n: usize, points: &PointSet, cap: usize) -> Result<FunctionFamily> {
    let pts = points.explicit_points()?;
    let dim = points.dim();
    let deg = degree_cap(ring.p() as u64, ring.k(), n as u64);
    let q = ring.modulus() as u128;
    let exponent = monomial_count(dim, deg).min(pts.len() as u128);
    let bound = u32::try_from(exponent)
        .ok()
        .and_then(|e| q.checked_pow(e))
        .map_or_else(|| format!("{q}^{exponent}"), |b| b.to_string());
    if cap == 0 {
        return Err(Error::budget("function family enumeration", format!("at most {bound} tables"), cap));
    }

    let mut gens: Vec<FunctionTable> = Vec::new();
    for m in monomials_up_to(dim, deg) {
        let t = FunctionTable::from_poly(&PolyZpk::monomial(ring, dim, m, 1), points)?;
        if t.values.iter().any(|&v| v != 0) && !gens.iter().any(|g| g.values == t.values) {
            gens.push(t);
        }
    }

    let zero = FunctionTable {
        values: vec![0; pts.len()],
        provenance: Some(PolyZpk::zero(ring, dim)),
    };
    let mut fam = FunctionFamily::new(ring, pts.len(), vec![zero])?;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let cur = &fam.tables[i];
            let values: Vec<Residue> = cur.values.iter().zip(&g.values).map(|(&a, &b)| ring.add(a, b)).collect();
            if fam.index.contains_key(&values) {
                continue;
            }
            if fam.len() >= cap {
                return Err(Error::budget(
                    "function family enumeration",
                    format!("at most {bound} tables"),
                    cap,
                ));
            }
            let provenance = match (&cur.provenance, &g.provenance) {
                (Some(a), Some(b)) => Some(a.add(b)),
                _ => None,
            };
            fam.push(FunctionTable { values, provenance });
            queue.push_back(fam.len() - 1);
        }
    }
    Ok(fam)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaMode {
    Enumerate,
    Sample,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub checked: u64,
    pub failures: u64,
    /// Every case was covered rather than a sample.
    pub exhaustive: bool,
    /// Cases settled by a 0/1 root rather than a table scan.
    pub via_schanuel: u64,
    pub first_failure: Option<String>,
}

impl PropertyCheck {
    fn fail(&mut self, what: String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(what);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionLemmaReport {
    pub p: u64,
    pub k: u32,
    pub n: usize,
    pub dim_m: usize,
    pub degree_cap: u64,
    /// Smallest `m` for which the dimension bound holds.
    pub required_dim: u64,
    pub bound_satisfied: bool,
    pub mode: LemmaMode,
    pub family_size: Option<usize>,
    pub points: u128,
    /// Every member vanishes somewhere on `S`.
    pub property1: PropertyCheck,
    /// Any `n` points are sent to 1 by some member.
    pub property2: PropertyCheck,
    pub closure: Option<bool>,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl FunctionLemmaReport {
    fn new(ring: Zpk, n: usize, dim: usize, mode: LemmaMode, points: u128) -> Self {
        let (p, k) = (ring.p() as u64, ring.k());
        let required_dim = choose_m(p, k, n as u64);
        FunctionLemmaReport {
            p,
            k,
            n,
            dim_m: dim,
            degree_cap: degree_cap(p, k, n as u64),
            required_dim,
            bound_satisfied: dim as u64 >= required_dim,
            mode,
            family_size: None,
            points,
            property1: PropertyCheck::default(),
            property2: PropertyCheck::default(),
            closure: None,
            pass: false,
            notes: Vec::new(),
        }
    }

    fn finish(mut self) -> Self {
        if !self.bound_satisfied {
            self.notes.push(format!(
                "m = {} does not exceed n(p-1)p^(k-1)(p^k-1) = {}; the dimension bound is violated",
                self.dim_m,
                self.required_dim - 1
            ));
        }
        self.pass = self.property1.passed() && self.property2.passed() && self.closure != Some(false);
        self
    }
}

/// Checks that `f` vanishes on `S`, preferring a 0/1 root when the degree
/// bound applies and falling back to the table.
fn check_vanishing(
    check: &mut PropertyCheck,
    label: String,
    poly: Option<&PolyZpk>,
    table: Option<&FunctionTable>,
    points: &PointSet,
) -> Result<()> {
    check.checked += 1;
    if let Some(f) = poly {
        let bound = (points.ring().modulus() as u64 - 1) * f.degree() as u64;
        if f.free_term() == 0 && points.dim() as u64 > bound {
            let root = schanuel_root(f)?;
            if !points.contains(&root) || f.eval(&root)? != 0 {
                return Err(Error::Internal(format!("0/1 root {root:?} of {f} is not a zero in S")));
            }
            check.via_schanuel += 1;
            return Ok(());
        }
    }
    let vanishes = match table {
        Some(t) => t.zero_position().is_some(),
        None => {
            let f = poly.expect("a polynomial or a table");
            let pts = points.explicit_points()?;
            pts.iter().any(|s| f.eval(s).is_ok_and(|v| v == 0))
        }
    };
    if !vanishes {
        check.fail(label);
    }
    Ok(())
}

/// Subsets of `0..len` of size `1..=n`, in order of size then lexicographic.
fn subsets(len: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=n.min(len)).flat_map(move |size| {
        let mut cur: Option<Vec<usize>> = Some((0..size).collect());
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            let c = cur.as_mut().unwrap();
            let mut i = size;
            loop {
                if i == 0 {
                    cur = None;
                    break;
                }
                i -= 1;
                if c[i] < len - size + i {
                    c[i] += 1;
                    for j in i + 1..size {
                        c[j] = c[j - 1] + 1;
                    }
                    break;
                }
            }
            Some(out)
        })
    })
}

fn subset_count(len: usize, n: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for size in 1..=n.min(len) as u128 {
        c = c.saturating_mul(len as u128 - size + 1) / size;
        total = total.saturating_add(c);
    }
    total
}

/// Certifies both properties for an explicit family on an explicit `S`.
///
/// Property 2 is checked on every subset of at most `n` points when there are
/// at most `budget` of them, otherwise on `budget` random subsets. A subset
/// is covered when the interpolant's table lies in the family or, failing
/// that, when some member equals 1 on it.
pub fn verify_family(
    family: &FunctionFamily,
    points: &PointSet,
    n: usize,
    budget: usize,
    seed: u64,
) -> Result<FunctionLemmaReport> {
    let ring = family.ring();
    let pts = points.explicit_points()?;
    if family.npoints() != pts.len() {
        return Err(Error::Precondition(format!(
            "family tables have {} entries but |S| = {}",
            family.npoints(),
            pts.len()
        )));
    }
    let mut report = FunctionLemmaReport::new(ring, n, points.dim(), LemmaMode::Enumerate, pts.len() as u128);
    report.family_size = Some(family.len());
    report.closure = Some(family.check_group().is_ok());
    if let Err(e) = family.check_group() {
        report.notes.push(e.to_string());
    }

    report.property1.exhaustive = true;
    for (i, t) in family.tables().iter().enumerate() {
        check_vanishing(&mut report.property1, format!("function {i} {:?}", t.values), t.provenance.as_ref(), Some(t), points)?;
    }

    let covers = |targets: &[usize]| -> Result<bool> {
        let tpts: Vec<Vec<Residue>> = targets.iter().map(|&i| pts[i].clone()).collect();
        let interp = interpolate_f_t(points, n, &tpts)?;
        let table = FunctionTable::from_poly(&interp.f, points)?;
        if family.position(&table.values).is_some() {
            return Ok(true);
        }
        Ok(family.tables().iter().any(|t| targets.iter().all(|&i| t.values[i] == 1)))
    };
    let total = subset_count(pts.len(), n);
    if total <= budget as u128 {
        report.property2.exhaustive = true;
        for t in subsets(pts.len(), n) {
            report.property2.checked += 1;
            if !covers(&t)? {
                report.property2.fail(format!("points {t:?}"));
            }
        }
    } else {
        report.notes.push(format!("property 2 sampled on {budget} of {total} point sets"));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..budget {
            let size = rng.gen_range(1..=n.min(pts.len()));
            let mut t: Vec<usize> = (0..size).map(|_| rng.gen_range(0..pts.len())).collect();
            t.sort_unstable();
            t.dedup();
            report.property2.checked += 1;
            if !covers(&t)? {
                report.property2.fail(format!("points {t:?}"));
            }
        }
    }
    Ok(report.finish())
}

/// A random polynomial without free term, degree at most `cap`, with at most
/// `max_terms` terms.
fn random_member<R: Rng>(rng: &mut R, ring: Zpk, dim: usize, cap: u64, max_terms: usize) -> PolyZpk {
    let nterms = rng.gen_range(1..=max_terms);
    PolyZpk::from_terms(
        ring,
        dim,
        (0..nterms).map(|_| {
            let d = rng.gen_range(1..=cap as u32);
            let m = Monomial::from_pairs((0..d).map(|_| (rng.gen_range(0..dim as u32), 1)).collect());
            (m, rng.gen_range(1..ring.modulus()))
        }),
    )
}

/// Checks the two properties of the function family for parameters
/// `(p, k, n, m)`.
///
/// `Enumerate` builds the whole family (at most `budget` tables) and checks
/// every member and every point set. `Sample` draws `budget` random sparse
/// members and `budget` random point sets from a seeded generator.
pub fn verify_function_lemma(
    p: u64,
    k: u32,
    n: usize,
    dim: usize,
    mode: LemmaMode,
    budget: usize,
    seed: u64,
) -> Result<FunctionLemmaReport> {
    if n == 0 || dim == 0 {
        return Err(Error::Precondition("n and m must be positive".into()));
    }
    let ring = Zpk::new(p, k)?;
    match mode {
        LemmaMode::Enumerate => {
            let points = PointSet::new(ring, dim, POINT_CAP);
            let family = enumerate_family(ring, n, &points, budget)?;
            verify_family(&family, &points, n, budget.max(1), seed)
        }
        LemmaMode::Sample => {
            let points = PointSet::new(ring, dim, POINT_CAP.min(budget.saturating_mul(64)));
            let mut report = FunctionLemmaReport::new(ring, n, dim, mode, points.size());
            let cap = degree_cap(p, k, n as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let max_terms = monomial_count(dim, cap).min(16) as usize;
            for _ in 0..budget {
                let f = random_member(&mut rng, ring, dim, cap, max_terms);
                check_vanishing(&mut report.property1, format!("{f}"), Some(&f), None, &points)?;
            }
            for _ in 0..budget {
                let size = rng.gen_range(1..=n);
                let targets: Vec<Vec<Residue>> = (0..size).map(|_| points.random_point(&mut rng)).collect();
                let mut distinct = targets.clone();
                distinct.sort();
                distinct.dedup();
                report.property2.checked += 1;
                let f = interpolate_f_t(&points, n, &distinct)?.f;
                let ok = f.free_term() == 0
                    && f.degree() as u64 <= cap
                    && distinct.iter().all(|t| f.eval(t).is_ok_and(|v| v == 1));
                if !ok {
                    report.property2.fail(format!("points {distinct:?}"));
                }
            }
            Ok(report.finish())
        }
    }
}
