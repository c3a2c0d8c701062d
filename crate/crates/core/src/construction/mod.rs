//! The group `G = F ⋉ ∏_{s∈S} H_s`, its diagonal copy of `H`, the auxiliary
//! group `H̃ = ⟨β⟩ ⋉ H` and the equation system over `H`.

mod htilde;
mod system;

pub use htilde::{beta_to_b, build_htilde, Htilde, HtildeElement};
pub use system::{build_equation_system, obvious_solution, Equation, EquationSystem};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::group::{
    bounded_n_search, generators_mod_centre, purity_witness_search, special_set, LatticeLimits,
    NSearch, PurityWitness,
};
use crate::zpk::{
    choose_m, enumerate_family, verify_family, FunctionFamily, FunctionLemmaReport, FunctionTable,
    PointSet, Residue, Zpk,
};
use crate::{Elem, Error, FiniteGroup, Group, Result};

/// An element `(f, (h_s)_{s∈S})` of `G`: a member of the family, by index,
/// and one element of `H` per point of `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BigElement {
    pub f: u32,
    pub comps: SmallVec<[Elem; 8]>,
}

/// Knobs for [`build_spec`]. `None` fields are derived from `H`.
#[derive(Clone, Debug)]
pub struct SpecOptions {
    pub witness: Option<PurityWitness>,
    pub n: Option<usize>,
    /// May only lower the dimension given by `choose_m`.
    pub dim_m: Option<usize>,
    pub family: Option<Vec<FunctionTable>>,
    pub limits: LatticeLimits,
    /// Largest family size the commuting-decomposition search looks for.
    pub n_cap: usize,
    pub family_cap: usize,
    pub point_cap: usize,
    /// Point sets examined when certifying property 2 of the family.
    pub lemma_budget: usize,
    pub seed: u64,
}

impl Default for SpecOptions {
    fn default() -> Self {
        SpecOptions {
            witness: None,
            n: None,
            dim_m: None,
            family: None,
            limits: LatticeLimits::default(),
            n_cap: 8,
            family_cap: 1 << 16,
            point_cap: 1 << 12,
            lemma_budget: 10_000,
            seed: 0,
        }
    }
}

/// Everything the construction needs for one group `H`, plus lookup tables
/// for fast arithmetic in `G`.
#[derive(Clone, Debug)]
pub struct CounterexampleSpec {
    h: FiniteGroup,
    witness: PurityWitness,
    n_search: NSearch,
    n_used: usize,
    dim_m: usize,
    points: PointSet,
    family: FunctionFamily,
    gens: Vec<Elem>,
    certification: FunctionLemmaReport,
    notes: Vec<String>,
    // conj[a·|H| + h] = b^{-a} h b^a
    conj: Vec<u32>,
    add: Vec<u32>,
    neg: Vec<u32>,
    zero: u32,
}

/// Builds the spec for `H`: witness, `n`, `m`, `S`, a certified family `F`
/// and generators modulo the centre.
pub fn build_spec(h: &FiniteGroup, opts: &SpecOptions) -> Result<CounterexampleSpec> {
    let mut notes = Vec::new();
    let witness = match opts.witness {
        Some(w) => {
            w.validate(h)?;
            w
        }
        None => purity_witness_search(h).ok_or_else(|| Error::NoWitness(h.label().to_string()))?,
    };
    let e = special_set(h, &witness);
    let n_search = bounded_n_search(h, &e, opts.n_cap, &opts.limits);
    let n_used = match opts.n {
        Some(n) => {
            notes.push(format!("n overridden to {n}"));
            n.max(1)
        }
        None if n_search.exact => n_search.n.max(1),
        None => {
            notes.push(format!(
                "n is only a lower bound ({}); using {} instead",
                n_search.n,
                n_search.n + 1
            ));
            n_search.n + 1
        }
    };

    let ring = Zpk::new(witness.p, witness.k)?;
    let required = choose_m(witness.p, witness.k, n_used as u64) as usize;
    let dim_m = match opts.dim_m {
        Some(m) if m > required => {
            return Err(Error::Precondition(format!(
                "m = {m} exceeds the sufficient dimension {required}; only lowering is supported"
            )))
        }
        Some(m) => {
            if m < required {
                notes.push(format!("m lowered from {required} to {m}; family re-certified"));
            }
            m
        }
        None => required,
    };
    let points = PointSet::new(ring, dim_m, opts.point_cap);
    if !points.is_explicit() {
        return Err(Error::budget("point set S", points.size(), opts.point_cap));
    }
    let npoints = points.points().map_or(0, <[_]>::len);
    let family = match &opts.family {
        Some(tables) => FunctionFamily::new(ring, npoints, tables.clone())?,
        None => enumerate_family(ring, n_used, &points, opts.family_cap)?,
    };
    let certification = verify_family(&family, &points, n_used, opts.lemma_budget, opts.seed)?;
    if !certification.pass {
        let why = certification
            .property1
            .first_failure
            .clone()
            .or_else(|| certification.property2.first_failure.clone())
            .or_else(|| certification.notes.first().cloned())
            .unwrap_or_default();
        return Err(Error::Certification(why));
    }
    let gens = generators_mod_centre(h);
    CounterexampleSpec::assemble(Parts {
        h: h.clone(),
        witness,
        n_search,
        n_used,
        dim_m,
        points,
        family,
        gens,
        certification,
        notes,
    })
}

struct Parts {
    h: FiniteGroup,
    witness: PurityWitness,
    n_search: NSearch,
    n_used: usize,
    dim_m: usize,
    points: PointSet,
    family: FunctionFamily,
    gens: Vec<Elem>,
    certification: FunctionLemmaReport,
    notes: Vec<String>,
}

impl CounterexampleSpec {
    fn assemble(parts: Parts) -> Result<Self> {
        let Parts {
            h,
            witness,
            n_search,
            n_used,
            dim_m,
            points,
            family,
            gens,
            certification,
            notes,
        } = parts;
        family.check_group()?;
        if let Some(i) = family.tables().iter().position(|t| t.zero_position().is_none()) {
            return Err(Error::Certification(format!("function {i} vanishes nowhere on S")));
        }
        let ring = family.ring();
        let q = ring.modulus() as usize;
        let order = h.order();
        let mut conj = Vec::with_capacity(q * order);
        for a in 0..q {
            let ba = h.power(witness.b, a as i64);
            let ba_inv = h.inverse(ba);
            conj.extend(h.elements().map(|x| h.op(h.op(ba_inv, x), ba).0));
        }
        let nf = family.len();
        let mut add = Vec::with_capacity(nf * nf);
        for i in 0..nf {
            for j in 0..nf {
                add.push(family.add(i, j).expect("closed family") as u32);
            }
        }
        let neg = (0..nf).map(|i| family.neg(i).expect("closed family") as u32).collect();
        let zero = family.zero().expect("closed family") as u32;
        Ok(CounterexampleSpec {
            h,
            witness,
            n_search,
            n_used,
            dim_m,
            points,
            family,
            gens,
            certification,
            notes,
            conj,
            add,
            neg,
            zero,
        })
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn witness(&self) -> PurityWitness {
        self.witness
    }

    pub fn n_search(&self) -> &NSearch {
        &self.n_search
    }

    pub fn n_used(&self) -> usize {
        self.n_used
    }

    pub fn dim_m(&self) -> usize {
        self.dim_m
    }

    pub fn ring(&self) -> Zpk {
        self.family.ring()
    }

    pub fn point_set(&self) -> &PointSet {
        &self.points
    }

    /// `S` in lexicographic order.
    pub fn points(&self) -> &[Vec<Residue>] {
        self.points.points().expect("explicit point set")
    }

    pub fn npoints(&self) -> usize {
        self.family.npoints()
    }

    pub fn family(&self) -> &FunctionFamily {
        &self.family
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn certification(&self) -> &FunctionLemmaReport {
        &self.certification
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// `f(s)` for the family member `f` and the point with index `s`.
    #[inline]
    pub fn value(&self, f: u32, s: usize) -> Residue {
        self.family.table(f as usize).values[s]
    }

    /// `h^{b^a} = b^{-a} h b^a`.
    #[inline]
    pub fn act(&self, h: Elem, a: Residue) -> Elem {
        Elem(self.conj[a as usize * self.h.order() + h.idx()])
    }

    pub fn zero_function(&self) -> u32 {
        self.zero
    }

    /// The element `(f, 1)`.
    pub fn pure_f(&self, f: u32) -> BigElement {
        BigElement {
            f,
            comps: SmallVec::from_elem(Elem::IDENTITY, self.npoints()),
        }
    }

    /// `h` placed at the point with index `s`, identity elsewhere.
    pub fn at_point(&self, s: usize, h: Elem) -> BigElement {
        let mut x = self.identity();
        x.comps[s] = h;
        x
    }

    /// `∏_s h_s`, the diagonal image of `h`.
    pub fn diag(&self, h: Elem) -> BigElement {
        BigElement {
            f: self.zero,
            comps: SmallVec::from_elem(h, self.npoints()),
        }
    }

    pub fn is_diagonal(&self, x: &BigElement) -> Option<Elem> {
        let first = *x.comps.first()?;
        (x.f == self.zero && x.comps.iter().all(|&c| c == first)).then_some(first)
    }

    pub fn validate_element(&self, x: &BigElement) -> Result<()> {
        if x.f as usize >= self.family.len() {
            return Err(Error::Precondition(format!("function index {} is not in F", x.f)));
        }
        if x.comps.len() != self.npoints() || x.comps.iter().any(|c| c.idx() >= self.h.order()) {
            return Err(Error::Precondition("components do not match S and H".into()));
        }
        Ok(())
    }

    /// Checks that `a ↦ (h ↦ h^{b^a})` is a homomorphism from `Z_{p^k}` to
    /// `Aut(H)`; this needs `b^{p^k}` central.
    pub fn check_action(&self) -> Result<()> {
        let ring = self.ring();
        let q = ring.modulus();
        let h = &self.h;
        for a in 0..q {
            for x in h.elements() {
                for y in h.elements() {
                    if self.act(h.op(x, y), a) != h.op(self.act(x, a), self.act(y, a)) {
                        return Err(Error::Internal(format!("conjugation by b^{a} is not multiplicative")));
                    }
                }
                for c in 0..q {
                    if self.act(self.act(x, a), c) != self.act(x, ring.add(a, c)) {
                        return Err(Error::Internal(format!(
                            "conjugation by b^{a} then b^{c} differs from b^{}",
                            ring.add(a, c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `|G| = |F|·|H|^{|S|}`, if it fits in a `u64`.
    pub fn element_count(&self) -> Option<u64> {
        let mut n = self.family.len() as u64;
        for _ in 0..self.npoints() {
            n = n.checked_mul(self.h.order() as u64)?;
        }
        Some(n)
    }

    /// The element with the given index: family index most significant,
    /// then components in point order.
    pub fn element(&self, mut idx: u64) -> BigElement {
        let order = self.h.order() as u64;
        let mut comps = SmallVec::from_elem(Elem::IDENTITY, self.npoints());
        for s in (0..self.npoints()).rev() {
            comps[s] = Elem((idx % order) as u32);
            idx /= order;
        }
        BigElement { f: idx as u32, comps }
    }

    pub fn index_of(&self, x: &BigElement) -> u64 {
        let order = self.h.order() as u64;
        x.comps
            .iter()
            .fold(x.f as u64, |acc, c| acc * order + c.0 as u64)
    }

    /// The `s`-th coordinate homomorphism `G → H̃`.
    pub fn phi(&self, s: usize, x: &BigElement) -> HtildeElement {
        HtildeElement {
            a: self.value(x.f, s),
            h: x.comps[s],
        }
    }

    /// First point where the member `f` vanishes.
    pub fn vanishing_point(&self, f: u32) -> Option<usize> {
        self.family.table(f as usize).zero_position()
    }

    pub fn to_document(&self) -> SpecDocument {
        SpecDocument {
            group: GroupDocument::from_group(&self.h),
            witness: WitnessDocument {
                b: self.h.name(self.witness.b).to_string(),
                b_index: self.witness.b.0,
                p: self.witness.p,
                k: self.witness.k,
            },
            n_search: self.n_search.clone(),
            n_used: self.n_used,
            dim_m: self.dim_m,
            points: self.points().to_vec(),
            family: self.family.tables().to_vec(),
            gens: self.gens.iter().map(|g| g.0).collect(),
            gen_names: self.gens.iter().map(|&g| self.h.name(g).to_string()).collect(),
            certification: self.certification.clone(),
            notes: self.notes.clone(),
        }
    }

    /// Rebuilds a spec from its document, re-checking the group table, the
    /// witness, `S`, closure of `F` and the generators. The recorded
    /// certification is kept as is.
    pub fn from_document(doc: &SpecDocument) -> Result<Self> {
        let h = doc.group.to_group()?;
        let witness = PurityWitness {
            b: Elem(doc.witness.b_index),
            p: doc.witness.p,
            k: doc.witness.k,
        };
        witness.validate(&h)?;
        let ring = Zpk::new(witness.p, witness.k)?;
        let points = PointSet::new(ring, doc.dim_m, doc.points.len());
        if points.points() != Some(doc.points.as_slice()) {
            return Err(Error::Precondition("recorded S is not the lexicographic point set".into()));
        }
        let family = FunctionFamily::new(ring, doc.points.len(), doc.family.clone())?;
        if family.len() != doc.family.len() {
            return Err(Error::Precondition("recorded family has duplicate tables".into()));
        }
        let gens: Vec<Elem> = doc.gens.iter().map(|&g| Elem(g)).collect();
        if gens.iter().any(|g| g.idx() >= h.order()) {
            return Err(Error::Precondition("generator out of range".into()));
        }
        let all: Vec<Elem> = gens.iter().chain(h.centre().members()).copied().collect();
        if h.closure(&all).order() != h.order() {
            return Err(Error::Precondition("generators do not generate H modulo its centre".into()));
        }
        Self::assemble(Parts {
            h,
            witness,
            n_search: doc.n_search.clone(),
            n_used: doc.n_used,
            dim_m: doc.dim_m,
            points,
            family,
            gens,
            certification: doc.certification.clone(),
            notes: doc.notes.clone(),
        })
    }
}

impl Group for CounterexampleSpec {
    type Element = BigElement;

    fn identity(&self) -> BigElement {
        self.pure_f(self.zero)
    }

    /// `(f1, d1)(f2, d2) = (f1 + f2, d1^{f2}·d2)`.
    fn mul(&self, a: &BigElement, b: &BigElement) -> BigElement {
        let fb = &self.family.table(b.f as usize).values;
        let comps = a
            .comps
            .iter()
            .zip(&b.comps)
            .zip(fb)
            .map(|((&x, &y), &e)| self.h.op(self.act(x, e), y))
            .collect();
        BigElement {
            f: self.add[a.f as usize * self.family.len() + b.f as usize],
            comps,
        }
    }

    /// `(f, d)⁻¹ = (−f, (d⁻¹)^{−f})`.
    fn inv(&self, a: &BigElement) -> BigElement {
        let f = self.neg[a.f as usize];
        let fv = &self.family.table(f as usize).values;
        let comps = a
            .comps
            .iter()
            .zip(fv)
            .map(|(&x, &e)| self.act(self.h.inverse(x), e))
            .collect();
        BigElement { f, comps }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDocument {
    pub label: String,
    pub order: usize,
    pub names: Vec<String>,
    pub rows: Vec<Vec<u32>>,
}

impl GroupDocument {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupDocument {
            label: g.label().to_string(),
            order: g.order(),
            names: g.names().to_vec(),
            rows: g.rows(),
        }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        let rows: Vec<Vec<usize>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| x as usize).collect())
            .collect();
        if rows.len() != self.order {
            return Err(Error::InvalidTable(format!(
                "{} rows recorded for order {}",
                rows.len(),
                self.order
            )));
        }
        FiniteGroup::from_rows(self.label.clone(), &rows, Some(self.names.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub b: String,
    pub b_index: u32,
    pub p: u64,
    pub k: u32,
}

/// The serialized form of a [`CounterexampleSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecDocument {
    pub group: GroupDocument,
    pub witness: WitnessDocument,
    pub n_search: NSearch,
    pub n_used: usize,
    pub dim_m: usize,
    pub points: Vec<Vec<Residue>>,
    pub family: Vec<FunctionTable>,
    pub gens: Vec<u32>,
    pub gen_names: Vec<String>,
    pub certification: FunctionLemmaReport,
    pub notes: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn q8_spec() -> CounterexampleSpec {
        build_spec(&catalog::quaternion(), &SpecOptions::default()).unwrap()
    }

    fn el(g: &FiniteGroup, n: &str) -> Elem {
        g.elem_by_name(n).unwrap()
    }

    fn random_element<R: Rng>(spec: &CounterexampleSpec, rng: &mut R) -> BigElement {
        spec.element(rng.gen_range(0..spec.element_count().unwrap()))
    }

    #[test]
    fn q8_spec_shape() {
        let spec = q8_spec();
        let h = spec.h();
        assert_eq!(spec.witness(), PurityWitness { b: el(h, "i"), p: 2, k: 1 });
        assert_eq!(spec.n_search().n, 0);
        assert!(spec.n_search().exact);
        assert_eq!(spec.n_used(), 1);
        assert_eq!(spec.dim_m(), 2);
        assert_eq!(spec.npoints(), 3);
        assert_eq!(spec.family().len(), 4);
        assert_eq!(spec.gens(), &[el(h, "i"), el(h, "j")]);
        assert_eq!(spec.element_count(), Some(2048));
        assert!(spec.certification().pass);
    }

    #[test]
    fn d4_spec_shape() {
        let d4 = catalog::dihedral(4);
        let spec = build_spec(&d4, &SpecOptions::default()).unwrap();
        assert_eq!(spec.witness(), PurityWitness { b: el(&d4, "r"), p: 2, k: 1 });
        assert_eq!(spec.n_used(), 1);
        assert_eq!((spec.npoints(), spec.family().len()), (3, 4));
        assert_eq!(spec.gens(), &[el(&d4, "r"), el(&d4, "f")]);
    }

    #[test]
    fn abelian_groups_have_no_witness() {
        let e = build_spec(&catalog::cyclic(4), &SpecOptions::default()).unwrap_err();
        assert!(matches!(e, Error::NoWitness(_)));
    }

    #[test]
    fn corrupted_family_is_rejected() {
        let spec = q8_spec();
        let opts = SpecOptions {
            family: Some(spec.family().tables()[1..].to_vec()),
            ..SpecOptions::default()
        };
        let e = build_spec(spec.h(), &opts).unwrap_err();
        assert!(matches!(e, Error::Certification(_)), "{e}");
    }

    #[test]
    fn dimension_override_only_lowers() {
        let q8 = catalog::quaternion();
        let up = SpecOptions {
            dim_m: Some(3),
            ..SpecOptions::default()
        };
        assert!(build_spec(&q8, &up).is_err());
        let down = SpecOptions {
            dim_m: Some(1),
            ..SpecOptions::default()
        };
        assert!(matches!(build_spec(&q8, &down).unwrap_err(), Error::Certification(_)));
    }

    #[test]
    fn multiplication_examples() {
        let spec = q8_spec();
        let h = spec.h();
        let i = el(h, "i");
        let x = random_element(&spec, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(spec.mul(&spec.identity(), &x), x);
        assert_eq!(spec.mul(&spec.pure_f(1), &spec.pure_f(2)), spec.pure_f(3));
        // f with f(s0) = 1: family member 2 is (1, 0, 1)
        assert_eq!(spec.value(2, 0), 1);
        let prod = spec.mul(&spec.at_point(0, i), &spec.pure_f(2));
        assert_eq!(prod.f, 2);
        assert_eq!(prod.comps.as_slice(), &[i, Elem::IDENTITY, Elem::IDENTITY]);
        // a component that does not commute with b picks up a sign
        let j = el(h, "j");
        let prod = spec.mul(&spec.at_point(0, j), &spec.pure_f(2));
        assert_eq!(prod.comps[0], el(h, "-j"));
    }

    #[test]
    fn group_axioms_on_random_triples() {
        let spec = q8_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let (a, b, c) = (
                random_element(&spec, &mut rng),
                random_element(&spec, &mut rng),
                random_element(&spec, &mut rng),
            );
            assert_eq!(spec.mul(&spec.mul(&a, &b), &c), spec.mul(&a, &spec.mul(&b, &c)));
            assert_eq!(spec.mul(&a, &spec.inv(&a)), spec.identity());
            assert_eq!(spec.mul(&spec.inv(&a), &a), spec.identity());
        }
        assert_eq!(spec.inv(&spec.identity()), spec.identity());
        assert_eq!(spec.inv(&spec.pure_f(3)), spec.pure_f(3));
    }

    #[test]
    fn action_is_a_homomorphism_into_automorphisms() {
        // together with closure of F this is equivalent to associativity of G
        let spec = q8_spec();
        spec.check_action().unwrap();
        let d4 = build_spec(&catalog::dihedral(4), &SpecOptions::default()).unwrap();
        d4.check_action().unwrap();
    }

    #[test]
    fn all_pairs_against_random_thirds() {
        let spec = q8_spec();
        let n = spec.element_count().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for ia in (0..n).step_by(7) {
            let a = spec.element(ia);
            for ib in (0..n).step_by(5) {
                let b = spec.element(ib);
                let c = random_element(&spec, &mut rng);
                assert_eq!(spec.mul(&spec.mul(&a, &b), &c), spec.mul(&a, &spec.mul(&b, &c)));
            }
        }
        for i in 0..n {
            let a = spec.element(i);
            assert_eq!(spec.mul(&a, &spec.inv(&a)), spec.identity());
        }
    }

    #[test]
    fn diagonal_embedding() {
        let spec = q8_spec();
        let h = spec.h();
        let (i, j) = (el(h, "i"), el(h, "j"));
        assert_eq!(spec.diag(Elem::IDENTITY), spec.identity());
        assert_eq!(spec.mul(&spec.diag(i), &spec.diag(j)), spec.diag(el(h, "k")));
        let mut seen = std::collections::HashSet::new();
        for a in h.elements() {
            assert!(seen.insert(spec.diag(a)));
            assert_eq!(spec.is_diagonal(&spec.diag(a)), Some(a));
            for b in h.elements() {
                assert_eq!(spec.diag(h.op(a, b)), spec.mul(&spec.diag(a), &spec.diag(b)));
            }
        }
        assert_eq!(spec.is_diagonal(&spec.pure_f(1)), None);
        assert_eq!(spec.is_diagonal(&spec.at_point(1, i)), None);
    }

    #[test]
    fn coordinate_maps_are_homomorphisms() {
        let spec = q8_spec();
        let ht = build_htilde(spec.h(), &spec.witness(), 1 << 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let a = random_element(&spec, &mut rng);
            let b = random_element(&spec, &mut rng);
            for s in 0..spec.npoints() {
                let lhs = ht.index(spec.phi(s, &spec.mul(&a, &b)));
                let rhs = ht.group().op(ht.index(spec.phi(s, &a)), ht.index(spec.phi(s, &b)));
                assert_eq!(lhs, rhs);
            }
        }
        for x in spec.h().elements() {
            for s in 0..spec.npoints() {
                assert_eq!(spec.phi(s, &spec.diag(x)), HtildeElement { a: 0, h: x });
            }
        }
        let f = spec.pure_f(2);
        assert_eq!(spec.phi(0, &f), HtildeElement { a: 1, h: Elem::IDENTITY });
    }

    #[test]
    fn element_indexing_round_trips() {
        let spec = q8_spec();
        for idx in [0u64, 1, 7, 8, 511, 512, 2047] {
            let x = spec.element(idx);
            spec.validate_element(&x).unwrap();
            assert_eq!(spec.index_of(&x), idx);
        }
        assert_eq!(spec.element(0), spec.identity());
    }

    #[test]
    fn every_member_vanishes_somewhere() {
        let spec = q8_spec();
        for f in 0..spec.family().len() as u32 {
            let s = spec.vanishing_point(f).unwrap();
            assert_eq!(spec.value(f, s), 0);
        }
    }

    #[test]
    fn document_round_trip() {
        let spec = q8_spec();
        let doc = spec.to_document();
        let text = serde_json::to_string(&doc).unwrap();
        let back: SpecDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        let rebuilt = CounterexampleSpec::from_document(&back).unwrap();
        assert_eq!(rebuilt.to_document(), doc);
        let mut bad = doc.clone();
        bad.witness.b_index = 1;
        assert!(CounterexampleSpec::from_document(&bad).is_err());
    }
}
