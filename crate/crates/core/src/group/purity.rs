//! Purity of the centre, the commuting-decomposition number and the
//! transfer into a central subgroup.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::{Elem, FiniteGroup, LatticeLimits, Subgroup, SubgroupLattice};
use crate::{Error, Result};

/// `(b, p, k)` with `b^{p^k}` central but not a `p^k`-th power of a central
/// element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PurityWitness {
    pub b: Elem,
    pub p: u64,
    pub k: u32,
}

impl PurityWitness {
    pub fn prime_power(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn validate(&self, h: &FiniteGroup) -> Result<()> {
        if self.b.idx() >= h.order() {
            return Err(Error::Precondition(format!("element {} out of range", self.b.0)));
        }
        if self.k == 0 || !is_prime(self.p) {
            return Err(Error::Precondition(format!(
                "p = {} must be prime and k = {} positive",
                self.p, self.k
            )));
        }
        let q = self.prime_power() as i64;
        let z = h.centre();
        let c = h.power(self.b, q);
        if !z.contains(c) {
            return Err(Error::Precondition(format!(
                "{}^{q} is not central",
                h.name(self.b)
            )));
        }
        if z.members().iter().any(|&y| h.power(y, q) == c) {
            return Err(Error::Precondition(format!(
                "{}^{q} is already a {q}-th power of a central element",
                h.name(self.b)
            )));
        }
        Ok(())
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Elements `h` with `h^{p^k} = 1` that commute with `b`.
pub fn special_set(h: &FiniteGroup, w: &PurityWitness) -> Vec<Elem> {
    let q = w.prime_power() as i64;
    h.elements()
        .filter(|&x| h.power(x, q) == Elem::IDENTITY && h.commutes(x, w.b))
        .collect()
}

/// Smallest `(p, k, b)` witnessing that the centre is not pure, if any.
///
/// `k` ranges over `p^k <= exponent(H)`; larger powers repeat values.
pub fn purity_witness_search(h: &FiniteGroup) -> Option<PurityWitness> {
    let z = h.centre();
    let exp = h.exponent() as u64;
    for p in prime_divisors(h.order() as u64) {
        let mut q = p;
        let mut k = 1;
        while q <= exp {
            let central_powers = powers_of(h, z.members().iter().copied(), q);
            for b in h.elements() {
                let c = h.power(b, q as i64);
                if z.contains(c) && !central_powers.contains(c.idx()) {
                    return Some(PurityWitness { b, p, k });
                }
            }
            q *= p;
            k += 1;
        }
    }
    None
}

fn powers_of(h: &FiniteGroup, xs: impl Iterator<Item = Elem>, e: u64) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(h.order());
    for x in xs {
        set.insert(h.power(x, e as i64).idx());
    }
    set
}

/// `B ∩ {a^{p^k} | a ∈ A} = {b^{p^k} | b ∈ B}` for central `B`.
pub fn p_pure_check(a: &FiniteGroup, b: &Subgroup, p: u64, k: u32) -> Result<bool> {
    if !b.is_central_in(a) {
        return Err(Error::NotCentral {
            group: a.label().to_string(),
        });
    }
    let q = p.pow(k);
    let mut in_a = powers_of(a, a.elements(), q);
    in_a.intersect_with(b.mask());
    Ok(in_a == powers_of(a, b.members().iter().copied(), q))
}

/// Direct purity check: for every `e <= exponent(A)`, each `e`-th power of
/// `A` lying in `B` is an `e`-th power of an element of `B`.
pub fn is_pure(a: &FiniteGroup, b: &Subgroup) -> bool {
    (1..=a.exponent() as u64).all(|e| {
        let mut in_a = powers_of(a, a.elements(), e);
        in_a.intersect_with(b.mask());
        in_a.is_subset(&powers_of(a, b.members().iter().copied(), e))
    })
}

/// Result of the search for the largest family of pairwise commuting
/// subgroups with product `H`, none centralising a given set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NSearch {
    pub n: usize,
    /// `false` means `n` is only a lower bound.
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn bounded_n_search(
    h: &FiniteGroup,
    e: &[Elem],
    cap: usize,
    limits: &LatticeLimits,
) -> NSearch {
    let ce = h.centralizer(e);
    if ce.order() == h.order() {
        return NSearch {
            n: 0,
            exact: true,
            note: None,
        };
    }
    // {H} itself is always a valid family once C(E) != H
    let lower = NSearch {
        n: 1.min(cap),
        exact: false,
        note: None,
    };
    let lattice = match SubgroupLattice::enumerate(h, limits) {
        Ok(l) => l,
        Err(err) => {
            return NSearch {
                note: Some(err.to_string()),
                ..lower
            }
        }
    };
    // members of such a family are normalised by themselves and
    // centralised by the rest, hence normal
    let candidates: Vec<Subgroup> = lattice
        .normal(h)
        .into_iter()
        .filter(|k| !k.is_subset_of(&ce))
        .collect();
    let commute: Vec<Vec<bool>> = candidates
        .iter()
        .map(|a| candidates.iter().map(|b| a.commutes_with(b, h)).collect())
        .collect();

    struct Dfs<'a> {
        h: &'a FiniteGroup,
        candidates: &'a [Subgroup],
        commute: &'a [Vec<bool>],
        cap: usize,
        nodes: u64,
        max_nodes: u64,
        best: usize,
    }

    impl Dfs<'_> {
        fn product(&self, a: &FixedBitSet, k: &Subgroup) -> FixedBitSet {
            let mut out = FixedBitSet::with_capacity(self.h.order());
            for x in a.ones() {
                for &y in k.members() {
                    out.insert(self.h.op(Elem::from(x), y).idx());
                }
            }
            out
        }

        fn run(&mut self, start: usize, chosen: &mut Vec<usize>, prod: &FixedBitSet) -> bool {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return false;
            }
            if prod.count_ones(..) == self.h.order() {
                self.best = self.best.max(chosen.len());
            }
            if chosen.len() == self.cap || self.best == self.cap {
                return true;
            }
            for i in start..self.candidates.len() {
                if chosen.iter().all(|&j| self.commute[i][j]) {
                    let next = self.product(prod, &self.candidates[i]);
                    chosen.push(i);
                    let ok = self.run(i + 1, chosen, &next);
                    chosen.pop();
                    if !ok {
                        return false;
                    }
                }
            }
            true
        }
    }

    let mut dfs = Dfs {
        h,
        candidates: &candidates,
        commute: &commute,
        cap,
        nodes: 0,
        max_nodes: limits.max_nodes,
        best: 0,
    };
    let mut start = FixedBitSet::with_capacity(h.order());
    start.insert(0);
    let complete = dfs.run(0, &mut Vec::new(), &start);
    if complete {
        NSearch {
            n: dfs.best,
            exact: true,
            note: None,
        }
    } else {
        NSearch {
            n: dfs.best.max(lower.n),
            exact: false,
            note: Some(format!("node budget {} exhausted", limits.max_nodes)),
        }
    }
}

/// Greedy `h_1, …, h_g` with `⟨h_1, …, h_g⟩·Z(H) = H`, smallest index first.
pub fn generators_mod_centre(h: &FiniteGroup) -> Vec<Elem> {
    let z = h.centre();
    let mut gens = Vec::new();
    let mut current = z.clone();
    while current.order() < h.order() {
        let x = h.elements().find(|&x| !current.contains(x)).unwrap();
        gens.push(x);
        let all: Vec<Elem> = gens.iter().chain(z.members()).copied().collect();
        current = h.closure(&all);
    }
    gens
}

/// `x ↦ x^{|H:F|}` for a central subgroup `F`, checked to be a
/// homomorphism into `F`. Returns the image of every element by index.
pub fn transfer_map(h: &FiniteGroup, f: &Subgroup) -> Result<Vec<Elem>> {
    if !f.is_central_in(h) {
        return Err(Error::NotCentral {
            group: h.label().to_string(),
        });
    }
    let index = (h.order() / f.order()) as i64;
    let map: Vec<Elem> = h.elements().map(|x| h.power(x, index)).collect();
    if let Some(x) = h.elements().find(|&x| !f.contains(map[x.idx()])) {
        return Err(Error::Internal(format!(
            "transfer image of {} leaves the central subgroup",
            h.name(x)
        )));
    }
    for x in h.elements() {
        for y in h.elements() {
            if map[h.op(x, y).idx()] != h.op(map[x.idx()], map[y.idx()]) {
                return Err(Error::Internal(format!(
                    "transfer is not multiplicative on ({}, {})",
                    h.name(x),
                    h.name(y)
                )));
            }
        }
    }
    Ok(map)
}

/// A normal subgroup `C` with `C ∩ Z(H) = 1` and `C·Z(H) = H`, if any.
pub fn centre_direct_factor(h: &FiniteGroup, limits: &LatticeLimits) -> Result<Option<Subgroup>> {
    let z = h.centre();
    if z.order() == h.order() {
        return Ok(Some(h.trivial_subgroup()));
    }
    let lattice = SubgroupLattice::enumerate(h, limits)?;
    let target = h.order() / z.order();
    Ok(lattice
        .subgroups()
        .iter()
        .filter(|c| c.order() == target)
        .find(|c| c.intersection(&z).order() == 1 && c.is_normal_in(h))
        .cloned())
}
