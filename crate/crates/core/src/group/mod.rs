//! Finite groups given by Cayley tables.

mod lattice;
pub(crate) mod purity;

pub use lattice::{LatticeLimits, SubgroupLattice};
pub use purity::{
    bounded_n_search, centre_direct_factor, generators_mod_centre, is_pure, p_pure_check,
    purity_witness_search, special_set, transfer_map, NSearch, PurityWitness,
};

use std::fmt;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest order for which associativity is checked on every triple.
const EXHAUSTIVE_ASSOC_ORDER: usize = 128;
const SAMPLED_ASSOC_TRIPLES: usize = 200_000;

/// Index of an element inside one particular [`FiniteGroup`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const IDENTITY: Elem = Elem(0);

    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for Elem {
    fn from(i: usize) -> Self {
        Elem(i as u32)
    }
}

/// The operations every carrier of equations has to provide.
///
/// Implemented by [`FiniteGroup`] and by the (never tabulated) semidirect
/// product of the construction module.
pub trait Group {
    type Element: Clone + PartialEq + fmt::Debug;

    fn identity(&self) -> Self::Element;
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inv(&self, a: &Self::Element) -> Self::Element;

    fn pow(&self, a: &Self::Element, e: i64) -> Self::Element {
        let base = if e < 0 { self.inv(a) } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`
    fn commutator(&self, a: &Self::Element, b: &Self::Element) -> Self::Element {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }

    /// `a^c = c⁻¹ a c`
    fn conj(&self, a: &Self::Element, c: &Self::Element) -> Self::Element {
        self.mul(&self.mul(&self.inv(c), a), c)
    }
}

/// A finite group stored as its full multiplication table.
///
/// Index 0 is always the identity. The table is immutable once validated.
#[derive(Clone)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    names: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.label, self.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl FiniteGroup {
    /// Validates a table given row by row (`rows[g][h] = g·h`).
    pub fn from_rows(
        label: impl Into<String>,
        rows: &[Vec<usize>],
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let order = rows.len();
        let mut table = Vec::with_capacity(order * order);
        for (g, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidTable(format!(
                    "row {g} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= order {
                    return Err(Error::InvalidTable(format!(
                        "row {g} holds index {x}, out of range for order {order}"
                    )));
                }
                table.push(x as u32);
            }
        }
        Self::from_flat(label, order, table, names)
    }

    /// Tabulates `op` over `0..order` and validates the result.
    pub fn from_fn(
        label: impl Into<String>,
        order: usize,
        names: Option<Vec<String>>,
        mut op: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self> {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let c = op(a, b);
                if c >= order {
                    return Err(Error::InvalidTable(format!(
                        "{a}·{b} = {c} is out of range for order {order}"
                    )));
                }
                table.push(c as u32);
            }
        }
        Self::from_flat(label, order, table, names)
    }

    fn from_flat(
        label: impl Into<String>,
        order: usize,
        table: Vec<u32>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let label = label.into();
        if order == 0 {
            return Err(Error::InvalidTable("a group has at least one element".into()));
        }
        let names = match names {
            Some(n) if n.len() != order => {
                return Err(Error::InvalidTable(format!(
                    "{} names given for {order} elements",
                    n.len()
                )))
            }
            Some(n) => n,
            None => (0..order).map(|i| i.to_string()).collect(),
        };
        let at = |a: usize, b: usize| table[a * order + b] as usize;

        for h in 0..order {
            if at(0, h) != h || at(h, 0) != h {
                return Err(Error::InvalidTable(format!(
                    "index 0 is not the identity (fails at element {h})"
                )));
            }
        }
        let mut seen = FixedBitSet::with_capacity(order);
        for g in 0..order {
            seen.clear();
            for h in 0..order {
                if seen.put(at(g, h)) {
                    return Err(Error::InvalidTable(format!(
                        "row {g} repeats index {}",
                        at(g, h)
                    )));
                }
            }
        }
        for h in 0..order {
            seen.clear();
            for g in 0..order {
                if seen.put(at(g, h)) {
                    return Err(Error::InvalidTable(format!(
                        "column {h} repeats index {}",
                        at(g, h)
                    )));
                }
            }
        }
        let assoc = |a: usize, b: usize, c: usize| -> Result<()> {
            if at(at(a, b), c) != at(a, at(b, c)) {
                return Err(Error::InvalidTable(format!(
                    "associativity fails on the triple ({a}, {b}, {c})"
                )));
            }
            Ok(())
        };
        if order <= EXHAUSTIVE_ASSOC_ORDER {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        assoc(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(order as u64);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                assoc(
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                )?;
            }
        }

        let mut inverses = vec![0u32; order];
        for g in 0..order {
            // Latin rows guarantee exactly one solution
            let h = (0..order).find(|&h| at(g, h) == 0).unwrap();
            inverses[g] = h as u32;
        }
        Ok(FiniteGroup {
            label,
            order,
            table,
            inverses,
            names,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order as u32).map(Elem)
    }

    #[inline]
    pub fn op(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.table[a.idx() * self.order + b.idx()])
    }

    #[inline]
    pub fn inverse(&self, a: Elem) -> Elem {
        Elem(self.inverses[a.idx()])
    }

    pub fn power(&self, a: Elem, e: i64) -> Elem {
        Group::pow(self, &a, e)
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a.idx()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elem_by_name(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name).map(Elem::from)
    }

    /// Rows of the table, `rows[g][h] = g·h`.
    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    #[inline]
    pub fn commutes(&self, a: Elem, b: Elem) -> bool {
        self.op(a, b) == self.op(b, a)
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != Elem::IDENTITY {
            x = self.op(x, a);
            n += 1;
        }
        n
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        use num_integer::Integer;
        self.elements()
            .map(|a| self.element_order(a))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().filter(|&b| b > a).all(|b| self.commutes(a, b)))
    }

    pub fn centre(&self) -> Subgroup {
        self.centralizer(&self.elements().collect::<Vec<_>>())
    }

    pub fn centralizer(&self, xs: &[Elem]) -> Subgroup {
        let members = self
            .elements()
            .filter(|&g| xs.iter().all(|&x| self.commutes(g, x)))
            .collect();
        Subgroup::from_sorted(self.order, members)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(self.order, vec![Elem::IDENTITY])
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.order, self.elements().collect())
    }

    /// The subgroup generated by `gens`.
    pub fn closure(&self, gens: &[Elem]) -> Subgroup {
        let mut seen = FixedBitSet::with_capacity(self.order);
        seen.insert(0);
        let mut queue = vec![Elem::IDENTITY];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for &g in gens {
                let y = self.op(x, g);
                if !seen.put(y.idx()) {
                    queue.push(y);
                }
            }
        }
        Subgroup::from_mask(seen)
    }

    /// Whether `members` is closed under products and inverses and holds 1.
    pub fn is_subgroup(&self, members: &[Elem]) -> bool {
        let mut mask = FixedBitSet::with_capacity(self.order);
        for &m in members {
            if m.idx() >= self.order {
                return false;
            }
            mask.insert(m.idx());
        }
        mask.contains(0)
            && members.iter().all(|&a| {
                mask.contains(self.inverse(a).idx())
                    && members.iter().all(|&b| mask.contains(self.op(a, b).idx()))
            })
    }

    /// Direct product with element `(a, b)` at index `a·|B| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let m = other.order;
        let names = (0..self.order * m)
            .map(|i| format!("({},{})", self.names[i / m], other.names[i % m]))
            .collect();
        let table = (0..self.order * m)
            .flat_map(|x| {
                (0..self.order * m).map(move |y| {
                    let a = self.op(Elem::from(x / m), Elem::from(y / m));
                    let b = other.op(Elem::from(x % m), Elem::from(y % m));
                    (a.idx() * m + b.idx()) as u32
                })
            })
            .collect();
        FiniteGroup {
            label: format!("{}x{}", self.label, other.label),
            order: self.order * m,
            table,
            inverses: (0..self.order * m)
                .map(|x| {
                    let a = self.inverse(Elem::from(x / m));
                    let b = other.inverse(Elem::from(x % m));
                    (a.idx() * m + b.idx()) as u32
                })
                .collect(),
            names,
        }
    }

    /// An isomorphic copy in which old element `g` gets index `perm[g]`.
    /// `perm[0]` must be 0.
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteGroup> {
        let n = self.order;
        if perm.len() != n || perm[0] != 0 {
            return Err(Error::Precondition(
                "relabelling must be a permutation fixing the identity".into(),
            ));
        }
        let mut back = vec![usize::MAX; n];
        for (old, &new) in perm.iter().enumerate() {
            if new >= n || back[new] != usize::MAX {
                return Err(Error::Precondition("relabelling is not a permutation".into()));
            }
            back[new] = old;
        }
        let names = back.iter().map(|&o| self.names[o].clone()).collect();
        FiniteGroup::from_fn(self.label.clone(), n, Some(names), |a, b| {
            perm[self.op(Elem::from(back[a]), Elem::from(back[b])).idx()]
        })
    }
}

impl Group for FiniteGroup {
    type Element = Elem;

    fn identity(&self) -> Elem {
        Elem::IDENTITY
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.op(*a, *b)
    }

    fn inv(&self, a: &Elem) -> Elem {
        self.inverse(*a)
    }
}

/// A subgroup of some parent group, as a sorted list plus membership mask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<Elem>,
    mask: FixedBitSet,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter().map(|e| e.0)).finish()
    }
}

impl Subgroup {
    pub(crate) fn from_mask(mask: FixedBitSet) -> Self {
        let members = mask.ones().map(Elem::from).collect();
        Subgroup { members, mask }
    }

    pub(crate) fn from_sorted(parent_order: usize, members: Vec<Elem>) -> Self {
        let mut mask = FixedBitSet::with_capacity(parent_order);
        for m in &members {
            mask.insert(m.idx());
        }
        Subgroup { members, mask }
    }

    /// Checked constructor for a user-supplied member list.
    pub fn new(parent: &FiniteGroup, mut members: Vec<Elem>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if !parent.is_subgroup(&members) {
            return Err(Error::Precondition(format!(
                "{:?} is not a subgroup of {}",
                members.iter().map(|e| e.0).collect::<Vec<_>>(),
                parent.label()
            )));
        }
        Ok(Self::from_sorted(parent.order(), members))
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        self.mask.contains(e.idx())
    }

    pub(crate) fn mask(&self) -> &FixedBitSet {
        &self.mask
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.mask.is_subset(&other.mask)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let mut mask = self.mask.clone();
        mask.intersect_with(&other.mask);
        Subgroup::from_mask(mask)
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        g.elements()
            .all(|x| self.members.iter().all(|&m| self.contains(g.conj(&m, &x))))
    }

    pub fn is_central_in(&self, g: &FiniteGroup) -> bool {
        self.members.iter().all(|&m| g.elements().all(|x| g.commutes(m, x)))
    }

    /// Every element of `self` commutes with every element of `other`.
    pub fn commutes_with(&self, other: &Subgroup, g: &FiniteGroup) -> bool {
        self.members
            .iter()
            .all(|&a| other.members.iter().all(|&b| g.commutes(a, b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn names(g: &FiniteGroup, s: &Subgroup) -> Vec<String> {
        s.members().iter().map(|&e| g.name(e).to_string()).collect()
    }

    #[test]
    fn centre_examples() {
        let z6 = catalog::cyclic(6);
        assert_eq!(z6.centre().order(), 6);
        let q8 = catalog::quaternion();
        assert_eq!(names(&q8, &q8.centre()), ["1", "-1"]);
        let s3 = catalog::symmetric(3);
        assert_eq!(s3.centre().members(), &[Elem(0)]);
    }

    #[test]
    fn centralizer_examples() {
        let q8 = catalog::quaternion();
        assert_eq!(q8.centralizer(&[Elem(0)]).order(), 8);
        let i = q8.elem_by_name("i").unwrap();
        assert_eq!(names(&q8, &q8.centralizer(&[i])), ["1", "-1", "i", "-i"]);
        let s3 = catalog::symmetric(3);
        let t = s3.elements().find(|&e| s3.element_order(e) == 2).unwrap();
        assert_eq!(s3.centralizer(&[t]).members(), &[Elem(0), t]);
    }

    #[test]
    fn rejects_repeated_row_entry() {
        let rows = vec![vec![0, 1], vec![1, 1]];
        let err = FiniteGroup::from_rows("bad", &rows, None).unwrap_err();
        assert!(err.to_string().contains("row 1"), "{err}");
    }

    #[test]
    fn rejects_non_associative_latin_square() {
        // a loop of order 5 that is not a group
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_rows("loop", &rows, None).unwrap_err();
        assert!(err.to_string().contains("associativity"), "{err}");
    }

    #[test]
    fn rejects_misplaced_identity() {
        let rows = vec![vec![1, 0], vec![0, 1]];
        assert!(FiniteGroup::from_rows("z2", &rows, None).is_err());
    }

    #[test]
    fn closure_and_products() {
        let q8 = catalog::quaternion();
        let i = q8.elem_by_name("i").unwrap();
        let j = q8.elem_by_name("j").unwrap();
        assert_eq!(q8.closure(&[i]).order(), 4);
        assert_eq!(q8.closure(&[i, j]).order(), 8);
        let p = q8.direct_product(&catalog::cyclic(2));
        assert_eq!(p.order(), 16);
        assert_eq!(p.centre().order(), 4);
    }

    #[test]
    fn relabel_preserves_structure() {
        let d4 = catalog::dihedral(4);
        let perm = [0, 7, 6, 5, 4, 3, 2, 1];
        let r = d4.relabel(&perm).unwrap();
        assert_eq!(r.centre().order(), 2);
        assert_eq!(r.exponent(), 4);
        for a in d4.elements() {
            for b in d4.elements() {
                let ab = d4.op(a, b);
                assert_eq!(
                    r.op(Elem::from(perm[a.idx()]), Elem::from(perm[b.idx()])),
                    Elem::from(perm[ab.idx()])
                );
            }
        }
    }
}
