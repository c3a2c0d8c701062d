use serde::{Deserialize, Serialize};

use crate::group::PurityWitness;
use crate::zpk::Residue;
use crate::{Elem, Error, FiniteGroup, Result};

/// `β^a·h` in `H̃ = ⟨β⟩_{p^k} ⋉ H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HtildeElement {
    pub a: Residue,
    pub h: Elem,
}

/// `H̃` as a table, `(a, h)` stored at index `a·|H| + h`.
#[derive(Clone, Debug)]
pub struct Htilde {
    group: FiniteGroup,
    h_order: usize,
    q: u32,
    b: Elem,
}

/// Tabulates `H̃` with `(a1, h1)(a2, h2) = (a1 + a2, h1^{b^{a2}}·h2)`.
pub fn build_htilde(h: &FiniteGroup, w: &PurityWitness, cap: usize) -> Result<Htilde> {
    w.validate(h)?;
    tabulate(h, w.b, w.prime_power() as usize, cap)
}

fn tabulate(h: &FiniteGroup, b: Elem, q: usize, cap: usize) -> Result<Htilde> {
    let order = q
        .checked_mul(h.order())
        .filter(|&o| o <= cap)
        .ok_or_else(|| Error::budget("H~ table", q as u128 * h.order() as u128, cap))?;
    let n = h.order();
    // conj[a][x] = b^{-a} x b^a
    let conj: Vec<Vec<Elem>> = (0..q)
        .map(|a| {
            let ba = h.power(b, a as i64);
            let inv = h.inverse(ba);
            h.elements().map(|x| h.op(h.op(inv, x), ba)).collect()
        })
        .collect();
    let names: Vec<String> = (0..order)
        .map(|i| {
            let (a, x) = (i / n, h.name(Elem::from(i % n)));
            match a {
                0 => x.to_string(),
                1 => format!("β·{x}"),
                _ => format!("β{a}·{x}"),
            }
        })
        .collect();
    let group = FiniteGroup::from_fn(format!("{}~", h.label()), order, Some(names), |i, j| {
        let (a1, h1) = (i / n, Elem::from(i % n));
        let (a2, h2) = (j / n, Elem::from(j % n));
        ((a1 + a2) % q) * n + h.op(conj[a2][h1.idx()], h2).idx()
    })?;
    Ok(Htilde {
        group,
        h_order: n,
        q: q as u32,
        b,
    })
}

impl Htilde {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn index(&self, t: HtildeElement) -> Elem {
        Elem::from(t.a as usize * self.h_order + t.h.idx())
    }

    pub fn split(&self, x: Elem) -> HtildeElement {
        HtildeElement {
            a: (x.idx() / self.h_order) as Residue,
            h: Elem::from(x.idx() % self.h_order),
        }
    }

    pub fn beta(&self) -> Elem {
        self.index(HtildeElement { a: 1 % self.q, h: Elem::IDENTITY })
    }

    /// `h` inside `H̃`.
    pub fn embed(&self, h: Elem) -> Elem {
        self.index(HtildeElement { a: 0, h })
    }

    /// `c = β·b⁻¹`. Central, since `β` and `b` act on `H` identically.
    pub fn c(&self, h: &FiniteGroup) -> Elem {
        self.group.op(self.beta(), self.embed(h.inverse(self.b)))
    }
}

/// Replaces `β` by `b`: `(a, h) ↦ b^a·h` in `H`.
pub fn beta_to_b(h: &FiniteGroup, w: &PurityWitness, t: HtildeElement) -> Elem {
    h.op(h.power(w.b, t.a as i64), t.h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::group::purity_witness_search;
    use crate::Group;

    fn el(g: &FiniteGroup, n: &str) -> Elem {
        g.elem_by_name(n).unwrap()
    }

    #[test]
    fn q8_tilde() {
        let q8 = catalog::quaternion();
        let w = purity_witness_search(&q8).unwrap();
        let ht = build_htilde(&q8, &w, 1 << 12).unwrap();
        let g = ht.group();
        assert_eq!(g.order(), 16);
        let beta = ht.beta();
        assert_eq!(g.op(beta, beta), Elem::IDENTITY);
        let j = ht.embed(el(&q8, "j"));
        assert_eq!(g.conj(&j, &beta), ht.embed(el(&q8, "-j")));
        let c = ht.c(&q8);
        assert!(g.centre().contains(c));
    }

    #[test]
    fn d4_tilde_centre() {
        let d4 = catalog::dihedral(4);
        let w = purity_witness_search(&d4).unwrap();
        let ht = build_htilde(&d4, &w, 1 << 12).unwrap();
        assert!(ht.group().centre().contains(ht.c(&d4)));
    }

    #[test]
    fn trivial_action_gives_direct_product() {
        let z3 = catalog::cyclic(3);
        let ht = tabulate(&z3, Elem::IDENTITY, 2, 100).unwrap();
        assert_eq!(ht.group(), &catalog::cyclic(2).direct_product(&z3));
    }

    #[test]
    fn q8_tilde_is_associative() {
        let q8 = catalog::quaternion();
        let w = purity_witness_search(&q8).unwrap();
        let g = build_htilde(&q8, &w, 1 << 12).unwrap().group().clone();
        for a in g.elements() {
            for b in g.elements() {
                for c in g.elements() {
                    assert_eq!(g.op(g.op(a, b), c), g.op(a, g.op(b, c)));
                }
            }
        }
    }

    #[test]
    fn split_round_trip_and_cap() {
        let q8 = catalog::quaternion();
        let w = purity_witness_search(&q8).unwrap();
        let ht = build_htilde(&q8, &w, 16).unwrap();
        for x in ht.group().elements() {
            assert_eq!(ht.index(ht.split(x)), x);
        }
        assert!(build_htilde(&q8, &w, 15).unwrap_err().is_budget());
    }

    #[test]
    fn beta_to_b_examples() {
        let q8 = catalog::quaternion();
        let w = purity_witness_search(&q8).unwrap();
        let j = el(&q8, "j");
        assert_eq!(beta_to_b(&q8, &w, HtildeElement { a: 0, h: j }), j);
        assert_eq!(beta_to_b(&q8, &w, HtildeElement { a: 1, h: Elem::IDENTITY }), w.b);
        assert_eq!(beta_to_b(&q8, &w, HtildeElement { a: 1, h: j }), el(&q8, "k"));
    }
}
