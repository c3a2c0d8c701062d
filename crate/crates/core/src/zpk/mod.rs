//! Arithmetic in `Z_{p^k}`, polynomials without free term, the function
//! family `F` on `S = Z_{p^k}^m \ p·Z_{p^k}^m`, and the 0/1 root search.

mod family;
mod interpolate;
mod points;
mod poly;
mod schanuel;

pub use family::{
    enumerate_family, verify_family, verify_function_lemma, FunctionFamily, FunctionLemmaReport,
    FunctionTable, LemmaMode, PropertyCheck,
};
pub use interpolate::{interpolate_f_t, Interpolation};
pub use points::PointSet;
pub use poly::{Monomial, PolyZpk};
pub use schanuel::{schanuel_root, schanuel_root_within, DEFAULT_ROOT_BUDGET};

use serde::{Deserialize, Serialize};

use crate::group::purity::is_prime;
use crate::{Error, Result};

/// A residue modulo `p^k`, always in `0..p^k`.
pub type Residue = u32;

/// The ring `Z_{p^k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Zpk {
    p: u32,
    k: u32,
    q: u32,
}

impl Zpk {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) || k == 0 {
            return Err(Error::Precondition(format!(
                "Z_{{p^k}} needs a prime p and k >= 1 (got p = {p}, k = {k})"
            )));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= 1 << 20)
            .ok_or_else(|| Error::Precondition(format!("modulus {p}^{k} is too large")))?;
        Ok(Zpk {
            p: p as u32,
            k,
            q: q as u32,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `p^k`
    pub fn modulus(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        ((a as u64 + b as u64) % self.q as u64) as Residue
    }

    #[inline]
    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: Residue) -> Residue {
        (self.q - a % self.q) % self.q
    }

    #[inline]
    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        ((a as u64 * b as u64) % self.q as u64) as Residue
    }

    pub fn from_i64(&self, a: i64) -> Residue {
        a.rem_euclid(self.q as i64) as Residue
    }

    pub fn pow(&self, a: Residue, mut e: u64) -> Residue {
        let mut acc = 1 % self.q;
        let mut base = a % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Largest `v <= k` with `p^v | a`; `k` for zero.
    pub fn valuation(&self, a: Residue) -> u32 {
        let mut a = a % self.q;
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: Residue) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Inverse of a unit (Euler: `u^{φ(p^k) - 1}`).
    pub fn inv(&self, a: Residue) -> Option<Residue> {
        if !self.is_unit(a) {
            return None;
        }
        let phi = (self.q / self.p) as u64 * (self.p as u64 - 1);
        Some(self.pow(a, phi - 1))
    }
}

/// `n(p−1)p^{k−1}`: the degree bound for members of `F`.
pub fn degree_cap(p: u64, k: u32, n: u64) -> u64 {
    n * (p - 1) * p.pow(k - 1)
}

/// Smallest `m` with `m > n(p−1)p^{k−1}(p^k−1)`.
pub fn choose_m(p: u64, k: u32, n: u64) -> u64 {
    degree_cap(p, k, n) * (p.pow(k) - 1) + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_m_examples() {
        assert_eq!(choose_m(2, 1, 1), 2);
        assert_eq!(choose_m(2, 1, 2), 3);
        assert_eq!(choose_m(3, 2, 1), 49);
    }

    #[test]
    fn degree_cap_examples() {
        assert_eq!(degree_cap(2, 1, 1), 1);
        assert_eq!(degree_cap(2, 2, 1), 2);
        assert_eq!(degree_cap(3, 1, 2), 4);
    }

    #[test]
    fn ring_basics() {
        let r = Zpk::new(3, 2).unwrap();
        assert_eq!(r.modulus(), 9);
        assert_eq!(r.valuation(0), 2);
        assert_eq!(r.valuation(3), 1);
        assert_eq!(r.valuation(4), 0);
        for a in 0..9 {
            match r.inv(a) {
                Some(b) => assert_eq!(r.mul(a, b), 1),
                None => assert_eq!(a % 3, 0),
            }
        }
        assert!(Zpk::new(4, 1).is_err());
        assert!(Zpk::new(2, 0).is_err());
    }

    #[test]
    fn principal_units_have_order_dividing_p_to_k_minus_1() {
        for (p, k) in [(2u64, 2u32), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (2, 8)] {
            let r = Zpk::new(p, k).unwrap();
            let e = p.pow(k - 1);
            for u in (1..r.modulus()).step_by(p as usize) {
                assert_eq!(r.pow(u, e), 1, "u = {u} mod {}", r.modulus());
            }
        }
    }
}
