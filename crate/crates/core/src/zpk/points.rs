use std::collections::HashMap;

use rand::Rng;

use super::{Residue, Zpk};
use crate::{Error, Result};

/// `S = Z_{p^k}^m \ p·Z_{p^k}^m`: vectors with at least one unit coordinate.
///
/// Stored explicitly, in lexicographic order, when small enough; otherwise
/// only membership and sampling are available.
#[derive(Clone, Debug)]
pub struct PointSet {
    ring: Zpk,
    dim: usize,
    explicit: Option<(Vec<Vec<Residue>>, HashMap<Vec<Residue>, usize>)>,
}

impl PointSet {
    pub fn new(ring: Zpk, dim: usize, cap: usize) -> Self {
        let size = Self::count(ring, dim);
        let explicit = (size <= cap as u128).then(|| {
            let points = Self::enumerate(ring, dim);
            let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
            (points, index)
        });
        PointSet { ring, dim, explicit }
    }

    /// `q^m − (q/p)^m`, saturating.
    pub fn count(ring: Zpk, dim: usize) -> u128 {
        let q = ring.modulus() as u128;
        let pow = |b: u128| (0..dim).try_fold(1u128, |acc, _| acc.checked_mul(b));
        match (pow(q), pow(q / ring.p() as u128)) {
            (Some(all), Some(non_primitive)) => all - non_primitive,
            _ => u128::MAX,
        }
    }

    fn enumerate(ring: Zpk, dim: usize) -> Vec<Vec<Residue>> {
        let q = ring.modulus();
        let mut out = Vec::new();
        let mut cur = vec![0; dim];
        loop {
            if cur.iter().any(|&c| ring.is_unit(c)) {
                out.push(cur.clone());
            }
            // odometer, last coordinate fastest
            let mut i = dim;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < q {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    pub fn ring(&self) -> Zpk {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> u128 {
        Self::count(self.ring, self.dim)
    }

    pub fn is_explicit(&self) -> bool {
        self.explicit.is_some()
    }

    pub fn points(&self) -> Option<&[Vec<Residue>]> {
        self.explicit.as_ref().map(|(p, _)| p.as_slice())
    }

    pub fn explicit_points(&self) -> Result<&[Vec<Residue>]> {
        self.points().ok_or_else(|| {
            Error::budget("explicit point set", self.size(), "configured point cap")
        })
    }

    pub fn contains(&self, point: &[Residue]) -> bool {
        point.len() == self.dim
            && point.iter().all(|&c| c < self.ring.modulus())
            && point.iter().any(|&c| self.ring.is_unit(c))
    }

    /// Position in lexicographic order, when stored explicitly.
    pub fn index_of(&self, point: &[Residue]) -> Option<usize> {
        self.explicit.as_ref()?.1.get(point).copied()
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Residue> {
        loop {
            let p: Vec<Residue> = (0..self.dim)
                .map(|_| rng.gen_range(0..self.ring.modulus()))
                .collect();
            if self.contains(&p) {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn small_sets() {
        let r = Zpk::new(2, 1).unwrap();
        let s = PointSet::new(r, 2, 100);
        assert_eq!(s.points().unwrap(), &[vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(s.index_of(&[1, 1]), Some(2));
        assert!(!s.contains(&[0, 0]));

        let r = Zpk::new(2, 2).unwrap();
        let s = PointSet::new(r, 2, 100);
        assert_eq!(s.size(), 12);
        assert!(!s.contains(&[2, 2]));
        assert!(s.contains(&[2, 3]));
    }

    #[test]
    fn membership_agrees_with_enumeration() {
        let r = Zpk::new(3, 1).unwrap();
        let s = PointSet::new(r, 3, 1000);
        assert_eq!(s.points().unwrap().len() as u128, s.size());
        for p in s.points().unwrap() {
            assert!(s.contains(p));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = s.random_point(&mut rng);
            assert!(s.index_of(&p).is_some());
        }
    }

    #[test]
    fn implicit_above_cap() {
        let r = Zpk::new(3, 2).unwrap();
        let s = PointSet::new(r, 49, 1 << 16);
        assert!(!s.is_explicit());
        assert!(s.explicit_points().is_err());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        assert!(s.contains(&s.random_point(&mut rng)));
    }
}
