use super::{PolyZpk, Residue};
use crate::{Error, Result};

/// Corners examined before giving up.
pub const DEFAULT_ROOT_BUDGET: u64 = 1 << 26;

/// Finds a nonzero `v ∈ {0,1}^m` with `f(v) = 0`, for `f` without free term
/// and `m > (p^k − 1)·deg f`, where such a root is guaranteed to exist.
///
/// Candidates are tried by increasing number of ones, then in
/// lexicographic order, so the answer is the first root in that order.
/// Every returned vector has a coordinate equal to 1 and so lies in `S`.
pub fn schanuel_root(f: &PolyZpk) -> Result<Vec<Residue>> {
    schanuel_root_within(f, DEFAULT_ROOT_BUDGET)
}

/// [`schanuel_root`] examining at most `budget` corners.
pub fn schanuel_root_within(f: &PolyZpk, budget: u64) -> Result<Vec<Residue>> {
    let ring = f.ring();
    let dim = f.dim();
    if f.free_term() != 0 {
        return Err(Error::Precondition("polynomial has a free term".into()));
    }
    let bound = (ring.modulus() as u64 - 1) * f.degree() as u64;
    if dim as u64 <= bound {
        return Err(Error::Precondition(format!(
            "dimension {dim} does not exceed (p^k - 1)·deg = {bound}"
        )));
    }
    if dim > 63 {
        return Err(Error::Precondition(format!("0/1 root search supports at most 63 variables, got {dim}")));
    }

    // on 0/1 points a monomial is 1 exactly when its support is all ones;
    // coordinate x1 is the most significant bit so numeric order is lexicographic
    let bit = |v: u32| 1u64 << (dim - 1 - v as usize);
    let terms: Vec<(u64, Residue)> = f
        .terms()
        .map(|(m, c)| (m.pairs().iter().fold(0, |acc, &(v, _)| acc | bit(v)), c))
        .collect();
    let value = |mask: u64| {
        terms
            .iter()
            .filter(|(support, _)| support & mask == *support)
            .fold(0, |acc, &(_, c)| ring.add(acc, c))
    };

    let limit = 1u64 << dim;
    let mut examined = 0u64;
    for ones in 1..=dim as u32 {
        let mut mask = (1u64 << ones) - 1;
        while mask < limit {
            examined += 1;
            if examined > budget {
                return Err(Error::budget("0/1 root search", format!("up to 2^{dim} - 1 corners"), budget));
            }
            if value(mask) == 0 {
                return Ok((0..dim).map(|i| ((mask >> (dim - 1 - i)) & 1) as Residue).collect());
            }
            // next integer with the same popcount
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    Err(Error::Internal(format!(
        "no nonzero 0/1 root of {f} despite {dim} > {bound}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpk::Zpk;

    fn poly(text: &str, p: u64, k: u32, dim: usize) -> PolyZpk {
        PolyZpk::parse(text, Zpk::new(p, k).unwrap(), dim).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(schanuel_root(&poly("x1", 2, 1, 2)).unwrap(), [0, 1]);
        assert_eq!(schanuel_root(&poly("x1 + x2", 2, 1, 2)).unwrap(), [1, 1]);
        let f = poly("x1*x2 + x3", 2, 1, 3);
        let root = schanuel_root(&f).unwrap();
        assert_eq!(f.eval(&root).unwrap(), 0);
        assert!(root.contains(&1));
    }

    #[test]
    fn precondition_is_enforced() {
        assert!(schanuel_root(&poly("x1*x2", 2, 1, 2)).is_err());
        assert!(schanuel_root(&poly("x1 + 1", 2, 1, 3)).is_err());
    }

    #[test]
    fn budget_is_reported() {
        let f = poly("x1 + x2 + x3", 2, 1, 3);
        assert!(schanuel_root_within(&f, 2).unwrap_err().is_budget());
    }

    #[test]
    fn order_is_popcount_then_lexicographic() {
        // x1 + x2 + x3 over Z2: no weight-1 root, first weight-2 root is (0,1,1)
        assert_eq!(schanuel_root(&poly("x1 + x2 + x3", 2, 1, 3)).unwrap(), [0, 1, 1]);
        // over Z4 with m = 4 > 3: x1 + x2 + x3 + x4 vanishes only at weight 4
        assert_eq!(
            schanuel_root(&poly("x1 + x2 + x3 + x4", 2, 2, 4)).unwrap(),
            [1, 1, 1, 1]
        );
    }
}
