use super::{degree_cap, PointSet, PolyZpk, Residue, Zpk};
use crate::{Error, Result};

/// A member of `F` taking the value 1 on a prescribed set of points.
#[derive(Clone, Debug)]
pub struct Interpolation {
    /// `g^{p^{k-1}}`, no free term, degree at most `n(p−1)p^{k−1}`.
    pub f: PolyZpk,
    /// The mod-`p` indicator, in the original coordinates.
    pub g: PolyZpk,
    /// Invertible row operations `U` with `U·t` supported on the first
    /// `rank` coordinates for every target point `t`.
    pub basis_change: Vec<Vec<Residue>>,
    pub rank: usize,
}

/// Row-reduces the columns `points` over `Z_{p^k}`, pivoting on the entry of
/// least valuation (first index on ties). Returns `(U, rank)`.
fn basis_change(ring: Zpk, dim: usize, points: &[Vec<Residue>]) -> (Vec<Vec<Residue>>, usize) {
    let mut u: Vec<Vec<Residue>> = (0..dim)
        .map(|i| (0..dim).map(|j| Residue::from(i == j)).collect())
        .collect();
    // m[row][col]: coordinate `row` of point `col`
    let mut m: Vec<Vec<Residue>> = (0..dim)
        .map(|row| points.iter().map(|t| t[row]).collect())
        .collect();
    let mut row = 0;
    for col in 0..points.len() {
        if row == dim {
            break;
        }
        let Some(piv) = (row..dim)
            .filter(|&i| m[i][col] != 0)
            .min_by_key(|&i| (ring.valuation(m[i][col]), i))
        else {
            continue;
        };
        m.swap(row, piv);
        u.swap(row, piv);
        let v = ring.valuation(m[row][col]);
        let scale = ring.modulus() / ring.p().pow(v);
        let unit_inv = ring
            .inv(m[row][col] / ring.p().pow(v) % scale)
            .expect("pivot quotient is a unit");
        for i in row + 1..dim {
            if m[i][col] == 0 {
                continue;
            }
            let factor = ring.mul(m[i][col] / ring.p().pow(v), unit_inv);
            for c in 0..points.len() {
                let d = ring.mul(factor, m[row][c]);
                m[i][c] = ring.sub(m[i][c], d);
            }
            for c in 0..dim {
                let d = ring.mul(factor, u[row][c]);
                u[i][c] = ring.sub(u[i][c], d);
            }
        }
        row += 1;
    }
    (u, row)
}

/// Builds `f ∈ F` with `f(t) = 1` for every `t ∈ targets` (at most `n`
/// points of `S`).
///
/// A change of basis moves the targets into the span of the first `rank`
/// coordinates, a sum of mod-`p` point indicators gives `g` with
/// `g(0) ≡ 0` and `g(t) ≡ 1 (mod p)`, and raising to `p^{k−1}` turns those
/// congruences into exact values since `1 + pZ_{p^k}` has order `p^{k−1}`.
pub fn interpolate_f_t(
    points: &PointSet,
    n: usize,
    targets: &[Vec<Residue>],
) -> Result<Interpolation> {
    let ring = points.ring();
    let dim = points.dim();
    let (p, k) = (ring.p(), ring.k());
    if targets.len() > n {
        return Err(Error::Precondition(format!(
            "{} target points exceed n = {n}",
            targets.len()
        )));
    }
    if let Some(t) = targets.iter().find(|t| !points.contains(t)) {
        return Err(Error::Precondition(format!("target {t:?} is not a point of S")));
    }

    let (u, rank) = basis_change(ring, dim, targets);
    let transformed: Vec<Vec<Residue>> = targets
        .iter()
        .map(|t| {
            (0..dim)
                .map(|i| (0..dim).fold(0, |acc, j| ring.add(acc, ring.mul(u[i][j], t[j]))))
                .collect()
        })
        .collect();
    if transformed.iter().any(|t| t[rank..].iter().any(|&c| c != 0)) {
        return Err(Error::Internal("basis change left support outside the first rank coordinates".into()));
    }

    // indicator interpolation in y_1..y_rank over Z_p
    let fp = Zpk::new(p as u64, 1)?;
    let mut reps: Vec<Vec<Residue>> = transformed.iter().map(|t| t[..rank].iter().map(|c| c % p).collect()).collect();
    reps.sort();
    reps.dedup();
    let mut g_y = PolyZpk::zero(fp, rank);
    for t in &reps {
        let mut ind = PolyZpk::constant(fp, rank, 1);
        for (j, &tj) in t.iter().enumerate() {
            let diff = PolyZpk::var(fp, rank, j).sub(&PolyZpk::constant(fp, rank, tj));
            let factor = PolyZpk::constant(fp, rank, 1).sub(&diff.pow(p as u64 - 1));
            ind = ind.mul(&factor);
        }
        g_y = g_y.add(&ind);
    }
    if g_y.free_term() != 0 {
        return Err(Error::Internal("indicator sum has a nonzero free term mod p".into()));
    }
    let lifted = PolyZpk::from_terms(ring, rank, g_y.terms().map(|(m, c)| (m.clone(), c)));
    let g = if rank == 0 {
        PolyZpk::zero(ring, dim)
    } else {
        lifted.compose_linear(&u[..rank])
    };
    let f = g.pow(ring.p().pow(k - 1) as u64).without_free_term();

    let cap = degree_cap(p as u64, k, n as u64);
    if f.degree() as u64 > cap {
        return Err(Error::Internal(format!("degree {} exceeds the cap {cap}", f.degree())));
    }
    for t in targets {
        if f.eval(t)? != 1 {
            return Err(Error::Internal(format!("interpolant is not 1 at {t:?}")));
        }
    }
    Ok(Interpolation {
        f,
        g,
        basis_change: u,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(p: u64, k: u32, dim: usize) -> PointSet {
        PointSet::new(Zpk::new(p, k).unwrap(), dim, 1 << 16)
    }

    #[test]
    fn linear_examples() {
        let s = set(2, 1, 2);
        let r = s.ring();
        let i = interpolate_f_t(&s, 1, &[vec![1, 1]]).unwrap();
        assert_eq!(i.f, PolyZpk::var(r, 2, 0));
        let i = interpolate_f_t(&s, 1, &[vec![0, 1]]).unwrap();
        assert_eq!(i.f, PolyZpk::var(r, 2, 1));
    }

    #[test]
    fn prime_power_example() {
        let s = set(2, 2, 7);
        let mut t = vec![0; 7];
        t[0] = 1;
        let i = interpolate_f_t(&s, 1, &[t]).unwrap();
        assert_eq!(i.f.to_string(), "x1^2 (mod 4)");
        assert_eq!(i.f.degree(), 2);
    }

    #[test]
    fn guards() {
        let s = set(2, 1, 2);
        assert!(interpolate_f_t(&s, 1, &[vec![0, 0]]).is_err());
        assert!(interpolate_f_t(&s, 1, &[vec![0, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn empty_target_gives_zero() {
        let s = set(3, 1, 2);
        assert!(interpolate_f_t(&s, 2, &[]).unwrap().f.is_zero());
    }

    fn contract(p: u64, k: u32, dim: usize, n: usize, raw: Vec<Vec<u32>>) -> std::result::Result<(), TestCaseError> {
        let s = set(p, k, dim);
        let ring = s.ring();
        let targets: Vec<Vec<Residue>> = raw
            .into_iter()
            .map(|v| v.into_iter().take(dim).map(|c| c % ring.modulus()).collect::<Vec<_>>())
            .filter(|v: &Vec<Residue>| s.contains(v))
            .take(n)
            .collect();
        let i = interpolate_f_t(&s, n, &targets).unwrap();
        prop_assert_eq!(i.f.free_term(), 0);
        prop_assert!(i.f.degree() as u64 <= degree_cap(p, k, n as u64));
        for t in &targets {
            prop_assert_eq!(i.f.eval(t).unwrap(), 1);
            if k >= 2 {
                prop_assert_eq!(i.g.eval(t).unwrap() % p as u32, 1);
            }
        }
        if k >= 2 {
            prop_assert_eq!(i.g.eval(&vec![0; dim]).unwrap() % p as u32, 0);
        }
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn interpolation_contract_z4(raw in proptest::collection::vec(proptest::collection::vec(0u32..4, 5), 0..3)) {
            contract(2, 2, 5, 2, raw)?;
        }

        #[test]
        fn interpolation_contract_z3(raw in proptest::collection::vec(proptest::collection::vec(0u32..3, 4), 0..4)) {
            contract(3, 1, 4, 3, raw)?;
        }

        #[test]
        fn interpolation_contract_z9(raw in proptest::collection::vec(proptest::collection::vec(0u32..9, 3), 0..3)) {
            contract(3, 2, 3, 2, raw)?;
        }
    }
}
