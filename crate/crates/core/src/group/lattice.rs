use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{Elem, FiniteGroup, Subgroup};
use crate::{Error, Result};

/// Caps for exhaustive subgroup-lattice work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LatticeLimits {
    /// Largest group order for which the lattice is enumerated.
    pub max_order: usize,
    pub max_subgroups: usize,
    /// Node budget for searches over families of subgroups.
    pub max_nodes: u64,
}

impl Default for LatticeLimits {
    fn default() -> Self {
        LatticeLimits {
            max_order: 64,
            max_subgroups: 50_000,
            max_nodes: 5_000_000,
        }
    }
}

/// All subgroups of a finite group, sorted by order then by member list.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    subgroups: Vec<Subgroup>,
}

impl SubgroupLattice {
    /// Enumerates subgroups by closing `⟨K, x⟩` for every subgroup `K`
    /// found so far and one representative `x` of each coset `xK`.
    pub fn enumerate(g: &FiniteGroup, limits: &LatticeLimits) -> Result<Self> {
        if g.order() > limits.max_order {
            return Err(Error::budget(
                "subgroup lattice",
                format!("group order {}", g.order()),
                format!("order <= {}", limits.max_order),
            ));
        }
        let trivial = g.trivial_subgroup();
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
        index.insert(trivial.mask().clone(), 0);
        let mut found: Vec<(Subgroup, Vec<Elem>)> = vec![(trivial, Vec::new())];
        let mut next = 0;
        while next < found.len() {
            let (k, gens) = found[next].clone();
            next += 1;
            let mut covered = k.mask().clone();
            for x in g.elements() {
                if covered.contains(x.idx()) {
                    continue;
                }
                for &m in k.members() {
                    covered.insert(g.op(x, m).idx());
                }
                let mut new_gens = gens.clone();
                new_gens.push(x);
                let h = g.closure(&new_gens);
                if !index.contains_key(h.mask()) {
                    if found.len() >= limits.max_subgroups {
                        return Err(Error::budget(
                            "subgroup lattice",
                            format!("more than {} subgroups", found.len()),
                            limits.max_subgroups,
                        ));
                    }
                    index.insert(h.mask().clone(), found.len());
                    found.push((h, new_gens));
                }
            }
        }
        let mut subgroups: Vec<Subgroup> = found.into_iter().map(|(s, _)| s).collect();
        subgroups.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.members().cmp(b.members()))
        });
        Ok(SubgroupLattice { subgroups })
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn normal(&self, g: &FiniteGroup) -> Vec<Subgroup> {
        self.subgroups
            .iter()
            .filter(|s| s.is_normal_in(g))
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn count(name: &str) -> usize {
        let g = catalog::by_name(name).unwrap();
        SubgroupLattice::enumerate(&g, &LatticeLimits::default())
            .unwrap()
            .len()
    }

    #[test]
    fn known_subgroup_counts() {
        assert_eq!(count("z1"), 1);
        assert_eq!(count("z12"), 6);
        assert_eq!(count("s3"), 6);
        assert_eq!(count("q8"), 6);
        assert_eq!(count("d4"), 10);
        assert_eq!(count("a4"), 10);
        assert_eq!(count("s4"), 30);
        assert_eq!(count("z2xz2xz2"), 16);
    }

    #[test]
    fn every_listed_set_is_a_subgroup() {
        let g = catalog::by_name("d6").unwrap();
        let lat = SubgroupLattice::enumerate(&g, &LatticeLimits::default()).unwrap();
        for s in lat.subgroups() {
            assert!(g.is_subgroup(s.members()));
        }
        assert_eq!(lat.subgroups()[0].order(), 1);
        assert_eq!(lat.subgroups().last().unwrap().order(), 12);
    }

    #[test]
    fn order_cap_is_reported() {
        let g = catalog::cyclic(80);
        let err = SubgroupLattice::enumerate(&g, &LatticeLimits::default()).unwrap_err();
        assert!(err.is_budget());
    }
}
