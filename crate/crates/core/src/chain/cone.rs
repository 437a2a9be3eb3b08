use crate::error::{Error, Result};
use crate::exactlinalg::Int;
use crate::groupring::GroupRingMatrix;

use super::complex::{AugmentedComplex, ChainComplex, SubcomplexMarker};
use super::maps::ChainMap;

/// `Cone(f)_n = K_n + L_{n-1}` for `f: L -> K`, with differential
/// `[[d^K, f_{n-1}], [0, -d^L]]`. Basis: the `K_n` cells first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingCone {
    complex: ChainComplex,
    target_ranks: Vec<usize>,
}

impl MappingCone {
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    /// Rank of the `K_n` summand.
    pub fn target_rank(&self, n: usize) -> usize {
        self.target_ranks.get(n).copied().unwrap_or(0)
    }

    /// Rank of the `L_{n-1}` summand.
    pub fn source_rank(&self, n: usize) -> usize {
        self.complex.rank(n) - self.target_rank(n)
    }

    /// The inclusion `K -> Cone`.
    pub fn inclusion(&self) -> ChainMap {
        let g = self.complex.group();
        ChainMap::new(
            (0..=self.complex.top())
                .map(|n| {
                    let mut m = GroupRingMatrix::zeros(g.clone(), self.complex.rank(n), self.target_rank(n));
                    m.set_block(0, 0, &GroupRingMatrix::identity(g.clone(), self.target_rank(n)));
                    m
                })
                .collect(),
        )
    }

    /// The projection `Cone_n -> L_{n-1}`, degreewise.
    pub fn projection(&self) -> Vec<GroupRingMatrix> {
        let g = self.complex.group();
        (0..=self.complex.top())
            .map(|n| {
                let mut m = GroupRingMatrix::zeros(g.clone(), self.source_rank(n), self.complex.rank(n));
                m.set_block(0, self.target_rank(n), &GroupRingMatrix::identity(g.clone(), self.source_rank(n)));
                m
            })
            .collect()
    }
}

/// The mapping cone of `f: source -> target` in degrees `0..=target.top()`.
pub fn mapping_cone(f: &ChainMap, source: &ChainComplex, target: &ChainComplex) -> Result<MappingCone> {
    if **source.group() != **target.group() {
        return Err(Error::GroupMismatch);
    }
    let group = target.group().clone();
    let top = target.top();
    let target_ranks: Vec<usize> = (0..=top).map(|n| target.rank(n)).collect();
    let ranks: Vec<usize> = (0..=top).map(|n| target.rank(n) + if n > 0 { source.rank(n - 1) } else { 0 }).collect();
    let mut diffs = Vec::with_capacity(top);
    for n in 1..=top {
        let mut d = GroupRingMatrix::zeros(group.clone(), ranks[n - 1], ranks[n]);
        d.set_block(0, 0, &target.d(n));
        let fn1 = f.at(n - 1, source, target)?;
        d.set_block(0, target.rank(n), &fn1);
        if n >= 2 {
            d.set_block(target.rank(n - 1), target.rank(n), &source.d(n - 1).neg());
        }
        diffs.push(d);
    }
    let complex = ChainComplex::new(group, ranks, diffs)?;
    Ok(MappingCone { complex, target_ranks })
}

/// `Cyl_n = C_n + K_n + K_{n-1}` for `t: K -> C`, with differential
/// `d(a, b, c) = (d a + t c, d b - c, -d c)`.
#[derive(Clone, Debug)]
pub struct MappingCylinder {
    pub complex: AugmentedComplex,
    /// The middle copy of `K`.
    pub middle: SubcomplexMarker,
    /// `Cyl -> C`, `(a, b, c) -> a + t b`.
    pub retraction: ChainMap,
    /// `C -> Cyl`, `a -> (a, 0, 0)`.
    pub inclusion: ChainMap,
    /// `K -> Cyl`, `b -> (0, b, 0)`.
    pub middle_inclusion: ChainMap,
}

/// The algebraic mapping cylinder of an augmentation-preserving `t: K -> C`
/// in degrees `0..=C.top()`. `k_aug` is the augmentation of `K` on its
/// basis (it need not be surjective, e.g. for an empty `K`).
pub fn algebraic_mapping_cylinder(t: &ChainMap, k: &ChainComplex, k_aug: &[Int], c: &AugmentedComplex) -> Result<MappingCylinder> {
    if **k.group() != **c.group() {
        return Err(Error::GroupMismatch);
    }
    let group = c.group().clone();
    let top = c.top();
    let prev = |n: usize| if n > 0 { k.rank(n - 1) } else { 0 };
    let ranks: Vec<usize> = (0..=top).map(|n| c.rank(n) + k.rank(n) + prev(n)).collect();
    let mut diffs = Vec::with_capacity(top);
    for n in 1..=top {
        let (c0, k0) = (c.rank(n - 1), k.rank(n - 1));
        let (c1, k1) = (c.rank(n), k.rank(n));
        let mut d = GroupRingMatrix::zeros(group.clone(), ranks[n - 1], ranks[n]);
        d.set_block(0, 0, &c.d(n));
        d.set_block(c0, c1, &k.d(n));
        d.set_block(0, c1 + k1, &t.at(n - 1, k, c)?);
        d.set_block(c0, c1 + k1, &GroupRingMatrix::identity(group.clone(), k0).neg());
        if n >= 2 {
            d.set_block(c0 + k0, c1 + k1, &k.d(n - 1).neg());
        }
        diffs.push(d);
    }
    let complex = ChainComplex::new(group.clone(), ranks.clone(), diffs)?;
    let mut aug = c.aug().to_vec();
    aug.extend_from_slice(k_aug);
    let complex = AugmentedComplex::new(complex, aug)?;

    let middle = SubcomplexMarker::new((0..=top).map(|n| (c.rank(n)..c.rank(n) + k.rank(n)).collect()).collect());
    let mut retraction = Vec::new();
    let mut inclusion = Vec::new();
    let mut middle_inclusion = Vec::new();
    for n in 0..=top {
        let mut r = GroupRingMatrix::zeros(group.clone(), c.rank(n), ranks[n]);
        r.set_block(0, 0, &GroupRingMatrix::identity(group.clone(), c.rank(n)));
        if k.rank(n) > 0 {
            r.set_block(0, c.rank(n), &t.at(n, k, c)?);
        }
        retraction.push(r);
        let mut i = GroupRingMatrix::zeros(group.clone(), ranks[n], c.rank(n));
        i.set_block(0, 0, &GroupRingMatrix::identity(group.clone(), c.rank(n)));
        inclusion.push(i);
        let mut m = GroupRingMatrix::zeros(group.clone(), ranks[n], k.rank(n));
        m.set_block(c.rank(n), 0, &GroupRingMatrix::identity(group.clone(), k.rank(n)));
        middle_inclusion.push(m);
    }
    Ok(MappingCylinder {
        complex,
        middle,
        retraction: ChainMap::new(retraction),
        inclusion: ChainMap::new(inclusion),
        middle_inclusion: ChainMap::new(middle_inclusion),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_traits::One;

    use super::*;
    use crate::chain::homology::{homology, is_exact_between};
    use crate::groupring::FiniteGroup;

    fn entry(g: &Arc<FiniteGroup>, c: &[i64]) -> GroupRingMatrix {
        GroupRingMatrix::from_i64(g.clone(), &[vec![c.to_vec()]]).unwrap()
    }

    fn rp2() -> AugmentedComplex {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let c = ChainComplex::new(g.clone(), vec![1, 1, 1], vec![entry(&g, &[-1, 1]), entry(&g, &[1, 1])]).unwrap();
        AugmentedComplex::new(c, vec![Int::one()]).unwrap()
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let k = rp2();
        let id = ChainMap::identity(&k, 2);
        let cone = mapping_cone(&id, &k, &k.truncate(3)).unwrap();
        assert!(is_exact_between(cone.complex(), 0, 3).unwrap());
        cone.inclusion().check(&k.truncate(3), cone.complex()).unwrap();
    }

    #[test]
    fn cone_of_zero_source_is_target() {
        let k = rp2();
        let g = k.group().clone();
        let empty = ChainComplex::zero(g, 2);
        let f = ChainMap::zero(&empty, &k, 2);
        let cone = mapping_cone(&f, &empty, &k).unwrap();
        assert_eq!(cone.complex(), k.complex());
    }

    #[test]
    fn cylinder_quotient_is_cone() {
        let k = rp2();
        let id = ChainMap::identity(&k, 2);
        let c = k.truncate(3);
        let cyl = algebraic_mapping_cylinder(&id, &k, k.aug(), &c).unwrap();
        cyl.retraction.check_augmented(&cyl.complex, &c).unwrap();
        cyl.middle_inclusion.check(&k, &cyl.complex).unwrap();
        let q = cyl.complex.quotient(&cyl.middle).unwrap();
        let cone = mapping_cone(&id, &k, &c).unwrap();
        assert_eq!(&q, cone.complex());
        for i in 1..3 {
            assert_eq!(homology(&cyl.complex, i).unwrap().module.gens(), homology(&c, i).unwrap().module.gens());
        }
    }
}
