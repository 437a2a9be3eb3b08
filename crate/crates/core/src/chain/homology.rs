use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::exactlinalg::{kernel_basis, saturated_left_inverse, smith_with_inverses, IntMatrix};
use crate::groupring::{translation_matrix, GroupIso};

use super::complex::{AugmentedComplex, ChainComplex};
use super::module::PiModule;

/// `H_i = Z_i / B_i` as a [`PiModule`], with the maps relating it to chains.
///
/// Chains are flattened: coordinate `j * |G| + g` is `g e_j`.
/// `projection` sends a cycle to its class (`gens x N`); `section` sends
/// each generator to a representing cycle (`N x gens`), and
/// `projection * section = I`.
#[derive(Clone, Debug)]
pub struct Homology {
    pub degree: usize,
    pub module: PiModule,
    pub projection: IntMatrix,
    pub section: IntMatrix,
    pub cycles: IntMatrix,
}

impl Homology {
    pub fn is_zero(&self) -> bool {
        self.module.gens() == 0
    }

    /// Transport along restriction of scalars by `u: H -> G`: flattened
    /// coordinate `(j, h)` of the restricted complex is `(j, u(h))`.
    pub fn restrict(&self, u: &GroupIso) -> Result<Homology> {
        let n = u.source().order();
        let total = self.cycles.rows();
        let perm: Vec<usize> = (0..total).map(|x| (x / n) * n + u.apply(x % n)).collect();
        Ok(Homology {
            degree: self.degree,
            module: self.module.restrict(u)?,
            projection: self.projection.select_columns(&perm),
            section: self.section.select_rows(&perm),
            cycles: self.cycles.select_rows(&perm),
        })
    }

    /// Whether the columns of `chains` (flattened cycles) are boundaries.
    pub fn is_boundary(&self, chains: &IntMatrix) -> bool {
        self.module.is_zero_element(&(&self.projection * chains))
    }
}

/// `H_i(C)` with its induced action.
pub fn homology(c: &ChainComplex, i: usize) -> Result<Homology> {
    let cycles = kernel_basis(&c.d(i).flatten());
    build(c, i, cycles)
}

/// Reduced `H_0 = ker(aug) / B_0`.
pub fn reduced_homology0(k: &AugmentedComplex) -> Result<Homology> {
    let cycles = kernel_basis(&k.aug_flat());
    build(k, 0, cycles)
}

/// Reduced homology: `H_i` for `i > 0`, reduced `H_0` otherwise.
pub fn reduced_homology(k: &AugmentedComplex, i: usize) -> Result<Homology> {
    if i == 0 {
        reduced_homology0(k)
    } else {
        homology(k, i)
    }
}

fn build(c: &ChainComplex, i: usize, cycles: IntMatrix) -> Result<Homology> {
    let group = c.group().clone();
    let n = group.order();
    let z = cycles.cols();
    let left = saturated_left_inverse(&cycles)?;
    let relations = &left * &c.d(i + 1).flatten();

    let full = smith_with_inverses(&relations);
    let snf = &full.decomposition;
    let factor = |k: usize| if k < snf.rank { snf.s[(k, k)].clone() } else { Default::default() };
    let kept: Vec<usize> = (0..z).filter(|&k| !factor(k).is_one()).collect();
    let to = snf.u.select_rows(&kept);
    let from = full.u_inv.select_columns(&kept);
    let g = kept.len();

    let torsion: Vec<usize> = (0..g).filter(|&a| !factor(kept[a]).is_zero()).collect();
    let mut rel = IntMatrix::zeros(g, torsion.len());
    for (col, &a) in torsion.iter().enumerate() {
        rel[(a, col)] = factor(kept[a]);
    }

    let reduce_rows = |m: &mut IntMatrix| {
        for (a, &k) in kept.iter().enumerate() {
            let s = factor(k);
            if !s.is_zero() {
                for j in 0..m.cols() {
                    m[(a, j)] = m[(a, j)].mod_floor(&s);
                }
            }
        }
    };

    let action = (0..n)
        .map(|h| {
            let p = translation_matrix(&group, c.rank(i), h);
            let mut m = &(&(&to * &left) * &p) * &(&cycles * &from);
            reduce_rows(&mut m);
            m
        })
        .collect();
    let module = PiModule::from_parts(group, g, rel, action)?;

    let mut projection = &to * &left;
    reduce_rows(&mut projection);
    let section = &cycles * &from;
    Ok(Homology { degree: i, module, projection, section, cycles })
}

/// Whether reduced `H_0` and `H_i` for `0 < i < q` all vanish.
pub fn is_acyclic_below(k: &AugmentedComplex, q: usize) -> Result<bool> {
    for i in 0..q {
        if !reduced_homology(k, i)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `H_i(c)` vanishes for `lo <= i <= hi`.
pub fn is_exact_between(c: &ChainComplex, lo: usize, hi: usize) -> Result<bool> {
    for i in lo..=hi {
        if !homology(c, i)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exactlinalg::Int;
    use crate::groupring::{FiniteGroup, GroupRingMatrix};

    fn entry(g: &Arc<FiniteGroup>, c: &[i64]) -> GroupRingMatrix {
        GroupRingMatrix::from_i64(g.clone(), &[vec![c.to_vec()]]).unwrap()
    }

    fn rp2() -> AugmentedComplex {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let c = ChainComplex::new(g.clone(), vec![1, 1, 1], vec![entry(&g, &[-1, 1]), entry(&g, &[1, 1])]).unwrap();
        AugmentedComplex::new(c, vec![Int::one()]).unwrap()
    }

    #[test]
    fn rp2_homology() {
        let k = rp2();
        let h2 = homology(&k, 2).unwrap();
        assert_eq!(h2.module.gens(), 1);
        assert_eq!(h2.module.relations().cols(), 0);
        assert_eq!(h2.module.action(1), &IntMatrix::from_rows(&[[-1]]));
        assert_eq!(&h2.projection * &h2.section, IntMatrix::identity(1));
        assert!(reduced_homology0(&k).unwrap().is_zero());
        assert!(homology(&k, 1).unwrap().is_zero());
        assert!(is_acyclic_below(&k, 2).unwrap());
        // unreduced H_0 = Z with trivial action
        let h0 = homology(&k, 0).unwrap();
        assert_eq!(h0.module.gens(), 1);
        assert_eq!(h0.module.action(1), &IntMatrix::identity(1));
    }

    #[test]
    fn s2_and_disconnected() {
        let t = Arc::new(FiniteGroup::trivial());
        let c = ChainComplex::new(
            t.clone(),
            vec![1, 0, 1],
            vec![GroupRingMatrix::zeros(t.clone(), 1, 0), GroupRingMatrix::zeros(t.clone(), 0, 1)],
        )
        .unwrap();
        let s2 = AugmentedComplex::new(c, vec![Int::one()]).unwrap();
        assert!(is_acyclic_below(&s2, 2).unwrap());
        assert_eq!(homology(&s2, 2).unwrap().module.gens(), 1);

        let two = ChainComplex::new(t, vec![2], vec![]).unwrap();
        let k = AugmentedComplex::new(two, vec![Int::one(), Int::zero()]).unwrap();
        assert!(!is_acyclic_below(&k, 1).unwrap());
    }

    #[test]
    fn torsion_in_homology() {
        // Z --2--> Z: H_0 = Z/2
        let t = Arc::new(FiniteGroup::trivial());
        let c = ChainComplex::new(t.clone(), vec![1, 1], vec![entry(&t, &[2])]).unwrap();
        let h0 = homology(&c, 0).unwrap();
        assert_eq!(h0.module.describe(), "Z/2");
        assert!(h0.is_boundary(&IntMatrix::from_rows(&[[4]])));
        assert!(!h0.is_boundary(&IntMatrix::from_rows(&[[3]])));
    }
}
