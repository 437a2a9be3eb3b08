//! Free resolutions of `Z`, augmentation-preserving lifts, relative chain
//! homotopies, and the `(alpha, phi)` pair attached to a subcomplex.

use std::sync::Arc;

use num_traits::One;

use crate::chain::{is_acyclic_below, is_exact_between, reduced_homology0, AugmentedComplex, ChainComplex, ChainHomotopy, ChainMap, SubcomplexMarker};
use crate::error::{Error, Result};
use crate::exactlinalg::{kernel_basis, lattice_basis, solve_integer_system, Int, IntMatrix};
use crate::groupring::{solve_equivariant_with, translation_matrix, FiniteGroup, GroupRingElement, GroupRingMatrix, LiftChoice};

/// An augmented free complex exact through its top degree minus one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    complex: AugmentedComplex,
}

impl Resolution {
    /// Checks exactness in degrees `0..top`.
    pub fn new(complex: AugmentedComplex) -> Result<Self> {
        if !reduced_homology0(&complex)?.is_zero() {
            return Err(Error::NotExact(0));
        }
        for i in 1..complex.top() {
            if !is_exact_between(&complex, i, i)? {
                return Err(Error::NotExact(i));
            }
        }
        Ok(Resolution { complex })
    }

    pub fn complex(&self) -> &AugmentedComplex {
        &self.complex
    }

    pub fn into_complex(self) -> AugmentedComplex {
        self.complex
    }

    pub fn top(&self) -> usize {
        self.complex.top()
    }
}

impl std::ops::Deref for Resolution {
    type Target = AugmentedComplex;

    fn deref(&self) -> &AugmentedComplex {
        &self.complex
    }
}

/// Builds a free resolution of `Z` over `Z[G]` through degree `top`.
///
/// Each step takes a saturated basis of the cycles and keeps a vector only
/// when it is not already in the span of the orbits of those kept so far.
pub fn build_resolution(group: Arc<FiniteGroup>, top: usize) -> Result<Resolution> {
    let n = group.order();
    let c0 = ChainComplex::from_parts(group.clone(), vec![1], vec![])?;
    let mut complex = AugmentedComplex::new(c0, vec![Int::one()])?;
    let mut ranks = vec![1];
    let mut diffs: Vec<GroupRingMatrix> = Vec::new();
    for i in 1..=top {
        let cycles = if i == 1 { kernel_basis(&complex.aug_flat()) } else { kernel_basis(&diffs[i - 2].flatten()) };
        let prev = ranks[i - 1];
        let mut chosen: Vec<Vec<Int>> = Vec::new();
        let mut span = IntMatrix::zeros(prev * n, 0);
        for k in 0..cycles.cols() {
            let v = cycles.column(k);
            let col = IntMatrix::column_vector(&v);
            if span.cols() > 0 && solve_integer_system(&span, &col)?.is_some() {
                continue;
            }
            let mut orbit = span.clone();
            for g in 0..n {
                orbit = orbit.hstack(&(&translation_matrix(&group, prev, g) * &col))?;
            }
            span = lattice_basis(&orbit);
            chosen.push(v);
        }
        let images = IntMatrix::from_columns(prev * n, &chosen)?;
        let d = GroupRingMatrix::from_basis_images(group.clone(), prev, &images)?;
        ranks.push(chosen.len());
        diffs.push(d);
        let c = ChainComplex::new(group.clone(), ranks.clone(), diffs.clone())?;
        complex = AugmentedComplex::new(c, vec![Int::one()])?;
    }
    Resolution::new(complex)
}

/// The rank-one periodic resolution of a cyclic group of order `n`
/// (generator `1`): odd differentials `t - 1`, even ones the norm element.
pub fn periodic_cyclic_resolution(n: usize, top: usize) -> Result<Resolution> {
    let group = Arc::new(FiniteGroup::cyclic(n));
    let diffs = (1..=top)
        .map(|i| {
            let e = if i % 2 == 1 {
                &GroupRingElement::basis(group.clone(), 1 % n) - &GroupRingElement::one(group.clone())
            } else {
                GroupRingElement::norm(group.clone())
            };
            GroupRingMatrix::from_elements(group.clone(), 1, 1, &[e])
        })
        .collect::<Result<Vec<_>>>()?;
    let c = ChainComplex::new(group, vec![1; top + 1], diffs)?;
    Resolution::new(AugmentedComplex::new(c, vec![Int::one()])?)
}

fn lift(a: &GroupRingMatrix, b: &GroupRingMatrix, degree: usize, choice: &mut LiftChoice) -> Result<GroupRingMatrix> {
    solve_equivariant_with(a, b, choice)?.ok_or_else(|| Error::LiftFailed {
        degree,
        reason: "right-hand side is not a boundary".into(),
    })
}

/// An augmentation-preserving chain map `K -> K'` on degrees `0..=bound`,
/// built degree by degree. Needs `K'` acyclic below `bound`.
pub fn lift_augmented_map(k: &AugmentedComplex, target: &AugmentedComplex, bound: usize, choice: &mut LiftChoice) -> Result<ChainMap> {
    if **k.group() != **target.group() {
        return Err(Error::GroupMismatch);
    }
    if target.top() < bound {
        return Err(Error::LiftFailed { degree: bound, reason: "target complex is too short".into() });
    }
    let mut maps = Vec::with_capacity(bound + 1);
    maps.push(lift(&target.aug_matrix(), &k.aug_matrix(), 0, choice)?);
    for i in 1..=bound {
        let rhs = maps[i - 1].compose(&k.d(i))?;
        maps.push(lift(&target.d(i), &rhs, i, choice)?);
    }
    let f = ChainMap::new(maps);
    f.check_augmented(k, target)?;
    Ok(f)
}

/// A homotopy `D` with `alpha - beta = d' D + D d` on degrees `0..=bound`
/// that agrees with `psi` on the marked cells. `psi` is indexed by the
/// marked cells (`L_i -> K'_{i+1}`); pass `None` for the empty subcomplex.
pub fn relative_homotopy(
    alpha: &ChainMap,
    beta: &ChainMap,
    source: &ChainComplex,
    target: &ChainComplex,
    sub: Option<(&SubcomplexMarker, &ChainHomotopy)>,
    bound: usize,
    choice: &mut LiftChoice,
) -> Result<ChainHomotopy> {
    let group = source.group().clone();
    let mut maps: Vec<GroupRingMatrix> = Vec::with_capacity(bound + 1);
    for i in 0..=bound {
        let mut e = alpha.at(i, source, target)?.checked_sub(&beta.at(i, source, target)?)?;
        if i > 0 {
            e = e.checked_sub(&maps[i - 1].compose(&source.d(i))?)?;
        }
        let (marked, free): (Vec<usize>, Vec<usize>) = match sub {
            Some((m, _)) => (0..source.rank(i)).partition(|&j| m.contains(i, j)),
            None => (vec![], (0..source.rank(i)).collect()),
        };
        let dn = target.d(i + 1);
        let mut d = GroupRingMatrix::zeros(group.clone(), target.rank(i + 1), source.rank(i));
        if let Some((_, psi)) = sub {
            if !marked.is_empty() {
                let given = psi.get(i).ok_or_else(|| {
                    Error::InvalidHomotopy(format!("no component of the given homotopy in degree {i}"))
                })?;
                if dn.compose(given)? != e.select_columns(&marked) {
                    return Err(Error::InvalidHomotopy(format!(
                        "given homotopy is not a homotopy on the subcomplex in degree {i}"
                    )));
                }
                for (c, &j) in marked.iter().enumerate() {
                    d.set_block(0, j, &given.select_columns(&[c]));
                }
            }
        }
        if !free.is_empty() {
            let x = lift(&dn, &e.select_columns(&free), i, choice)?;
            for (c, &j) in free.iter().enumerate() {
                d.set_block(0, j, &x.select_columns(&[c]));
            }
        }
        maps.push(d);
    }
    let h = ChainHomotopy::new(maps);
    h.check(alpha, beta, source, target, bound)?;
    Ok(h)
}

/// `alpha: C -> K` on `[0, 2]`, `phi: L_2 -> Z_2(K)` and `D = (D_0, D_1)`
/// with `alpha t_L - (i_L + phi) = d D + D d` on `L` in degrees `0..=2`.
#[derive(Clone, Debug)]
pub struct AlphaPhi {
    pub alpha: ChainMap,
    pub phi: GroupRingMatrix,
    /// `D_i: L_i -> K_{i+1}` for `i = 0, 1`.
    pub homotopy: ChainHomotopy,
}

/// Builds `(alpha, phi, D)` for `(K, L)` and `t: K -> C`. When `alpha` is
/// supplied it is used as is.
pub fn alpha_phi(
    k: &AugmentedComplex,
    marker: &SubcomplexMarker,
    t: &ChainMap,
    c: &AugmentedComplex,
    alpha: Option<ChainMap>,
    choice: &mut LiftChoice,
) -> Result<AlphaPhi> {
    if k.top() < 2 || !is_acyclic_below(k, 2)? {
        return Err(Error::NotAcyclic(2));
    }
    let alpha = match alpha {
        Some(a) => {
            a.check_augmented(c, &k.truncate(2))?;
            a.truncate(2)
        }
        None => lift_augmented_map(c, k, 2, choice)?,
    };
    let l = k.subcomplex(marker)?;
    let t_l = t.restrict_to(marker);
    let incl = ChainMap::inclusion(k, marker);

    let comp = |i: usize| -> Result<GroupRingMatrix> {
        alpha.at(i, c, k)?.compose(&t_l.at(i, &l, c)?)?.checked_sub(&incl.at(i, &l, k)?)
    };
    let d0 = lift(&k.d(1), &comp(0)?, 0, choice)?;
    let rhs1 = comp(1)?.checked_sub(&d0.compose(&l.d(1))?)?;
    let d1 = lift(&k.d(2), &rhs1, 1, choice)?;
    let phi = comp(2)?.checked_sub(&d1.compose(&l.d(2))?)?;
    if !k.d(2).compose(&phi)?.is_zero() {
        return Err(Error::Internal("phi does not land in the cycles".into()));
    }
    Ok(AlphaPhi { alpha, phi, homotopy: ChainHomotopy::new(vec![d0, d1]) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::presentation_complex;

    fn rp2() -> AugmentedComplex {
        presentation_complex(Arc::new(FiniteGroup::cyclic(2)), &[1], &[vec![1, 1]]).unwrap()
    }

    #[test]
    fn trivial_group_resolution() {
        let r = build_resolution(Arc::new(FiniteGroup::trivial()), 4).unwrap();
        assert_eq!(r.ranks(), &[1, 0, 0, 0, 0]);
    }

    #[test]
    fn periodic_resolution_validates() {
        let r = periodic_cyclic_resolution(2, 5).unwrap();
        assert_eq!(r.ranks(), &[1; 6]);
        assert!(periodic_cyclic_resolution(3, 4).is_ok());
    }

    #[test]
    fn built_resolutions_are_exact() {
        for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)] {
            let r = build_resolution(Arc::new(g), 4).unwrap();
            assert!(r.ranks().iter().all(|&x| x >= 1));
        }
    }

    #[test]
    fn lifts_and_homotopies() {
        let k = rp2();
        let c = periodic_cyclic_resolution(2, 4).unwrap();
        let t = lift_augmented_map(&k, &c, 2, &mut LiftChoice::Canonical).unwrap();
        let t2 = lift_augmented_map(&k, &c, 2, &mut LiftChoice::seeded(3)).unwrap();
        relative_homotopy(&t, &t2, &k, &c, None, 2, &mut LiftChoice::Canonical).unwrap();
        let id = lift_augmented_map(&k, &k, 2, &mut LiftChoice::Canonical).unwrap();
        let zero = relative_homotopy(&id, &id, &k, &k, None, 1, &mut LiftChoice::Canonical).unwrap();
        assert!(zero.maps().iter().all(GroupRingMatrix::is_zero));
    }

    #[test]
    fn lift_needs_surjective_augmentation() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let c = ChainComplex::new(g.clone(), vec![1], vec![]).unwrap();
        let k = AugmentedComplex::from_parts(c, vec![Int::from(2)]).unwrap();
        let r = periodic_cyclic_resolution(2, 2).unwrap();
        assert!(lift_augmented_map(&r, &k, 0, &mut LiftChoice::Canonical).is_err());
    }

    #[test]
    fn alpha_phi_on_full_subcomplex() {
        let k = rp2();
        let c = periodic_cyclic_resolution(2, 4).unwrap();
        let t = lift_augmented_map(&k, &c, 2, &mut LiftChoice::Canonical).unwrap();
        let full = SubcomplexMarker::full(&k);
        let ap = alpha_phi(&k, &full, &t, &c, None, &mut LiftChoice::Canonical).unwrap();
        assert!(k.d(2).compose(&ap.phi).unwrap().is_zero());
        let again = alpha_phi(&k, &full, &t, &c, Some(ap.alpha.clone()), &mut LiftChoice::Canonical).unwrap();
        assert_eq!(again.phi, ap.phi);
        let empty = alpha_phi(&k, &SubcomplexMarker::empty(), &t, &c, None, &mut LiftChoice::Canonical).unwrap();
        assert_eq!(empty.phi.cols(), 0);
    }
}
