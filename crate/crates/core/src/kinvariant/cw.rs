use crate::chain::{
    algebraic_mapping_cylinder, homology, AugmentedComplex, ChainMap, PiModule, PiModuleHom, SubcomplexMarker,
};
use crate::error::{Error, Result};
use crate::exactlinalg::{Int, IntMatrix};
use crate::groupring::{GroupRingMatrix, LiftChoice};
use crate::lifting::lift_augmented_map;

use super::class::{
    classes_equal, cone_map, k_invariant, pullback_along, pushforward_coeff, solve_cone_homotopy, CohomologyClass,
    RelativeDatum,
};
use super::cochain::precompose;
use super::cohomology::cohomology;
use super::extension::decide_extension;

/// The k-invariant of a pair `(X, Y)` with respect to a resolution; `nu`
/// is used as `t` when supplied.
pub fn cw_k_invariant(
    x: &AugmentedComplex,
    y: &SubcomplexMarker,
    resolution: &AugmentedComplex,
    nu: Option<ChainMap>,
    choice: &mut LiftChoice,
) -> Result<(RelativeDatum, CohomologyClass)> {
    let datum = RelativeDatum::new(x.clone(), y.clone(), resolution.clone(), nu, choice)?;
    let class = k_invariant(&datum, choice)?.class;
    Ok((datum, class))
}

/// The cone map `Cone(t_1) -> Cone(t_2)` comparing the same pair over two
/// resolutions, built from a lift `C_1 -> C_2`.
pub fn resolution_comparison(d1: &RelativeDatum, d2: &RelativeDatum, choice: &mut LiftChoice) -> Result<ChainMap> {
    if d1.k != d2.k || d1.marker != d2.marker {
        return Err(Error::InvalidComplex("comparison needs the same pair".into()));
    }
    let tau = lift_augmented_map(&d1.resolution, &d2.resolution, d1.resolution.top(), choice)?;
    let h = ChainMap::identity(&d1.l, d1.l.top());
    let psi = solve_cone_homotopy(d1, d2, &tau, &h, choice)?;
    cone_map(d1, d2, &tau, &h, &psi)
}

/// Whether the k-invariant of `(X, Y)` dies in `H_2(X, Y)`. `Y` must
/// contain all cells of degrees 0 and 1.
pub fn boundary_vanishing_check(datum: &RelativeDatum, choice: &mut LiftChoice) -> Result<bool> {
    let x = &datum.k;
    for i in 0..=1 {
        if datum.marker.degree(i).len() != x.rank(i) {
            return Err(Error::InvalidMarker(format!("degree {i} must be fully marked")));
        }
    }
    let class = k_invariant(datum, choice)?.class;
    let quotient = x.quotient(&datum.marker)?;
    let hq = homology(&quotient, 2)?;
    let n = x.group().order();
    let unmarked = datum.marker.complement(x)?;
    let coords: Vec<usize> = unmarked.degree(2).iter().flat_map(|&j| (0..n).map(move |g| j * n + g)).collect();
    let j_star = &hq.projection * &datum.h2.section.select_rows(&coords);
    let j = PiModuleHom::new(datum.h2.module.clone(), hq.module.clone(), hq.module.reduce(&j_star), None)?;
    pushforward_coeff(&class, &j)?.is_zero()
}

/// For every generator `phi` of `H^2(X; A)`, compares `ev(phi)_*(k_{X,X})`
/// with the class of `(0, -phi)` on `Cone(t)_3 = C_3 + X_2`. `datum` must
/// have `L = X`.
pub fn phi_ev_delta_check(datum: &RelativeDatum, a: &PiModule, choice: &mut LiftChoice) -> Result<bool> {
    let x = &datum.k;
    if datum.marker != SubcomplexMarker::full(x) {
        return Err(Error::InvalidMarker("the subcomplex must be the whole complex".into()));
    }
    let kxx = k_invariant(datum, choice)?.class;
    let h2 = cohomology(x, a, 2)?;
    let section = GroupRingMatrix::from_basis_images(x.group().clone(), x.rank(2), &datum.h2.section)?;
    let c3 = datum.cone.target_rank(3);
    for phi in &h2.generators {
        let ev_matrix = a.reduce(&precompose(a, phi, &section)?);
        let ev = PiModuleHom::new(datum.h2.module.clone(), a.clone(), ev_matrix, None)?;
        let lhs = pushforward_coeff(&kxx, &ev)?;
        let rep = IntMatrix::zeros(a.gens(), c3).hstack(&phi.scale(&Int::from(-1)))?;
        let delta = CohomologyClass::new(datum.cone.complex().clone(), a.clone(), 3, rep)?;
        if !classes_equal(&lhs, &delta)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of comparing `k_{X,Y} = 0` with extendability from the cylinder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingComparison {
    pub class_is_zero: bool,
    pub extends: bool,
}

impl VanishingComparison {
    pub fn agrees(&self) -> bool {
        self.class_is_zero == self.extends
    }
}

/// Decides `k_{X,Y} = 0` twice: directly, and as extendability of the
/// identity of `Y` from the mapping cylinder of `t_Y` to `X` with `F = 0`.
pub fn vanishing_criterion(datum: &RelativeDatum, choice: &mut LiftChoice) -> Result<VanishingComparison> {
    let class_is_zero = k_invariant(datum, choice)?.class.is_zero()?;
    let y_aug: Vec<Int> = datum.marker.degree(0).iter().map(|&j| datum.k.aug()[j].clone()).collect();
    let cyl = algebraic_mapping_cylinder(&datum.t_l, &datum.l, &y_aug, &datum.resolution)?;
    let cyl_datum = RelativeDatum::new(
        cyl.complex.clone(),
        cyl.middle.clone(),
        datum.resolution.clone(),
        Some(cyl.retraction.clone()),
        choice,
    )?;
    let h = ChainMap::identity(&cyl_datum.l, cyl_datum.l.top());
    let zero = PiModuleHom::zero(&cyl_datum.h2.module, &datum.h2.module);
    let extends = decide_extension(&cyl_datum, datum, &h, None, &zero, choice)?.is_extended();
    Ok(VanishingComparison { class_is_zero, extends })
}

/// `tau^*` of the class of `d2` equals the class of `d1`.
pub fn comparison_holds(d1: &RelativeDatum, d2: &RelativeDatum, choice: &mut LiftChoice) -> Result<bool> {
    let map = resolution_comparison(d1, d2, choice)?;
    let k1 = k_invariant(d1, choice)?.class;
    let k2 = k_invariant(d2, choice)?.class;
    classes_equal(&pullback_along(&k2, &map, d1.cone.complex())?, &k1)
}
