use std::sync::Arc;

use crate::chain::{
    homology, is_acyclic_below, mapping_cone, AugmentedComplex, ChainComplex, ChainHomotopy, ChainMap, Homology,
    MappingCone, PiModule, PiModuleHom, SubcomplexMarker,
};
use crate::error::{Error, Result};
use crate::exactlinalg::IntMatrix;
use crate::groupring::{FiniteGroup, GroupIso, GroupRingMatrix, LiftChoice};
use crate::lifting::{alpha_phi, lift_augmented_map, relative_homotopy, AlphaPhi};

use super::cochain::{precompose, EquivariantSystem};

/// Everything the k-invariant of a pair depends on: `K`, a basis-spanned
/// subcomplex `L`, a resolution `C` of `Z` and `t: K -> C`.
#[derive(Clone, Debug)]
pub struct RelativeDatum {
    pub k: AugmentedComplex,
    pub marker: SubcomplexMarker,
    pub l: ChainComplex,
    pub resolution: AugmentedComplex,
    pub t: ChainMap,
    pub t_l: ChainMap,
    pub cone: MappingCone,
    pub h2: Homology,
}

impl RelativeDatum {
    /// Assembles a datum; `t` is lifted when not supplied. The resolution
    /// must reach degree 4.
    pub fn new(
        k: AugmentedComplex,
        marker: SubcomplexMarker,
        resolution: AugmentedComplex,
        t: Option<ChainMap>,
        choice: &mut LiftChoice,
    ) -> Result<Self> {
        if **k.group() != **resolution.group() {
            return Err(Error::GroupMismatch);
        }
        if resolution.top() < 4 {
            return Err(Error::InvalidComplex("the resolution must reach degree 4".into()));
        }
        if k.top() < 2 || !is_acyclic_below(&k, 2)? {
            return Err(Error::NotAcyclic(2));
        }
        let bound = k.top().min(resolution.top() - 1);
        let t = match t {
            Some(t) => {
                let t = t.truncate(bound);
                if t.len() <= bound {
                    return Err(Error::NotAChainMap(format!("t must be given through degree {bound}")));
                }
                t.check_augmented(&k, &resolution)?;
                t
            }
            None => lift_augmented_map(&k, &resolution, bound, choice)?,
        };
        let l = k.subcomplex(&marker)?;
        let t_l = t.restrict_to(&marker);
        let cone = mapping_cone(&t_l, &l, &resolution)?;
        let h2 = homology(&k, 2)?;
        Ok(RelativeDatum { k, marker, l, resolution, t, t_l, cone, h2 })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.k.group()
    }

    /// Restriction of scalars along `u: H -> G` for a datum over `G`.
    pub fn restrict(&self, u: &GroupIso) -> Result<RelativeDatum> {
        let l = self.l.restrict(u)?;
        let resolution = self.resolution.restrict(u)?;
        let t_l = self.t_l.restrict(u)?;
        let cone = mapping_cone(&t_l, &l, &resolution)?;
        Ok(RelativeDatum {
            k: self.k.restrict(u)?,
            marker: self.marker.clone(),
            l,
            resolution,
            t: self.t.restrict(u)?,
            t_l,
            cone,
            h2: self.h2.restrict(u)?,
        })
    }

    /// The same pair over another resolution of the same group, keeping
    /// the homology coordinates; `t` is lifted afresh.
    pub fn with_resolution(&self, resolution: AugmentedComplex, choice: &mut LiftChoice) -> Result<RelativeDatum> {
        let mut d = RelativeDatum::new(self.k.clone(), self.marker.clone(), resolution, None, choice)?;
        d.h2 = self.h2.clone();
        Ok(d)
    }

    /// The inclusion `L -> K`.
    pub fn inclusion(&self) -> ChainMap {
        ChainMap::inclusion(&self.k, &self.marker)
    }
}

/// A degree-`n` cohomology class on a mapping cone with coefficients in a
/// module, given by an equivariant cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub cone: ChainComplex,
    pub module: PiModule,
    pub degree: usize,
    pub representative: IntMatrix,
}

impl CohomologyClass {
    /// Checks shapes and the cocycle law `c o d_{n+1} = 0` in the module.
    pub fn new(cone: ChainComplex, module: PiModule, degree: usize, representative: IntMatrix) -> Result<Self> {
        if **cone.group() != **module.group() {
            return Err(Error::GroupMismatch);
        }
        let representative = module.reduce(&representative);
        let next = precompose(&module, &representative, &cone.d(degree + 1)).map_err(|_| {
            Error::DimensionMismatch(format!(
                "representative is {}x{}, expected {}x{}",
                representative.rows(),
                representative.cols(),
                module.gens(),
                cone.rank(degree)
            ))
        })?;
        if !next.is_zero() && !module.is_zero_element(&next) {
            return Err(Error::CocycleCheckFailed(format!("c o d_{} is not zero", degree + 1)));
        }
        Ok(CohomologyClass { cone, module, degree, representative })
    }

    /// The zero class.
    pub fn zero(cone: ChainComplex, module: PiModule, degree: usize) -> Self {
        let representative = IntMatrix::zeros(module.gens(), cone.rank(degree));
        CohomologyClass { cone, module, degree, representative }
    }

    /// Whether the representative is a coboundary.
    pub fn is_zero(&self) -> Result<bool> {
        classes_equal(self, &CohomologyClass::zero(self.cone.clone(), self.module.clone(), self.degree))
    }

    /// Some `gamma` on the previous degree with `gamma o d = self`, if any.
    pub fn coboundary_witness(&self) -> Result<Option<IntMatrix>> {
        coboundary_solve(&self.cone, &self.module, self.degree, &self.representative)
    }
}

fn coboundary_solve(cone: &ChainComplex, module: &PiModule, degree: usize, target: &IntMatrix) -> Result<Option<IntMatrix>> {
    if degree == 0 {
        return Ok(module.is_zero_element(target).then(|| IntMatrix::zeros(module.gens(), 0)));
    }
    let mut sys = EquivariantSystem::new(cone.group().clone());
    let gamma = sys.cochain(module, cone.rank(degree - 1));
    let blk = sys.equation(target.clone(), module.relations().clone());
    sys.term(blk, gamma, IntMatrix::identity(module.gens()), cone.d(degree))?;
    Ok(sys.solve()?.map(|s| s.value(gamma).clone()))
}

/// Whether `a - b` is a coboundary.
pub fn classes_equal(a: &CohomologyClass, b: &CohomologyClass) -> Result<bool> {
    if a.cone != b.cone || !a.module.same_as(&b.module) || a.degree != b.degree {
        return Err(Error::MismatchedClasses);
    }
    let diff = &a.representative - &b.representative;
    if a.module.is_zero_element(&diff) {
        return Ok(true);
    }
    Ok(coboundary_solve(&a.cone, &a.module, a.degree, &diff)?.is_some())
}

/// Postcomposition with a module map (along its isomorphism `u`, if any,
/// with the target read as a module over the source group).
pub fn pushforward_coeff(class: &CohomologyClass, f: &PiModuleHom) -> Result<CohomologyClass> {
    if **f.source().group() != **class.module.group() || !f.source().same_as(&class.module) {
        return Err(Error::MismatchedClasses);
    }
    let target = match f.iso() {
        Some(u) => f.target().restrict(u)?,
        None => f.target().clone(),
    };
    let rep = target.reduce(&(f.matrix() * &class.representative));
    CohomologyClass::new(class.cone.clone(), target, class.degree, rep)
}

/// Precomposition with the degree-`n` component of a chain map between
/// cones; `map` goes from `source_cone` into the class's cone.
pub fn pullback_along(class: &CohomologyClass, map: &ChainMap, source_cone: &ChainComplex) -> Result<CohomologyClass> {
    let m = map.at(class.degree, source_cone, &class.cone)?;
    let rep = precompose(&class.module, &class.representative, &m)?;
    CohomologyClass::new(source_cone.clone(), class.module.clone(), class.degree, rep)
}

/// Restriction of scalars along `u: H -> G` for a class over `G`.
pub fn restrict_scalars_class(u: &GroupIso, class: &CohomologyClass) -> Result<CohomologyClass> {
    Ok(CohomologyClass {
        cone: class.cone.restrict(u)?,
        module: class.module.restrict(u)?,
        degree: class.degree,
        representative: class.representative.clone(),
    })
}

fn degreewise(top: usize, f: impl Fn(usize) -> Result<GroupRingMatrix>) -> Result<ChainMap> {
    (0..=top).map(f).collect::<Result<Vec<_>>>().map(ChainMap::new)
}

/// `t_L` and `t'_{L'} o h`: the two maps `L -> C'` a cone-map homotopy
/// relates, through degree 3.
fn cone_map_sides(from: &RelativeDatum, to: &RelativeDatum, g: &ChainMap, h: &ChainMap) -> Result<(ChainMap, ChainMap)> {
    let top = 3.min(from.l.top());
    let lhs = degreewise(top, |i| {
        g.at(i, &from.resolution, &to.resolution)?.compose(&from.t_l.at(i, &from.l, &from.resolution)?)
    })?;
    let rhs = degreewise(top, |i| to.t_l.at(i, &to.l, &to.resolution)?.compose(&h.at(i, &from.l, &to.l)?))?;
    Ok((lhs, rhs))
}

/// A homotopy `g t_L - t'_{L'} h = d psi + psi d` on `L` through degree 3.
pub fn solve_cone_homotopy(
    from: &RelativeDatum,
    to: &RelativeDatum,
    g: &ChainMap,
    h: &ChainMap,
    choice: &mut LiftChoice,
) -> Result<ChainHomotopy> {
    let (lhs, rhs) = cone_map_sides(from, to, g, h)?;
    relative_homotopy(&lhs, &rhs, &from.l, &to.resolution, None, 3.min(from.l.top()), choice)
}

/// The cone map `[[g, psi], [0, h]]: Cone(t_L) -> Cone(t'_{L'})`, checked
/// to be a chain map.
pub fn cone_map(from: &RelativeDatum, to: &RelativeDatum, g: &ChainMap, h: &ChainMap, psi: &ChainHomotopy) -> Result<ChainMap> {
    let (lhs, rhs) = cone_map_sides(from, to, g, h)?;
    psi.check(&lhs, &rhs, &from.l, &to.resolution, 3.min(from.l.top()))?;
    let (src, dst) = (from.cone.complex(), to.cone.complex());
    let top = src.top().min(dst.top());
    let map = degreewise(top, |n| {
        let mut m = GroupRingMatrix::zeros(from.group().clone(), dst.rank(n), src.rank(n));
        m.set_block(0, 0, &g.at(n, &from.resolution, &to.resolution)?);
        if n > 0 {
            let p = n - 1;
            m.set_block(0, from.cone.target_rank(n), &psi.at(p, &from.l, &to.resolution));
            m.set_block(to.cone.target_rank(n), from.cone.target_rank(n), &h.at(p, &from.l, &to.l)?);
        }
        Ok(m)
    })?;
    map.check(src, dst)?;
    Ok(map)
}

/// `(id, h)^*` of a class over `to`'s cone, with `psi` solved when absent.
/// Both data must share the resolution.
pub fn pullback_class(
    class: &CohomologyClass,
    from: &RelativeDatum,
    to: &RelativeDatum,
    h: &ChainMap,
    psi: Option<&ChainHomotopy>,
    choice: &mut LiftChoice,
) -> Result<CohomologyClass> {
    if from.resolution != to.resolution {
        return Err(Error::InvalidComplex("the two data use different resolutions".into()));
    }
    let id = ChainMap::identity(&from.resolution, from.resolution.top());
    let solved;
    let psi = match psi {
        Some(p) => p,
        None => {
            solved = solve_cone_homotopy(from, to, &id, h, choice)?;
            &solved
        }
    };
    let map = cone_map(from, to, &id, h, psi)?;
    pullback_along(class, &map, from.cone.complex())
}

/// `theta = (alpha_2 d_3, phi)` on `Cone_3 = C_3 + L_2`, projected to
/// `H_2(K)`.
pub fn theta(datum: &RelativeDatum, ap: &AlphaPhi) -> Result<IntMatrix> {
    let c = &datum.resolution;
    let a = ap.alpha.at(2, c, &datum.k)?.compose(&c.d(3))?;
    let proj = &datum.h2.projection;
    let value = (proj * &a.basis_images()).hstack(&(proj * &ap.phi.basis_images()))?;
    Ok(datum.h2.module.reduce(&value))
}

/// The cocycle, its class, and the choices behind them.
#[derive(Clone, Debug)]
pub struct KInvariant {
    pub alpha_phi: AlphaPhi,
    pub theta: IntMatrix,
    pub class: CohomologyClass,
}

/// The relative k-invariant of a datum.
pub fn k_invariant(datum: &RelativeDatum, choice: &mut LiftChoice) -> Result<KInvariant> {
    k_invariant_with_alpha(datum, None, choice)
}

/// As [`k_invariant`], reusing a given `alpha`.
pub fn k_invariant_with_alpha(datum: &RelativeDatum, alpha: Option<ChainMap>, choice: &mut LiftChoice) -> Result<KInvariant> {
    let ap = alpha_phi(&datum.k, &datum.marker, &datum.t, &datum.resolution, alpha, choice)?;
    let theta = theta(datum, &ap)?;
    let class = CohomologyClass::new(datum.cone.complex().clone(), datum.h2.module.clone(), 3, theta.clone())?;
    Ok(KInvariant { alpha_phi: ap, theta, class })
}
