use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::chain::{ChainHomotopy, ChainMap, PiModuleHom};
use crate::error::{Error, Result};
use crate::exactlinalg::{Int, IntMatrix};
use crate::groupring::{solve_equivariant_with, GroupRingMatrix, LiftChoice};
use crate::lifting::relative_homotopy;

use super::class::{
    classes_equal, cone_map, k_invariant, pullback_class, pushforward_coeff, solve_cone_homotopy, CohomologyClass,
    RelativeDatum,
};
use super::cochain::{precompose, EquivariantSystem, Unknown};

/// A chain map `f: K -> K'` on degrees `0..=3` with a homotopy
/// `f i_L - i_{L'} h = d H + H d` on `L` in degrees `0..=2`.
#[derive(Clone, Debug)]
pub struct ExtensionCertificate {
    pub f: ChainMap,
    pub homotopy: ChainHomotopy,
}

/// Why no extension exists: `F_*(k) - h^*(k')` is a nonzero class.
#[derive(Clone, Debug)]
pub struct Obstruction {
    pub difference: CohomologyClass,
}

#[derive(Clone, Debug)]
pub enum ExtensionOutcome {
    Extended(ExtensionCertificate),
    Obstructed(Obstruction),
}

impl ExtensionOutcome {
    pub fn is_extended(&self) -> bool {
        matches!(self, ExtensionOutcome::Extended(_))
    }
}

/// What [`verify_extension`] found; `failures` names every violated
/// condition.
#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub chain_map: bool,
    pub augmentation: bool,
    pub homotopy: bool,
    pub induced_map: bool,
    pub classes_agree: bool,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.chain_map && self.augmentation && self.homotopy && self.induced_map && self.classes_agree
    }
}

fn check_inputs(d0: &RelativeDatum, d1: &RelativeDatum, h: &ChainMap, f: &PiModuleHom) -> Result<()> {
    if **d0.group() != **d1.group() {
        return Err(Error::GroupMismatch);
    }
    if d0.resolution != d1.resolution {
        return Err(Error::InvalidComplex("the two data use different resolutions".into()));
    }
    if f.iso().is_some() || !f.source().same_as(&d0.h2.module) || !f.target().same_as(&d1.h2.module) {
        return Err(Error::InvalidModule("F must map H_2(K) to H_2(K') over the same group".into()));
    }
    h.truncate(3.min(d0.l.top())).check(&d0.l, &d1.l)
}

fn at(m: &ChainMap, i: usize, d: &RelativeDatum, from_resolution: bool) -> Result<GroupRingMatrix> {
    if from_resolution {
        m.at(i, &d.resolution, &d.k)
    } else {
        m.at(i, &d.k, &d.resolution)
    }
}

/// Decides whether an augmentation-preserving `f: K -> K'` on `0..=3` with
/// `f i_L ~ i_{L'} h` and `f_* = F` on `H_2` exists, and builds one when it
/// does. `psi` (`t_L ~ t'_{L'} h`) is solved for when absent.
pub fn decide_extension(
    d0: &RelativeDatum,
    d1: &RelativeDatum,
    h: &ChainMap,
    psi: Option<&ChainHomotopy>,
    f: &PiModuleHom,
    choice: &mut LiftChoice,
) -> Result<ExtensionOutcome> {
    check_inputs(d0, d1, h, f)?;
    let group = d0.group().clone();
    let c = &d0.resolution;
    let (k, k1) = (&d0.k, &d1.k);
    let (l, l1) = (&d0.l, &d1.l);
    let (hm, hm1) = (&d0.h2, &d1.h2);
    let module1 = &hm1.module;

    let kinv0 = k_invariant(d0, choice)?;
    let kinv1 = k_invariant(d1, choice)?;
    let (alpha, alpha1) = (&kinv0.alpha_phi.alpha, &kinv1.alpha_phi.alpha);
    let (phi, phi1) = (&kinv0.alpha_phi.phi, &kinv1.alpha_phi.phi);

    let id_c = ChainMap::identity(c, c.top());
    let psi = match psi {
        Some(p) => p.clone(),
        None => solve_cone_homotopy(d0, d1, &id_c, h, choice)?,
    };
    let m = cone_map(d0, d1, &id_c, h, &psi)?;
    let cone = d0.cone.complex();
    let m3 = m.at(3, cone, d1.cone.complex())?;
    let pushed = module1.reduce(&(f.matrix() * &kinv0.theta));
    let pulled = precompose(module1, &kinv1.theta, &m3)?;
    let diff = module1.reduce(&(&pushed - &pulled));

    let difference = CohomologyClass::new(cone.clone(), module1.clone(), 3, diff)?;
    let Some(m_prime) = difference.coboundary_witness()? else {
        return Ok(ExtensionOutcome::Obstructed(Obstruction { difference }));
    };

    // g' = (g'_pi, g'_L): Cone_2 = C_2 + L_1 -> Z_2(K')
    let g = GroupRingMatrix::from_basis_images(group.clone(), k1.rank(2), &(&hm1.section * &m_prime))?;
    let c2 = c.rank(2);
    let g_pi = g.select_columns(&(0..c2).collect::<Vec<_>>());
    let g_l = g.select_columns(&(c2..g.cols()).collect::<Vec<_>>());

    // D: alpha t - id = dD + Dd on K in degrees 0, 1, extending D_L
    let at_k = ChainMap::new(
        (0..=2).map(|i| at(alpha, i, d0, true)?.compose(&at(&d0.t, i, d0, false)?)).collect::<Result<_>>()?,
    );
    let id_k = ChainMap::identity(k, 2);
    let d = relative_homotopy(&at_k, &id_k, k, k, Some((&d0.marker, &kinv0.alpha_phi.homotopy)), 1, choice)?;

    let e2 = GroupRingMatrix::identity(group.clone(), k.rank(2))
        .checked_sub(at_k.get(2).expect("degree 2 present"))?
        .checked_add(&d.at(1, k, k).compose(&k.d(2))?)?;
    if !k.d(2).compose(&e2)?.is_zero() {
        return Err(Error::Internal("E_2 does not land in the cycles".into()));
    }
    let l2: Vec<usize> = d0.marker.degree(2).to_vec();
    if e2.select_columns(&l2) != phi.neg() {
        return Err(Error::Internal("E_2 does not restrict to -phi on L".into()));
    }

    // F_2: K_2 -> Z_2(K') with proj' F_2 = F proj E_2, special on L_2
    let values = &(&hm1.section * f.matrix()) * &(&hm.projection * &e2.basis_images());
    let mut f2_corr = GroupRingMatrix::from_basis_images(group.clone(), k1.rank(2), &values)?;
    let t_l2 = d0.t_l.at(2, l, c)?;
    let x_l = g_l
        .compose(&l.d(2))?
        .checked_sub(&phi1.compose(&h.at(2, l, l1)?)?)?
        .checked_sub(&alpha1.at(2, c, k1)?.compose(&c.d(3))?.compose(&psi.at(2, l, c))?)?
        .checked_sub(&g_pi.compose(&t_l2)?)?;
    if !k1.d(2).compose(&x_l)?.is_zero() {
        return Err(Error::Internal("the L-correction is not a cycle".into()));
    }
    let lhs = &hm1.projection * &x_l.basis_images();
    let rhs = &(f.matrix() * &hm.projection) * &phi.basis_images();
    if !module1.is_zero_element(&(&lhs + &rhs)) {
        return Err(Error::Internal("the L-correction has the wrong homology class".into()));
    }
    for (col, &j) in l2.iter().enumerate() {
        f2_corr.set_block(0, j, &x_l.select_columns(&[col]));
    }

    let f0 = alpha1.at(0, c, k1)?.compose(&d0.t.at(0, k, c)?)?;
    let f1 = alpha1.at(1, c, k1)?.compose(&d0.t.at(1, k, c)?)?;
    let t2 = d0.t.at(2, k, c)?;
    let f2 = alpha1.at(2, c, k1)?.compose(&t2)?.checked_add(&g_pi.compose(&t2)?)?.checked_add(&f2_corr)?;
    let f3 = solve_equivariant_with(&k1.d(3), &f2.compose(&k.d(3))?, choice)?.ok_or_else(|| Error::LiftFailed {
        degree: 3,
        reason: "f_2 d_3 is not a boundary".into(),
    })?;
    let fmap = ChainMap::new(vec![f0, f1, f2, f3]);

    let dl1 = &kinv1.alpha_phi.homotopy;
    let h0 = dl1
        .at(0, l1, k1)
        .compose(&h.at(0, l, l1)?)?
        .checked_add(&alpha1.at(1, c, k1)?.compose(&psi.at(0, l, c))?)?;
    let h1 = dl1
        .at(1, l1, k1)
        .compose(&h.at(1, l, l1)?)?
        .checked_add(&alpha1.at(2, c, k1)?.compose(&psi.at(1, l, c))?)?
        .checked_add(&g_l)?;
    let h2 = GroupRingMatrix::zeros(group, k1.rank(3), l.rank(2));
    let cert = ExtensionCertificate { f: fmap, homotopy: ChainHomotopy::new(vec![h0, h1, h2]) };

    let report = verify_extension(&cert.f, Some(&cert.homotopy), d0, d1, h, f, choice)?;
    if !report.is_valid() {
        return Err(Error::Internal(format!("constructed extension fails: {}", report.failures.join("; "))));
    }
    Ok(ExtensionOutcome::Extended(cert))
}

/// Rewrites a problem whose target lives over another group, related by
/// `u: G -> G'`, as one over `G`: the target datum is restricted along `u`
/// and moved to `d0`'s resolution, and `F` becomes `G`-equivariant.
pub fn restrict_problem(
    d0: &RelativeDatum,
    d1: &RelativeDatum,
    f: &PiModuleHom,
    choice: &mut LiftChoice,
) -> Result<(RelativeDatum, PiModuleHom)> {
    let Some(u) = f.iso() else {
        return Ok((d1.clone(), f.clone()));
    };
    let moved = d1.restrict(u)?.with_resolution(d0.resolution.clone(), choice)?;
    let g = PiModuleHom::new(f.source().clone(), moved.h2.module.clone(), f.matrix().clone(), None)?;
    Ok((moved, g))
}

/// `f i_L` and `i_{L'} h` on degrees `0..=2`.
fn homotopy_sides(f: &ChainMap, d0: &RelativeDatum, d1: &RelativeDatum, h: &ChainMap) -> Result<(ChainMap, ChainMap)> {
    let incl0 = d0.inclusion();
    let incl1 = d1.inclusion();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..=2 {
        a.push(f.at(i, &d0.k, &d1.k)?.compose(&incl0.at(i, &d0.l, &d0.k)?)?);
        b.push(incl1.at(i, &d1.l, &d1.k)?.compose(&h.at(i, &d0.l, &d1.l)?)?);
    }
    Ok((ChainMap::new(a), ChainMap::new(b)))
}

/// Independently checks a candidate extension: chain law on `0..=3`,
/// augmentation, `f i_L ~ i_{L'} h` on `0..=2` (with the given homotopy,
/// or by solving for one), `f_* = F` on `H_2`, and `h^*(k') = F_*(k)`.
pub fn verify_extension(
    fmap: &ChainMap,
    homotopy: Option<&ChainHomotopy>,
    d0: &RelativeDatum,
    d1: &RelativeDatum,
    h: &ChainMap,
    f: &PiModuleHom,
    choice: &mut LiftChoice,
) -> Result<VerificationReport> {
    check_inputs(d0, d1, h, f)?;
    let mut report = VerificationReport::default();
    let (k, k1) = (&d0.k, &d1.k);
    let truncated = fmap.truncate(3);

    report.chain_map = truncated.len() >= 4.min(k.top() + 1) && truncated.check(k, k1).is_ok();
    if !report.chain_map {
        report.failures.push(match truncated.check(k, k1) {
            Err(e) => format!("chain map: {e}"),
            Ok(()) => "chain map: components missing below degree 3".into(),
        });
    }
    report.augmentation = matches!(truncated.preserves_augmentation(k, k1), Ok(true));
    if !report.augmentation {
        report.failures.push("augmentation is not preserved".into());
    }

    if report.chain_map {
        let (a, b) = homotopy_sides(fmap, d0, d1, h)?;
        report.homotopy = match homotopy {
            Some(hh) => hh.check(&a, &b, &d0.l, k1, 2).is_ok(),
            None => homotopy_exists(&a, &b, d0, d1)?,
        };
        if !report.homotopy {
            report.failures.push("f i_L is not homotopic to i_L' h".into());
        }

        let f2 = fmap.at(2, k, k1)?;
        let induced = &(&d1.h2.projection * &f2.flatten()) * &d0.h2.section;
        report.induced_map = d1.h2.module.is_zero_element(&(&induced - f.matrix()));
        if !report.induced_map {
            report.failures.push("f_* differs from F on H_2".into());
        }
    } else {
        report.failures.push("homotopy and induced map not checked".into());
    }

    let kinv0 = k_invariant(d0, choice)?;
    let kinv1 = k_invariant(d1, choice)?;
    let pulled = pullback_class(&kinv1.class, d0, d1, h, None, choice)?;
    let pushed = pushforward_coeff(&kinv0.class, f)?;
    report.classes_agree = classes_equal(&pulled, &pushed)?;
    if !report.classes_agree {
        report.failures.push("h^*(k') differs from F_*(k)".into());
    }
    Ok(report)
}

fn free_rank(d: &RelativeDatum, i: usize) -> usize {
    d.group().order() * d.k.rank(i)
}

/// Whether `a - b = dH + Hd` on `L` in degrees `0..=2` for some `H`.
fn homotopy_exists(a: &ChainMap, b: &ChainMap, d0: &RelativeDatum, d1: &RelativeDatum) -> Result<bool> {
    let group = d0.group().clone();
    let (l, k1) = (&d0.l, &d1.k);
    let mut sys = EquivariantSystem::new(group.clone());
    let hs: Vec<Unknown> = (0..=2).map(|i| sys.map(k1.rank(i + 1), l.rank(i))).collect();
    for i in 0..=2 {
        let rhs = a.at(i, l, k1)?.checked_sub(&b.at(i, l, k1)?)?.basis_images();
        let blk = sys.equation(rhs, IntMatrix::zeros(free_rank(d1, i), 0));
        sys.term(blk, hs[i], k1.d(i + 1).flatten(), GroupRingMatrix::identity(group.clone(), l.rank(i)))?;
        if i > 0 {
            sys.term(blk, hs[i - 1], IntMatrix::identity(free_rank(d1, i)), l.d(i))?;
        }
    }
    Ok(sys.solve()?.is_some())
}

/// The system whose solutions are exactly the extensions `(f, H)`.
fn extension_system(d0: &RelativeDatum, d1: &RelativeDatum, h: &ChainMap, f: &PiModuleHom) -> Result<(EquivariantSystem, Unknown)> {
    let group = d0.group().clone();
    let (k, k1, l, l1) = (&d0.k, &d1.k, &d0.l, &d1.l);
    let id = |n: usize| GroupRingMatrix::identity(group.clone(), n);
    let free = |n: usize| IntMatrix::zeros(n, 0);
    let mut sys = EquivariantSystem::new(group.clone());
    let fs: Vec<Unknown> = (0..=3).map(|i| sys.map(k1.rank(i), k.rank(i))).collect();
    let hs: Vec<Unknown> = (0..=2).map(|i| sys.map(k1.rank(i + 1), l.rank(i))).collect();

    let blk = sys.equation(k.aug_matrix().basis_images(), free(group.order()));
    sys.term(blk, fs[0], k1.aug_matrix().flatten(), id(k.rank(0)))?;

    for i in 1..=3 {
        let rhs = GroupRingMatrix::zeros(group.clone(), k1.rank(i - 1), k.rank(i)).basis_images();
        let blk = sys.equation(rhs, free(free_rank(d1, i - 1)));
        sys.term(blk, fs[i], k1.d(i).flatten(), id(k.rank(i)))?;
        sys.term(blk, fs[i - 1], IntMatrix::identity(free_rank(d1, i - 1)).scale(&Int::from(-1)), k.d(i))?;
    }

    let incl0 = d0.inclusion();
    let incl1 = d1.inclusion();
    for i in 0..=2 {
        let rhs = incl1.at(i, l1, k1)?.compose(&h.at(i, l, l1)?)?.basis_images();
        let blk = sys.equation(rhs, free(free_rank(d1, i)));
        sys.term(blk, fs[i], IntMatrix::identity(free_rank(d1, i)), incl0.at(i, l, k)?)?;
        sys.term(blk, hs[i], k1.d(i + 1).flatten().scale(&Int::from(-1)), id(l.rank(i)))?;
        if i > 0 {
            sys.term(blk, hs[i - 1], IntMatrix::identity(free_rank(d1, i)).scale(&Int::from(-1)), l.d(i))?;
        }
    }

    let section = GroupRingMatrix::from_basis_images(group.clone(), k.rank(2), &d0.h2.section)?;
    let blk = sys.equation(f.matrix().clone(), d1.h2.module.relations().clone());
    sys.term(blk, fs[2], d1.h2.projection.clone(), section)?;
    Ok((sys, fs[0]))
}

/// Exact existence test for an extension, independent of the k-invariant:
/// one integer linear system in all components of `f` and `H`.
pub fn extension_exists(d0: &RelativeDatum, d1: &RelativeDatum, h: &ChainMap, f: &PiModuleHom) -> Result<bool> {
    check_inputs(d0, d1, h, f)?;
    let (sys, _) = extension_system(d0, d1, h, f)?;
    Ok(sys.solve()?.is_some())
}

/// Searches `f_0` over the coefficient box `[-bound, bound]` (exhaustively
/// when there are at most `limit` candidates, otherwise `limit` random
/// ones) and completes each candidate exactly. Returns a witness `f_0`.
pub fn brute_force_extension(
    d0: &RelativeDatum,
    d1: &RelativeDatum,
    h: &ChainMap,
    f: &PiModuleHom,
    bound: i64,
    limit: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<IntMatrix>> {
    check_inputs(d0, d1, h, f)?;
    let (sys, f0) = extension_system(d0, d1, h, f)?;
    let partial = sys.with_fixed(f0);
    let (rows, cols) = partial.shape();
    let entries = rows * cols;
    let width = (2 * bound + 1) as usize;
    let n = d0.group().order();
    let aug = d0.k.aug();
    let aug1 = d1.k.aug();
    let fits_aug = |x: &IntMatrix| {
        (0..cols).all(|j| {
            let s: Int = (0..rows).map(|r| &aug1[r / n] * &x[(r, j)]).sum();
            s == aug[j]
        })
    };
    let exhaustive = (width as f64).powi(entries as i32) <= limit as f64;
    let total = if exhaustive { width.pow(entries as u32) } else { limit };
    for idx in 0..total {
        let mut x = IntMatrix::zeros(rows, cols);
        let mut code = idx;
        for e in 0..entries {
            let v = if exhaustive {
                let v = (code % width) as i64 - bound;
                code /= width;
                v
            } else {
                rng.gen_range(-bound..=bound)
            };
            x[(e % rows, e / rows)] = Int::from(v);
        }
        if !exhaustive && !fits_aug(&x) {
            // nudge one augmentation column into place so random samples stay useful
            for j in 0..cols {
                let s: Int = (0..rows).map(|r| &aug1[r / n] * &x[(r, j)]).sum();
                let gap = &aug[j] - s;
                let mut rows_with_aug: Vec<usize> = (0..rows).filter(|&r| aug1[r / n] == Int::from(1)).collect();
                rows_with_aug.shuffle(rng);
                if let Some(&r) = rows_with_aug.first() {
                    x[(r, j)] += gap;
                }
            }
        }
        if !fits_aug(&x) || x.max_abs() > Int::from(bound) {
            continue;
        }
        if partial.completes(&x)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;

    use super::*;
    use crate::chain::{presentation_complex, SubcomplexMarker};
    use crate::groupring::FiniteGroup;
    use crate::lifting::periodic_cyclic_resolution;

    fn rp2(marker: impl Fn(&crate::chain::AugmentedComplex) -> SubcomplexMarker) -> RelativeDatum {
        let k = presentation_complex(Arc::new(FiniteGroup::cyclic(2)), &[1], &[vec![1, 1]]).unwrap();
        let c = periodic_cyclic_resolution(2, 4).unwrap().into_complex();
        let m = marker(&k);
        RelativeDatum::new(k, m, c, None, &mut LiftChoice::Canonical).unwrap()
    }

    fn scalar(d: &RelativeDatum, s: i64) -> PiModuleHom {
        let m = d.h2.module.clone();
        PiModuleHom::new(m.clone(), m, IntMatrix::from_rows(&[[s]]), None).unwrap()
    }

    #[test]
    fn identity_datum_extends() {
        for q in [None, Some(1), Some(2)] {
            let d = rp2(|k| q.map_or_else(SubcomplexMarker::empty, |q| SubcomplexMarker::skeleton(k, q)));
            let h = ChainMap::identity(&d.l, 2);
            let out = decide_extension(&d, &d, &h, None, &scalar(&d, 1), &mut LiftChoice::Canonical).unwrap();
            assert!(out.is_extended());
            let id = ChainMap::identity(&d.k, 3);
            let report = verify_extension(&id, None, &d, &d, &h, &scalar(&d, 1), &mut LiftChoice::Canonical).unwrap();
            assert!(report.is_valid(), "{:?}", report.failures);
        }
    }

    #[test]
    fn minus_identity_extends_and_zero_is_obstructed() {
        let d = rp2(|_| SubcomplexMarker::empty());
        let h = ChainMap::identity(&d.l, 2);
        let minus = scalar(&d, -1);
        assert!(decide_extension(&d, &d, &h, None, &minus, &mut LiftChoice::seeded(4)).unwrap().is_extended());
        assert!(extension_exists(&d, &d, &h, &minus).unwrap());
        let zero = scalar(&d, 0);
        match decide_extension(&d, &d, &h, None, &zero, &mut LiftChoice::Canonical).unwrap() {
            ExtensionOutcome::Obstructed(o) => assert!(!o.difference.is_zero().unwrap()),
            ExtensionOutcome::Extended(_) => panic!("F = 0 must be obstructed"),
        }
        assert!(!extension_exists(&d, &d, &h, &zero).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(brute_force_extension(&d, &d, &h, &zero, 2, 1000, &mut rng).unwrap().is_none());
        assert!(brute_force_extension(&d, &d, &h, &minus, 2, 1000, &mut rng).unwrap().is_some());
    }

    #[test]
    fn problems_along_an_automorphism() {
        use crate::catalog::{automorphisms, random_presentation, Presentation};
        use crate::lifting::build_resolution;
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let base = Presentation::cyclic(3);
        let u = automorphisms(&base).pop().unwrap();
        let mut seen = [0; 2];
        for _ in 0..6 {
            let p = random_presentation(&mut rng, &base, 1, false);
            let k = p.complex().unwrap();
            let c = build_resolution(k.group().clone(), 4).unwrap().into_complex();
            let d = RelativeDatum::new(k, SubcomplexMarker::empty(), c, None, &mut LiftChoice::Canonical).unwrap();
            let m = &d.h2.module;
            for b in PiModuleHom::lattice(m, m, Some(&u)).unwrap() {
                let f = PiModuleHom::new(m.clone(), m.clone(), b, Some(u.clone())).unwrap();
                let (d1, g) = restrict_problem(&d, &d, &f, &mut LiftChoice::Canonical).unwrap();
                let h = ChainMap::identity(&d.l, 2);
                let out = decide_extension(&d, &d1, &h, None, &g, &mut LiftChoice::Canonical).unwrap();
                assert_eq!(out.is_extended(), extension_exists(&d, &d1, &h, &g).unwrap());
                seen[out.is_extended() as usize] += 1;
            }
        }
        assert!(seen[1] > 0);
    }

    #[test]
    fn corrupted_map_is_rejected() {
        let d = rp2(|_| SubcomplexMarker::empty());
        let h = ChainMap::identity(&d.l, 2);
        let mut maps = ChainMap::identity(&d.k, 3).into_maps();
        *maps[2].coeff_mut(0, 0, 1) += Int::from(1);
        let bad = ChainMap::new(maps);
        let report = verify_extension(&bad, None, &d, &d, &h, &scalar(&d, 1), &mut LiftChoice::Canonical).unwrap();
        assert!(!report.is_valid());
        assert!(!report.chain_map);
    }
}
