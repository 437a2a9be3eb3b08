//! Seeded randomized suites exercising the identities the k-invariant
//! satisfies. Every trial draws its own instance from `seed + trial`, so
//! trials are independent and reproducible.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{
    automorphisms, coefficient_modules, random_marker_with_1_skeleton, random_nested, random_presentation,
    random_subcomplex, with_random_3_cells, Presentation,
};
use crate::chain::{AugmentedComplex, ChainMap, PiModuleHom, SubcomplexMarker};
use crate::error::{Error, Result};
use crate::exactlinalg::{Int, IntMatrix};
use crate::format::complex_to_json;
use crate::groupring::{GroupRingMatrix, LiftChoice};
use crate::kinvariant::{
    boundary_vanishing_check, brute_force_extension, classes_equal, decide_extension, extension_exists,
    k_invariant, phi_ev_delta_check, pullback_class, restrict_scalars_class, vanishing_criterion,
    verify_extension, ExtensionOutcome, RelativeDatum,
};
use crate::lifting::build_resolution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Lemma {
    WellDefined,
    IndependenceOfT,
    NestedPullback,
    BoundaryVanishing,
    PhiEvDelta,
    Proposition,
    VanishingCriterion,
    Restriction,
}

impl Lemma {
    pub const ALL: [Lemma; 8] = [
        Lemma::WellDefined,
        Lemma::IndependenceOfT,
        Lemma::NestedPullback,
        Lemma::BoundaryVanishing,
        Lemma::PhiEvDelta,
        Lemma::Proposition,
        Lemma::VanishingCriterion,
        Lemma::Restriction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::WellDefined => "well-defined",
            Lemma::IndependenceOfT => "independence-of-t",
            Lemma::NestedPullback => "nested-pullback",
            Lemma::BoundaryVanishing => "boundary-vanishing",
            Lemma::PhiEvDelta => "phi-ev-delta",
            Lemma::Proposition => "proposition",
            Lemma::VanishingCriterion => "vanishing-criterion",
            Lemma::Restriction => "restriction",
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown lemma {s:?}")))
    }
}

/// A failed trial with the complexes needed to reproduce it.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub trial: usize,
    pub message: String,
    pub complexes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub lemma: Lemma,
    pub seed: u64,
    pub trials: usize,
    pub failures: Vec<Counterexample>,
    /// How often each kind of trial occurred (e.g. extended vs obstructed).
    pub tally: BTreeMap<&'static str, usize>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

enum Trial {
    Pass(&'static str),
    Fail(String, Vec<String>),
}

/// Runs `trials` independent trials of a lemma, in parallel.
pub fn run_check(lemma: Lemma, seed: u64, trials: usize) -> CheckOutcome {
    let run = |trial: usize| -> (usize, Result<Trial>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
        (trial, run_trial(lemma, &mut rng))
    };
    let workers = std::thread::available_parallelism().map_or(1, usize::from).min(trials.max(1));
    let mut results: Vec<(usize, Result<Trial>)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let run = &run;
                s.spawn(move || (w..trials).step_by(workers).map(run).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("trial thread panicked")).collect()
    });
    results.sort_by_key(|(t, _)| *t);

    let mut outcome = CheckOutcome { lemma, seed, trials, failures: Vec::new(), tally: BTreeMap::new() };
    for (trial, r) in results {
        match r {
            Ok(Trial::Pass(tag)) => *outcome.tally.entry(tag).or_default() += 1,
            Ok(Trial::Fail(message, complexes)) => outcome.failures.push(Counterexample { trial, message, complexes }),
            Err(e) => outcome.failures.push(Counterexample { trial, message: e.to_string(), complexes: Vec::new() }),
        }
    }
    outcome
}

fn run_trial(lemma: Lemma, rng: &mut ChaCha8Rng) -> Result<Trial> {
    match lemma {
        Lemma::WellDefined => well_defined(rng, 20),
        Lemma::IndependenceOfT => independence_of_t(rng),
        Lemma::NestedPullback => nested_pullback(rng),
        Lemma::BoundaryVanishing => boundary_vanishing(rng),
        Lemma::PhiEvDelta => phi_ev_delta(rng),
        Lemma::Proposition => proposition(rng),
        Lemma::VanishingCriterion => vanishing(rng),
        Lemma::Restriction => restriction(rng),
    }
}

/// A random complex over a cyclic group of order at most 4 with at most
/// two cells in each degree.
pub fn small_instance(rng: &mut ChaCha8Rng) -> Result<(Presentation, AugmentedComplex)> {
    let base = Presentation::cyclic(rng.gen_range(2..=4));
    let (extra, tietze) = *[(1, false), (0, true), (1, false), (0, false)].choose(rng).expect("nonempty");
    let p = random_presentation(rng, &base, extra, tietze);
    let k = p.complex()?;
    let cells = rng.gen_range(0..=2);
    let k = with_random_3_cells(rng, &k, cells)?;
    Ok((p, k))
}

/// A random presentation complex (with 3-cells) of a group of order at
/// most 6.
pub fn general_instance(rng: &mut ChaCha8Rng) -> Result<(Presentation, AugmentedComplex)> {
    let base = match rng.gen_range(0..5) {
        0 => Presentation::cyclic(2),
        1 => Presentation::cyclic(3),
        2 => Presentation::cyclic(4),
        3 => Presentation::klein_four(),
        _ => Presentation::symmetric3(),
    };
    let (extra, tietze) = (rng.gen_range(0..=1), rng.gen_bool(0.3));
    let p = random_presentation(rng, &base, extra, tietze);
    let k = p.complex()?;
    let cells = rng.gen_range(0..=1);
    let k = with_random_3_cells(rng, &k, cells)?;
    Ok((p, k))
}

fn datum(k: &AugmentedComplex, m: &SubcomplexMarker, choice: &mut LiftChoice) -> Result<RelativeDatum> {
    let c = build_resolution(k.group().clone(), 4)?.into_complex();
    RelativeDatum::new(k.clone(), m.clone(), c, None, choice)
}

fn fail(message: impl Into<String>, k: &AugmentedComplex, m: &SubcomplexMarker) -> Result<Trial> {
    Ok(Trial::Fail(message.into(), vec![complex_to_json(k, Some(m))]))
}

/// `runs` randomized recomputations of the class agree pairwise.
fn well_defined(rng: &mut ChaCha8Rng, runs: usize) -> Result<Trial> {
    let (_, k) = small_instance(rng)?;
    let m = random_subcomplex(rng, &k);
    let d = datum(&k, &m, &mut LiftChoice::Canonical)?;
    let classes = (0..runs)
        .map(|_| k_invariant(&d, &mut LiftChoice::seeded(rng.gen())).map(|k| k.class))
        .collect::<Result<Vec<_>>>()?;
    for a in 0..classes.len() {
        for b in a + 1..classes.len() {
            if !classes_equal(&classes[a], &classes[b])? {
                return fail(format!("recomputations {a} and {b} give different classes"), &k, &m);
            }
        }
    }
    Ok(Trial::Pass(if classes[0].is_zero()? { "zero" } else { "nonzero" }))
}

fn independence_of_t(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (_, k) = general_instance(rng)?;
    let m = random_subcomplex(rng, &k);
    let d1 = datum(&k, &m, &mut LiftChoice::Canonical)?;
    let d2 = RelativeDatum::new(k.clone(), m.clone(), d1.resolution.clone(), None, &mut LiftChoice::seeded(rng.gen()))?;
    let k1 = k_invariant(&d1, &mut LiftChoice::Canonical)?.class;
    let k2 = k_invariant(&d2, &mut LiftChoice::Canonical)?.class;
    let h = ChainMap::identity(&d1.l, d1.l.top());
    let moved = pullback_class(&k2, &d1, &d2, &h, None, &mut LiftChoice::Canonical)?;
    if !classes_equal(&moved, &k1)? {
        return fail("classes for homotopic t differ after transport", &k, &m);
    }
    Ok(Trial::Pass("equal"))
}

fn nested_pullback(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (_, k) = general_instance(rng)?;
    let (inner, outer) = if rng.gen_bool(0.3) {
        (random_subcomplex(rng, &k), SubcomplexMarker::full(&k))
    } else {
        random_nested(rng, &k)
    };
    let d_out = datum(&k, &outer, &mut LiftChoice::Canonical)?;
    let d_in = RelativeDatum::new(k.clone(), inner.clone(), d_out.resolution.clone(), Some(d_out.t.clone()), &mut LiftChoice::Canonical)?;
    let positions = SubcomplexMarker::new(inner.positions_in(&outer)?);
    let h = ChainMap::inclusion(&d_out.l, &positions);
    let k_out = k_invariant(&d_out, &mut LiftChoice::Canonical)?.class;
    let k_in = k_invariant(&d_in, &mut LiftChoice::Canonical)?.class;
    let pulled = pullback_class(&k_out, &d_in, &d_out, &h, None, &mut LiftChoice::Canonical)?;
    if !classes_equal(&pulled, &k_in)? {
        return fail("pullback along the inclusion differs from the smaller pair's class", &k, &inner);
    }
    Ok(Trial::Pass("equal"))
}

fn boundary_vanishing(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (_, k) = general_instance(rng)?;
    let m = random_marker_with_1_skeleton(rng, &k);
    let d = datum(&k, &m, &mut LiftChoice::Canonical)?;
    if !boundary_vanishing_check(&d, &mut LiftChoice::Canonical)? {
        return fail("image of the class in H_2(X, Y) is not zero", &k, &m);
    }
    Ok(Trial::Pass("vanishes"))
}

fn phi_ev_delta(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (p, k) = general_instance(rng)?;
    let m = SubcomplexMarker::full(&k);
    let modules = coefficient_modules(&p);
    let a = modules.choose(rng).expect("at least the trivial module");
    let d = datum(&k, &m, &mut LiftChoice::Canonical)?;
    if !phi_ev_delta_check(&d, a, &mut LiftChoice::Canonical)? {
        return fail(format!("identity fails with coefficients {}", a.describe()), &k, &m);
    }
    Ok(Trial::Pass("holds"))
}

fn vanishing(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (_, k) = general_instance(rng)?;
    let m = random_subcomplex(rng, &k);
    let d = datum(&k, &m, &mut LiftChoice::Canonical)?;
    let v = vanishing_criterion(&d, &mut LiftChoice::Canonical)?;
    if !v.agrees() {
        return fail(format!("class zero: {}, extension exists: {}", v.class_is_zero, v.extends), &k, &m);
    }
    Ok(Trial::Pass(if v.class_is_zero { "zero" } else { "nonzero" }))
}

fn restriction(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let base = match rng.gen_range(0..4) {
        0 => Presentation::cyclic(3),
        1 => Presentation::cyclic(4),
        2 => Presentation::klein_four(),
        _ => Presentation::symmetric3(),
    };
    let extra = rng.gen_range(0..=1);
    let p = random_presentation(rng, &base, extra, false);
    let k = with_random_3_cells(rng, &p.complex()?, 1)?;
    let m = random_subcomplex(rng, &k);
    let u = automorphisms(&p).choose(rng).cloned().expect("these groups have automorphisms");
    let d = datum(&k, &m, &mut LiftChoice::Canonical)?;
    let class = k_invariant(&d, &mut LiftChoice::Canonical)?.class;
    let there = restrict_scalars_class(&u, &class)?;
    let back = restrict_scalars_class(&u.inverse(), &there)?;
    if back != class {
        return fail("restricting along u and back does not restore the class", &k, &m);
    }
    let restricted = d.restrict(&u)?;
    let direct = k_invariant(&restricted, &mut LiftChoice::Canonical)?.class;
    if !classes_equal(&direct, &there)? {
        return fail("class of the restricted datum differs from the restricted class", &k, &m);
    }
    Ok(Trial::Pass("round trip"))
}

/// `K' = K` plus random cells that keep at most two cells per degree.
fn random_enlargement(rng: &mut ChaCha8Rng, k: &AugmentedComplex) -> Result<AugmentedComplex> {
    let g = k.group().clone();
    let mut k1 = k.clone();
    if k1.rank(2) < 2 && rng.gen_bool(0.5) {
        // a new 2-cell bounding zero or the boundary of an old 2-chain
        let mut col = GroupRingMatrix::zeros(g.clone(), k1.rank(1), 1);
        if rng.gen_bool(0.5) && k1.rank(2) > 0 {
            let j = rng.gen_range(0..k1.rank(2));
            col = k1.d(2).select_columns(&[j]);
        }
        k1 = k1.extended(&[GroupRingMatrix::zeros(g.clone(), k1.rank(0), 0), col])?;
    }
    let room = 2usize.saturating_sub(k1.rank(3));
    if room > 0 {
        let cells = rng.gen_range(0..=room);
        k1 = with_random_3_cells(rng, &k1, cells)?;
    }
    Ok(k1)
}

/// `F` for an extension problem: induced by the inclusion, its negative,
/// zero, or a random equivariant map.
fn random_f(rng: &mut ChaCha8Rng, d0: &RelativeDatum, d1: &RelativeDatum) -> Result<(PiModuleHom, &'static str)> {
    let (m0, m1) = (&d0.h2.module, &d1.h2.module);
    let incl = ChainMap::identity(&d0.k, 2);
    let n = d0.group().order();
    // the inclusion on flattened 2-chains is the first rank_2(K) |G| coordinates
    let incl2 = incl.at(2, &d0.k, &d0.k)?.flatten();
    let mut embed = IntMatrix::zeros(d1.k.rank(2) * n, d0.k.rank(2) * n);
    embed.set_block(0, 0, &incl2);
    let induced = m1.reduce(&(&(&d1.h2.projection * &embed) * &d0.h2.section));
    let (matrix, tag) = match rng.gen_range(0..4) {
        0 => (induced, "induced"),
        1 => (m1.reduce(&induced.scale(&Int::from(-1))), "negated"),
        2 => (IntMatrix::zeros(m1.gens(), m0.gens()), "zero"),
        _ => {
            let basis = PiModuleHom::lattice(m0, m1, None)?;
            let mut f = IntMatrix::zeros(m1.gens(), m0.gens());
            for b in &basis {
                f = &f + &b.scale(&Int::from(rng.gen_range(-2i64..=2)));
            }
            (m1.reduce(&f), "random")
        }
    };
    Ok((PiModuleHom::new(m0.clone(), m1.clone(), matrix, None)?, tag))
}

fn proposition(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (_, k) = small_instance(rng)?;
    let m = random_subcomplex(rng, &k);
    let k1 = random_enlargement(rng, &k)?;
    let d0 = datum(&k, &m, &mut LiftChoice::Canonical)?;
    let d1 = RelativeDatum::new(k1.clone(), m.clone(), d0.resolution.clone(), None, &mut LiftChoice::seeded(rng.gen()))?;
    let (f, tag) = random_f(rng, &d0, &d1)?;
    let h = ChainMap::identity(&d0.l, d0.l.top());
    let pair = || vec![complex_to_json(&k, Some(&m)), complex_to_json(&k1, Some(&m))];
    let exists = extension_exists(&d0, &d1, &h, &f)?;
    match decide_extension(&d0, &d1, &h, None, &f, &mut LiftChoice::seeded(rng.gen()))? {
        ExtensionOutcome::Extended(cert) => {
            let report = verify_extension(&cert.f, None, &d0, &d1, &h, &f, &mut LiftChoice::Canonical)?;
            if !report.is_valid() {
                return Ok(Trial::Fail(format!("F = {tag}: produced map fails: {}", report.failures.join("; ")), pair()));
            }
            if !exists {
                return Ok(Trial::Fail(format!("F = {tag}: exact search finds no extension"), pair()));
            }
            Ok(Trial::Pass("extended"))
        }
        ExtensionOutcome::Obstructed(o) => {
            if o.difference.is_zero()? {
                return Ok(Trial::Fail(format!("F = {tag}: obstruction class is zero"), pair()));
            }
            if exists {
                return Ok(Trial::Fail(format!("F = {tag}: obstructed, but an extension exists"), pair()));
            }
            if brute_force_extension(&d0, &d1, &h, &f, 2, 5000, rng)?.is_some() {
                return Ok(Trial::Fail(format!("F = {tag}: obstructed, but the box search found a map"), pair()));
            }
            Ok(Trial::Pass("obstructed"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_names_round_trip() {
        for l in Lemma::ALL {
            assert_eq!(l.name().parse::<Lemma>().unwrap(), l);
        }
        assert!("nope".parse::<Lemma>().is_err());
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        for l in Lemma::ALL {
            let out = run_check(l, 11, 3);
            assert!(out.passed(), "{l}: {:?}", out.failures);
        }
    }
}
