//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relk_core::catalog::{bundled, example};
use relk_core::chain::{AugmentedComplex, ChainComplex, ChainMap, PiModule, SubcomplexMarker};
use relk_core::checks::{run_check, CheckOutcome, Lemma};
use relk_core::exactlinalg::{kernel_basis, smith_normal_form, solve_integer_system};
use relk_core::groupring::{FiniteGroup, LiftChoice};
use relk_core::kinvariant::{
    boundary_vanishing_check, classes_equal, cohomology, k_invariant, phi_ev_delta_check, precompose, pullback_class,
    vanishing_criterion, RelativeDatum,
};
use relk_core::lifting::{build_resolution, periodic_cyclic_resolution};
use relk_core::{Int, IntMatrix};
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(x: i64) -> Int {
    Int::from(x)
}

// Independent integer oracles: determinants by permutation expansion and
// determinantal divisors by brute force over all minors.

fn det(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Int::zero();
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, m: &[Vec<Int>], total: &mut Int) {
    let n = perm.len();
    if k == n {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut p = if inversions % 2 == 0 { int(1) } else { int(-1) };
        for (i, &j) in perm.iter().enumerate() {
            p *= &m[i][j];
        }
        *total += p;
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, m, total);
        perm.swap(k, i);
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn rows_of(m: &IntMatrix) -> Vec<Vec<Int>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// `d_k` = gcd of all `k x k` minors, for `k = 1..=min(rows, cols)`.
fn determinantal_divisors(m: &[Vec<Int>], cols: usize) -> Vec<Int> {
    let rows = m.len();
    (1..=rows.min(cols))
        .map(|k| {
            let mut g = Int::zero();
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let minor: Vec<Vec<Int>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
                    g = g.gcd(&det(&minor));
                }
            }
            g
        })
        .collect()
}

fn oracle_rank(d: &[Int]) -> usize {
    d.iter().take_while(|x| !x.is_zero()).count()
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::new(rows, cols, (0..rows * cols).map(|_| int(rng.gen_range(-4..=4))).collect()).unwrap()
}

fn box_vectors(n: usize, bound: i64) -> Vec<Vec<Int>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (-bound..=bound).map(move |x| [v.clone(), vec![int(x)]].concat())).collect();
    }
    out
}

fn linear_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut solvable = 0;
    for trial in 0..200 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a = random_matrix(&mut rng, r, c);
        let d = determinantal_divisors(&rows_of(&a), c);
        let rank = oracle_rank(&d);

        let snf = smith_normal_form(&a);
        ensure(&(&snf.u * &a) * &snf.v == snf.s, || format!("trial {trial}: U M V != S"))?;
        ensure(det(&rows_of(&snf.u)).abs() == int(1) && det(&rows_of(&snf.v)).abs() == int(1), || {
            format!("trial {trial}: transforms are not unimodular")
        })?;
        ensure(snf.rank == rank, || format!("trial {trial}: rank {} vs oracle {rank}", snf.rank))?;
        let mut prev = int(1);
        for k in 0..rank {
            let expected = &d[k] / &prev;
            ensure(snf.s[(k, k)].abs() == expected.abs(), || format!("trial {trial}: invariant factor {k}"))?;
            prev = d[k].clone();
        }
        for i in 0..r {
            for j in 0..c {
                ensure(i == j && i < rank || snf.s[(i, j)].is_zero(), || format!("trial {trial}: S not diagonal"))?;
            }
        }

        let kernel = kernel_basis(&a);
        let m = c - rank;
        ensure(kernel.cols() == m && (&a * &kernel).is_zero(), || format!("trial {trial}: kernel basis"))?;
        if m > 0 {
            let kd = determinantal_divisors(&rows_of(&kernel), m);
            ensure(kd[m - 1].abs() == int(1), || format!("trial {trial}: kernel lattice is not saturated"))?;
        }
        for x in box_vectors(c, 2) {
            let v = IntMatrix::column_vector(&x);
            if (&a * &v).is_zero() && m > 0 {
                let joined = kernel.hstack(&v).unwrap();
                let jd = determinantal_divisors(&rows_of(&joined), m + 1);
                ensure(oracle_rank(&jd) == m, || format!("trial {trial}: kernel vector {x:?} outside the span"))?;
            }
        }

        let b = if rng.gen_bool(0.5) {
            let x0: Vec<Int> = (0..c).map(|_| int(rng.gen_range(-3..=3))).collect();
            &a * &IntMatrix::column_vector(&x0)
        } else {
            IntMatrix::new(r, 1, (0..r).map(|_| int(rng.gen_range(-4..=4))).collect()).unwrap()
        };
        let augmented: Vec<Vec<Int>> = rows_of(&a).into_iter().zip(b.column(0)).map(|(row, x)| [row, vec![x]].concat()).collect();
        let db = determinantal_divisors(&augmented, c + 1);
        let oracle = oracle_rank(&db) == rank && (rank == 0 || db[rank - 1].abs() == d[rank - 1].abs());
        match solve_integer_system(&a, &b).map_err(|e| e.to_string())? {
            Some(x) => {
                ensure(&a * &x == b, || format!("trial {trial}: returned solution is wrong"))?;
                ensure(oracle, || format!("trial {trial}: solved a system the oracle calls unsolvable"))?;
                solvable += 1;
            }
            None => {
                ensure(!oracle, || format!("trial {trial}: missed a solution"))?;
                let hit = box_vectors(c, 3).into_iter().any(|x| &a * &IntMatrix::column_vector(&x) == b);
                ensure(!hit, || format!("trial {trial}: bounded search found a solution"))?;
            }
        }
    }
    Ok(format!("200 matrices, {solvable} solvable systems"))
}

fn exact_in_degree(c: &ChainComplex, i: usize) -> bool {
    let out = smith_normal_form(&c.d(i).flatten());
    let inc = smith_normal_form(&c.d(i + 1).flatten());
    let saturated = inc.invariant_factors().iter().all(|f| f.abs() == int(1));
    out.rank + inc.rank == c.rank(i) * c.group().order() && saturated
}

fn resolutions() -> Outcome {
    let groups: Vec<(&str, Arc<FiniteGroup>)> = vec![
        ("C2", Arc::new(FiniteGroup::cyclic(2))),
        ("C3", Arc::new(FiniteGroup::cyclic(3))),
        ("C4", Arc::new(FiniteGroup::cyclic(4))),
        ("S3", Arc::new(FiniteGroup::symmetric3())),
    ];
    let mut built: Vec<(String, AugmentedComplex)> = Vec::new();
    for (name, g) in groups {
        built.push((name.to_string(), build_resolution(g, 5).map_err(|e| format!("{name}: {e}"))?.into_complex()));
    }
    built.push(("periodic C2".into(), periodic_cyclic_resolution(2, 5).map_err(|e| e.to_string())?.into_complex()));
    let mut ranks = Vec::new();
    for (name, res) in &built {
        ensure(res.validate().is_empty(), || format!("{name}: invalid complex"))?;
        let c = res.complex();
        let n = c.group().order();
        let aug = smith_normal_form(&res.aug_flat());
        ensure(aug.invariant_factors() == vec![int(1)], || format!("{name}: augmentation not onto"))?;
        let d1 = smith_normal_form(&c.d(1).flatten());
        ensure(d1.rank + 1 == c.rank(0) * n, || format!("{name}: not exact in degree 0"))?;
        ensure(d1.invariant_factors().iter().all(|f| f.abs() == int(1)), || format!("{name}: torsion in degree 0"))?;
        for i in 1..5 {
            ensure(exact_in_degree(c, i), || format!("{name}: not exact in degree {i}"))?;
        }
        ranks.push(format!("{name} {:?}", c.ranks()));
    }
    Ok(ranks.join(", "))
}

/// Cohomology of `Z -> Z -> ...` with the given integer coboundaries.
fn hand_cohomology(coboundaries: &[i64], n: usize) -> Vec<Int> {
    let into = coboundaries[n];
    let from = if n == 0 { 0 } else { coboundaries[n - 1] };
    if into != 0 {
        return Vec::new();
    }
    match from.abs() {
        1 => Vec::new(),
        k => vec![int(k)],
    }
}

fn sign_cohomology() -> Outcome {
    let res = periodic_cyclic_resolution(2, 5).map_err(|e| e.to_string())?.into_complex();
    let minus = PiModule::sign(res.group().clone(), &[1, -1]).map_err(|e| e.to_string())?;
    let hand = [-2, 0, -2, 0];
    for n in 0..=3 {
        let h = cohomology(res.complex(), &minus, n).map_err(|e| e.to_string())?;
        ensure(h.factors == hand_cohomology(&hand, n), || format!("H^{n}: {:?}", h.factors))?;
    }
    let other = build_resolution(res.group().clone(), 5).map_err(|e| e.to_string())?.into_complex();
    let h3 = cohomology(other.complex(), &minus, 3).map_err(|e| e.to_string())?;
    ensure(h3.factors == vec![int(2)], || format!("H^3 over the built resolution: {:?}", h3.factors))?;
    Ok("H^3(C2; Z-) = Z/2 on both resolutions".into())
}

fn suite(lemma: Lemma, seed: u64, trials: usize) -> Result<CheckOutcome, String> {
    let out = run_check(lemma, seed, trials);
    match out.failures.first() {
        None => Ok(out),
        Some(f) => Err(format!("{lemma} trial {}: {}", f.trial, f.message)),
    }
}

fn well_definedness() -> Outcome {
    let out = suite(Lemma::WellDefined, 11, 10)?;
    Ok(format!("10 instances x 20 choices, {:?}", out.tally))
}

fn proposition() -> Outcome {
    let out = suite(Lemma::Proposition, 17, 25)?;
    ensure(out.tally.get("obstructed").copied().unwrap_or(0) > 0, || "no obstructed instance was drawn".into())?;
    Ok(format!("25 instances, {:?}", out.tally))
}

fn datum(x: &AugmentedComplex, m: SubcomplexMarker) -> Result<RelativeDatum, String> {
    let c = build_resolution(x.group().clone(), 4).map_err(|e| e.to_string())?.into_complex();
    RelativeDatum::new(x.clone(), m, c, None, &mut LiftChoice::Canonical).map_err(|e| e.to_string())
}

fn boundary_vanishing() -> Outcome {
    let x = example("rp2").expect("bundled");
    let d = datum(&x, SubcomplexMarker::skeleton(x.complex(), 1))?;
    let ok = boundary_vanishing_check(&d, &mut LiftChoice::Canonical).map_err(|e| e.to_string())?;
    ensure(ok, || "RP2 with its 1-skeleton".into())?;
    let out = suite(Lemma::BoundaryVanishing, 23, 10)?;
    Ok(format!("RP2 and 10 random pairs, {:?}", out.tally))
}

fn phi_ev_delta() -> Outcome {
    let rp2 = example("rp2").expect("bundled");
    let c3 = example("c3").expect("bundled");
    let cases = [
        ("RP2", rp2.clone(), PiModule::sign(rp2.group().clone(), &[1, -1]).map_err(|e| e.to_string())?),
        ("C3", c3.clone(), PiModule::trivial(c3.group().clone())),
    ];
    let mut sizes = Vec::new();
    for (name, x, a) in cases {
        let h2 = cohomology(x.complex(), &a, 2).map_err(|e| e.to_string())?;
        ensure(!h2.is_zero(), || format!("{name}: H^2 is zero, nothing to check"))?;
        let d = datum(&x, SubcomplexMarker::full(x.complex()))?;
        let ok = phi_ev_delta_check(&d, &a, &mut LiftChoice::Canonical).map_err(|e| e.to_string())?;
        ensure(ok, || format!("{name}: identity fails"))?;
        sizes.push(format!("{name} H^2 {:?}", h2.factors));
    }
    let out = suite(Lemma::PhiEvDelta, 29, 5)?;
    Ok(format!("{}, 5 random, {:?}", sizes.join(", "), out.tally))
}

fn nested_pullback() -> Outcome {
    let mut pairs = 0;
    for e in bundled() {
        let k = e.complex;
        let full = SubcomplexMarker::full(k.complex());
        let outer = datum(&k, full.clone())?;
        let k_out = k_invariant(&outer, &mut LiftChoice::Canonical).map_err(|e| e.to_string())?.class;
        let mut inners = vec![SubcomplexMarker::empty()];
        inners.extend((0..=k.complex().top()).map(|q| SubcomplexMarker::skeleton(k.complex(), q)));
        for inner in inners {
            let run = || -> relk_core::Result<bool> {
                let d_in = RelativeDatum::new(k.clone(), inner.clone(), outer.resolution.clone(), Some(outer.t.clone()), &mut LiftChoice::Canonical)?;
                let h = ChainMap::inclusion(&outer.l, &SubcomplexMarker::new(inner.positions_in(&full)?));
                let pulled = pullback_class(&k_out, &d_in, &outer, &h, None, &mut LiftChoice::Canonical)?;
                classes_equal(&pulled, &k_invariant(&d_in, &mut LiftChoice::Canonical)?.class)
            };
            ensure(run().map_err(|err| format!("{}: {err}", e.name))?, || format!("{}: {inner:?}", e.name))?;
            pairs += 1;
        }
    }
    let out = suite(Lemma::NestedPullback, 31, 10)?;
    Ok(format!("{pairs} bundled pairs and 10 random, {:?}", out.tally))
}

fn vanishing() -> Outcome {
    let (mut zero, mut nonzero) = (0, 0);
    for e in bundled() {
        let k = e.complex;
        for m in [SubcomplexMarker::empty(), SubcomplexMarker::skeleton(k.complex(), 1), SubcomplexMarker::full(k.complex())] {
            let v = vanishing_criterion(&datum(&k, m.clone())?, &mut LiftChoice::Canonical).map_err(|err| format!("{}: {err}", e.name))?;
            ensure(v.agrees(), || format!("{} with {m:?}: {v:?}", e.name))?;
            if v.class_is_zero {
                zero += 1;
            } else {
                nonzero += 1;
            }
        }
    }
    ensure(nonzero > 0 && zero > 0, || "only one verdict occurred".into())?;
    Ok(format!("{} pairs: {zero} zero, {nonzero} nonzero", zero + nonzero))
}

/// Decides whether a cocycle is a coboundary by bounded search over
/// degree-2 cochains, independently of the engine's solver.
fn bounded_coboundary_search(cone: &ChainComplex, module: &PiModule, rep: &IntMatrix, bound: i64) -> bool {
    let (g, r) = (module.gens(), cone.rank(2));
    let d3 = cone.d(3);
    box_vectors(g * r, bound).into_iter().any(|v| {
        let c = IntMatrix::new(g, r, v).unwrap();
        let diff = &precompose(module, &c, &d3).unwrap() - rep;
        module.is_zero_element(&diff)
    })
}

fn regression() -> Outcome {
    let fixture: Value = serde_json::from_str(include_str!("fixtures/rp2_verdict.json")).map_err(|e| e.to_string())?;
    let x = example(fixture["example"].as_str().unwrap()).expect("bundled");
    let top = fixture["resolution_top"].as_u64().unwrap() as usize;
    let c = build_resolution(x.group().clone(), top).map_err(|e| e.to_string())?.into_complex();
    let d = RelativeDatum::new(x, SubcomplexMarker::empty(), c, None, &mut LiftChoice::Canonical).map_err(|e| e.to_string())?;
    let class = k_invariant(&d, &mut LiftChoice::Canonical).map_err(|e| e.to_string())?.class;
    let witness = class.coboundary_witness().map_err(|e| e.to_string())?;
    let searched = bounded_coboundary_search(&class.cone, &class.module, &class.representative, 3);
    ensure(witness.is_some() || !searched, || "bounded search found a coboundary the solver missed".into())?;
    let verdict = if witness.is_none() { "nonzero" } else { "zero" };
    let factors = cohomology(&class.cone, &class.module, 3).map_err(|e| e.to_string())?.factors;
    let expected: Vec<Int> = fixture["invariant_factors"].as_array().unwrap().iter().map(|v| int(v.as_i64().unwrap())).collect();
    ensure(factors == expected, || format!("H^3 of the cone is {factors:?}"))?;
    ensure(verdict == fixture["verdict"], || format!("verdict {verdict} differs from the fixture"))?;
    ensure(class.is_zero().map_err(|e| e.to_string())? == (verdict == "zero"), || "class::is_zero disagrees".into())?;
    Ok(format!("RP2 class is {verdict} in Z/2"))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("linear algebra oracle", 10, linear_algebra),
        ("resolution exactness", 30, resolutions),
        ("H^3(C2; Z-) against the hand complex", 1, sign_cohomology),
        ("well-definedness", 60, well_definedness),
        ("extension round trip", 300, proposition),
        ("boundary vanishing", 60, boundary_vanishing),
        ("connecting homomorphism identity", 60, phi_ev_delta),
        ("nested pullback", 60, nested_pullback),
        ("vanishing criterion", 60, vanishing),
        ("RP2 regression", 60, regression),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let status = if result.is_ok() && in_time { "PASS" } else { "FAIL" };
        let detail = match &result {
            Ok(s) if in_time => s.clone(),
            Ok(_) => format!("over the {limit}s limit"),
            Err(e) => e.clone(),
        };
        println!("criterion {:>2} {status} [{:.2}s / {limit}s] {name}: {detail}", i + 1, elapsed.as_secs_f64());
        failed += usize::from(status == "FAIL");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
