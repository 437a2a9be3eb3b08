mod input;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use relk_core::chain::{reduced_homology, is_acyclic_below, ChainHomotopy, ChainMap, SubcomplexMarker};
use relk_core::checks::{run_check, Lemma};
use relk_core::format::{self, int_matrix_to_doc, module_to_doc, JsonInt, FORMAT_VERSION};
use relk_core::groupring::{FiniteGroup, LiftChoice};
use relk_core::kinvariant::{
    classes_equal, cohomology, decide_extension, k_invariant, pullback_class, restrict_problem, vanishing_criterion,
    verify_extension, CohomologyClass, ExtensionOutcome, RelativeDatum,
};
use relk_core::lifting::{build_resolution, periodic_cyclic_resolution};
use relk_core::Int;
use serde_json::{json, Value};

use input::SubSpec;

#[derive(Parser)]
#[command(name = "relk", version, about = "Relative first k-invariants of chain complexes over finite group rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a complex file and list every violated invariant.
    Validate { file: PathBuf },
    /// Reduced homology of a complex, with the group action on each group.
    Homology { file: PathBuf },
    /// The relative first k-invariant of a complex and a subcomplex.
    K {
        file: PathBuf,
        /// file, empty, full or skeletonN; defaults to the file's "sub", else empty.
        #[arg(long)]
        sub: Option<SubSpec>,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(4..))]
        resolution_top: u64,
    },
    /// Extend h: L -> L' to f: K -> K' inducing F on H_2, or report the obstruction.
    Extend {
        file0: PathBuf,
        file1: PathBuf,
        /// Map of subcomplexes, with optional group isomorphism and homotopy.
        #[arg(long = "h")]
        h: Option<PathBuf>,
        /// id, zero, scalar:N or a file holding the matrix of F on H_2.
        #[arg(long = "F", default_value = "id")]
        f: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(4..))]
        resolution_top: u64,
    },
    /// Run a randomized invariant suite.
    Check {
        lemma: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Also write the report, counterexamples included, to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a free resolution of a group as a complex file.
    Resolve {
        /// trivial, cN, klein, s3, a group file or a complex file.
        group: String,
        #[arg(long, default_value_t = 4)]
        top: usize,
        /// Use the 2-periodic resolution of a cyclic group.
        #[arg(long)]
        periodic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Status {
    Success,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Status> {
    match command {
        Command::Validate { file } => validate(&file),
        Command::Homology { file } => homology(&file),
        Command::K { file, sub, resolution_top } => k(&file, sub.as_ref(), resolution_top as usize),
        Command::Extend { file0, file1, h, f, out, resolution_top } => {
            extend(&file0, &file1, h.as_deref(), &f, out.as_deref(), resolution_top as usize)
        }
        Command::Check { lemma, seed, trials, out } => check(&lemma, seed, trials, out.as_deref()),
        Command::Resolve { group, top, periodic, out } => resolve(&group, top, periodic, out.as_deref()),
    }
}

fn say(text: &str) -> Result<()> {
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{text}").and_then(|()| stdout.flush()).context("cannot write to stdout")
}

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display())),
        None => say(&text),
    }
}

fn ints(v: &[Int]) -> Vec<JsonInt> {
    v.iter().map(JsonInt::from).collect()
}

fn validate(file: &Path) -> Result<Status> {
    let text = input::read_text(file)?;
    let parsed = format::parse_complex(&text)
        .and_then(|doc| doc.build())
        .with_context(|| file.display().to_string())?;
    let problems = parsed.problems();
    if !problems.is_empty() {
        let lines: Vec<String> = problems.iter().map(|p| format!("  {p}")).collect();
        say(&format!("{}: invalid\n{}", file.display(), lines.join("\n")))?;
        return Ok(Status::Negative);
    }
    let k = &parsed.complex;
    say(&format!(
        "{}: valid\n  group order {}, ranks {:?}\n  acyclic in dimensions < 2: {}",
        file.display(),
        k.group().order(),
        k.complex().ranks(),
        is_acyclic_below(k, 2)?
    ))?;
    Ok(Status::Success)
}

fn homology(file: &Path) -> Result<Status> {
    let k = input::load_complex(file)?.complex;
    let mut degrees = serde_json::Map::new();
    for i in 0..=k.complex().top() {
        let h = reduced_homology(&k, i)?;
        degrees.insert(i.to_string(), serde_json::to_value(module_to_doc(&h.module))?);
    }
    emit(&json!({ "format": FORMAT_VERSION, "reduced": true, "homology": degrees }), None)?;
    Ok(Status::Success)
}

fn class_json(class: &CohomologyClass) -> Result<Value> {
    let group = cohomology(&class.cone, &class.module, class.degree)?;
    Ok(json!({
        "degree": class.degree,
        "cone_ranks": class.cone.ranks(),
        "module": module_to_doc(&class.module),
        "representative": int_matrix_to_doc(&class.representative),
        "invariant_factors": ints(&group.factors),
        "coordinates": ints(&group.coordinates(&class.representative)?),
    }))
}

fn k(file: &Path, sub: Option<&SubSpec>, top: usize) -> Result<Status> {
    let parsed = input::load_complex(file)?;
    let marker = input::marker(&parsed, sub)?;
    let x = parsed.complex;
    marker.check(x.complex()).context("subcomplex")?;
    let resolution = build_resolution(x.group().clone(), top)?.into_complex();
    let choice = &mut LiftChoice::Canonical;
    let datum = RelativeDatum::new(x.clone(), marker.clone(), resolution, None, choice)?;
    let class = k_invariant(&datum, choice)?.class;

    let criterion = vanishing_criterion(&datum, choice)?;
    if !criterion.agrees() {
        bail!(
            "internal check failed: the class is {} but the cylinder extension {}",
            if criterion.class_is_zero { "zero" } else { "nonzero" },
            if criterion.extends { "exists" } else { "is obstructed" }
        );
    }
    let zero = criterion.class_is_zero;
    let verdict = if class.cone.rank(class.degree) == 0 {
        "zero (trivial cone)"
    } else if class.module.gens() == 0 {
        "zero (trivial coefficients)"
    } else if zero {
        "zero"
    } else {
        "nonzero"
    };

    let full = SubcomplexMarker::full(x.complex());
    let pullback_consistent = if marker.is_empty() || marker == full {
        None
    } else {
        let outer = RelativeDatum::new(x.clone(), full.clone(), datum.resolution.clone(), Some(datum.t.clone()), choice)?;
        let h = ChainMap::inclusion(&outer.l, &SubcomplexMarker::new(marker.positions_in(&full)?));
        let pulled = pullback_class(&k_invariant(&outer, choice)?.class, &datum, &outer, &h, None, choice)?;
        Some(classes_equal(&pulled, &class)?)
    };

    let mut report = class_json(&class)?;
    report["format"] = json!(FORMAT_VERSION);
    report["sub"] = json!(marker.indices());
    report["resolution_top"] = json!(top);
    report["zero"] = json!(zero);
    report["verdict"] = json!(verdict);
    if let Some(flag) = pullback_consistent {
        report["pullback_consistent"] = json!(flag);
    }
    emit(&report, None)?;
    if pullback_consistent == Some(false) {
        bail!("internal check failed: pulling back the class of (X, X) does not give the class of (X, Y)");
    }
    Ok(if zero { Status::Success } else { Status::Negative })
}

fn extend(file0: &Path, file1: &Path, hfile: Option<&Path>, fspec: &str, out: Option<&Path>, top: usize) -> Result<Status> {
    let p0 = input::load_complex(file0)?;
    let p1 = input::load_complex(file1)?;
    let hdoc = hfile.map(|p| format::parse_h(&input::read_text(p)?).with_context(|| p.display().to_string())).transpose()?;
    let (g0, g1) = (p0.complex.group().clone(), p1.complex.group().clone());
    let u = input::iso(&g0, &g1, hdoc.as_ref().and_then(|h| h.iso.as_ref()))?;

    let choice = &mut LiftChoice::Canonical;
    let resolution = build_resolution(g0, top)?.into_complex();
    let m0 = input::marker(&p0, None)?;
    let m1 = input::marker(&p1, None)?;
    let d0 = RelativeDatum::new(p0.complex, m0, resolution.clone(), None, choice).context(file0.display().to_string())?;
    let target_resolution = match &u {
        None => resolution,
        Some(_) => build_resolution(g1, top)?.into_complex(),
    };
    let d1 = RelativeDatum::new(p1.complex, m1, target_resolution, None, choice).context(file1.display().to_string())?;
    let f = input::module_hom(fspec, &d0.h2.module, &d1.h2.module, u.as_ref())?;
    let (d1, f) = restrict_problem(&d0, &d1, &f, choice)?;

    let maps = hdoc.as_ref().and_then(|h| h.maps.as_ref());
    let h = match maps {
        Some(doc) => format::chain_map_from_doc(doc, &d0.l, &d1.l).context("h")?,
        None if d0.l.ranks() == d1.l.ranks() => ChainMap::identity(&d0.l, d0.l.top()),
        None => bail!("the subcomplexes differ, so an h file with \"maps\" is required"),
    };
    let psi = match hdoc.as_ref().and_then(|h| h.psi.as_ref()) {
        Some(doc) => Some(format::homotopy_from_doc(doc, &d0.l, d0.resolution.complex()).context("psi")?),
        None => None,
    };

    let mut found = None;
    if u.is_none() && maps.is_none() && d0.k == d1.k && d0.marker == d1.marker && f.matrix() == &identity_of(&f) {
        let id = ChainMap::identity(d0.k.complex(), 3.min(d0.k.complex().top()));
        let zero = ChainHomotopy::zero(&d0.l, d1.k.complex(), 2);
        if verify_extension(&id, Some(&zero), &d0, &d1, &h, &f, choice)?.is_valid() {
            found = Some((id, zero));
        }
    }
    let (fmap, homotopy) = match found {
        Some(pair) => pair,
        None => match decide_extension(&d0, &d1, &h, psi.as_ref(), &f, choice)? {
            ExtensionOutcome::Extended(cert) => (cert.f, cert.homotopy),
            ExtensionOutcome::Obstructed(o) => {
                let mut report = class_json(&o.difference)?;
                report["format"] = json!(FORMAT_VERSION);
                report["outcome"] = json!("obstructed");
                emit(&report, None)?;
                return Ok(Status::Negative);
            }
        },
    };
    let check = verify_extension(&fmap, Some(&homotopy), &d0, &d1, &h, &f, choice)?;
    if !check.is_valid() {
        bail!("internal check failed: {}", check.failures.join("; "));
    }
    let report = json!({
        "format": FORMAT_VERSION,
        "outcome": "extended",
        "f": format::chain_map_to_doc(&fmap),
        "homotopy": format::homotopy_to_doc(&homotopy),
    });
    emit(&report, out)?;
    if let Some(path) = out {
        eprintln!("extension written to {}", path.display());
    }
    Ok(Status::Success)
}

fn identity_of(f: &relk_core::chain::PiModuleHom) -> relk_core::IntMatrix {
    relk_core::IntMatrix::identity(f.source().gens())
}

fn check(name: &str, seed: u64, trials: usize, out: Option<&Path>) -> Result<Status> {
    let lemma: Lemma = match name.parse() {
        Ok(l) => l,
        Err(_) => {
            let known: Vec<_> = Lemma::ALL.iter().map(|l| l.name()).collect();
            bail!("unknown lemma {name:?}; expected one of {}", known.join(", "))
        }
    };
    let outcome = run_check(lemma, seed, trials);
    let failures = outcome
        .failures
        .iter()
        .map(|c| {
            let complexes: Vec<Value> = c.complexes.iter().filter_map(|s| serde_json::from_str(s).ok()).collect();
            json!({ "trial": c.trial, "message": c.message, "complexes": complexes })
        })
        .collect::<Vec<_>>();
    let report = json!({
        "format": FORMAT_VERSION,
        "lemma": lemma.name(),
        "seed": seed,
        "trials": trials,
        "passed": outcome.passed(),
        "tally": outcome.tally,
        "failures": failures,
    });
    emit(&report, None)?;
    if out.is_some() {
        emit(&report, out)?;
    }
    Ok(if outcome.passed() { Status::Success } else { Status::Negative })
}

fn resolve(group: &str, top: usize, periodic: bool, out: Option<&Path>) -> Result<Status> {
    let g = input::load_group(group)?;
    let resolution = if periodic {
        let n = g.order();
        if g.table() != FiniteGroup::cyclic(n).table() {
            bail!("--periodic needs the cyclic group with its standard table");
        }
        periodic_cyclic_resolution(n, top)?
    } else {
        build_resolution(g, top)?
    };
    let doc = format::complex_to_doc(resolution.complex(), None);
    emit(&serde_json::to_value(doc)?, out)?;
    Ok(Status::Success)
}
