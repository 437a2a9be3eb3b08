use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use relk_core::catalog::Presentation;
use relk_core::chain::{PiModule, PiModuleHom, SubcomplexMarker};
use relk_core::format::{self, GroupDoc, ParsedComplex, FORMAT_VERSION};
use relk_core::groupring::{FiniteGroup, GroupIso};
use relk_core::{Int, IntMatrix};
use serde_json::Value;

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Parses and validates a complex file.
pub fn load_complex(path: &Path) -> Result<ParsedComplex> {
    let text = read_text(path)?;
    format::read_complex(&text).with_context(|| format!("{}", path.display()))
}

/// Which subcomplex a command works relative to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubSpec {
    File,
    Empty,
    Full,
    Skeleton(usize),
}

impl std::str::FromStr for SubSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "file" => Ok(SubSpec::File),
            "empty" => Ok(SubSpec::Empty),
            "full" => Ok(SubSpec::Full),
            _ => s
                .strip_prefix("skeleton")
                .and_then(|n| n.parse().ok())
                .map(SubSpec::Skeleton)
                .ok_or_else(|| format!("expected file, empty, full or skeletonN, got {s:?}")),
        }
    }
}

/// The marker named by `spec`; without a spec the file's own `sub` is used
/// when present.
pub fn marker(parsed: &ParsedComplex, spec: Option<&SubSpec>) -> Result<SubcomplexMarker> {
    let k = parsed.complex.complex();
    Ok(match spec {
        None => parsed.sub.clone().unwrap_or_else(SubcomplexMarker::empty),
        Some(SubSpec::File) => parsed.sub.clone().ok_or_else(|| anyhow!("the complex file has no \"sub\" entry"))?,
        Some(SubSpec::Empty) => SubcomplexMarker::empty(),
        Some(SubSpec::Full) => SubcomplexMarker::full(k),
        Some(SubSpec::Skeleton(q)) => SubcomplexMarker::skeleton(k, *q),
    })
}

/// A group given by name (`trivial`, `cN`, `klein`, `s3`), by a group file,
/// or by the group of a complex file.
pub fn load_group(spec: &str) -> Result<Arc<FiniteGroup>> {
    if let Some(g) = named_group(spec) {
        return Ok(g);
    }
    let text = read_text(Path::new(spec))?;
    let value: Value = serde_json::from_str(&text).with_context(|| spec.to_string())?;
    if let Some(v) = value.get("format") {
        if v.as_u64() != Some(FORMAT_VERSION) {
            bail!("{spec}: unsupported format version {v}");
        }
    }
    if value.get("ranks").is_some() {
        let parsed = format::read_complex(&text).with_context(|| spec.to_string())?;
        return Ok(parsed.complex.group().clone());
    }
    let doc: GroupDoc = serde_json::from_value(value).with_context(|| spec.to_string())?;
    Ok(Arc::new(doc.to_group().with_context(|| spec.to_string())?))
}

fn named_group(name: &str) -> Option<Arc<FiniteGroup>> {
    match name {
        "trivial" => Some(Arc::new(FiniteGroup::trivial())),
        "klein" => Some(Presentation::klein_four().group),
        "s3" => Some(Arc::new(FiniteGroup::symmetric3())),
        _ => {
            let n: usize = name.strip_prefix('c')?.parse().ok()?;
            (n >= 1).then(|| Arc::new(FiniteGroup::cyclic(n)))
        }
    }
}

pub fn iso(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>, images: Option<&Vec<usize>>) -> Result<Option<GroupIso>> {
    match images {
        Some(map) => Ok(Some(GroupIso::new(source.clone(), target.clone(), map.clone())?)),
        None if source.table() == target.table() => Ok(None),
        None if source.order() != target.order() => {
            bail!("group orders differ ({} and {}) and no isomorphism was given", source.order(), target.order())
        }
        None => bail!("the groups have different multiplication tables and no isomorphism was given"),
    }
}

/// `F` from `id`, `zero`, `scalar:N` or a file holding its matrix.
pub fn module_hom(spec: &str, source: &PiModule, target: &PiModule, u: Option<&GroupIso>) -> Result<PiModuleHom> {
    let (rows, cols) = (target.gens(), source.gens());
    let scalar = |n: Int| -> Result<IntMatrix> {
        if rows != cols {
            bail!("F = {spec} needs H_2 of both complexes on the same number of generators ({cols} and {rows})");
        }
        let data = (0..rows * cols).map(|i| if i % (cols + 1) == 0 { n.clone() } else { Int::from(0) }).collect();
        Ok(IntMatrix::new(rows, cols, data)?)
    };
    let matrix = match spec {
        "id" => scalar(Int::from(1))?,
        "zero" => IntMatrix::zeros(rows, cols),
        _ => match spec.strip_prefix("scalar:") {
            Some(n) => scalar(n.parse().with_context(|| format!("bad scalar {n:?}"))?)?,
            None => {
                let doc = format::parse_f(&read_text(Path::new(spec))?).with_context(|| spec.to_string())?;
                let m = format::int_matrix_from_doc(&doc.matrix, Some(cols)).with_context(|| spec.to_string())?;
                if m.rows() != rows {
                    bail!("{spec}: F needs {rows} rows, found {}", m.rows());
                }
                m
            }
        },
    };
    PiModuleHom::new(source.clone(), target.clone(), matrix, u.cloned()).context("F")
}
