//! JSON exchange format. Every top-level document carries `"format": 1`.
//!
//! Group-ring entries are arrays of `|G|` integer coefficients; a matrix is
//! a list of rows of entries. Integers are JSON numbers, or decimal strings
//! when they do not fit in 64 bits.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::chain::{AugmentedComplex, ChainComplex, ChainHomotopy, ChainMap, PiModule, SubcomplexMarker};
use crate::error::{Error, Result};
use crate::exactlinalg::{Int, IntMatrix};
use crate::groupring::{FiniteGroup, GroupRingMatrix};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&Int> for JsonInt {
    fn from(v: &Int) -> Self {
        match v.to_i64() {
            Some(s) => JsonInt::Small(s),
            None => JsonInt::Big(v.to_string()),
        }
    }
}

impl JsonInt {
    pub fn to_int(&self) -> Result<Int> {
        match self {
            JsonInt::Small(v) => Ok(Int::from(*v)),
            JsonInt::Big(s) => s.trim().parse().map_err(|_| Error::Format(format!("not an integer: {s:?}"))),
        }
    }
}

pub type EntryDoc = Vec<JsonInt>;
pub type MatrixDoc = Vec<Vec<EntryDoc>>;
pub type IntMatrixDoc = Vec<Vec<JsonInt>>;
pub type DegreeMap<T> = BTreeMap<String, T>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
}

impl GroupDoc {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupDoc { order: g.order(), mul: g.table() }
    }

    /// Validates the table.
    pub fn to_group(&self) -> Result<FiniteGroup> {
        if self.mul.len() != self.order {
            return Err(Error::MalformedTable);
        }
        FiniteGroup::from_table(&self.mul)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub format: u64,
    pub group: GroupDoc,
    pub ranks: Vec<usize>,
    pub differentials: DegreeMap<MatrixDoc>,
    pub aug: Vec<JsonInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub: Option<DegreeMap<Vec<usize>>>,
}

/// A parsed complex whose mathematical invariants have not been checked.
#[derive(Clone, Debug)]
pub struct ParsedComplex {
    pub complex: AugmentedComplex,
    pub sub: Option<SubcomplexMarker>,
}

impl ParsedComplex {
    /// Every violated invariant of the complex and its subcomplex.
    pub fn problems(&self) -> Vec<Error> {
        let mut p = self.complex.validate();
        if let Some(s) = &self.sub {
            if let Err(e) = s.check(&self.complex) {
                p.push(e);
            }
        }
        p
    }
}

fn check_version(v: u64) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format version {v}")));
    }
    Ok(())
}

fn degree_key(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Format(format!("degree key {s:?} is not a number")))
}

pub fn matrix_to_doc(m: &GroupRingMatrix) -> MatrixDoc {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.entry_coeffs(i, j).iter().map(JsonInt::from).collect()).collect())
        .collect()
}

/// Reads a `rows x cols` matrix over `Z[G]`; an empty list stands for any
/// matrix without rows.
pub fn matrix_from_doc(group: &Arc<FiniteGroup>, rows: usize, cols: usize, doc: &MatrixDoc) -> Result<GroupRingMatrix> {
    let n = group.order();
    if rows == 0 && doc.is_empty() {
        return Ok(GroupRingMatrix::zeros(group.clone(), 0, cols));
    }
    if doc.len() != rows {
        return Err(Error::Format(format!("expected {rows} rows, found {}", doc.len())));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in doc.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Format(format!("row {i} has {} entries, expected {cols}", row.len())));
        }
        for entry in row {
            if entry.len() != n {
                return Err(Error::Format(format!("group-ring entry of length {}, expected {n}", entry.len())));
            }
            entries.push(entry.iter().map(JsonInt::to_int).collect::<Result<Vec<_>>>()?);
        }
    }
    GroupRingMatrix::from_entries(group.clone(), rows, cols, entries)
}

pub fn int_matrix_to_doc(m: &IntMatrix) -> IntMatrixDoc {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| JsonInt::from(&m[(i, j)])).collect()).collect()
}

/// Reads an integer matrix; `cols` fixes the width when there are no rows.
pub fn int_matrix_from_doc(doc: &IntMatrixDoc, cols: Option<usize>) -> Result<IntMatrix> {
    let width = doc.first().map(Vec::len).or(cols).unwrap_or(0);
    let rows = doc
        .iter()
        .map(|r| {
            if r.len() != width {
                return Err(Error::Format("rows of different lengths".into()));
            }
            r.iter().map(JsonInt::to_int).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::new(doc.len(), width, rows.into_iter().flatten().collect())
}

pub fn complex_to_doc(k: &AugmentedComplex, sub: Option<&SubcomplexMarker>) -> ComplexDoc {
    ComplexDoc {
        format: FORMAT_VERSION,
        group: GroupDoc::from_group(k.group()),
        ranks: k.ranks().to_vec(),
        differentials: (1..=k.top()).map(|i| (i.to_string(), matrix_to_doc(&k.d(i)))).collect(),
        aug: k.aug().iter().map(JsonInt::from).collect(),
        sub: sub.map(|s| s.indices().iter().enumerate().map(|(i, d)| (i.to_string(), d.clone())).collect()),
    }
}

impl ComplexDoc {
    /// Builds the complex; shapes are checked, invariants are not.
    pub fn build(&self) -> Result<ParsedComplex> {
        check_version(self.format)?;
        let group = Arc::new(self.group.to_group()?);
        if self.ranks.is_empty() {
            return Err(Error::Format("ranks must list degree 0".into()));
        }
        let top = self.ranks.len() - 1;
        for key in self.differentials.keys() {
            let i = degree_key(key)?;
            if i == 0 || i > top {
                return Err(Error::Format(format!("differential d_{i} outside degrees 1..={top}")));
            }
        }
        let diffs = (1..=top)
            .map(|i| {
                let (r, c) = (self.ranks[i - 1], self.ranks[i]);
                match self.differentials.get(&i.to_string()) {
                    Some(doc) => matrix_from_doc(&group, r, c, doc),
                    None if r == 0 || c == 0 => Ok(GroupRingMatrix::zeros(group.clone(), r, c)),
                    None => Err(Error::Format(format!("missing differential d_{i}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let complex = ChainComplex::from_parts(group, self.ranks.clone(), diffs)?;
        let aug = self.aug.iter().map(JsonInt::to_int).collect::<Result<Vec<_>>>()?;
        let complex = AugmentedComplex::from_parts(complex, aug)?;
        let sub = match &self.sub {
            None => None,
            Some(m) => {
                let mut indices = vec![Vec::new(); top + 1];
                for (key, cells) in m {
                    let i = degree_key(key)?;
                    if i > top {
                        return Err(Error::Format(format!("subcomplex lists degree {i} above the top")));
                    }
                    indices[i] = cells.clone();
                }
                Some(SubcomplexMarker::new(indices))
            }
        };
        Ok(ParsedComplex { complex, sub })
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn parse_complex(text: &str) -> Result<ComplexDoc> {
    serde_json::from_str(text).map_err(json_error)
}

pub fn complex_to_json(k: &AugmentedComplex, sub: Option<&SubcomplexMarker>) -> String {
    serde_json::to_string_pretty(&complex_to_doc(k, sub)).expect("documents always serialize")
}

/// Parses and validates a complex document.
pub fn read_complex(text: &str) -> Result<ParsedComplex> {
    let parsed = parse_complex(text)?.build()?;
    if let Some(e) = parsed.problems().into_iter().next() {
        return Err(e);
    }
    Ok(parsed)
}

pub fn chain_map_to_doc(f: &ChainMap) -> DegreeMap<MatrixDoc> {
    f.maps().iter().enumerate().map(|(i, m)| (i.to_string(), matrix_to_doc(m))).collect()
}

pub fn homotopy_to_doc(h: &ChainHomotopy) -> DegreeMap<MatrixDoc> {
    h.maps().iter().enumerate().map(|(i, m)| (i.to_string(), matrix_to_doc(m))).collect()
}

/// Reads components `source_i -> target_{i + shift}` for consecutive
/// degrees starting at 0.
fn components(doc: &DegreeMap<MatrixDoc>, source: &ChainComplex, target: &ChainComplex, shift: usize) -> Result<Vec<GroupRingMatrix>> {
    let mut degrees = doc.keys().map(|k| degree_key(k)).collect::<Result<Vec<_>>>()?;
    degrees.sort_unstable();
    if degrees.iter().enumerate().any(|(k, &i)| k != i) {
        return Err(Error::Format("degrees must be consecutive from 0".into()));
    }
    degrees
        .iter()
        .map(|&i| matrix_from_doc(source.group(), target.rank(i + shift), source.rank(i), &doc[&i.to_string()]))
        .collect()
}

pub fn chain_map_from_doc(doc: &DegreeMap<MatrixDoc>, source: &ChainComplex, target: &ChainComplex) -> Result<ChainMap> {
    components(doc, source, target, 0).map(ChainMap::new)
}

pub fn homotopy_from_doc(doc: &DegreeMap<MatrixDoc>, source: &ChainComplex, target: &ChainComplex) -> Result<ChainHomotopy> {
    components(doc, source, target, 1).map(ChainHomotopy::new)
}

/// The map `h: L -> L'` of an extension problem, with an optional group
/// isomorphism `u` (images of the source elements) and homotopy `psi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HDoc {
    pub format: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iso: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<DegreeMap<MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<DegreeMap<MatrixDoc>>,
}

/// A module homomorphism by its matrix on generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FDoc {
    pub format: u64,
    pub matrix: IntMatrixDoc,
}

pub fn parse_h(text: &str) -> Result<HDoc> {
    let h: HDoc = serde_json::from_str(text).map_err(json_error)?;
    check_version(h.format)?;
    Ok(h)
}

pub fn parse_f(text: &str) -> Result<FDoc> {
    let f: FDoc = serde_json::from_str(text).map_err(json_error)?;
    check_version(f.format)?;
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub gens: usize,
    pub relations: IntMatrixDoc,
    pub action: Vec<IntMatrixDoc>,
    pub description: String,
}

pub fn module_to_doc(m: &PiModule) -> ModuleDoc {
    ModuleDoc {
        gens: m.gens(),
        relations: int_matrix_to_doc(m.relations()),
        action: m.actions().iter().map(int_matrix_to_doc).collect(),
        description: m.describe(),
    }
}
