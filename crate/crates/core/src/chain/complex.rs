use std::ops::Deref;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlinalg::{Int, IntMatrix};
use crate::groupring::{FiniteGroup, GroupIso, GroupRingMatrix};

/// A finite free chain complex of left `Z[G]`-modules in degrees `0..=top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    group: Arc<FiniteGroup>,
    ranks: Vec<usize>,
    // diffs[i - 1] = d_i: C_i -> C_{i-1}
    diffs: Vec<GroupRingMatrix>,
}

impl ChainComplex {
    /// Assembles a complex without checking `d o d = 0`; see [`ChainComplex::validate`].
    pub fn from_parts(group: Arc<FiniteGroup>, ranks: Vec<usize>, diffs: Vec<GroupRingMatrix>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::InvalidComplex("a complex needs at least degree 0".into()));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::InvalidComplex(format!(
                "{} differentials for top degree {}",
                diffs.len(),
                ranks.len() - 1
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            let i = k + 1;
            if **d.group() != *group {
                return Err(Error::GroupMismatch);
            }
            if d.rows() != ranks[i - 1] || d.cols() != ranks[i] {
                return Err(Error::DimensionMismatch(format!(
                    "d_{i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    ranks[i - 1],
                    ranks[i]
                )));
            }
        }
        Ok(ChainComplex { group, ranks, diffs })
    }

    /// Assembles and validates.
    pub fn new(group: Arc<FiniteGroup>, ranks: Vec<usize>, diffs: Vec<GroupRingMatrix>) -> Result<Self> {
        let c = Self::from_parts(group, ranks, diffs)?;
        match c.validate().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(c),
        }
    }

    pub fn zero(group: Arc<FiniteGroup>, top: usize) -> Self {
        let diffs = (0..top).map(|_| GroupRingMatrix::zeros(group.clone(), 0, 0)).collect();
        ChainComplex { group, ranks: vec![0; top + 1], diffs }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn top(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Rank in degree `i`; zero above the top.
    pub fn rank(&self, i: usize) -> usize {
        self.ranks.get(i).copied().unwrap_or(0)
    }

    /// `d_i: C_i -> C_{i-1}`; the zero map when `i == 0` or `i > top`.
    pub fn d(&self, i: usize) -> GroupRingMatrix {
        match i {
            0 => GroupRingMatrix::zeros(self.group.clone(), 0, self.rank(0)),
            _ if i <= self.top() => self.diffs[i - 1].clone(),
            _ => GroupRingMatrix::zeros(self.group.clone(), self.rank(i - 1), 0),
        }
    }

    pub fn d_ref(&self, i: usize) -> Option<&GroupRingMatrix> {
        if i == 0 {
            None
        } else {
            self.diffs.get(i - 1)
        }
    }

    /// Checks `d_{i-1} o d_i = 0` in every degree.
    pub fn validate(&self) -> Vec<Error> {
        let mut problems = Vec::new();
        for i in 2..=self.top() {
            match self.diffs[i - 2].compose(&self.diffs[i - 1]) {
                Ok(c) if c.is_zero() => {}
                Ok(_) => problems.push(Error::DifferentialsDoNotCompose(i)),
                Err(e) => problems.push(e),
            }
        }
        problems
    }

    /// Truncation to degrees `0..=top` (zero-padded when `top` is larger).
    pub fn truncate(&self, top: usize) -> Self {
        let mut ranks = self.ranks.clone();
        ranks.resize(top + 1, 0);
        let diffs = (1..=top).map(|i| self.d(i)).collect::<Vec<_>>();
        // padding degrees need correctly shaped zero maps
        let diffs = diffs
            .into_iter()
            .enumerate()
            .map(|(k, d)| {
                if d.rows() == ranks[k] && d.cols() == ranks[k + 1] {
                    d
                } else {
                    GroupRingMatrix::zeros(self.group.clone(), ranks[k], ranks[k + 1])
                }
            })
            .collect();
        ChainComplex { group: self.group.clone(), ranks, diffs }
    }

    /// Adds `extra[i]` new basis elements at the end of degree `i` with the
    /// given boundaries. `new_columns[i - 1]` is the full column block of
    /// `d_i` for the new cells of degree `i` (rows index the enlarged
    /// degree `i - 1`); new cells never appear in boundaries of old cells.
    pub fn extended(&self, new_columns: &[GroupRingMatrix]) -> Result<Self> {
        let mut top = self.top();
        while new_columns.len() > top {
            top += 1;
        }
        let extra: Vec<usize> = (0..=top)
            .map(|i| if i == 0 { 0 } else { new_columns.get(i - 1).map_or(0, GroupRingMatrix::cols) })
            .collect();
        let ranks: Vec<usize> = (0..=top).map(|i| self.rank(i) + extra[i]).collect();
        let mut diffs = Vec::with_capacity(top);
        for i in 1..=top {
            let mut d = GroupRingMatrix::zeros(self.group.clone(), ranks[i - 1], ranks[i]);
            let old = self.d(i);
            if old.rows() == self.rank(i - 1) && old.cols() == self.rank(i) {
                d.set_block(0, 0, &old);
            }
            if let Some(cols) = new_columns.get(i - 1) {
                if cols.rows() != ranks[i - 1] {
                    return Err(Error::DimensionMismatch(format!(
                        "new boundaries in degree {i} have {} rows, expected {}",
                        cols.rows(),
                        ranks[i - 1]
                    )));
                }
                d.set_block(0, self.rank(i), cols);
            }
            diffs.push(d);
        }
        Self::new(self.group.clone(), ranks, diffs)
    }

    /// Restriction of scalars along `u: H -> G`; differentials keep their
    /// underlying maps.
    pub fn restrict(&self, u: &GroupIso) -> Result<ChainComplex> {
        let diffs = self.diffs.iter().map(|d| d.restrict(u)).collect::<Result<_>>()?;
        Ok(ChainComplex { group: u.source().clone(), ranks: self.ranks.clone(), diffs })
    }

    /// The subcomplex spanned by marked basis elements.
    pub fn subcomplex(&self, marker: &SubcomplexMarker) -> Result<ChainComplex> {
        marker.check(self)?;
        let top = self.top();
        let ranks: Vec<usize> = (0..=top).map(|i| marker.degree(i).len()).collect();
        let diffs = (1..=top)
            .map(|i| self.d(i).select_rows(marker.degree(i - 1)).select_columns(marker.degree(i)))
            .collect();
        Self::from_parts(self.group.clone(), ranks, diffs)
    }

    /// The quotient by a basis-spanned subcomplex: the free complex on the
    /// unmarked basis with marked rows and columns deleted.
    pub fn quotient(&self, marker: &SubcomplexMarker) -> Result<ChainComplex> {
        let complement = marker.complement(self)?;
        let top = self.top();
        let ranks: Vec<usize> = (0..=top).map(|i| complement.degree(i).len()).collect();
        let diffs = (1..=top)
            .map(|i| self.d(i).select_rows(complement.degree(i - 1)).select_columns(complement.degree(i)))
            .collect();
        Self::from_parts(self.group.clone(), ranks, diffs)
    }
}

/// A chain complex with an augmentation `C_0 -> Z`, given by its values on
/// the basis and extended by `aug(g x) = aug(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedComplex {
    complex: ChainComplex,
    aug: Vec<Int>,
}

impl AugmentedComplex {
    pub fn from_parts(complex: ChainComplex, aug: Vec<Int>) -> Result<Self> {
        if aug.len() != complex.rank(0) {
            return Err(Error::DimensionMismatch(format!(
                "augmentation of length {} on a rank-{} module",
                aug.len(),
                complex.rank(0)
            )));
        }
        Ok(AugmentedComplex { complex, aug })
    }

    /// Assembles and validates every invariant.
    pub fn new(complex: ChainComplex, aug: Vec<Int>) -> Result<Self> {
        let k = Self::from_parts(complex, aug)?;
        match k.validate().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(k),
        }
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn into_complex(self) -> ChainComplex {
        self.complex
    }

    pub fn aug(&self) -> &[Int] {
        &self.aug
    }

    /// The augmentation as a `1 x rank_0` matrix over `Z[G]`.
    pub fn aug_matrix(&self) -> GroupRingMatrix {
        let row = IntMatrix::new(1, self.aug.len(), self.aug.clone()).expect("row shape");
        GroupRingMatrix::from_int_matrix(self.group().clone(), &row)
    }

    /// The augmentation on the flattened basis `{g e_j}`.
    pub fn aug_flat(&self) -> IntMatrix {
        let n = self.group().order();
        let mut m = IntMatrix::zeros(1, self.aug.len() * n);
        for (j, a) in self.aug.iter().enumerate() {
            for g in 0..n {
                m[(0, j * n + g)] = a.clone();
            }
        }
        m
    }

    /// Every failed invariant, in a stable order.
    pub fn validate(&self) -> Vec<Error> {
        let mut problems = self.complex.validate();
        if let Some(d1) = self.complex.d_ref(1) {
            let composite = d1.augmented();
            let row = IntMatrix::new(1, self.aug.len(), self.aug.clone()).expect("row shape");
            if !(&row * &composite).is_zero() {
                problems.push(Error::AugmentationNotCycle);
            }
        }
        let g = self.aug.iter().fold(Int::zero(), |acc, a| acc.gcd(a));
        if !g.is_one() {
            problems.push(Error::AugmentationNotSurjective);
        }
        problems
    }

    pub fn restrict(&self, u: &GroupIso) -> Result<Self> {
        Ok(AugmentedComplex { complex: self.complex.restrict(u)?, aug: self.aug.clone() })
    }

    pub fn truncate(&self, top: usize) -> Self {
        AugmentedComplex { complex: self.complex.truncate(top), aug: self.aug.clone() }
    }

    pub fn extended(&self, new_columns: &[GroupRingMatrix]) -> Result<Self> {
        Self::new(self.complex.extended(new_columns)?, self.aug.clone())
    }
}

impl Deref for AugmentedComplex {
    type Target = ChainComplex;

    fn deref(&self) -> &ChainComplex {
        &self.complex
    }
}

/// A subcomplex spanned by basis elements: sorted basis indices per degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubcomplexMarker {
    indices: Vec<Vec<usize>>,
}

impl SubcomplexMarker {
    pub fn new(mut indices: Vec<Vec<usize>>) -> Self {
        for d in &mut indices {
            d.sort_unstable();
            d.dedup();
        }
        while indices.last().is_some_and(Vec::is_empty) {
            indices.pop();
        }
        SubcomplexMarker { indices }
    }

    pub fn empty() -> Self {
        SubcomplexMarker::default()
    }

    /// Everything in `complex`.
    pub fn full(complex: &ChainComplex) -> Self {
        Self::new((0..=complex.top()).map(|i| (0..complex.rank(i)).collect()).collect())
    }

    /// All cells in degrees `0..=q`.
    pub fn skeleton(complex: &ChainComplex, q: usize) -> Self {
        Self::new((0..=q.min(complex.top())).map(|i| (0..complex.rank(i)).collect()).collect())
    }

    pub fn degree(&self, i: usize) -> &[usize] {
        self.indices.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn indices(&self) -> &[Vec<usize>] {
        &self.indices
    }

    pub fn is_empty(&self) -> bool {
        self.indices.iter().all(Vec::is_empty)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.degree(i).binary_search(&j).is_ok()
    }

    /// Whether `self` is contained in `other` degreewise.
    pub fn is_subset(&self, other: &SubcomplexMarker) -> bool {
        self.indices.iter().enumerate().all(|(i, d)| d.iter().all(|&j| other.contains(i, j)))
    }

    /// Checks index ranges and closure under the differential.
    pub fn check(&self, complex: &ChainComplex) -> Result<()> {
        if self.indices.len() > complex.top() + 1 {
            return Err(Error::InvalidMarker(format!(
                "marks degree {} above the top {}",
                self.indices.len() - 1,
                complex.top()
            )));
        }
        for (i, d) in self.indices.iter().enumerate() {
            if let Some(&j) = d.iter().find(|&&j| j >= complex.rank(i)) {
                return Err(Error::InvalidMarker(format!("index {j} out of range in degree {i}")));
            }
        }
        for i in 1..=complex.top() {
            let d = complex.d(i);
            for &j in self.degree(i) {
                for r in 0..d.rows() {
                    if !self.contains(i - 1, r) && d.entry_coeffs(r, j).iter().any(|c| !c.is_zero()) {
                        return Err(Error::SubcomplexNotClosed(i));
                    }
                }
            }
        }
        Ok(())
    }

    /// The unmarked indices (not itself a subcomplex in general).
    pub fn complement(&self, complex: &ChainComplex) -> Result<SubcomplexMarker> {
        self.check(complex)?;
        Ok(SubcomplexMarker {
            indices: (0..=complex.top())
                .map(|i| (0..complex.rank(i)).filter(|&j| !self.contains(i, j)).collect())
                .collect(),
        })
    }

    /// Positions of `self`'s cells inside `outer`'s cells, degree by degree.
    pub fn positions_in(&self, outer: &SubcomplexMarker) -> Result<Vec<Vec<usize>>> {
        self.indices
            .iter()
            .enumerate()
            .map(|(i, d)| {
                d.iter()
                    .map(|&j| {
                        outer.degree(i).binary_search(&j).map_err(|_| {
                            Error::InvalidMarker(format!("cell {j} of degree {i} is not in the larger subcomplex"))
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn entry(g: &Arc<FiniteGroup>, c: &[i64]) -> GroupRingMatrix {
        GroupRingMatrix::from_i64(g.clone(), &[vec![c.to_vec()]]).unwrap()
    }

    #[test]
    fn rp2_validates_and_bad_d2_is_flagged() {
        let g = c2();
        let good = ChainComplex::new(g.clone(), vec![1, 1, 1], vec![entry(&g, &[-1, 1]), entry(&g, &[1, 1])]);
        assert!(good.is_ok());
        let bad = ChainComplex::from_parts(g.clone(), vec![1, 1, 1], vec![entry(&g, &[-1, 1]), entry(&g, &[1, -1])])
            .unwrap();
        assert_eq!(bad.validate(), vec![Error::DifferentialsDoNotCompose(2)]);
        assert_eq!(Error::DifferentialsDoNotCompose(2).to_string(), "d_1 o d_2 is not zero");
    }

    #[test]
    fn augmentation_checks() {
        let t = Arc::new(FiniteGroup::trivial());
        let c = ChainComplex::new(t.clone(), vec![2], vec![]).unwrap();
        assert!(AugmentedComplex::new(c.clone(), vec![Int::from(1), Int::zero()]).is_ok());
        assert_eq!(
            AugmentedComplex::new(c, vec![Int::from(2), Int::from(4)]),
            Err(Error::AugmentationNotSurjective)
        );
    }

    #[test]
    fn marker_closure() {
        let g = c2();
        let c = ChainComplex::new(g.clone(), vec![1, 1, 1], vec![entry(&g, &[-1, 1]), entry(&g, &[1, 1])]).unwrap();
        assert!(SubcomplexMarker::skeleton(&c, 1).check(&c).is_ok());
        let bad = SubcomplexMarker::new(vec![vec![], vec![0]]);
        assert_eq!(bad.check(&c), Err(Error::SubcomplexNotClosed(1)));
        let q = c.quotient(&SubcomplexMarker::skeleton(&c, 1)).unwrap();
        assert_eq!(q.ranks(), &[0, 0, 1]);
        assert!(q.d(2).is_zero());
        assert_eq!(c.quotient(&SubcomplexMarker::empty()).unwrap(), c);
        assert_eq!(c.quotient(&SubcomplexMarker::full(&c)).unwrap().ranks(), &[0, 0, 0]);
    }

    #[test]
    fn extension_keeps_old_cells() {
        let g = c2();
        let c = ChainComplex::new(g.clone(), vec![1, 1, 1], vec![entry(&g, &[-1, 1]), entry(&g, &[1, 1])]).unwrap();
        let none = GroupRingMatrix::zeros(g.clone(), 1, 0);
        // a 3-cell bounding (1 - t) e_2, which is a cycle
        let e = c.extended(&[none.clone(), none, entry(&g, &[1, -1])]).unwrap();
        assert_eq!(e.ranks(), &[1, 1, 1, 1]);
        assert_eq!(e.d(2), c.d(2));
    }
}
