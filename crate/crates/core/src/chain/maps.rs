use num_traits::One;

use crate::error::{Error, Result};
use crate::exactlinalg::Int;
use crate::groupring::{GroupIso, GroupRingMatrix};

use super::complex::{AugmentedComplex, ChainComplex, SubcomplexMarker};

/// Components `f_0, ..., f_q` of a chain map; `q` is the degree bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    maps: Vec<GroupRingMatrix>,
}

impl ChainMap {
    pub fn new(maps: Vec<GroupRingMatrix>) -> Self {
        ChainMap { maps }
    }

    pub fn identity(c: &ChainComplex, bound: usize) -> Self {
        ChainMap::new((0..=bound).map(|i| GroupRingMatrix::identity(c.group().clone(), c.rank(i))).collect())
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex, bound: usize) -> Self {
        ChainMap::new(
            (0..=bound)
                .map(|i| GroupRingMatrix::zeros(source.group().clone(), target.rank(i), source.rank(i)))
                .collect(),
        )
    }

    /// The split inclusion of a basis-spanned subcomplex.
    pub fn inclusion(ambient: &ChainComplex, marker: &SubcomplexMarker) -> Self {
        let maps = (0..=ambient.top())
            .map(|i| {
                let cells = marker.degree(i);
                let mut m = GroupRingMatrix::zeros(ambient.group().clone(), ambient.rank(i), cells.len());
                for (c, &j) in cells.iter().enumerate() {
                    *m.coeff_mut(j, c, 0) = Int::one();
                }
                m
            })
            .collect();
        ChainMap::new(maps)
    }

    /// Highest degree with a component.
    pub fn bound(&self) -> usize {
        self.maps.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[GroupRingMatrix] {
        &self.maps
    }

    pub fn into_maps(self) -> Vec<GroupRingMatrix> {
        self.maps
    }

    pub fn get(&self, i: usize) -> Option<&GroupRingMatrix> {
        self.maps.get(i)
    }

    /// Component `f_i`, or the zero map when `i` is past the bound and the
    /// source vanishes there.
    pub fn at(&self, i: usize, source: &ChainComplex, target: &ChainComplex) -> Result<GroupRingMatrix> {
        match self.maps.get(i) {
            Some(m) => Ok(m.clone()),
            None if source.rank(i) == 0 => {
                Ok(GroupRingMatrix::zeros(source.group().clone(), target.rank(i), 0))
            }
            None => Err(Error::NotAChainMap(format!("no component in degree {i}"))),
        }
    }

    /// Restriction to degrees `0..=bound`.
    pub fn truncate(&self, bound: usize) -> Self {
        ChainMap::new(self.maps.iter().take(bound + 1).cloned().collect())
    }

    /// Precomposition with the inclusion of a basis-spanned subcomplex.
    pub fn restrict_to(&self, marker: &SubcomplexMarker) -> Self {
        ChainMap::new(self.maps.iter().enumerate().map(|(i, m)| m.select_columns(marker.degree(i))).collect())
    }

    /// `self o other` on the common degree range.
    pub fn compose(&self, other: &ChainMap) -> Result<Self> {
        self.maps.iter().zip(&other.maps).map(|(a, b)| a.compose(b)).collect::<Result<_>>().map(ChainMap::new)
    }

    pub fn checked_sub(&self, other: &ChainMap) -> Result<Self> {
        self.maps.iter().zip(&other.maps).map(|(a, b)| a.checked_sub(b)).collect::<Result<_>>().map(ChainMap::new)
    }

    pub fn checked_add(&self, other: &ChainMap) -> Result<Self> {
        self.maps.iter().zip(&other.maps).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>().map(ChainMap::new)
    }

    pub fn restrict(&self, u: &GroupIso) -> Result<Self> {
        self.maps.iter().map(|m| m.restrict(u)).collect::<Result<_>>().map(ChainMap::new)
    }

    /// Verifies shapes and `d' f_i = f_{i-1} d` for `1 <= i <= bound`.
    pub fn check(&self, source: &ChainComplex, target: &ChainComplex) -> Result<()> {
        if **source.group() != **target.group() {
            return Err(Error::GroupMismatch);
        }
        for (i, f) in self.maps.iter().enumerate() {
            if f.rows() != target.rank(i) || f.cols() != source.rank(i) {
                return Err(Error::NotAChainMap(format!(
                    "f_{i} is {}x{}, expected {}x{}",
                    f.rows(),
                    f.cols(),
                    target.rank(i),
                    source.rank(i)
                )));
            }
            if i > 0 && target.d(i).compose(f)? != self.maps[i - 1].compose(&source.d(i))? {
                return Err(Error::NotAChainMap(format!("d' f_{i} != f_{} d in degree {i}", i - 1)));
            }
        }
        Ok(())
    }

    pub fn preserves_augmentation(&self, source: &AugmentedComplex, target: &AugmentedComplex) -> Result<bool> {
        let f0 = self.maps.first().ok_or_else(|| Error::NotAChainMap("no degree 0 component".into()))?;
        Ok(target.aug_matrix().compose(f0)? == source.aug_matrix())
    }

    /// Verifies the chain law and augmentation preservation.
    pub fn check_augmented(&self, source: &AugmentedComplex, target: &AugmentedComplex) -> Result<()> {
        self.check(source, target)?;
        if !self.preserves_augmentation(source, target)? {
            return Err(Error::NotAChainMap("augmentation is not preserved".into()));
        }
        Ok(())
    }
}

/// Components `D_i: C_i -> C'_{i+1}` of a chain homotopy, `0 <= i <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainHomotopy {
    maps: Vec<GroupRingMatrix>,
}

impl ChainHomotopy {
    pub fn new(maps: Vec<GroupRingMatrix>) -> Self {
        ChainHomotopy { maps }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex, bound: usize) -> Self {
        ChainHomotopy::new(
            (0..=bound)
                .map(|i| GroupRingMatrix::zeros(source.group().clone(), target.rank(i + 1), source.rank(i)))
                .collect(),
        )
    }

    pub fn maps(&self) -> &[GroupRingMatrix] {
        &self.maps
    }

    pub fn into_maps(self) -> Vec<GroupRingMatrix> {
        self.maps
    }

    pub fn get(&self, i: usize) -> Option<&GroupRingMatrix> {
        self.maps.get(i)
    }

    pub fn bound(&self) -> usize {
        self.maps.len().saturating_sub(1)
    }

    /// `D_i`, or zero past the bound.
    pub fn at(&self, i: usize, source: &ChainComplex, target: &ChainComplex) -> GroupRingMatrix {
        self.maps
            .get(i)
            .cloned()
            .unwrap_or_else(|| GroupRingMatrix::zeros(source.group().clone(), target.rank(i + 1), source.rank(i)))
    }

    pub fn restrict(&self, u: &GroupIso) -> Result<Self> {
        self.maps.iter().map(|m| m.restrict(u)).collect::<Result<_>>().map(ChainHomotopy::new)
    }

    pub fn restrict_to(&self, marker: &SubcomplexMarker) -> Self {
        ChainHomotopy::new(self.maps.iter().enumerate().map(|(i, m)| m.select_columns(marker.degree(i))).collect())
    }

    /// The degree-`i` defect `f_i - g_i - (d' D_i + D_{i-1} d_i)`.
    pub fn defect(
        &self,
        f: &ChainMap,
        g: &ChainMap,
        source: &ChainComplex,
        target: &ChainComplex,
        i: usize,
    ) -> Result<GroupRingMatrix> {
        let diff = f.at(i, source, target)?.checked_sub(&g.at(i, source, target)?)?;
        let mut rhs = target.d(i + 1).compose(&self.at(i, source, target))?;
        if i > 0 {
            rhs = rhs.checked_add(&self.at(i - 1, source, target).compose(&source.d(i))?)?;
        }
        diff.checked_sub(&rhs)
    }

    /// Verifies `f - g = d' D + D d` in degrees `0..=upto`.
    pub fn check(&self, f: &ChainMap, g: &ChainMap, source: &ChainComplex, target: &ChainComplex, upto: usize) -> Result<()> {
        for i in 0..=upto {
            if !self.defect(f, g, source, target, i)?.is_zero() {
                return Err(Error::InvalidHomotopy(format!("f - g != d'D + Dd in degree {i}")));
            }
        }
        Ok(())
    }
}
