use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::element::{multiply_into, GroupRingElement};
use super::group::{FiniteGroup, GroupIso};
use crate::error::{Error, Result};
use crate::exactlinalg::{solve_with_kernel, Int, IntMatrix};

/// A homomorphism of free left `Z[G]`-modules `Z[G]^cols -> Z[G]^rows`.
///
/// Basis vector `e_j` maps to `sum_i a_ij e_i`; a scalar `x` acts by
/// `x e_j -> sum_i (x a_ij) e_i`, so entries multiply basis images on the
/// right and `(A o B)_ik = sum_j b_jk a_ij`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingMatrix {
    group: Arc<FiniteGroup>,
    rows: usize,
    cols: usize,
    // ((i * cols) + j) * |G| + g
    data: Vec<Int>,
}

impl GroupRingMatrix {
    pub fn zeros(group: Arc<FiniteGroup>, rows: usize, cols: usize) -> Self {
        let n = group.order();
        GroupRingMatrix { group, rows, cols, data: vec![Int::zero(); rows * cols * n] }
    }

    pub fn identity(group: Arc<FiniteGroup>, n: usize) -> Self {
        let mut m = Self::zeros(group, n, n);
        for i in 0..n {
            m.coeff_mut(i, i, 0).set_one();
        }
        m
    }

    /// Builds a matrix from its entries given as coefficient vectors.
    pub fn from_entries(group: Arc<FiniteGroup>, rows: usize, cols: usize, entries: Vec<Vec<Int>>) -> Result<Self> {
        let n = group.order();
        if entries.len() != rows * cols || entries.iter().any(|e| e.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "entries for a {rows}x{cols} matrix over a group of order {n}"
            )));
        }
        Ok(GroupRingMatrix { group, rows, cols, data: entries.into_iter().flatten().collect() })
    }

    /// Builds from rows of machine-integer coefficient vectors (`rows[i][j][g]`).
    pub fn from_i64(group: Arc<FiniteGroup>, rows: &[Vec<Vec<i64>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged group ring matrix".into()));
        }
        let entries = rows.iter().flatten().map(|e| e.iter().map(|&x| Int::from(x)).collect()).collect();
        Self::from_entries(group, r, c, entries)
    }

    pub fn from_elements(group: Arc<FiniteGroup>, rows: usize, cols: usize, entries: &[GroupRingElement]) -> Result<Self> {
        if entries.iter().any(|e| **e.group() != *group) {
            return Err(Error::GroupMismatch);
        }
        Self::from_entries(group, rows, cols, entries.iter().map(|e| e.coeffs().to_vec()).collect())
    }

    /// Integer matrix embedded through `Z -> Z[G]`.
    pub fn from_int_matrix(group: Arc<FiniteGroup>, m: &IntMatrix) -> Self {
        let mut out = Self::zeros(group, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                *out.coeff_mut(i, j, 0) = m[(i, j)].clone();
            }
        }
        out
    }

    /// The homomorphism whose basis images are the columns of `images`,
    /// read in the coordinates `(i, g) -> i * |G| + g` of `Z[G]^rows`.
    pub fn from_basis_images(group: Arc<FiniteGroup>, rows: usize, images: &IntMatrix) -> Result<Self> {
        let n = group.order();
        if images.rows() != rows * n {
            return Err(Error::DimensionMismatch(format!(
                "basis images of length {} for rank {rows}",
                images.rows()
            )));
        }
        let cols = images.cols();
        let mut m = Self::zeros(group, rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                for g in 0..n {
                    *m.coeff_mut(i, j, g) = images[(i * n + g, j)].clone();
                }
            }
        }
        Ok(m)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        (i * self.cols + j) * self.group.order()
    }

    /// Coefficient vector of entry `(i, j)`.
    pub fn entry_coeffs(&self, i: usize, j: usize) -> &[Int] {
        let o = self.offset(i, j);
        &self.data[o..o + self.group.order()]
    }

    pub fn entry(&self, i: usize, j: usize) -> GroupRingElement {
        GroupRingElement::new(self.group.clone(), self.entry_coeffs(i, j).to_vec()).expect("entry length")
    }

    pub fn coeff(&self, i: usize, j: usize, g: usize) -> &Int {
        &self.data[self.offset(i, j) + g]
    }

    pub fn coeff_mut(&mut self, i: usize, j: usize, g: usize) -> &mut Int {
        let o = self.offset(i, j);
        &mut self.data[o + g]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, e: &GroupRingElement) {
        assert!(**e.group() == *self.group, "entry over a different group");
        let o = self.offset(i, j);
        let n = self.group.order();
        self.data[o..o + n].clone_from_slice(e.coeffs());
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn check_group(&self, other: &Self) -> Result<()> {
        if self.group == other.group || *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// The composite `self o rhs`.
    pub fn compose(&self, rhs: &GroupRingMatrix) -> Result<Self> {
        self.check_group(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "composition of {}x{} after {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.group.clone(), self.rows, rhs.cols);
        let n = self.group.order();
        for i in 0..self.rows {
            for k in 0..rhs.cols {
                let o = out.offset(i, k);
                let (before, rest) = out.data.split_at_mut(o);
                let _ = before;
                let target = &mut rest[..n];
                for j in 0..self.cols {
                    multiply_into(&self.group, rhs.entry_coeffs(j, k), self.entry_coeffs(i, j), target);
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(GroupRingMatrix {
            group: self.group.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(GroupRingMatrix {
            group: self.group.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    fn same_shape(&self, rhs: &Self) -> Result<()> {
        self.check_group(rhs)?;
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} against {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        GroupRingMatrix {
            group: self.group.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, k: &Int) -> Self {
        GroupRingMatrix {
            group: self.group.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.group.clone(), self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                let src = self.offset(i, j);
                let dst = m.offset(i, jj);
                let n = self.group.order();
                m.data[dst..dst + n].clone_from_slice(&self.data[src..src + n]);
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut m = Self::zeros(self.group.clone(), rows.len(), self.cols);
        let n = self.group.order();
        for (ii, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                let src = self.offset(i, j);
                let dst = m.offset(ii, j);
                m.data[dst..dst + n].clone_from_slice(&self.data[src..src + n]);
            }
        }
        m
    }

    /// Copies `b` into the block whose top-left corner is `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &GroupRingMatrix) {
        let n = self.group.order();
        for i in 0..b.rows {
            for j in 0..b.cols {
                let src = b.offset(i, j);
                let dst = self.offset(r0 + i, c0 + j);
                self.data[dst..dst + n].clone_from_slice(&b.data[src..src + n]);
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let r: Vec<usize> = (r0..r0 + rows).collect();
        let c: Vec<usize> = (c0..c0 + cols).collect();
        self.select_rows(&r).select_columns(&c)
    }

    /// Assembles a block matrix; `blocks[r][c]` must have consistent shapes.
    pub fn from_blocks(group: Arc<FiniteGroup>, row_sizes: &[usize], col_sizes: &[usize], blocks: &[Vec<Option<&GroupRingMatrix>>]) -> Result<Self> {
        let rows = row_sizes.iter().sum();
        let cols = col_sizes.iter().sum();
        let mut m = Self::zeros(group, rows, cols);
        let mut r0 = 0;
        for (bi, &rs) in row_sizes.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &cs) in col_sizes.iter().enumerate() {
                if let Some(b) = blocks[bi][bj] {
                    m.check_group(b)?;
                    if b.rows != rs || b.cols != cs {
                        return Err(Error::DimensionMismatch(format!(
                            "block ({bi},{bj}) is {}x{}, expected {rs}x{cs}",
                            b.rows, b.cols
                        )));
                    }
                    m.set_block(r0, c0, b);
                }
                c0 += cs;
            }
            r0 += rs;
        }
        Ok(m)
    }

    /// Images of the module basis in the integer coordinates
    /// `(i, g) -> i * |G| + g`: a `(rows |G|) x cols` integer matrix.
    pub fn basis_images(&self) -> IntMatrix {
        let n = self.group.order();
        let mut m = IntMatrix::zeros(self.rows * n, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for g in 0..n {
                    m[(i * n + g, j)] = self.coeff(i, j, g).clone();
                }
            }
        }
        m
    }

    /// Regular-representation flattening: the integer matrix of the same
    /// map in the Z-bases `{g e_j}`.
    pub fn flatten(&self) -> IntMatrix {
        let n = self.group.order();
        let mut m = IntMatrix::zeros(self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (h, c) in self.entry_coeffs(i, j).iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    // g e_j contributes (g h) e_i
                    for g in 0..n {
                        m[(i * n + self.group.mul(g, h), j * n + g)] = c.clone();
                    }
                }
            }
        }
        m
    }

    /// Restriction of scalars along `u: H -> G` where `self` lives over `G`.
    pub fn restrict(&self, u: &GroupIso) -> Result<Self> {
        if **u.target() != *self.group {
            return Err(Error::GroupMismatch);
        }
        let n = self.group.order();
        let mut m = Self::zeros(u.source().clone(), self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for g in 0..n {
                    *m.coeff_mut(i, j, g) = self.coeff(i, j, u.apply(g)).clone();
                }
            }
        }
        Ok(m)
    }

    /// Augmentation of every entry: the induced integer matrix on `Z ⊗ -`.
    pub fn augmented(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self.entry_coeffs(i, j).iter().sum();
            }
        }
        m
    }
}

/// Integer matrix of left multiplication by `g` on `Z[G]^rank`.
pub fn translation_matrix(group: &FiniteGroup, rank: usize, g: usize) -> IntMatrix {
    let n = group.order();
    let mut m = IntMatrix::zeros(rank * n, rank * n);
    for i in 0..rank {
        for h in 0..n {
            m[(i * n + group.mul(g, h), i * n + h)] = Int::one();
        }
    }
    m
}

/// How the free part of a lift is chosen.
#[derive(Clone, Debug)]
pub enum LiftChoice {
    /// The solver's canonical particular solution.
    Canonical,
    /// Canonical solution plus a random homogeneous solution with
    /// coefficients in `[-bound, bound]`.
    Randomized { rng: ChaCha8Rng, bound: i64 },
}

impl LiftChoice {
    pub fn seeded(seed: u64) -> Self {
        use rand::SeedableRng;
        LiftChoice::Randomized { rng: ChaCha8Rng::seed_from_u64(seed), bound: 2 }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self, LiftChoice::Canonical)
    }

    pub(crate) fn perturb(&mut self, particular: &IntMatrix, kernel: &IntMatrix) -> IntMatrix {
        match self {
            LiftChoice::Canonical => particular.clone(),
            LiftChoice::Randomized { rng, bound } => {
                let mut coeffs = IntMatrix::zeros(kernel.cols(), particular.cols());
                for k in 0..kernel.cols() {
                    for j in 0..particular.cols() {
                        coeffs[(k, j)] = Int::from(rng.gen_range(-*bound..=*bound));
                    }
                }
                particular + &(kernel * &coeffs)
            }
        }
    }
}

/// Solves `A o X = B` over `Z[G]`. Solving happens on the basis images of
/// `B` against the flattened `A`; the solution is the homomorphism with
/// those basis images, so equivariance is automatic.
pub fn solve_equivariant(a: &GroupRingMatrix, b: &GroupRingMatrix) -> Result<Option<GroupRingMatrix>> {
    solve_equivariant_with(a, b, &mut LiftChoice::Canonical)
}

pub fn solve_equivariant_with(a: &GroupRingMatrix, b: &GroupRingMatrix, choice: &mut LiftChoice) -> Result<Option<GroupRingMatrix>> {
    a.check_group(b)?;
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "A has {} rows but B has {}",
            a.rows, b.rows
        )));
    }
    let Some(sol) = solve_with_kernel(&a.flatten(), &b.basis_images())? else {
        return Ok(None);
    };
    let images = choice.perturb(&sol.particular, &sol.kernel);
    let x = GroupRingMatrix::from_basis_images(a.group.clone(), a.cols, &images)?;
    if a.compose(&x)? != *b {
        return Err(Error::Internal("equivariant solution failed verification".into()));
    }
    Ok(Some(x))
}

impl fmt::Debug for GroupRingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingMatrix {}x{} over |G|={} ", self.rows, self.cols, self.group.order())?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GroupRingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        write!(f, "]")
    }
}
