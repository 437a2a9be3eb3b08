use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntMatrix};
use crate::error::{Error, Result};

/// `U * M * V = S` with `U`, `V` unimodular and `S` diagonal with
/// nonnegative entries `d1 | d2 | ... | dr`, zeros trailing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

/// A Smith decomposition that also carries `U^-1` and `V^-1`.
#[derive(Clone, Debug)]
pub struct FullSmith {
    pub decomposition: SmithDecomposition,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

struct Tracker {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    u_inv: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Tracker {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        if let Some(w) = &mut self.u_inv {
            w.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        if let Some(w) = &mut self.v_inv {
            w.swap_rows(i, j);
        }
    }

    // row[t] += k row[s]
    fn add_row(&mut self, t: usize, s: usize, k: &Int) {
        self.a.add_row_multiple(t, s, k);
        self.u.add_row_multiple(t, s, k);
        if let Some(w) = &mut self.u_inv {
            w.add_col_multiple(s, t, &-k);
        }
    }

    // col[t] += k col[s]
    fn add_col(&mut self, t: usize, s: usize, k: &Int) {
        self.a.add_col_multiple(t, s, k);
        self.v.add_col_multiple(t, s, k);
        if let Some(w) = &mut self.v_inv {
            w.add_row_multiple(s, t, &-k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        if let Some(w) = &mut self.u_inv {
            w.negate_col(i);
        }
    }
}

fn run(m: &IntMatrix, track_inverses: bool) -> (SmithDecomposition, Option<(IntMatrix, IntMatrix)>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut tr = Tracker {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        u_inv: track_inverses.then(|| IntMatrix::identity(rows)),
        v_inv: track_inverses.then(|| IntMatrix::identity(cols)),
    };
    let mut rank = 0;
    'outer: for t in 0..rows.min(cols) {
        loop {
            // Pivot: smallest nonzero absolute value, ties broken by row-major index.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &tr.a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if tr.a[(bi, bj)].magnitude() <= x.magnitude() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            tr.swap_rows(t, pi);
            tr.swap_cols(t, pj);

            let pivot = tr.a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if tr.a[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = tr.a[(i, t)].div_rem(&pivot);
                tr.add_row(i, t, &-q);
                dirty |= !r.is_zero();
            }
            for j in t + 1..cols {
                if tr.a[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = tr.a[(t, j)].div_rem(&pivot);
                tr.add_col(j, t, &-q);
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column t are clear; enforce divisibility of the remainder.
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !tr.a[(i, j)].is_multiple_of(&pivot) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => tr.add_row(t, i, &Int::one()),
                None => break,
            }
        }
        if tr.a[(t, t)].is_negative() {
            tr.negate_row(t);
        }
        rank += 1;
    }
    let inverses = match (tr.u_inv, tr.v_inv) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    };
    (SmithDecomposition { u: tr.u, s: tr.a, v: tr.v, rank }, inverses)
}

/// Smith normal form with deterministic pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    run(m, false).0
}

/// Smith normal form together with the inverses of both transforms.
pub fn smith_with_inverses(m: &IntMatrix) -> FullSmith {
    let (decomposition, inv) = run(m, true);
    let (u_inv, v_inv) = inv.expect("inverses tracked");
    FullSmith { decomposition, u_inv, v_inv }
}

/// Solution of `A X = B` over the integers, together with a basis of the
/// kernel of `A` (the homogeneous solutions).
#[derive(Clone, Debug)]
pub struct IntegerSolution {
    pub particular: IntMatrix,
    pub kernel: IntMatrix,
}

/// Solves `A X = B` over the integers. Returns `None` when no integer
/// solution exists. The particular solution is canonical for the input.
pub fn solve_integer_system(a: &IntMatrix, b: &IntMatrix) -> Result<Option<IntMatrix>> {
    Ok(solve_with_kernel(a, b)?.map(|s| s.particular))
}

pub fn solve_with_kernel(a: &IntMatrix, b: &IntMatrix) -> Result<Option<IntegerSolution>> {
    let solver = LinearSolver::new(a);
    let Some(x) = solver.solve(b)? else { return Ok(None) };
    debug_assert_eq!(&(a * &x), b);
    Ok(Some(IntegerSolution { particular: x, kernel: solver.kernel() }))
}

/// A factored system matrix, for solving `A X = B` against many `B`.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    rows: usize,
    snf: SmithDecomposition,
}

impl LinearSolver {
    pub fn new(a: &IntMatrix) -> Self {
        LinearSolver { rows: a.rows(), snf: smith_normal_form(a) }
    }

    pub fn solve(&self, b: &IntMatrix) -> Result<Option<IntMatrix>> {
        if b.rows() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "system with {} equations but right-hand side with {} rows",
                self.rows,
                b.rows()
            )));
        }
        let snf = &self.snf;
        let ub = &snf.u * b;
        let mut y = IntMatrix::zeros(snf.v.rows(), b.cols());
        for i in 0..self.rows {
            for j in 0..b.cols() {
                let rhs = &ub[(i, j)];
                if i < snf.rank {
                    let (q, r) = rhs.div_rem(&snf.s[(i, i)]);
                    if !r.is_zero() {
                        return Ok(None);
                    }
                    y[(i, j)] = q;
                } else if !rhs.is_zero() {
                    return Ok(None);
                }
            }
        }
        Ok(Some(&snf.v * &y))
    }

    /// Saturated basis of the homogeneous solutions.
    pub fn kernel(&self) -> IntMatrix {
        self.snf.v.column_range(self.snf.rank, self.snf.v.cols())
    }
}

/// A saturated basis (as columns) of `{x : A x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    snf.v.column_range(snf.rank, a.cols())
}

/// `Z^m / im(A)` as a list of invariant factors (one per ambient
/// coordinate; `0` marks a free summand) and the coordinate change whose
/// rows map the ambient basis onto the cyclic generators of the quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelPresentation {
    pub factors: Vec<Int>,
    pub projection: IntMatrix,
}

impl CokernelPresentation {
    /// Factors different from one, i.e. the nontrivial cyclic summands.
    pub fn nontrivial_factors(&self) -> Vec<Int> {
        self.factors.iter().filter(|f| !f.is_one()).cloned().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.iter().all(One::is_one)
    }
}

pub fn cokernel_presentation(a: &IntMatrix) -> CokernelPresentation {
    let snf = smith_normal_form(a);
    let factors = (0..a.rows())
        .map(|i| if i < snf.rank { snf.s[(i, i)].clone() } else { Int::zero() })
        .collect();
    CokernelPresentation { factors, projection: snf.u }
}

/// A basis (as columns) of the lattice spanned by the columns of `g`.
pub fn lattice_basis(g: &IntMatrix) -> IntMatrix {
    let full = smith_with_inverses(g);
    let d = &full.decomposition;
    let mut basis = full.u_inv.column_range(0, d.rank);
    for k in 0..d.rank {
        let s = d.s[(k, k)].clone();
        for i in 0..basis.rows() {
            basis[(i, k)] *= &s;
        }
    }
    basis
}

/// Integer left inverse of a matrix whose columns form a saturated basis.
pub fn saturated_left_inverse(z: &IntMatrix) -> Result<IntMatrix> {
    let full = smith_with_inverses(z);
    let d = &full.decomposition;
    if d.rank != z.cols() || (0..d.rank).any(|k| !d.s[(k, k)].is_one()) {
        return Err(Error::Internal("columns do not span a saturated lattice".into()));
    }
    let top = d.u.row_range(0, d.rank);
    Ok(&d.v * &top)
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &IntMatrix) -> Result<Int> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Int::one());
    }
    let mut a = m.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(Int::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = v / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithDecomposition {
        let d = smith_normal_form(m);
        assert_eq!(&(&d.u * m) * &d.v, d.s);
        for i in 0..d.s.rows() {
            for j in 0..d.s.cols() {
                if i != j {
                    assert!(d.s[(i, j)].is_zero());
                }
            }
        }
        for k in 1..d.rank {
            assert!(d.s[(k, k)].is_multiple_of(&d.s[(k - 1, k - 1)]));
        }
        d
    }

    #[test]
    fn empty_matrix() {
        let d = check(&IntMatrix::zeros(0, 0));
        assert_eq!(d.rank, 0);
        assert_eq!(d.u, IntMatrix::identity(0));
    }

    #[test]
    fn identity_is_fixed() {
        let d = check(&IntMatrix::identity(4));
        assert_eq!(d.s, IntMatrix::identity(4));
    }

    #[test]
    fn two_by_two_example() {
        let d = check(&IntMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(d.invariant_factors(), vec![Int::from(2), Int::from(4)]);
        assert!(determinant(&d.u).unwrap().abs().is_one());
        assert!(determinant(&d.v).unwrap().abs().is_one());
    }

    #[test]
    fn inverses_are_tracked() {
        let m = IntMatrix::from_rows(&[[3, 5, 7], [2, -4, 6], [0, 9, 1]]);
        let f = smith_with_inverses(&m);
        assert_eq!(&f.decomposition.u * &f.u_inv, IntMatrix::identity(3));
        assert_eq!(&f.decomposition.v * &f.v_inv, IntMatrix::identity(3));
    }

    #[test]
    fn parity_obstruction() {
        let a = IntMatrix::from_rows(&[[2]]);
        assert!(solve_integer_system(&a, &IntMatrix::from_rows(&[[3]])).unwrap().is_none());
    }

    #[test]
    fn bezout_solution() {
        let a = IntMatrix::from_rows(&[[2, 3]]);
        let b = IntMatrix::from_rows(&[[1]]);
        let x = solve_integer_system(&a, &b).unwrap().unwrap();
        assert_eq!(&a * &x, b);
    }

    #[test]
    fn identity_system() {
        let b = IntMatrix::from_rows(&[[1, -7], [4, 0], [2, 2]]);
        let x = solve_integer_system(&IntMatrix::identity(3), &b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn mismatched_system() {
        let a = IntMatrix::zeros(2, 2);
        assert!(solve_integer_system(&a, &IntMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
        assert_eq!(kernel_basis(&IntMatrix::zeros(2, 3)).cols(), 3);
        let k = kernel_basis(&IntMatrix::from_rows(&[[1, 1], [1, 1]]));
        assert_eq!(k.cols(), 1);
        assert_eq!(k[(0, 0)], -k[(1, 0)].clone());
        assert!(k[(0, 0)].abs().is_one());
    }

    #[test]
    fn cokernels() {
        let c = cokernel_presentation(&IntMatrix::zeros(2, 0));
        assert_eq!(c.factors, vec![Int::zero(), Int::zero()]);
        let c = cokernel_presentation(&IntMatrix::from_rows(&[[2]]));
        assert_eq!(c.factors, vec![Int::from(2)]);
        let c = cokernel_presentation(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(c.factors, vec![Int::from(1), Int::from(6)]);
        assert_eq!(c.nontrivial_factors(), vec![Int::from(6)]);
    }

    #[test]
    fn lattice_and_left_inverse() {
        let g = IntMatrix::from_rows(&[[2, 4, 6], [0, 2, 2]]);
        let b = lattice_basis(&g);
        assert_eq!(b.cols(), 2);
        // every generator is an integer combination of the basis
        assert!(solve_integer_system(&b, &g).unwrap().is_some());
        let z = kernel_basis(&IntMatrix::from_rows(&[[1, 2, 3]]));
        let l = saturated_left_inverse(&z).unwrap();
        assert_eq!(&l * &z, IntMatrix::identity(2));
    }

    #[test]
    fn bareiss() {
        let m = IntMatrix::from_rows(&[[2, 0, 1], [1, 3, 2], [1, 1, 2]]);
        assert_eq!(determinant(&m).unwrap(), Int::from(6));
        assert!(determinant(&IntMatrix::from_rows(&[[2, 0, 1], [1, 3, 2], [1, 1, 1]])).unwrap().is_zero());
        assert_eq!(determinant(&IntMatrix::from_rows(&[[0, 1], [1, 0]])).unwrap(), Int::from(-1));
    }
}
