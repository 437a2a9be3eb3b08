use crate::chain::PiModule;
use crate::error::{Error, Result};
use crate::exactlinalg::{Int, IntMatrix, LinearSolver};
use crate::groupring::{translation_matrix, FiniteGroup, GroupRingMatrix};

/// Coefficient matrix of `a` at group element `g`: entry `(i, j)` is the
/// `g`-coefficient of `a_ij`.
pub(crate) fn coefficient_slice(a: &GroupRingMatrix, g: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(a.rows(), a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m[(i, j)] = a.coeff(i, j, g).clone();
        }
    }
    m
}

/// `c o a` for an equivariant cochain `c: Z[G]^r -> M` (column `j` is
/// `c(e_j)`) and `a: Z[G]^s -> Z[G]^r`.
pub fn precompose(module: &PiModule, c: &IntMatrix, a: &GroupRingMatrix) -> Result<IntMatrix> {
    if c.rows() != module.gens() || c.cols() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "cochain is {}x{}, cannot precompose with a {}x{} matrix into {} generators",
            c.rows(),
            c.cols(),
            a.rows(),
            a.cols(),
            module.gens()
        )));
    }
    let mut out = IntMatrix::zeros(module.gens(), a.cols());
    for g in 0..a.group().order() {
        let slice = coefficient_slice(a, g);
        if slice.is_zero() {
            continue;
        }
        out = &out + &(&(module.action(g) * c) * &slice);
    }
    Ok(out)
}

/// The matrix of `vec(c) -> vec(phi * (c o a))` for cochains with
/// `gens` generators acted on by `action`.
pub(crate) fn precompose_operator(action: &[IntMatrix], phi: &IntMatrix, a: &GroupRingMatrix) -> IntMatrix {
    let gens = phi.cols();
    let mut op = IntMatrix::zeros(phi.rows() * a.cols(), gens * a.rows());
    for (g, act) in action.iter().enumerate() {
        let slice = coefficient_slice(a, g);
        if slice.is_zero() {
            continue;
        }
        op = &op + &slice.transpose().kron(&(phi * act));
    }
    op
}

/// Identifier of an unknown in an [`EquivariantSystem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unknown(usize);

#[derive(Clone, Debug)]
struct UnknownSpec {
    gens: usize,
    cols: usize,
    action: Vec<IntMatrix>,
}

#[derive(Clone, Debug)]
struct Term {
    unknown: Unknown,
    phi: IntMatrix,
    b: GroupRingMatrix,
}

#[derive(Clone, Debug)]
struct Block {
    rhs: IntMatrix,
    relations: IntMatrix,
    terms: Vec<Term>,
}

/// A linear system in equivariant cochains `X_u: Z[G]^{r_u} -> M_u` of the
/// shape `sum phi * (X_u o B) = rhs` (modulo a relation lattice), per block.
///
/// Chain maps between free modules are cochains into the free module with
/// the translation action; their values are [`GroupRingMatrix::basis_images`].
#[derive(Clone, Debug)]
pub struct EquivariantSystem {
    group: std::sync::Arc<FiniteGroup>,
    unknowns: Vec<UnknownSpec>,
    blocks: Vec<Block>,
}

/// Values of all unknowns in a solution.
#[derive(Clone, Debug)]
pub struct SystemSolution {
    values: Vec<IntMatrix>,
}

impl SystemSolution {
    pub fn value(&self, u: Unknown) -> &IntMatrix {
        &self.values[u.0]
    }
}

impl EquivariantSystem {
    pub fn new(group: std::sync::Arc<FiniteGroup>) -> Self {
        EquivariantSystem { group, unknowns: Vec::new(), blocks: Vec::new() }
    }

    /// A cochain `Z[G]^cols -> module`.
    pub fn cochain(&mut self, module: &PiModule, cols: usize) -> Unknown {
        self.unknowns.push(UnknownSpec { gens: module.gens(), cols, action: module.actions().to_vec() });
        Unknown(self.unknowns.len() - 1)
    }

    /// A `rows x cols` matrix over `Z[G]`.
    pub fn map(&mut self, rows: usize, cols: usize) -> Unknown {
        let action = (0..self.group.order()).map(|g| translation_matrix(&self.group, rows, g)).collect();
        self.unknowns.push(UnknownSpec { gens: rows * self.group.order(), cols, action });
        Unknown(self.unknowns.len() - 1)
    }

    /// Number of generators of an unknown's value module.
    pub fn gens(&self, u: Unknown) -> usize {
        self.unknowns[u.0].gens
    }

    /// Starts an equation block with right-hand side `rhs` holding modulo
    /// the column lattice of `relations` (applied to every column).
    pub fn equation(&mut self, rhs: IntMatrix, relations: IntMatrix) -> usize {
        self.blocks.push(Block { rhs, relations, terms: Vec::new() });
        self.blocks.len() - 1
    }

    /// Adds `phi * (X o b)` to the left side of `block`.
    pub fn term(&mut self, block: usize, unknown: Unknown, phi: IntMatrix, b: GroupRingMatrix) -> Result<()> {
        let spec = &self.unknowns[unknown.0];
        let blk = &self.blocks[block];
        if phi.cols() != spec.gens || b.rows() != spec.cols || phi.rows() != blk.rhs.rows() || b.cols() != blk.rhs.cols() {
            return Err(Error::DimensionMismatch(format!(
                "term with phi {}x{} and B {}x{} does not fit an unknown {}x{} and block {}x{}",
                phi.rows(),
                phi.cols(),
                b.rows(),
                b.cols(),
                spec.gens,
                spec.cols,
                blk.rhs.rows(),
                blk.rhs.cols()
            )));
        }
        self.blocks[block].terms.push(Term { unknown, phi, b });
        Ok(())
    }

    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        let mut out = Vec::with_capacity(self.unknowns.len() + 1);
        for u in &self.unknowns {
            out.push(acc);
            acc += u.gens * u.cols;
        }
        out.push(acc);
        out
    }

    /// The coefficient matrix (unknowns, then one slack block per equation
    /// block) and the stacked right-hand side.
    fn assemble(&self) -> (IntMatrix, IntMatrix, Vec<usize>) {
        let offsets = self.offsets();
        let vars = *offsets.last().unwrap_or(&0);
        let slack: usize = self.blocks.iter().map(|b| b.relations.cols() * b.rhs.cols()).sum();
        let eqs: usize = self.blocks.iter().map(|b| b.rhs.rows() * b.rhs.cols()).sum();
        let mut a = IntMatrix::zeros(eqs, vars + slack);
        let mut rhs = IntMatrix::zeros(eqs, 1);
        let (mut row, mut scol) = (0, vars);
        for blk in &self.blocks {
            for t in &blk.terms {
                let spec = &self.unknowns[t.unknown.0];
                let op = precompose_operator(&spec.action, &t.phi, &t.b);
                a.add_block(row, offsets[t.unknown.0], &op);
            }
            if blk.relations.cols() > 0 {
                let rel = IntMatrix::identity(blk.rhs.cols()).kron(&blk.relations);
                a.set_block(row, scol, &rel.scale(&Int::from(-1)));
                scol += rel.cols();
            }
            rhs.set_block(row, 0, &IntMatrix::column_vector(&blk.rhs.vectorize()));
            row += blk.rhs.rows() * blk.rhs.cols();
        }
        (a, rhs, offsets)
    }

    fn split(&self, x: &IntMatrix, offsets: &[usize]) -> SystemSolution {
        let values = self
            .unknowns
            .iter()
            .enumerate()
            .map(|(k, u)| {
                let part = &x.column(0)[offsets[k]..offsets[k] + u.gens * u.cols];
                IntMatrix::from_vectorized(u.gens, u.cols, part).expect("sizes match by construction")
            })
            .collect();
        SystemSolution { values }
    }

    /// Some integer solution, or `None`.
    pub fn solve(&self) -> Result<Option<SystemSolution>> {
        let (a, rhs, offsets) = self.assemble();
        if a.rows() == 0 {
            return Ok(Some(self.split(&IntMatrix::zeros(a.cols(), 1), &offsets)));
        }
        Ok(LinearSolver::new(&a).solve(&rhs)?.map(|x| self.split(&x, &offsets)))
    }

    /// Factors the system once so that many partial assignments of `fixed`
    /// can be completed quickly.
    pub fn with_fixed(&self, fixed: Unknown) -> PartialSolver {
        let (a, rhs, offsets) = self.assemble();
        let lo = offsets[fixed.0];
        let hi = offsets[fixed.0 + 1];
        let free_cols: Vec<usize> = (0..a.cols()).filter(|c| *c < lo || *c >= hi).collect();
        let fixed_cols: Vec<usize> = (lo..hi).collect();
        PartialSolver {
            solver: LinearSolver::new(&a.select_columns(&free_cols)),
            fixed_part: a.select_columns(&fixed_cols),
            rhs,
            spec: self.unknowns[fixed.0].clone(),
        }
    }
}

/// See [`EquivariantSystem::with_fixed`].
pub struct PartialSolver {
    solver: LinearSolver,
    fixed_part: IntMatrix,
    rhs: IntMatrix,
    spec: UnknownSpec,
}

impl PartialSolver {
    /// Shape `(gens, cols)` of the fixed unknown.
    pub fn shape(&self) -> (usize, usize) {
        (self.spec.gens, self.spec.cols)
    }

    /// Whether the remaining unknowns can be solved for once the fixed
    /// unknown takes the value `x`.
    pub fn completes(&self, x: &IntMatrix) -> Result<bool> {
        let b = &self.rhs - &(&self.fixed_part * &IntMatrix::column_vector(&x.vectorize()));
        Ok(self.solver.solve(&b)?.is_some())
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    #[test]
    fn precompose_matches_operator() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let m = PiModule::trivial(g.clone());
        let a = GroupRingMatrix::from_i64(g.clone(), &[vec![vec![1, 1, 1], vec![2, 0, -1]]]).unwrap();
        let c = IntMatrix::from_rows(&[[5]]);
        let direct = precompose(&m, &c, &a).unwrap();
        assert_eq!(direct, IntMatrix::from_rows(&[[15, 5]]));
        let op = precompose_operator(m.actions(), &IntMatrix::identity(1), &a);
        assert_eq!((&op * &IntMatrix::column_vector(&c.vectorize())).column(0), direct.vectorize());
    }

    #[test]
    fn system_recovers_a_lift() {
        // solve d X = B over Z[C2] for d = 1 + t, B = 2 + 2t
        let g = Arc::new(FiniteGroup::cyclic(2));
        let d = GroupRingMatrix::from_i64(g.clone(), &[vec![vec![1, 1]]]).unwrap();
        let b = GroupRingMatrix::from_i64(g.clone(), &[vec![vec![2, 2]]]).unwrap();
        let mut sys = EquivariantSystem::new(g.clone());
        let x = sys.map(1, 1);
        let blk = sys.equation(b.basis_images(), IntMatrix::zeros(2, 0));
        sys.term(blk, x, d.flatten(), GroupRingMatrix::identity(g.clone(), 1)).unwrap();
        let sol = sys.solve().unwrap().unwrap();
        let xm = GroupRingMatrix::from_basis_images(g, 1, sol.value(x)).unwrap();
        assert_eq!(d.compose(&xm).unwrap(), b);
    }
}
