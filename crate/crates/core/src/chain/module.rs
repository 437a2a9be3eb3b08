use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlinalg::{kernel_basis, lattice_basis, solve_integer_system, Int, IntMatrix};
use crate::groupring::{FiniteGroup, GroupIso};

/// A finitely generated abelian group `Z^g / im(relations)` with a left
/// `G`-action given by one integer matrix per group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiModule {
    group: Arc<FiniteGroup>,
    gens: usize,
    relations: IntMatrix,
    action: Vec<IntMatrix>,
}

impl PiModule {
    /// Assembles and checks the action law modulo relations.
    pub fn new(group: Arc<FiniteGroup>, gens: usize, relations: IntMatrix, action: Vec<IntMatrix>) -> Result<Self> {
        let m = Self::from_parts(group, gens, relations, action)?;
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_parts(group: Arc<FiniteGroup>, gens: usize, relations: IntMatrix, action: Vec<IntMatrix>) -> Result<Self> {
        if relations.rows() != gens {
            return Err(Error::InvalidModule(format!(
                "relations have {} rows for {gens} generators",
                relations.rows()
            )));
        }
        if action.len() != group.order() || action.iter().any(|a| a.rows() != gens || a.cols() != gens) {
            return Err(Error::InvalidModule("need one g x g action matrix per group element".into()));
        }
        Ok(PiModule { group, gens, relations, action })
    }

    /// `Z` with trivial action.
    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let action = vec![IntMatrix::identity(1); group.order()];
        PiModule { group, gens: 1, relations: IntMatrix::zeros(1, 0), action }
    }

    /// `Z` with `g` acting by `signs[g]` (a homomorphism to `{1, -1}`).
    pub fn sign(group: Arc<FiniteGroup>, signs: &[i64]) -> Result<Self> {
        let action = signs.iter().map(|&s| IntMatrix::from_rows(&[[s]])).collect();
        Self::new(group, 1, IntMatrix::zeros(1, 0), action)
    }

    /// The zero module.
    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let action = vec![IntMatrix::zeros(0, 0); group.order()];
        PiModule { group, gens: 0, relations: IntMatrix::zeros(0, 0), action }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.action
    }

    /// Whether every column of `v` lies in the relation lattice.
    pub fn is_zero_element(&self, v: &IntMatrix) -> bool {
        if v.is_zero() {
            return true;
        }
        if self.relations.cols() == 0 {
            return false;
        }
        if let Some(d) = self.diagonal_relations() {
            return (0..v.rows()).all(|i| {
                (0..v.cols()).all(|j| match &d[i] {
                    Some(s) => v[(i, j)].is_multiple_of(s),
                    None => v[(i, j)].is_zero(),
                })
            });
        }
        matches!(solve_integer_system(&self.relations, v), Ok(Some(_)))
    }

    // Relations that are a set of multiples of distinct unit vectors.
    fn diagonal_relations(&self) -> Option<Vec<Option<Int>>> {
        let mut d: Vec<Option<Int>> = vec![None; self.gens];
        for j in 0..self.relations.cols() {
            let mut hit = None;
            for i in 0..self.gens {
                if !self.relations[(i, j)].is_zero() {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(i);
                }
            }
            if let Some(i) = hit {
                if d[i].is_some() {
                    return None;
                }
                d[i] = Some(self.relations[(i, j)].abs());
            }
        }
        Some(d)
    }

    /// Reduces coordinates with a cyclic relation into `[0, s)`; other
    /// coordinates are left alone.
    pub fn reduce(&self, v: &IntMatrix) -> IntMatrix {
        let mut out = v.clone();
        if let Some(d) = self.diagonal_relations() {
            for (i, s) in d.iter().enumerate() {
                if let Some(s) = s {
                    for j in 0..out.cols() {
                        out[(i, j)] = out[(i, j)].mod_floor(s);
                    }
                }
            }
        }
        out
    }

    pub fn is_trivial_group(&self) -> bool {
        self.is_zero_element(&IntMatrix::identity(self.gens))
    }

    /// Checks that relations are preserved and `a(g) a(h) = a(gh)` modulo relations.
    pub fn validate(&self) -> Result<()> {
        let n = self.group.order();
        if !self.is_zero_element(&(&self.action[0] - &IntMatrix::identity(self.gens))) {
            return Err(Error::InvalidModule("the identity does not act trivially".into()));
        }
        for g in 0..n {
            if !self.is_zero_element(&(&self.action[g] * &self.relations)) {
                return Err(Error::InvalidModule(format!("element {g} does not preserve the relations")));
            }
        }
        for g in 0..n {
            for h in 0..n {
                let lhs = &self.action[g] * &self.action[h];
                if !self.is_zero_element(&(&lhs - &self.action[self.group.mul(g, h)])) {
                    return Err(Error::InvalidModule(format!("action law fails for ({g}, {h})")));
                }
            }
        }
        Ok(())
    }

    /// Restriction of scalars along `u: H -> G`: `h` acts as `u(h)`.
    pub fn restrict(&self, u: &GroupIso) -> Result<PiModule> {
        if **u.target() != *self.group {
            return Err(Error::GroupMismatch);
        }
        let action = (0..u.source().order()).map(|h| self.action[u.apply(h)].clone()).collect();
        Ok(PiModule { group: u.source().clone(), gens: self.gens, relations: self.relations.clone(), action })
    }

    /// Same abelian group and action, possibly different groups of the same
    /// table.
    pub fn same_as(&self, other: &PiModule) -> bool {
        *self.group == *other.group
            && self.gens == other.gens
            && self.relations == other.relations
            && self.action == other.action
    }

    /// Short human-readable description, e.g. `Z/2 + Z`.
    pub fn describe(&self) -> String {
        let d = self.diagonal_relations();
        if self.gens == 0 {
            return "0".into();
        }
        match d {
            Some(d) => d
                .iter()
                .map(|s| match s {
                    Some(s) => format!("Z/{s}"),
                    None => "Z".into(),
                })
                .collect::<Vec<_>>()
                .join(" + "),
            None => format!("Z^{} / ({} relations)", self.gens, self.relations.cols()),
        }
    }
}

/// A homomorphism of `G`-modules, optionally equivariant along an
/// isomorphism `u` from the source group to the target group
/// (`F(g x) = u(g) F(x)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiModuleHom {
    source: PiModule,
    target: PiModule,
    matrix: IntMatrix,
    u: Option<GroupIso>,
}

impl PiModuleHom {
    pub fn new(source: PiModule, target: PiModule, matrix: IntMatrix, u: Option<GroupIso>) -> Result<Self> {
        let f = PiModuleHom { source, target, matrix, u };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(m: &PiModule) -> Self {
        PiModuleHom { source: m.clone(), target: m.clone(), matrix: IntMatrix::identity(m.gens()), u: None }
    }

    pub fn zero(source: &PiModule, target: &PiModule) -> Self {
        PiModuleHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.gens(), source.gens()),
            u: None,
        }
    }

    pub fn source(&self) -> &PiModule {
        &self.source
    }

    pub fn target(&self) -> &PiModule {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn iso(&self) -> Option<&GroupIso> {
        self.u.as_ref()
    }

    /// Image of the group element `g` of the source group.
    pub fn map_group_element(&self, g: usize) -> usize {
        self.u.as_ref().map_or(g, |u| u.apply(g))
    }

    pub fn validate(&self) -> Result<()> {
        if self.matrix.rows() != self.target.gens() || self.matrix.cols() != self.source.gens() {
            return Err(Error::DimensionMismatch(format!(
                "homomorphism matrix is {}x{}, expected {}x{}",
                self.matrix.rows(),
                self.matrix.cols(),
                self.target.gens(),
                self.source.gens()
            )));
        }
        match &self.u {
            Some(u) => {
                if **u.source() != **self.source.group() || **u.target() != **self.target.group() {
                    return Err(Error::GroupMismatch);
                }
            }
            None => {
                if **self.source.group() != **self.target.group() {
                    return Err(Error::GroupMismatch);
                }
            }
        }
        if !self.target.is_zero_element(&(&self.matrix * self.source.relations())) {
            return Err(Error::InvalidModule("relations are not mapped to relations".into()));
        }
        for g in 0..self.source.group().order() {
            let lhs = &self.matrix * self.source.action(g);
            let rhs = self.target.action(self.map_group_element(g)) * &self.matrix;
            if !self.target.is_zero_element(&(&lhs - &rhs)) {
                return Err(Error::NotEquivariant(format!("fails for group element {g}")));
            }
        }
        Ok(())
    }

    /// Generators of the lattice of matrices defining equivariant
    /// homomorphisms `source -> target` (along `u` when given). Matrices
    /// whose columns lie in the target relations are included.
    pub fn lattice(source: &PiModule, target: &PiModule, u: Option<&GroupIso>) -> Result<Vec<IntMatrix>> {
        let (g, h) = (source.gens(), target.gens());
        let rel = target.relations();
        let m = rel.cols();
        let nf = g * h;
        let order = source.group().order();
        // unknowns: vec F, then one slack block per constraint family
        let families = 1 + order;
        let slack_sizes: Vec<usize> = std::iter::once(m * source.relations().cols()).chain((0..order).map(|_| m * g)).collect();
        let total = nf + slack_sizes.iter().sum::<usize>();
        let eq_sizes: Vec<usize> = std::iter::once(h * source.relations().cols()).chain((0..order).map(|_| h * g)).collect();
        let mut a = IntMatrix::zeros(eq_sizes.iter().sum(), total);
        let id_h = IntMatrix::identity(h);
        let (mut row, mut col) = (0, nf);
        for fam in 0..families {
            let (lin, cols_here) = if fam == 0 {
                (source.relations().transpose().kron(&id_h), source.relations().cols())
            } else {
                let x = fam - 1;
                let tx = u.map_or(x, |u| u.apply(x));
                let lhs = source.action(x).transpose().kron(&id_h);
                let rhs = IntMatrix::identity(g).kron(target.action(tx));
                (&lhs - &rhs, g)
            };
            a.set_block(row, 0, &lin);
            a.set_block(row, col, &IntMatrix::identity(cols_here).kron(rel).scale(&Int::from(-1)));
            row += eq_sizes[fam];
            col += slack_sizes[fam];
        }
        let kernel = kernel_basis(&a);
        let projected = kernel.row_range(0, nf);
        let basis = lattice_basis(&projected);
        (0..basis.cols())
            .map(|j| IntMatrix::from_vectorized(h, g, &basis.column(j)))
            .collect()
    }

    /// `self o other`.
    pub fn compose(&self, other: &PiModuleHom) -> Result<Self> {
        if !other.target.same_as(&self.source) {
            return Err(Error::MismatchedClasses);
        }
        let u = match (&self.u, &other.u) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => {
                let map = b.map().iter().map(|&x| a.apply(x)).collect();
                Some(GroupIso::new(b.source().clone(), a.target().clone(), map)?)
            }
        };
        Ok(PiModuleHom {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: &self.matrix * &other.matrix,
            u,
        })
    }
}
