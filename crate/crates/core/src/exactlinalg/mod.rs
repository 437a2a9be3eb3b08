//! Exact integer linear algebra: Smith normal form and everything derived
//! from it (integer solving, saturated kernels, cokernels, lattice bases).

mod matrix;
mod smith;

pub use matrix::{Int, IntMatrix};
pub use smith::{
    cokernel_presentation, determinant, kernel_basis, lattice_basis, saturated_left_inverse,
    smith_normal_form, smith_with_inverses, solve_integer_system, solve_with_kernel,
    CokernelPresentation, FullSmith, IntegerSolution, LinearSolver, SmithDecomposition,
};
