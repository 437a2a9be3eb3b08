//! Finite groups, the integral group ring `Z[G]`, and matrices over it.

mod element;
mod group;
mod matrix;

pub use element::GroupRingElement;
pub use group::{FiniteGroup, GroupIso};
pub use matrix::{solve_equivariant, solve_equivariant_with, translation_matrix, GroupRingMatrix, LiftChoice};
