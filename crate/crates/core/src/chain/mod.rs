//! Free chain complexes over `Z[G]`: augmentations, basis-spanned
//! subcomplexes, chain maps and homotopies, cones and cylinders, and
//! homology with its induced group action.

mod complex;
mod cone;
mod homology;
mod maps;
mod module;
mod presentation;

pub use complex::{AugmentedComplex, ChainComplex, SubcomplexMarker};
pub use cone::{algebraic_mapping_cylinder, mapping_cone, MappingCone, MappingCylinder};
pub use homology::{homology, is_acyclic_below, is_exact_between, reduced_homology, reduced_homology0, Homology};
pub use maps::{ChainHomotopy, ChainMap};
pub use module::{PiModule, PiModuleHom};
pub use presentation::{fox_derivative, presentation_complex, Word};
