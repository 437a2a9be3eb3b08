//! The k-invariant cocycle of a pair, cohomology classes on mapping cones,
//! and the extension decision procedure.

mod class;
mod cochain;
mod cohomology;
mod cw;
mod extension;

pub use class::{
    classes_equal, cone_map, k_invariant, k_invariant_with_alpha, pullback_along, pullback_class, pushforward_coeff,
    restrict_scalars_class, solve_cone_homotopy, theta, CohomologyClass, KInvariant, RelativeDatum,
};
pub use cochain::{precompose, EquivariantSystem, PartialSolver, SystemSolution, Unknown};
pub use cohomology::{cohomology, CohomologyGroup};
pub use extension::{
    brute_force_extension, decide_extension, extension_exists, restrict_problem, verify_extension, ExtensionCertificate,
    ExtensionOutcome, Obstruction, VerificationReport,
};
pub use cw::{
    boundary_vanishing_check, comparison_holds, cw_k_invariant, phi_ev_delta_check, resolution_comparison,
    vanishing_criterion, VanishingComparison,
};
