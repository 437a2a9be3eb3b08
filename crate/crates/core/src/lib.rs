//! Exact engine for relative first k-invariants of free chain complexes over
//! integral group rings of finite groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactlinalg`]: Smith normal form and integer solving.
//! * [`groupring`]: finite groups, `Z[G]`, and matrices over it.
//! * [`chain`]: augmented complexes, cones, cylinders, homology with its
//!   group action.
//! * [`lifting`]: resolutions, augmentation-preserving lifts, relative chain
//!   homotopies.
//! * [`kinvariant`]: the k-invariant cocycle, cohomology classes on mapping
//!   cones, and the extension decision procedure.
//! * [`catalog`] and [`format`]: bundled example complexes and the JSON
//!   exchange format.

pub mod catalog;
pub mod chain;
pub mod checks;
pub mod error;
pub mod exactlinalg;
pub mod format;
pub mod groupring;
pub mod kinvariant;
pub mod lifting;

pub use error::{Error, Result};
pub use exactlinalg::{Int, IntMatrix};
