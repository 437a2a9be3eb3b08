use thiserror::Error;

/// Errors raised by the engine.
///
/// Mathematically negative outcomes (an obstruction, a nonzero class) are
/// never errors; they are reported through ordinary return values.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operands live over different groups")]
    GroupMismatch,

    #[error("multiplication table is not square or has an entry out of range")]
    MalformedTable,

    #[error("no two-sided identity element")]
    MissingIdentity,

    #[error("identity element must have index 0, found it at {0}")]
    IdentityNotFirst(usize),

    #[error("element {0} has no inverse")]
    MissingInverse(usize),

    #[error("multiplication is not associative on ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),

    #[error("invalid group isomorphism: {0}")]
    InvalidIsomorphism(String),

    #[error("relator {0} is not trivial in the group")]
    RelatorNotTrivial(usize),

    #[error("subcomplex is not closed under the differential in degree {0}")]
    SubcomplexNotClosed(usize),

    #[error("invalid subcomplex marker: {0}")]
    InvalidMarker(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("d_{} o d_{} is not zero", .0 - 1, .0)]
    DifferentialsDoNotCompose(usize),

    #[error("augmentation does not vanish on boundaries")]
    AugmentationNotCycle,

    #[error("augmentation is not surjective onto the integers")]
    AugmentationNotSurjective,

    #[error("not a chain map: {0}")]
    NotAChainMap(String),

    #[error("not a chain homotopy: {0}")]
    InvalidHomotopy(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("module homomorphism is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("lift failed in degree {degree}: {reason}")]
    LiftFailed { degree: usize, reason: String },

    #[error("complex is not acyclic in dimensions < {0}")]
    NotAcyclic(usize),

    #[error("resolution is not exact in degree {0}")]
    NotExact(usize),

    #[error("cocycle check failed: {0}")]
    CocycleCheckFailed(String),

    #[error("classes live on different cones or coefficient modules")]
    MismatchedClasses,

    #[error("internal identity failed: {0}")]
    Internal(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
