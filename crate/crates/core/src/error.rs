use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("extension degree {requested} exceeds the cap {cap}")]
    ExtensionCap { requested: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not invariant: {0}")]
    NotInvariant(String),
    #[error("modules are over different algebras")]
    AlgebraMismatch,
    #[error("module dimension {requested} exceeds the cap {cap}")]
    DimensionCap { requested: usize, cap: usize },
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("operation needs a p-map but the algebra is not restricted")]
    NotRestricted,
    #[error("algebra has a nontrivial centre and no faithful representation was supplied")]
    NoFaithfulRepresentation,
    #[error("the p-envelope is not generated by the subalgebra: {0}")]
    NotGenerated(String),
    #[error("defect operator of basis vector {0} is not scalar")]
    NonScalarDefect(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
