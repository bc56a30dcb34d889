use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("traced legs have different dimensions ({0} vs {1})")]
    UnequalTracedDims(usize, usize),

    #[error("malformed contraction spec `{0}`")]
    BadSpec(String),

    #[error("not a dagger Frobenius algebra: {0}")]
    NotAnAlgebra(String),

    #[error("no normaliser: {0}")]
    NoNormaliser(String),

    #[error("object has no normaliser attached")]
    MissingNormaliser,

    #[error("numerical rank is ambiguous: singular value {value:e} is too close to the cut {cut:e}")]
    RankAmbiguity { value: f64, cut: f64 },

    #[error("standard form failed: {0}")]
    StandardForm(String),

    #[error("algebra is not commutative (residual {0:e})")]
    NotCommutative(f64),

    #[error("objects do not match: {0}")]
    ObjectMismatch(String),

    #[error("not a basis: {0}")]
    NotABasis(String),

    #[error("domain is not the trivial algebra")]
    NotTrivialDomain,

    #[error("object is not a pair-of-pants algebra: {0}")]
    NotPants(String),

    #[error("malformed groupoid table: {0}")]
    MalformedGroupoid(String),

    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),

    #[error("not a groupoid algebra: {0}")]
    NotAGroupoidAlgebra(String),

    #[error("size {got} exceeds the supported bound {max}")]
    SizeBound { got: usize, max: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
