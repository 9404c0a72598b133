use thiserror::Error;

/// Errors raised by the algebra, weak Hopf and deformation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid block structure: {0}")]
    InvalidBlocks(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("element is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("element is not positive (min eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("element is singular (min singular value {0:.3e})")]
    Singular(f64),
    #[error("span is not closed under product and adjoint (residual {0:.3e})")]
    NotAnAlgebra(f64),
    #[error("randomized structure recovery failed after {0} attempts")]
    DegenerateRandomization(usize),
    #[error("gauge does not satisfy E_Z(g) = 1 (residual {0:.3e})")]
    GaugeNotNormalized(f64),
    #[error("element is not separating: {0}")]
    NotSeparating(String),
    #[error("linear system has no solution (residual {0:.3e})")]
    NoSolution(f64),
    #[error("linear system has a {0}-dimensional solution space")]
    NonUniqueSolution(usize),
    #[error("structure recovery failed: {0}")]
    StructureRecoveryFailed(String),
    #[error("canonical element algorithms disagree (difference {0:.3e})")]
    CrossCheckMismatch(f64),
    #[error("canonical element is not invertible (min singular value {0:.3e})")]
    NotInvertible(f64),
    #[error("base algebra is abelian: the only admissible element is k = q")]
    AbelianBaseOnlyTrivial,
    #[error("element is not admissible: {0}")]
    NotAdmissible(String),
    #[error("postcondition violated: {0}")]
    PostconditionViolated(String),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
