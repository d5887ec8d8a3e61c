use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not symmetric: deviation {deviation:e} exceeds {tolerance:e}")]
    Asymmetric { deviation: f64, tolerance: f64 },

    #[error("zero matrix: the orthogonal slice is the whole cone")]
    ZeroMatrix,

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("no nonzero point of the slice found after {restarts} restarts")]
    SamplingExhausted { restarts: usize },

    #[error("matrix is not singular and indefinite (inertia {n_plus}/{n_minus}/{n_zero})")]
    NotSingularIndefinite { n_plus: usize, n_minus: usize, n_zero: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("indefiniteness lost along the complement path: lambda_min = {lambda_min:e}")]
    IndefinitenessLost { lambda_min: f64 },

    #[error("face lift needs a rank-deficient witness, got rank {0}")]
    RankTooLarge(usize),

    #[error("slice is not second-order cone representable ({0})")]
    NotSocr(String),

    #[error("matrix is not in the certified slice: {0}")]
    NotInSlice(String),

    #[error("empty parameter interval [{lo:e}, {hi:e}]")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("certificate failed self-verification: {0}")]
    CertificateRejected(String),
}
