use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {dim}: need at least {min}")]
    InvalidDimension { dim: usize, min: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("truncation too small: tail mass {tail_mass:e} exceeds {limit:e}")]
    TruncationTooSmall { tail_mass: f64, limit: f64 },

    #[error("safe band exhausted: {needed} indices needed, {available} available")]
    SafeBandExhausted { needed: usize, available: usize },

    #[error("parameter `{name}` out of domain: {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("matrix has no kernel: smallest singular value {sigma_min:e} > tolerance {tol:e}")]
    NoKernel { sigma_min: f64, tol: f64 },

    #[error("families cannot be normalized: <xi_0, eta_0> = {overlap:e}")]
    NonNormalizable { overlap: f64 },

    #[error("ill-conditioned span: condition number {cond:e}")]
    Conditioning { cond: f64 },

    #[error("state is not normalized: norm {norm}")]
    NotNormalized { norm: f64 },

    #[error("not in L2: moment of order {power} diverges")]
    NotInL2 { power: usize },

    #[error("integrand not admissible: degree {degree} against decay exponent {decay}")]
    NotAdmissible { degree: usize, decay: f64 },

    #[error("membership oracle inconsistent: m_{r} = {value} exceeds m_{prev_r} = {prev}")]
    InconsistentOracle {
        r: usize,
        value: usize,
        prev_r: usize,
        prev: usize,
    },

    #[error("invalid power profile: {0}")]
    InvalidProfile(String),

    #[error("box product leaf is not regular: offending word {word}")]
    NonRegularLeaf { word: String },

    #[error("closed form inconsistent with matrix model: {what} = {value:e}")]
    Inconsistent { what: &'static str, value: f64 },

    #[error("numerical failure: {0}")]
    Numerical(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
