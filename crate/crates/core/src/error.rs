use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: String, found: String },

    #[error("operation requires a tensor-product basis, found {0}")]
    NotTensorBasis(String),

    #[error("state is not normalized (norm {norm:.15})")]
    NotNormalized { norm: f64 },

    #[error("Fock truncation too small: tail weight {tail:.3e} exceeds {limit:.1e}")]
    TruncationTooSmall { tail: f64, limit: f64 },

    #[error("odd cat state is undefined at zero amplitude")]
    OddCatAtZero,

    #[error("|eta| = {abs} outside the open interval (0, 1)")]
    EtaOutOfRange { abs: f64 },

    #[error("mean spin length {length:.3e} too small to define a squeezing axis")]
    DegenerateMeanSpin { length: f64 },

    #[error("mean spin is not axial: |<S+>| = {abs_s_plus:.3e}")]
    MeanSpinNotAxial { abs_s_plus: f64 },

    #[error("phase grids are not on matching axes: {0}")]
    AxisMismatch(String),

    #[error("invalid spin quantum number j = {0}")]
    InvalidSpin(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
