use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library reports.
///
/// Domain violations (a matrix failing a cone or effect check) are kept apart
/// from contract violations (a black box that is not a morphism), since the
/// CLI maps them to different exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is not an effect (eigenvalues {lo:e}, {hi:e} outside [0, 1])")]
    NotEffect { lo: f64, hi: f64 },
    #[error("matrix is singular (|det| = {det:e})")]
    Singular { det: f64 },
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("unitary does not have determinant 1 (|det - 1| = {deviation:e})")]
    NotSpecialUnitary { deviation: f64 },
    #[error("matrix is not a rotation (orthogonality defect {orthogonality:e}, det {det})")]
    NotRotation { orthogonality: f64, det: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("black box returned a matrix outside the positive definite cone: {0}")]
    NotPositiveOutput(String),
    #[error("black box returned a matrix outside the effect algebra: {0}")]
    NotEffectOutput(String),
    #[error("map violates the Jordan triple law (residual {residual:e})")]
    NotJte { residual: f64 },
    #[error("map is not log-linear (residual {residual:e})")]
    NotLinear { residual: f64 },
    #[error("traceless block has scale p = {p}, but a Jordan triple endomorphism forces p = 1")]
    ScaleNotOne { p: f64 },
    #[error("traceless block is not a multiple of an isometry (defect {defect:e}, p = {p})")]
    NotIsometry { p: f64, defect: f64 },
    #[error("classified form does not reproduce the black box (residual {residual:e})")]
    VerificationFailed { residual: f64 },

    #[error("map is not homogeneous with exponent {exponent} (residual {residual:e})")]
    NotHomogeneous { exponent: f64, residual: f64 },
    #[error("first effect is not dominated by the second")]
    NotDominated,
    #[error("dominating effect is singular")]
    SingularBase,
    #[error("map violates the sequential product law (residual {residual:e})")]
    NotSeqEndo { residual: f64 },
    #[error("image of the identity is not a projection (defect {defect:e})")]
    NotProjectionAtI { defect: f64 },
    #[error("recovered form is not effect-valued: {0}")]
    NotEffectValued(String),
}

impl Error {
    /// True for errors meaning "the input map breaks a mathematical law",
    /// as opposed to malformed input.
    pub fn is_contract_violation(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveOutput(_)
                | Error::NotEffectOutput(_)
                | Error::NotJte { .. }
                | Error::NotLinear { .. }
                | Error::ScaleNotOne { .. }
                | Error::NotIsometry { .. }
                | Error::VerificationFailed { .. }
                | Error::NotHomogeneous { .. }
                | Error::NotSeqEndo { .. }
                | Error::NotProjectionAtI { .. }
                | Error::NotEffectValued(_)
        )
    }
}
