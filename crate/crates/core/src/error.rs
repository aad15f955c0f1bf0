use thiserror::Error;

/// Errors produced by state construction, validation, and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |M - M^H| entry = {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix trace deviates from 1 by {defect:.3e}")]
    TraceDeviation { defect: f64 },

    #[error("{what} = {value} is outside the admissible range")]
    OutOfDomain { what: &'static str, value: f64 },

    #[error("rotation factor is not proper orthogonal (|R^T R - 1| = {ortho_defect:.3e}, det = {det})")]
    ImproperRotation { ortho_defect: f64, det: f64 },

    #[error("state is not positive semidefinite (min eigenvalue = {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state is not separable (min PPT eigenvalue = {min_ppt_eigenvalue:.3e})")]
    NotSeparable { min_ppt_eigenvalue: f64 },

    #[error("quartic has a complex root pair (max |Im| = {max_imag:.3e}); coefficients do not come from a Hermitian operator")]
    ComplexRoots { max_imag: f64 },

    #[error("root sum {sum:.3e} exceeds the traceless tolerance")]
    RootSumNonzero { sum: f64 },

    #[error("pure part is not a rank-1 projector (defect = {defect:.3e})")]
    InvalidPurePart { defect: f64 },

    #[error("inequality margins and eigenvalue oracle disagree (margins say {margins_verdict}, eigenvalues say {eigen_verdict}; min margin = {min_margin:.3e}, min eigenvalue = {min_eigenvalue:.3e})")]
    CrossCheckMismatch {
        margins_verdict: bool,
        eigen_verdict: bool,
        min_margin: f64,
        min_eigenvalue: f64,
    },

    #[error("transform does not leave the state invariant (deviation = {deviation:.3e})")]
    TransformNotSymmetry { deviation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
