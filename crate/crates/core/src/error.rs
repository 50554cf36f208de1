use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not Hermitian (max |M - M†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A Bloch vector longer than one does not describe a density operator.
    #[error("Bloch vector norm {norm} exceeds 1: not a positive operator")]
    Positivity { norm: f64 },

    /// A separable-only construction was requested for an entangled Werner state.
    #[error(
        "q = {q} > 1/3: local Bloch vectors would need |a| = sqrt(3q) = {bloch_norm} > 1, \
         so the local density operators are not positive"
    )]
    Domain { q: f64, bloch_norm: f64 },

    #[error("not a valid density matrix: {property} (deviation {deviation:e})")]
    InvalidDensityMatrix {
        property: &'static str,
        deviation: f64,
    },

    #[error("measurement axis must be a unit vector, got norm {norm}")]
    NonUnitAxis { norm: f64 },

    #[error("expectation value has imaginary part {imag:e}")]
    ImaginaryResidue { imag: f64 },
}
