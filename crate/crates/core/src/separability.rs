//! Peres–Horodecki (PPT) separability test and local measurement statistics.
//!
//! For two qubits a state is separable iff its partial transpose has no
//! negative eigenvalue. The test runs on the numerical spectrum of
//! `ρ^{T_B}`; for the Werner family the spectrum is also available in closed
//! form and serves as an oracle.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, pauli_dot, Complex, ComplexMatrix, DEFAULT_JACOBI_TOL, HERMITIAN_TOL};
use crate::states::{BlochVector, Subsystem, WernerParam};

/// Default negativity threshold of [`ppt_test`].
pub const DEFAULT_PPT_TOL: f64 = 1e-10;

/// Allowed deviation of a measurement axis from unit length.
pub const AXIS_NORM_TOL: f64 = 1e-12;

/// Largest imaginary part an expectation value may carry before it is
/// treated as an error.
pub const IMAG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PptVerdict {
    /// Spectrum of the partial transpose, ascending.
    pub eigenvalues: [f64; 4],
    pub min_eigenvalue: f64,
    /// `min_eigenvalue >= -tol`.
    pub separable: bool,
    pub tol: f64,
}

/// Checks that `rho` is a 4×4 density matrix, up to `tol` in trace and spectrum.
pub fn validate_density_matrix(rho: &ComplexMatrix, tol: f64) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: "4x4 two-qubit operator".into(),
            found: format!("{}x{}", rho.rows(), rho.cols()),
        });
    }
    let deviation = rho.hermitian_deviation();
    if deviation > HERMITIAN_TOL.max(tol) {
        return Err(Error::InvalidDensityMatrix {
            property: "not Hermitian",
            deviation,
        });
    }
    let deviation = (rho.trace()? - Complex::new(1.0, 0.0)).norm();
    if deviation > tol {
        return Err(Error::InvalidDensityMatrix {
            property: "trace differs from 1",
            deviation,
        });
    }
    let min = hermitian_eigenvalues(rho, DEFAULT_JACOBI_TOL)?[0];
    if min < -tol {
        return Err(Error::InvalidDensityMatrix {
            property: "not positive semidefinite",
            deviation: -min,
        });
    }
    Ok(())
}

pub fn ppt_test(rho: &ComplexMatrix, tol: f64) -> Result<PptVerdict> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must be positive",
        });
    }
    validate_density_matrix(rho, tol)?;
    let spectrum = hermitian_eigenvalues(&rho.partial_transpose_b()?, DEFAULT_JACOBI_TOL)?;
    let eigenvalues: [f64; 4] = spectrum.try_into().expect("4 eigenvalues");
    let min_eigenvalue = eigenvalues[0];
    Ok(PptVerdict {
        eigenvalues,
        min_eigenvalue,
        separable: min_eigenvalue >= -tol,
        tol,
    })
}

/// Spectrum of `W(q)^{T_B}` in ascending order: `(1 − 3q)/4` once and
/// `(1 + q)/4` three times.
pub fn werner_pt_eigenvalues_closed_form(q: WernerParam) -> [f64; 4] {
    let q = q.value();
    let hi = (1.0 + q) / 4.0;
    [(1.0 - 3.0 * q) / 4.0, hi, hi, hi]
}

fn check_axis(axis: BlochVector) -> Result<()> {
    let norm = axis.norm();
    if !((norm - 1.0).abs() <= AXIS_NORM_TOL) {
        return Err(Error::NonUnitAxis { norm });
    }
    Ok(())
}

fn real_expectation(op: &ComplexMatrix, rho: &ComplexMatrix) -> Result<f64> {
    let value = op.matmul(rho)?.trace()?;
    if value.im.abs() > IMAG_TOL {
        return Err(Error::ImaginaryResidue { imag: value.im });
    }
    Ok(value.re)
}

/// `Tr[(l·σ ⊗ m·σ) ρ]`, the correlation of the ±1 spin outcomes along `l` on
/// qubit A and `m` on qubit B.
pub fn correlation(rho: &ComplexMatrix, l: BlochVector, m: BlochVector) -> Result<f64> {
    check_axis(l)?;
    check_axis(m)?;
    let op = pauli_dot(l.as_array()).kron(&pauli_dot(m.as_array()));
    real_expectation(&op, rho)
}

/// `Tr[(l·σ ⊗ I) ρ]` for qubit A, `Tr[(I ⊗ l·σ) ρ]` for qubit B.
pub fn local_expectation(rho: &ComplexMatrix, l: BlochVector, subsystem: Subsystem) -> Result<f64> {
    check_axis(l)?;
    let id = ComplexMatrix::identity(2);
    let obs = pauli_dot(l.as_array());
    let op = match subsystem {
        Subsystem::A => obs.kron(&id),
        Subsystem::B => id.kron(&obs),
    };
    real_expectation(&op, rho)
}
