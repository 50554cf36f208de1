//! State constructors: Werner, Bell, single-qubit Bloch states and products.
//!
//! Pauli conventions are the standard ones, `σ_y = ((0, −i), (i, 0))`, so a
//! Bloch vector `v` maps to the density operator `(I + v·σ)/2`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use crate::error::{Error, Result};
use crate::linalg::{pauli_dot, Complex, ComplexMatrix};

/// Slack allowed on the Bloch-ball boundary, so that `|v| = 1` computed with
/// rounding still counts as a pure state.
pub const BLOCH_NORM_TOL: f64 = 1e-12;

/// Trace tolerance for [`marginal`].
pub const TRACE_TOL: f64 = 1e-12;

/// Mixing weight of the singlet in `W(q)`, validated to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WernerParam(f64);

impl WernerParam {
    pub fn new(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter {
                name: "q",
                value: q,
                reason: "Werner parameter must lie in [0, 1]",
            });
        }
        Ok(Self(q))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for WernerParam {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        Self::new(q)
    }
}

impl fmt::Display for WernerParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A real 3-vector used both for Bloch vectors and for measurement axes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);
    pub const X: Self = Self::new(1.0, 0.0, 0.0);
    pub const Y: Self = Self::new(0.0, 1.0, 0.0);
    pub const Z: Self = Self::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Unit vector with polar angle `theta` and azimuth `phi`:
    /// `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(st * cp, st * sp, ct)
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }
}

impl From<[f64; 3]> for BlochVector {
    fn from([x, y, z]: [f64; 3]) -> Self {
        Self::new(x, y, z)
    }
}

impl Add for BlochVector {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Neg for BlochVector {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = Self;

    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

/// One of the two qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subsystem::A => "A",
            Subsystem::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bell {
    /// `(|01⟩ − |10⟩)/√2`, the singlet.
    PsiMinus,
    /// `(|01⟩ + |10⟩)/√2`
    PsiPlus,
    /// `(|00⟩ − |11⟩)/√2`
    PhiMinus,
    /// `(|00⟩ + |11⟩)/√2`
    PhiPlus,
}

pub fn bell_state(kind: Bell) -> [Complex; 4] {
    let s = FRAC_1_SQRT_2;
    let amps = match kind {
        Bell::PsiMinus => [0.0, s, -s, 0.0],
        Bell::PsiPlus => [0.0, s, s, 0.0],
        Bell::PhiMinus => [s, 0.0, 0.0, -s],
        Bell::PhiPlus => [s, 0.0, 0.0, s],
    };
    amps.map(|a| Complex::new(a, 0.0))
}

/// `W(q) = q |Ψ⁻⟩⟨Ψ⁻| + (1 − q)/4 · I₄`.
pub fn werner(q: WernerParam) -> ComplexMatrix {
    let q = q.value();
    let singlet = ComplexMatrix::outer(&bell_state(Bell::PsiMinus));
    let mut w = ComplexMatrix::identity(4).scale_real((1.0 - q) / 4.0);
    w.add_scaled_assign(q, &singlet).expect("4x4 operands");
    w
}

/// Single-qubit density operator `(I + v·σ)/2`.
pub fn bloch_state(v: BlochVector) -> Result<ComplexMatrix> {
    let norm = v.norm();
    if !(norm <= 1.0 + BLOCH_NORM_TOL) {
        return Err(Error::Positivity { norm });
    }
    Ok(ComplexMatrix::identity(2)
        .add(&pauli_dot(v.as_array()))
        .expect("2x2 operands")
        .scale_real(0.5))
}

/// `ρ_A(a) ⊗ ρ_B(b)`.
pub fn product_state(a: BlochVector, b: BlochVector) -> Result<ComplexMatrix> {
    Ok(bloch_state(a)?.kron(&bloch_state(b)?))
}

/// Reduced state of `subsystem`, tracing out the other qubit.
pub fn marginal(rho: &ComplexMatrix, subsystem: Subsystem) -> Result<ComplexMatrix> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: "4x4 two-qubit operator".into(),
            found: format!("{}x{}", rho.rows(), rho.cols()),
        });
    }
    let tr = rho.trace()?;
    let deviation = (tr - Complex::new(1.0, 0.0)).norm();
    if deviation > TRACE_TOL {
        return Err(Error::InvalidDensityMatrix {
            property: "trace must equal 1",
            deviation,
        });
    }
    let mut out = ComplexMatrix::zeros(2, 2);
    for r in 0..2 {
        for c in 0..2 {
            let v = match subsystem {
                Subsystem::A => (0..2).map(|k| rho[(2 * r + k, 2 * c + k)]).sum(),
                Subsystem::B => (0..2).map(|i| rho[(2 * i + r, 2 * i + c)]).sum(),
            };
            out.set(r, c, v);
        }
    }
    Ok(out)
}
