//! Four-vector decomposition `W(q) = Σᵢ |zᵢ⟩⟨zᵢ|` into pure product states.
//!
//! Starting from the eigen-decomposition of `W(q)` as sub-normalized Bell
//! vectors
//!
//! ```text
//! |x₁⟩ = −i √(1+3q)/2 |Ψ⁻⟩    |x₂⟩ = √(1−q)/2 |Ψ⁺⟩
//! |x₃⟩ =    √(1−q)/2  |Φ⁻⟩    |x₄⟩ = −i √(1−q)/2 |Φ⁺⟩
//! ```
//!
//! the vectors `|zᵢ⟩ = ½ Σⱼ Hᵢⱼ e^{iθⱼ} |xⱼ⟩` (`H` the 4×4 Hadamard sign
//! pattern) resum to `W(q)` for any phases. They are product states when
//!
//! ```text
//! e^{−2iθ₁}(1+3q) + (e^{−2iθ₂} + e^{−2iθ₃} + e^{−2iθ₄})(1−q) = 0,
//! ```
//!
//! which has real solutions only for `q ≤ 1/3`.

use std::f64::consts::FRAC_PI_2;

use super::require_separable;
use crate::error::Result;
use crate::linalg::{Complex, ComplexMatrix};
use crate::states::{bell_state, Bell, WernerParam};

/// Default tolerance of [`schmidt_rank_one_check`].
pub const SCHMIDT_TOL: f64 = 1e-12;

const SIGNS: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

#[derive(Debug, Clone, PartialEq)]
pub struct WoottersDecomposition {
    q: WernerParam,
    z: [[Complex; 4]; 4],
    thetas: [f64; 4],
}

impl WoottersDecomposition {
    pub fn q(&self) -> WernerParam {
        self.q
    }

    /// The four unnormalized product vectors.
    pub fn vectors(&self) -> &[[Complex; 4]; 4] {
        &self.z
    }

    pub fn thetas(&self) -> [f64; 4] {
        self.thetas
    }

    /// `Σᵢ |zᵢ⟩⟨zᵢ|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(4, 4);
        for z in &self.z {
            out.add_scaled_assign(1.0, &ComplexMatrix::outer(z)).expect("4x4 operands");
        }
        out
    }

    pub fn phase_residual(&self) -> f64 {
        phase_constraint_residual(self.thetas, self.q.value())
    }
}

/// The sub-normalized Bell vectors `|x₁⟩ … |x₄⟩`.
pub fn scaled_bell_vectors(q: WernerParam) -> [[Complex; 4]; 4] {
    let q = q.value();
    let minus_i = Complex::new(0.0, -1.0);
    let one = Complex::new(1.0, 0.0);
    let big = (1.0 + 3.0 * q).sqrt() / 2.0;
    let small = (1.0 - q).max(0.0).sqrt() / 2.0;
    let terms = [
        (minus_i * big, Bell::PsiMinus),
        (one * small, Bell::PsiPlus),
        (one * small, Bell::PhiMinus),
        (minus_i * small, Bell::PhiPlus),
    ];
    terms.map(|(coef, kind)| bell_state(kind).map(|a| a * coef))
}

/// The particular solution `θ₁ = 0`, `θ₂ = π/2`,
/// `(cos θ₃, sin θ₃) = (c, s)`, `(cos θ₄, sin θ₄) = (−c, s)` with
/// `c = √((1−3q)/(2(1−q)))`, `s = √((1+q)/(2(1−q)))`.
pub fn special_phases(q: WernerParam) -> Result<[f64; 4]> {
    require_separable(q)?;
    let q = q.value();
    let denom = 2.0 * (1.0 - q);
    let c = ((1.0 - 3.0 * q).max(0.0) / denom).sqrt();
    let s = ((1.0 + q) / denom).sqrt();
    Ok([0.0, FRAC_PI_2, s.atan2(c), s.atan2(-c)])
}

pub fn wootters_decomposition(q: WernerParam) -> Result<WoottersDecomposition> {
    let thetas = special_phases(q)?;
    let x = scaled_bell_vectors(q);
    let phases = thetas.map(|t| Complex::from_polar(1.0, t));
    let mut z = [[Complex::new(0.0, 0.0); 4]; 4];
    for (zi, signs) in z.iter_mut().zip(&SIGNS) {
        for j in 0..4 {
            let coef = phases[j] * (0.5 * signs[j]);
            for (amp, xa) in zi.iter_mut().zip(&x[j]) {
                *amp += coef * xa;
            }
        }
    }
    Ok(WoottersDecomposition { q, z, thetas })
}

/// `|det M|` for the amplitude matrix `M[i][j] = v[2i + j]`; zero iff `v` is a
/// product vector.
pub fn schmidt_determinant(v: &[Complex; 4]) -> f64 {
    (v[0] * v[3] - v[1] * v[2]).norm()
}

/// Whether `v` has Schmidt rank one, i.e. `|det M| ≤ tol · max(1, ‖v‖²)`.
pub fn schmidt_rank_one_check(v: &[Complex; 4], tol: f64) -> bool {
    let norm_sq: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    schmidt_determinant(v) <= tol * norm_sq.max(1.0)
}

/// `|e^{−2iθ₁}(1+3q) + (e^{−2iθ₂} + e^{−2iθ₃} + e^{−2iθ₄})(1−q)|`.
pub fn phase_constraint_residual(thetas: [f64; 4], q: f64) -> f64 {
    let e = thetas.map(|t| Complex::from_polar(1.0, -2.0 * t));
    (e[0] * (1.0 + 3.0 * q) + (e[1] + e[2] + e[3]) * (1.0 - q)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::states::werner;
    use std::f64::consts::PI;

    fn wp(q: f64) -> WernerParam {
        WernerParam::new(q).unwrap()
    }

    #[test]
    fn special_phase_values() {
        for q in [0.0, 0.1, 0.25, 1.0 / 3.0] {
            let t = special_phases(wp(q)).unwrap();
            let c = ((1.0 - 3.0 * q) / (2.0 * (1.0 - q))).sqrt();
            let s = ((1.0 + q) / (2.0 * (1.0 - q))).sqrt();
            assert_eq!(t[0], 0.0);
            assert_eq!(t[1], PI / 2.0);
            assert!((t[2].cos() - c).abs() < 1e-15 && (t[2].sin() - s).abs() < 1e-15);
            assert!((t[3].cos() + c).abs() < 1e-15 && (t[3].sin() - s).abs() < 1e-15);
        }
        let t = special_phases(wp(1.0 / 3.0)).unwrap();
        assert!((t[2] - PI / 2.0).abs() < 1e-15 && (t[3] - PI / 2.0).abs() < 1e-15);
        let t = special_phases(wp(0.0)).unwrap();
        assert!((t[2] - PI / 4.0).abs() < 1e-15 && (t[3] - 3.0 * PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn residual_examples() {
        assert_eq!(phase_constraint_residual([0.0; 4], 0.0), 4.0);
        let half = PI / 2.0;
        assert!(phase_constraint_residual([0.0, half, half, half], 1.0 / 3.0) < 1e-15);
        for q in [0.0, 0.05, 0.2, 0.3, 1.0 / 3.0] {
            assert!(phase_constraint_residual(special_phases(wp(q)).unwrap(), q) <= 1e-14);
        }
    }

    #[test]
    fn resums_to_werner_with_product_vectors() {
        for q in [0.0, 0.05, 0.1, 0.2, 0.3, 1.0 / 3.0] {
            let d = wootters_decomposition(wp(q)).unwrap();
            assert!(d.reconstruct().max_abs_diff(&werner(wp(q))).unwrap() <= 1e-12);
            let mut total = 0.0;
            for z in d.vectors() {
                assert!(schmidt_determinant(z) <= 1e-12, "q = {q}");
                assert!(schmidt_rank_one_check(z, SCHMIDT_TOL));
                let n: f64 = z.iter().map(|a| a.norm_sqr()).sum();
                assert!((n - 0.25).abs() <= 1e-12);
                total += n;
            }
            assert!((total - 1.0).abs() <= 1e-12);
            assert!(d.phase_residual() <= 1e-13);
        }
    }

    #[test]
    fn resummation_holds_for_arbitrary_phases() {
        // Only the product property depends on the phases.
        let q = wp(0.2);
        let x = scaled_bell_vectors(q);
        let mut sum = ComplexMatrix::zeros(4, 4);
        for xi in &x {
            sum.add_scaled_assign(1.0, &ComplexMatrix::outer(xi)).unwrap();
        }
        assert!(sum.max_abs_diff(&werner(q)).unwrap() < 1e-15);
    }

    #[test]
    fn schmidt_examples() {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        assert!(schmidt_rank_one_check(&[one, zero, zero, zero], SCHMIDT_TOL));
        let singlet = bell_state(Bell::PsiMinus);
        assert!((schmidt_determinant(&singlet) - 0.5).abs() < 1e-15);
        assert!(!schmidt_rank_one_check(&singlet, SCHMIDT_TOL));
        // |+⟩ ⊗ (|0⟩ + i|1⟩)/√2, scaled
        let h = 0.5 * 3.0;
        let v = [one * h, Complex::new(0.0, h), one * h, Complex::new(0.0, h)];
        assert!(schmidt_rank_one_check(&v, SCHMIDT_TOL));
    }

    #[test]
    fn inseparable_q_is_rejected() {
        for q in [1.0 / 3.0 + 1e-6, 0.5, 1.0] {
            assert!(matches!(wootters_decomposition(wp(q)), Err(Error::Domain { .. })));
        }
    }
}
