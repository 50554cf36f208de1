//! Continuous decomposition over the Bloch sphere.
//!
//! `W(q) = ∫ dΩ/4π  ρ(a(Ω)) ⊗ ρ(b(Ω))` with `a(Ω) = √(3q) f(Ω)`,
//! `b(Ω) = −a(Ω)` and `f(θ, φ)` the unit vector at polar angle `θ`, azimuth
//! `φ`. The integrand is a polynomial of degree at most two in the components
//! of `f`, so a product rule (Gauss–Legendre in `cos θ`, uniform in `φ`) that
//! is exact on degree-2 spherical polynomials reproduces `W(q)` with no
//! discretization error.

use std::f64::consts::TAU;

use super::quadrature::gauss_legendre;
use super::require_separable;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{product_state, BlochVector, WernerParam};

pub const DEFAULT_N_THETA: usize = 4;
pub const DEFAULT_N_PHI: usize = 8;

/// Tolerance on the first and second moments reported by [`moment_check`].
pub const MOMENT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureNode {
    pub theta: f64,
    pub phi: f64,
    /// Quadrature weight including `sin θ dθ dφ / 4π`.
    pub weight: f64,
    pub a: BlochVector,
    pub b: BlochVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphericalDecomposition {
    q: WernerParam,
    n_theta: usize,
    n_phi: usize,
    nodes: Vec<QuadratureNode>,
}

impl SphericalDecomposition {
    pub fn q(&self) -> WernerParam {
        self.q
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn nodes(&self) -> &[QuadratureNode] {
        &self.nodes
    }

    /// Common length `√(3q)` of every local Bloch vector.
    pub fn bloch_norm(&self) -> f64 {
        (3.0 * self.q.value()).sqrt()
    }
}

pub fn spherical_decomposition(q: WernerParam, n_theta: usize, n_phi: usize) -> Result<SphericalDecomposition> {
    require_separable(q)?;
    if n_theta < 2 {
        return Err(Error::InvalidParameter {
            name: "n_theta",
            value: n_theta as f64,
            reason: "at least 2 polar nodes are needed for degree-2 exactness",
        });
    }
    if n_phi < 3 {
        return Err(Error::InvalidParameter {
            name: "n_phi",
            value: n_phi as f64,
            reason: "at least 3 azimuthal nodes are needed for degree-2 exactness",
        });
    }

    let scale = (3.0 * q.value()).sqrt();
    let (cos_nodes, cos_weights) = gauss_legendre(n_theta);
    // ∫ dcosθ ∫ dφ / 4π with dφ-weight 2π/n_phi.
    let phi_weight = 1.0 / (2.0 * n_phi as f64);

    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    for (&x, &w) in cos_nodes.iter().zip(&cos_weights) {
        let theta = x.acos();
        for k in 0..n_phi {
            let phi = TAU * k as f64 / n_phi as f64;
            let a = BlochVector::from_angles(theta, phi) * scale;
            nodes.push(QuadratureNode {
                theta,
                phi,
                weight: w * phi_weight,
                a,
                b: -a,
            });
        }
    }

    Ok(SphericalDecomposition {
        q,
        n_theta,
        n_phi,
        nodes,
    })
}

/// `Σ w · ρ(a) ⊗ ρ(b)` over the quadrature nodes.
pub fn reconstruct(dec: &SphericalDecomposition) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4, 4);
    for node in &dec.nodes {
        let term = product_state(node.a, node.b).expect("node Bloch vectors lie in the unit ball");
        out.add_scaled_assign(node.weight, &term).expect("4x4 operands");
    }
    out
}

/// Quadrature moments of the local Bloch vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub q: f64,
    pub weight_sum: f64,
    /// `Σ w·a_i`
    pub first_a: [f64; 3],
    /// `Σ w·b_i`
    pub first_b: [f64; 3],
    /// `Σ w·a_i b_j`, expected `−q δ_ij`.
    pub second_ab: [[f64; 3]; 3],
    /// `Σ w·f_i f_j`, expected `δ_ij / 3`.
    pub second_f: [[f64; 3]; 3],
    pub tol: f64,
}

impl MomentReport {
    pub fn weight_error(&self) -> f64 {
        (self.weight_sum - 1.0).abs()
    }

    pub fn first_moment_error(&self) -> f64 {
        self.first_a
            .iter()
            .chain(&self.first_b)
            .map(|x| x.abs())
            .fold(0.0, f64::max)
    }

    pub fn second_moment_error(&self) -> f64 {
        max_deviation(&self.second_ab, -self.q)
    }

    pub fn f_moment_error(&self) -> f64 {
        max_deviation(&self.second_f, 1.0 / 3.0)
    }

    pub fn first_moments_pass(&self) -> bool {
        self.first_moment_error() <= self.tol
    }

    pub fn second_moments_pass(&self) -> bool {
        self.second_moment_error() <= self.tol && self.f_moment_error() <= self.tol
    }

    pub fn passes(&self) -> bool {
        self.weight_error() <= self.tol && self.first_moments_pass() && self.second_moments_pass()
    }
}

fn max_deviation(m: &[[f64; 3]; 3], diag: f64) -> f64 {
    let mut dev = 0.0_f64;
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let want = if i == j { diag } else { 0.0 };
            dev = dev.max((v - want).abs());
        }
    }
    dev
}

pub fn moment_check(dec: &SphericalDecomposition) -> MomentReport {
    let mut report = MomentReport {
        q: dec.q.value(),
        weight_sum: 0.0,
        first_a: [0.0; 3],
        first_b: [0.0; 3],
        second_ab: [[0.0; 3]; 3],
        second_f: [[0.0; 3]; 3],
        tol: MOMENT_TOL,
    };
    for node in &dec.nodes {
        let w = node.weight;
        let a = node.a.as_array();
        let b = node.b.as_array();
        let f = BlochVector::from_angles(node.theta, node.phi).as_array();
        report.weight_sum += w;
        for i in 0..3 {
            report.first_a[i] += w * a[i];
            report.first_b[i] += w * b[i];
            for j in 0..3 {
                report.second_ab[i][j] += w * a[i] * b[j];
                report.second_f[i][j] += w * f[i] * f[j];
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::werner;

    fn wp(q: f64) -> WernerParam {
        WernerParam::new(q).unwrap()
    }

    fn dec(q: f64, nt: usize, np: usize) -> SphericalDecomposition {
        spherical_decomposition(wp(q), nt, np).unwrap()
    }

    #[test]
    fn zero_q_has_zero_bloch_vectors() {
        let d = dec(0.0, DEFAULT_N_THETA, DEFAULT_N_PHI);
        assert!(d.nodes().iter().all(|n| n.a == BlochVector::ZERO && n.b.norm() == 0.0));
        assert!(reconstruct(&d).max_abs_diff(&werner(wp(0.0))).unwrap() < 1e-15);
        let d = dec(0.0, 2, 3);
        assert!(reconstruct(&d).max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)).unwrap() < 1e-15);
    }

    #[test]
    fn critical_point_saturates_bloch_ball() {
        let d = dec(1.0 / 3.0, DEFAULT_N_THETA, DEFAULT_N_PHI);
        for n in d.nodes() {
            assert!((n.a.norm() - 1.0).abs() <= 1e-14);
            assert!((n.b.norm() - 1.0).abs() <= 1e-14);
        }
        for q in [0.0, 0.1, 0.3] {
            assert!(dec(q, 3, 5).nodes().iter().all(|n| n.a.norm() < 1.0));
        }
    }

    #[test]
    fn inseparable_q_is_rejected() {
        match spherical_decomposition(wp(0.34), DEFAULT_N_THETA, DEFAULT_N_PHI) {
            Err(Error::Domain { bloch_norm, .. }) => assert!((bloch_norm - 1.02f64.sqrt()).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn node_counts_are_validated() {
        assert!(spherical_decomposition(wp(0.1), 1, 8).is_err());
        assert!(spherical_decomposition(wp(0.1), 4, 2).is_err());
    }

    #[test]
    fn node_invariants() {
        for q in [0.0, 0.05, 0.2, 1.0 / 3.0] {
            let d = dec(q, 5, 7);
            assert_eq!(d.nodes().len(), 35);
            let wsum: f64 = d.nodes().iter().map(|n| n.weight).sum();
            assert!((wsum - 1.0).abs() <= 1e-14);
            for n in d.nodes() {
                assert!(n.weight >= 0.0);
                assert!((0.0..=std::f64::consts::PI).contains(&n.theta));
                assert!((0.0..TAU).contains(&n.phi));
                assert_eq!(n.a + n.b, BlochVector::ZERO);
                assert!((n.a.norm() - (3.0 * q).sqrt()).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn reconstruction_is_exact() {
        for q in [0.0, 0.1, 0.2, 1.0 / 3.0] {
            let w = werner(wp(q));
            let coarse = reconstruct(&dec(q, 2, 3));
            let fine = reconstruct(&dec(q, 8, 16));
            assert!(coarse.max_abs_diff(&w).unwrap() <= 1e-12);
            assert!(fine.max_abs_diff(&w).unwrap() <= 1e-12);
            assert!(coarse.max_abs_diff(&fine).unwrap() <= 1e-13);
            assert!((coarse[(0, 0)].re - (1.0 - q) / 4.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn moments_at_q_point_three() {
        let r = moment_check(&dec(0.3, DEFAULT_N_THETA, DEFAULT_N_PHI));
        assert!(r.passes(), "{r:?}");
        for i in 0..3 {
            assert!((r.second_ab[i][i] + 0.3).abs() <= 1e-13);
            assert!((r.second_f[i][i] - 1.0 / 3.0).abs() <= 1e-13);
            assert!(r.first_a[i].abs() <= 1e-13 && r.first_b[i].abs() <= 1e-13);
        }
    }

    #[test]
    fn sign_error_in_b_fails_the_moment_check() {
        let mut d = dec(0.2, DEFAULT_N_THETA, DEFAULT_N_PHI);
        for n in &mut d.nodes {
            n.b = n.a;
        }
        let r = moment_check(&d);
        assert!(r.first_moments_pass());
        assert!(!r.second_moments_pass());
        assert!(!r.passes());
        assert!(reconstruct(&d).max_abs_diff(&werner(wp(0.2))).unwrap() > 0.1);
    }
}
