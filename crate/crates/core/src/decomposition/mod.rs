//! Explicit separable decompositions of `W(q)` for `0 ≤ q ≤ 1/3`.
//!
//! Both constructions refuse `q > 1/3` with [`Error::Domain`]: beyond that
//! point the required local Bloch vectors leave the unit ball.

pub mod quadrature;
mod spherical;
mod wootters;

pub use spherical::{
    moment_check, reconstruct, spherical_decomposition, MomentReport, QuadratureNode,
    SphericalDecomposition, DEFAULT_N_PHI, DEFAULT_N_THETA, MOMENT_TOL,
};
pub use wootters::{
    phase_constraint_residual, scaled_bell_vectors, schmidt_determinant, schmidt_rank_one_check,
    special_phases, wootters_decomposition, WoottersDecomposition, SCHMIDT_TOL,
};

use crate::error::{Error, Result};
use crate::states::WernerParam;
use crate::SEPARABLE_Q_MAX;

/// Rounding slack on the separability threshold.
pub const DOMAIN_SLACK: f64 = 1e-15;

/// Rejects Werner parameters outside the separable range.
pub fn require_separable(q: WernerParam) -> Result<()> {
    let q = q.value();
    if q > SEPARABLE_Q_MAX + DOMAIN_SLACK {
        return Err(Error::Domain {
            q,
            bloch_norm: (3.0 * q).sqrt(),
        });
    }
    Ok(())
}
