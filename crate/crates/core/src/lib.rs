//! Numerical toolkit for the two-qubit Werner state
//!
//! `W(q) = q |Ψ⁻⟩⟨Ψ⁻| + (1 − q) I/4`, `0 ≤ q ≤ 1`.
//!
//! The crate covers the full separability story for this family:
//!
//! * [`linalg`]: a small dense complex matrix type with Kronecker products,
//!   partial transposition and a Hermitian Jacobi eigensolver.
//! * [`states`]: Werner, Bell, Bloch-parameterized and product states.
//! * [`separability`]: the partial-transpose (PPT) test and measurement
//!   correlations.
//! * [`decomposition`]: two explicit convex decompositions of `W(q)` into
//!   product states for `q ≤ 1/3`, one continuous over the Bloch sphere
//!   (realized by an exact quadrature) and one with four pure product vectors.
//! * [`hiddenvar`]: Monte Carlo sampling of the local hidden-variable model
//!   induced by the spherical decomposition.
//!
//! Basis order is `|00⟩, |01⟩, |10⟩, |11⟩` everywhere, with the first factor
//! being qubit A.
// Validation uses `!(x <= tol)` so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decomposition;
pub mod error;
pub mod hiddenvar;
pub mod linalg;
pub mod separability;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{Complex, ComplexMatrix};
pub use states::{BlochVector, Subsystem, WernerParam};

/// Largest Werner parameter for which `W(q)` is separable.
pub const SEPARABLE_Q_MAX: f64 = 1.0 / 3.0;
