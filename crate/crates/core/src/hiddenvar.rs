//! Monte Carlo realization of the local hidden-variable model for `W(q)`.
//!
//! The shared variable is a direction `f(θ, φ)` uniform on the sphere. Each
//! party additionally draws a private `λ ∈ [0, 1]` and answers
//!
//! ```text
//! A = +1  iff  λ_A ≤ (1 + l·a)/2,   a =  √(3q) f
//! B = +1  iff  λ_B ≤ (1 + m·b)/2,   b = −√(3q) f
//! ```
//!
//! so that `E[A | f] = l·a`, `E[B | f] = m·b` and `E[AB] = −q (l·m)`.
//!
//! Samples are drawn in fixed batches of [`BATCH_SIZE`]. Batch `k` uses a
//! ChaCha8 generator seeded with the user seed on stream `k`, and batch
//! results are integer sums, so parallel and sequential runs agree bit for bit.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::require_separable;
use crate::error::{Error, Result};
use crate::separability::AXIS_NORM_TOL;
use crate::states::{BlochVector, Subsystem, WernerParam};

/// Samples per independently seeded batch.
pub const BATCH_SIZE: u64 = 1 << 14;

/// One draw of the hidden variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HvSample {
    pub theta: f64,
    pub phi: f64,
    pub lambda_a: f64,
    pub lambda_b: f64,
}

impl HvSample {
    /// The shared unit direction `f(θ, φ)`.
    pub fn direction(&self) -> BlochVector {
        BlochVector::from_angles(self.theta, self.phi)
    }
}

/// Draws `(θ, φ)` uniformly on the sphere (inverse CDF on `cos θ`) and the
/// two private variables uniformly on `[0, 1)`.
pub fn sample_hidden<R: Rng + ?Sized>(rng: &mut R) -> HvSample {
    let cos_theta = 1.0 - 2.0 * rng.random::<f64>();
    let phi = TAU * rng.random::<f64>();
    HvSample {
        theta: cos_theta.acos(),
        phi,
        lambda_a: rng.random(),
        lambda_b: rng.random(),
    }
}

/// Mean of ±1 outcomes with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HvEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√n`.
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl HvEstimate {
    /// Builds the estimate from the sum of `n` values in `{−1, +1}`.
    fn from_sign_sum(sum: i64, n: u64, seed: u64) -> Self {
        let nf = n as f64;
        let s = sum as f64;
        let mean = s / nf;
        // Σx² = n for ±1 data, so the unbiased variance is (n² − S²) / (n(n − 1)).
        let std_error = if n > 1 {
            ((nf * nf - s * s) / (nf * (nf - 1.0)) / nf).max(0.0).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            std_error,
            n_samples: n,
            seed,
        }
    }

    /// `|mean − target| ≤ k · std_error`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

/// The response functions of both parties for a fixed `q ≤ 1/3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HiddenVariableModel {
    q: WernerParam,
    scale: f64,
}

impl HiddenVariableModel {
    pub fn new(q: WernerParam) -> Result<Self> {
        require_separable(q)?;
        Ok(Self {
            q,
            scale: (3.0 * q.value()).sqrt(),
        })
    }

    pub fn q(&self) -> WernerParam {
        self.q
    }

    /// Local Bloch vector `a = √(3q) f` of qubit A.
    pub fn bloch_a(&self, s: &HvSample) -> BlochVector {
        s.direction() * self.scale
    }

    /// Local Bloch vector `b = −√(3q) f` of qubit B.
    pub fn bloch_b(&self, s: &HvSample) -> BlochVector {
        -self.bloch_a(s)
    }

    pub fn outcome_a(&self, s: &HvSample, l: BlochVector) -> i8 {
        sign_response(s.lambda_a, l.dot(self.bloch_a(s)))
    }

    pub fn outcome_b(&self, s: &HvSample, m: BlochVector) -> i8 {
        sign_response(s.lambda_b, m.dot(self.bloch_b(s)))
    }

    fn outcome_pair(&self, s: &HvSample, l: BlochVector, m: BlochVector) -> i8 {
        let a = self.bloch_a(s);
        sign_response(s.lambda_a, l.dot(a)) * sign_response(s.lambda_b, -m.dot(a))
    }
}

fn sign_response(lambda: f64, projection: f64) -> i8 {
    if lambda <= (1.0 + projection) / 2.0 {
        1
    } else {
        -1
    }
}

fn check_axis(axis: BlochVector) -> Result<()> {
    let norm = axis.norm();
    if !((norm - 1.0).abs() <= AXIS_NORM_TOL) {
        return Err(Error::NonUnitAxis { norm });
    }
    Ok(())
}

pub fn outcome_a(s: &HvSample, q: WernerParam, l: BlochVector) -> Result<i8> {
    check_axis(l)?;
    Ok(HiddenVariableModel::new(q)?.outcome_a(s, l))
}

pub fn outcome_b(s: &HvSample, q: WernerParam, m: BlochVector) -> Result<i8> {
    check_axis(m)?;
    Ok(HiddenVariableModel::new(q)?.outcome_b(s, m))
}

/// The generator for batch `index` of a run seeded with `seed`.
pub fn batch_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn batch_sum<F>(seed: u64, index: u64, n_samples: u64, observable: &F) -> i64
where
    F: Fn(&HvSample) -> i8,
{
    let start = index * BATCH_SIZE;
    let len = BATCH_SIZE.min(n_samples - start);
    let mut rng = batch_rng(seed, index);
    (0..len)
        .map(|_| observable(&sample_hidden(&mut rng)) as i64)
        .sum()
}

fn n_batches(n_samples: u64) -> u64 {
    n_samples.div_ceil(BATCH_SIZE)
}

fn run_sequential<F>(n_samples: u64, seed: u64, observable: F) -> HvEstimate
where
    F: Fn(&HvSample) -> i8,
{
    let sum = (0..n_batches(n_samples))
        .map(|k| batch_sum(seed, k, n_samples, &observable))
        .sum();
    HvEstimate::from_sign_sum(sum, n_samples, seed)
}

#[cfg(feature = "parallel")]
fn run_parallel<F>(n_samples: u64, seed: u64, observable: F) -> HvEstimate
where
    F: Fn(&HvSample) -> i8 + Sync,
{
    use rayon::prelude::*;

    let sum = (0..n_batches(n_samples))
        .into_par_iter()
        .map(|k| batch_sum(seed, k, n_samples, &observable))
        .sum();
    HvEstimate::from_sign_sum(sum, n_samples, seed)
}

/// How the sampling batches are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Batches on the rayon thread pool; falls back to sequential when the
    /// `parallel` feature is off.
    #[default]
    Parallel,
}

fn run<F>(exec: Execution, n_samples: u64, seed: u64, observable: F) -> HvEstimate
where
    F: Fn(&HvSample) -> i8 + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => run_parallel(n_samples, seed, observable),
        _ => run_sequential(n_samples, seed, observable),
    }
}

fn check_samples(n_samples: u64) -> Result<()> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            value: 0.0,
            reason: "at least one sample is required",
        });
    }
    Ok(())
}

/// Monte Carlo estimate of `E[A(l) B(m)]`, which converges to `−q (l·m)`.
pub fn estimate_correlation(
    q: WernerParam,
    l: BlochVector,
    m: BlochVector,
    n_samples: u64,
    seed: u64,
) -> Result<HvEstimate> {
    estimate_correlation_with(Execution::default(), q, l, m, n_samples, seed)
}

pub fn estimate_correlation_with(
    exec: Execution,
    q: WernerParam,
    l: BlochVector,
    m: BlochVector,
    n_samples: u64,
    seed: u64,
) -> Result<HvEstimate> {
    let model = HiddenVariableModel::new(q)?;
    check_axis(l)?;
    check_axis(m)?;
    check_samples(n_samples)?;
    Ok(run(exec, n_samples, seed, |s| model.outcome_pair(s, l, m)))
}

/// Monte Carlo estimate of one party's mean outcome, which converges to 0.
pub fn estimate_local(
    q: WernerParam,
    l: BlochVector,
    subsystem: Subsystem,
    n_samples: u64,
    seed: u64,
) -> Result<HvEstimate> {
    estimate_local_with(Execution::default(), q, l, subsystem, n_samples, seed)
}

pub fn estimate_local_with(
    exec: Execution,
    q: WernerParam,
    l: BlochVector,
    subsystem: Subsystem,
    n_samples: u64,
    seed: u64,
) -> Result<HvEstimate> {
    let model = HiddenVariableModel::new(q)?;
    check_axis(l)?;
    check_samples(n_samples)?;
    Ok(match subsystem {
        Subsystem::A => run(exec, n_samples, seed, |s| model.outcome_a(s, l)),
        Subsystem::B => run(exec, n_samples, seed, |s| model.outcome_b(s, l)),
    })
}
