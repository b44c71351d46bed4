//! Sampling and estimation primitives of the dual side: `ℓq`-sampling, the
//! importance-weighted inner-product estimator, clipping and categorical draws.

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{invalid, Error, Result};
use crate::game::GameInstance;
use crate::scalar::{AbsPow, Scalar};
use crate::vector::DenseVector;

/// Deterministic per-run random stream. Equal seeds give equal sequences.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    inner: Xoshiro256PlusPlus,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Independent child stream, e.g. for a subroutine.
    pub fn split(&mut self) -> Self {
        Self::new(self.inner.next_u64())
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Inverse-CDF draw from nonnegative `mass` with known positive `total`.
///
/// Never returns an index of zero mass, even when rounding pushes the target
/// past the accumulated sum.
#[inline]
pub(crate) fn draw_index<S: Scalar>(mass: &[S], total: S, rng: &mut RngStream) -> usize {
    let target = S::of(rng.uniform()) * total;
    let mut acc = S::zero();
    let mut last_positive = 0;
    for (k, m) in mass.iter().enumerate() {
        if *m > S::zero() {
            acc += *m;
            last_positive = k;
            if acc > target {
                return k;
            }
        }
    }
    last_positive
}

/// Draws `j` with probability `|x_j|^q / ‖x‖_q^q`.
pub fn lq_sample<S: Scalar>(x: &DenseVector<S>, q: S, rng: &mut RngStream) -> Result<usize> {
    let pow = AbsPow::new(q);
    let mass: Vec<S> = x.iter().map(|v| pow.abs(*v)).collect();
    let total: S = mass.iter().copied().sum();
    if total == S::zero() {
        return Err(Error::ZeroVector);
    }
    Ok(draw_index(&mass, total, rng))
}

/// Draws `i` with probability `w_i / Σ w`.
pub fn categorical_sample<S: Scalar>(weights: &DenseVector<S>, rng: &mut RngStream) -> Result<usize> {
    if weights.iter().any(|w| *w < S::zero()) {
        return Err(invalid("categorical weights must be nonnegative"));
    }
    let total: S = weights.iter().copied().sum();
    if total == S::zero() {
        return Err(invalid("categorical weights must not all be zero"));
    }
    Ok(draw_index(weights.as_slice(), total, rng))
}

/// `A_i(j)·‖x‖_q^q / (sgn(x_j)·|x_j|^{q−1})`, charging one query.
///
/// Unbiased for `A_i·x` when `j` is drawn by [`lq_sample`] from `x`.
pub fn unbiased_estimate<S: Scalar>(
    instance: &GameInstance<S>,
    i: usize,
    x: &DenseVector<S>,
    j: usize,
    q: S,
) -> Result<S> {
    if j >= x.len() {
        return Err(invalid(format!(
            "column {j} out of range for vector of length {}",
            x.len()
        )));
    }
    let xj = x[j];
    if xj == S::zero() {
        return Err(invalid(format!("coordinate {j} is zero and cannot have been sampled")));
    }
    let norm_q = AbsPow::new(q);
    let total: S = x.iter().map(|v| norm_q.abs(*v)).sum();
    let denom = AbsPow::new(q - S::one()).signed(xj);
    Ok(instance.query(i, j)? * total / denom)
}

/// `min{M, max{−M, v}}`.
#[inline]
pub fn clip<S: Scalar>(v: S, bound: S) -> S {
    debug_assert!(bound > S::zero());
    v.max(-bound).min(bound)
}
