//! Sublinear primal-dual solvers for `ℓq`-`ℓ1` matrix games.
//!
//! The primal player runs `p`-norm online gradient ascent on the `ℓq` ball, the
//! dual player runs multiplicative weights on the simplex, and the dual payoffs
//! are estimated from a single `ℓq`-sampled column per iteration.

mod dispatch;
mod l1_l1;
mod lq_l1;
mod steps;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::norm::NormPair;
use crate::scalar::Scalar;
use crate::vector::DenseVector;

pub use dispatch::{dispatch_threshold, solve_dispatch, solve_dispatch_with, DispatchOptions, LogBase};
pub use l1_l1::{solve_l1_l1, solve_l1_l1_with, L1L1Options, DEFAULT_L1_CONSTANT};
pub use lq_l1::{solve_lq_l1, solve_lq_l1_with};
pub use steps::{mwu_step, pnorm_ogd_step};

/// Iteration-count constant of the classical solver.
pub const CLASSICAL_LOG_COEFF: f64 = 895.0;

/// Symbolic forms of the derived constants, embedded in reports.
pub const ITERATIONS_FORMULA: &str = "T = ceil((895*ln(n) + 4p) / eps^2)";
pub const ETA_FORMULA: &str = "eta = sqrt(11*ln(n) / (12T))";
pub const IOTA_FORMULA: &str = "iota = sqrt((q-1) / (2T))";

/// Derived constants of one solver run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverParams<S> {
    pub pair: NormPair<S>,
    pub epsilon: S,
    /// Iteration count `T`.
    pub iterations: usize,
    /// Multiplicative-weights step.
    pub eta: S,
    /// Online-gradient step.
    pub iota: S,
    pub seed: u64,
    /// Row count the constants were derived for.
    pub n: usize,
}

impl<S: Scalar> SolverParams<S> {
    /// `T = ⌈(coeff·ln n + 4p)/ε²⌉`, `η = √(11 ln n / 12T)`, `ι = √((q−1)/2T)`.
    pub fn derive(n: usize, q: S, epsilon: S, seed: u64, log_coeff: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("instance must have at least one row"));
        }
        if !(epsilon > S::zero() && epsilon < S::one()) {
            return Err(invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        let pair = NormPair::from_q(q)?;
        let eps = epsilon.f64();
        let t = ((log_coeff * (n as f64).ln() + 4.0 * pair.p().f64()) / (eps * eps)).ceil();
        if !(t.is_finite() && t >= 1.0 && t <= usize::MAX as f64) {
            return Err(invalid("iteration count overflows"));
        }
        Ok(Self::with_fixed_iterations(pair, epsilon, t as usize, seed, n))
    }

    /// Constants for the classical solver.
    pub fn classical(n: usize, q: S, epsilon: S, seed: u64) -> Result<Self> {
        Self::derive(n, q, epsilon, seed, CLASSICAL_LOG_COEFF)
    }

    /// Keeps `q`, `ε` and the seed, re-deriving `η` and `ι` for `iterations`.
    pub fn with_iterations(self, iterations: usize) -> Self {
        Self::with_fixed_iterations(self.pair, self.epsilon, iterations.max(1), self.seed, self.n)
    }

    fn with_fixed_iterations(pair: NormPair<S>, epsilon: S, iterations: usize, seed: u64, n: usize) -> Self {
        let t = iterations as f64;
        let eta = (11.0 * (n as f64).ln() / (12.0 * t)).sqrt();
        let iota = ((pair.q().f64() - 1.0) / (2.0 * t)).sqrt();
        Self {
            pair,
            epsilon,
            iterations,
            eta: S::of(eta),
            iota: S::of(iota),
            seed,
            n,
        }
    }

    /// Clip threshold `1/η` (infinite for a single row, where `η = 0`).
    pub fn clip_bound(&self) -> S {
        if self.eta > S::zero() {
            self.eta.recip()
        } else {
            S::infinity()
        }
    }

    /// Budget `T·(n + d)` on entry reads.
    pub fn query_budget(&self, d: usize) -> u64 {
        self.iterations as u64 * (self.n + d) as u64
    }
}

/// Knobs that do not change the algorithm's output distribution.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Keep the per-iteration `(i_t, j_t)` samples.
    pub record_traces: bool,
    /// Dual weights are divided by their maximum every this many iterations.
    pub rescale_every: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            record_traces: true,
            rescale_every: 1000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverPath {
    /// `p`-norm OGD primal with `ℓq`-sampled multiplicative weights.
    LqL1,
    /// Sampled multiplicative weights on both players of the `ℓ1`-`ℓ1` game.
    L1L1,
}

/// Constants a run actually used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunParams<S> {
    /// Primal exponent; `None` on the `ℓ1`-`ℓ1` path.
    pub q: Option<S>,
    pub p: Option<S>,
    pub epsilon: S,
    pub iterations: usize,
    /// Dual step size.
    pub eta: S,
    /// Primal step size when the primal runs OGD.
    pub iota: Option<S>,
    pub seed: u64,
}

impl<S: Scalar> From<SolverParams<S>> for RunParams<S> {
    fn from(p: SolverParams<S>) -> Self {
        Self {
            q: Some(p.pair.q()),
            p: Some(p.pair.p()),
            epsilon: p.epsilon,
            iterations: p.iterations,
            eta: p.eta,
            iota: Some(p.iota),
            seed: p.seed,
        }
    }
}

/// Output of a solver run.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport<S> {
    pub path: SolverPath,
    pub params: RunParams<S>,
    /// Average iterate `x̄ = (1/T) Σ_t x_t`.
    pub x_bar: DenseVector<S>,
    /// `min_i A_i·x̄`.
    pub primal_value: S,
    /// Sampled rows `i_t` (empty when traces are off).
    pub i_trace: Vec<u32>,
    /// Sampled columns `j_t`; `None` where `x_t = 0`.
    pub j_trace: Vec<Option<u32>>,
    /// Entry reads made by the solver itself.
    pub queries: u64,
    /// Entry reads spent evaluating `primal_value` (a separate counter).
    pub evaluation_queries: u64,
    pub wall_time: f64,
    pub iterations: usize,
    /// Additive error the guarantee is stated for (`ε`, or `Cε` on the fallback path).
    pub error_bound: S,
    /// Largest `|v_t(i)|` fed to the weight update.
    pub max_abs_update: S,
    /// Iterations whose sampled row was zero, so the primal step was skipped.
    pub skipped_primal_steps: u64,
}

impl<S: Scalar> SolveReport<S> {
    /// `min_i A_i·x̄ ≥ σ − error_bound`.
    pub fn meets(&self, sigma: S) -> bool {
        self.primal_value >= sigma - self.error_bound
    }
}
