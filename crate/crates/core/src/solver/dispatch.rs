use serde::Serialize;

use crate::error::Result;
use crate::game::GameInstance;
use crate::norm::NormPair;
use crate::scalar::Scalar;

use super::{solve_l1_l1_with, solve_lq_l1_with, L1L1Options, SolveOptions, SolveReport, SolverParams};

/// Error multiplier reported on the `ℓ1`-`ℓ1` path.
pub const L1_PATH_ERROR_FACTOR: f64 = 2.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DispatchOptions {
    pub log_base: LogBase,
    pub l1: L1L1Options,
    pub solve: SolveOptions,
    /// Overrides the derived iteration count on the `ℓq`-`ℓ1` path.
    pub iterations: Option<usize>,
}

/// `log(d)/ε`; exponents `p` above it take the `ℓ1`-`ℓ1` path.
pub fn dispatch_threshold(d: usize, epsilon: f64, base: LogBase) -> f64 {
    base.log(d as f64) / epsilon
}

pub fn solve_dispatch<S: Scalar>(instance: &GameInstance<S>, q: S, epsilon: S, seed: u64) -> Result<SolveReport<S>> {
    solve_dispatch_with(instance, q, epsilon, seed, &DispatchOptions::default())
}

/// Routes large `p` to the `ℓ1`-`ℓ1` solver, everything else to the `ℓq`-`ℓ1` solver.
///
/// For `p > log(d)/ε` every `x ∈ B_1` is feasible for `B_q` and
/// `‖x‖_1 ≤ d^{1/p}‖x‖_q ≤ e^ε`, so the `ℓ1` game value is within `O(ε)` of `σ`;
/// the report carries `error_bound = 2ε` on that path.
pub fn solve_dispatch_with<S: Scalar>(
    instance: &GameInstance<S>,
    q: S,
    epsilon: S,
    seed: u64,
    options: &DispatchOptions,
) -> Result<SolveReport<S>> {
    let pair = NormPair::from_q(q)?;
    let threshold = dispatch_threshold(instance.d(), epsilon.f64(), options.log_base);
    if pair.p().f64() > threshold {
        let mut report = solve_l1_l1_with(instance, epsilon, seed, &options.l1)?;
        report.params.q = Some(pair.q());
        report.params.p = Some(pair.p());
        report.error_bound = S::of(L1_PATH_ERROR_FACTOR) * epsilon;
        Ok(report)
    } else {
        let mut params = SolverParams::classical(instance.n(), q, epsilon, seed)?;
        if let Some(t) = options.iterations {
            params = params.with_iterations(t);
        }
        solve_lq_l1_with(instance, &params, &options.solve)
    }
}
