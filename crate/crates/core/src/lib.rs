//! Sublinear-time solvers for `ℓq`-`ℓ1` matrix games
//! `σ = max_{x ∈ B_q} min_{p ∈ Δ_n} pᵀAx` with rows of `A` in the `ℓp` unit ball.
//!
//! The numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix `f64`, with `*32` variants for single precision.

// Negated comparisons are deliberate: NaN inputs must fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
mod game;
mod norm;
mod scalar;
mod vector;

pub mod adversarial;
pub mod applications;
pub mod estimator;
pub mod oracle;
pub mod quantum;
pub mod solver;

pub use adversarial::{
    build_hard_instance, classify_from_solution, f1, f2, sigma_case1, sigma_case2, HardCase, HardInstanceSpec,
};
pub use applications::{
    caratheodory_residual, caratheodory_solve, svm_margin_value, svm_solve, SparseConvexCombination, SvmSolution,
};
pub use error::{Error, Result};
pub use estimator::{categorical_sample, clip, lq_sample, unbiased_estimate, RngStream};
pub use game::{normalize_rows, EntrySource, GameInstance};
pub use norm::{lq_norm, project_lq_ball, signed_pow, NormPair};
pub use oracle::{
    best_response_x, duality_gap, game_value_exact, game_value_exact_with, primal_value, OracleOptions,
    ValueCertificate,
};
pub use quantum::{quantum_solver_sim, QuantumRun, QueryLedger, SuccinctSolution};
pub use scalar::Scalar;
pub use solver::{
    dispatch_threshold, mwu_step, pnorm_ogd_step, solve_dispatch, solve_dispatch_with, solve_l1_l1, solve_l1_l1_with,
    solve_lq_l1, solve_lq_l1_with, DispatchOptions, L1L1Options, LogBase, RunParams, SolveOptions, SolveReport,
    SolverParams, SolverPath,
};
pub use vector::DenseVector;

pub type Game = GameInstance<f64>;
pub type Game32 = GameInstance<f32>;
pub type Vector = DenseVector<f64>;
pub type Vector32 = DenseVector<f32>;
pub type Report = SolveReport<f64>;
pub type Report32 = SolveReport<f32>;
pub type Params = SolverParams<f64>;
pub type Params32 = SolverParams<f32>;
pub type Certificate = ValueCertificate<f64>;
pub type Norms = NormPair<f64>;
pub type QuantumReport = QuantumRun<f64>;
