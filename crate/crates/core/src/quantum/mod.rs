//! Semantic simulation of the quantum solver.
//!
//! Subroutines are not simulated at gate level. Each one returns an output drawn
//! from a stated error model and charges oracle queries by a fixed cost
//! model, which a [`QueryLedger`] accumulates per subroutine.

mod estimate;
mod ledger;
mod solver;
mod state;

pub use estimate::{
    median_success_probability, simulate_norm_estimate, FailureMode, NoisyEstimate, AMPLITUDE_ESTIMATION_CONSTANT,
};
pub use ledger::{LedgerBreakdown, QueryLedger, Subroutine};
pub use solver::{
    hoeffding_boost, median_boost, quantum_iterations, quantum_solver_sim, quantum_solver_sim_with, QuantumDiagnostics,
    QuantumOptions, QuantumRun, SuccinctSolution, SuccinctStep, COORDINATE_BOUND_CONSTANT, QUANTUM_LOG_COEFF,
};
pub use state::{
    amplification_rounds, grover_success_probability, grover_success_probability_iterated, initial_angle,
    lq_state_amplitudes, AmplificationPlan, AmplitudeState, MIN_FINDING_CONSTANT, TARGET_SUCCESS,
};
