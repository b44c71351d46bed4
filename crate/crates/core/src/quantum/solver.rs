use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::estimator::{draw_index, RngStream};
use crate::game::GameInstance;
use crate::norm::{norm_pow, NormPair};
use crate::oracle::primal_value;
use crate::scalar::{AbsPow, Scalar};
use crate::solver::{SolveReport, SolverParams, SolverPath};
use crate::vector::DenseVector;

use super::estimate::{simulate_norm_estimate, FailureMode};
use super::ledger::{QueryLedger, Subroutine};
use super::state::{grover_success_probability, AmplificationPlan};

/// Iteration-count constant of the quantum solver.
pub const QUANTUM_LOG_COEFF: f64 = 1346.0;

/// `C` in the monitored coordinate bound `|y_{t,j}| ≤ C·√(pq)/ε·max(1, ln T)`.
pub const COORDINATE_BOUND_CONSTANT: f64 = 10.0;

/// `T = ⌈(1346 ln n + 4p)/ε²⌉`.
pub fn quantum_iterations(n: usize, q: f64, epsilon: f64) -> Result<usize> {
    Ok(SolverParams::derive(n, q, epsilon, 0, QUANTUM_LOG_COEFF)?.iterations)
}

/// `2⌈ln T⌉` repetitions per median estimate.
pub fn median_boost(iterations: usize) -> usize {
    (2.0 * (iterations as f64).ln().ceil()).max(1.0) as usize
}

/// Odd `k ≥ 36 ln T`: Hoeffding puts each median's miss probability below
/// `e^{−k/18} ≤ T^{−2}`, so all `2T` estimates hold except with probability `2/T`.
pub fn hoeffding_boost(iterations: usize) -> usize {
    ((36.0 * (iterations as f64).ln()).ceil() as usize).max(1) | 1
}

#[derive(Clone, Copy, Debug)]
pub struct QuantumOptions {
    /// Overrides the derived iteration count.
    pub iterations: Option<usize>,
    /// Overrides the number of repetitions behind each median norm estimate.
    pub boost: Option<usize>,
    pub failure_mode: FailureMode,
    pub record_traces: bool,
    pub rescale_every: usize,
}

impl Default for QuantumOptions {
    fn default() -> Self {
        Self {
            iterations: None,
            boost: None,
            failure_mode: FailureMode::Uniform,
            record_traces: true,
            rescale_every: 1000,
        }
    }
}

/// One stored iteration of the succinct output.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuccinctStep<S> {
    pub i: u32,
    /// Estimate of `‖A_i‖_p^p` used in the primal step.
    pub row_norm_pow: S,
    /// Estimate of `‖y_t‖_q`.
    pub y_norm: S,
}

/// `x̄` as `T` stored triples; any coordinate is recomputed with `T` entry reads.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuccinctSolution<S> {
    pub q: S,
    pub p: S,
    pub iota: S,
    pub steps: Vec<SuccinctStep<S>>,
}

impl<S: Scalar> SuccinctSolution<S> {
    /// `x̄_j = (1/T) Σ_t y_{t,j}/max(1, ỹ_t)`, where `y_{t,j}` replays the primal steps.
    pub fn coordinate(&self, instance: &GameInstance<S>, j: usize) -> Result<S> {
        if self.steps.is_empty() {
            return Err(invalid("empty succinct solution"));
        }
        let link = AbsPow::new(self.p - S::one());
        let denom_pow = AbsPow::new((self.p - S::of(2.0)) / self.p);
        let mut y = S::zero();
        let mut sum = S::zero();
        for step in &self.steps {
            sum += y / step.y_norm.max(S::one());
            if step.row_norm_pow > S::zero() {
                let a = instance.query(step.i as usize, j)?;
                y += self.iota * link.signed(a) / denom_pow.abs(step.row_norm_pow);
            }
        }
        Ok(sum / S::of_usize(self.steps.len()))
    }

    pub fn reconstruct(&self, instance: &GameInstance<S>) -> Result<DenseVector<S>> {
        let coords = (0..instance.d())
            .map(|j| self.coordinate(instance, j))
            .collect::<Result<Vec<_>>>()?;
        DenseVector::new(coords)
    }
}

/// Run-time checks of the simulation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct QuantumDiagnostics {
    /// Relative precision `δ` given to every norm estimate.
    pub delta: f64,
    /// Repetitions whose median forms each norm estimate.
    pub boost: usize,
    /// Iterations whose `‖y_t‖_q^q` estimate met the `δ` bound.
    pub va_vt_checks: u64,
    /// Entries with `|clip(ṽ_approx) − clip(ṽ_true)| > δ/η` among those iterations.
    pub va_vt_violations: u64,
    /// Largest `|clip(ṽ_approx) − clip(ṽ_true)|·η/δ` seen.
    pub va_vt_max_ratio: f64,
    /// Norm estimates that missed their bound.
    pub estimate_failures: u64,
    pub max_abs_y: f64,
    pub coordinate_bound: f64,
    /// Set when `max_abs_y` exceeds `coordinate_bound`; monitoring only.
    pub coordinate_bound_exceeded: bool,
    /// State preparations that had to be repeated.
    pub state_prep_retries: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuantumRun<S> {
    pub report: SolveReport<S>,
    pub succinct: SuccinctSolution<S>,
    pub ledger: QueryLedger,
    pub diagnostics: QuantumDiagnostics,
}

pub fn quantum_solver_sim<S: Scalar>(instance: &GameInstance<S>, q: S, epsilon: S, seed: u64) -> Result<QuantumRun<S>> {
    quantum_solver_sim_with(instance, q, epsilon, seed, &QuantumOptions::default())
}

/// Classical simulation of the quantum `ℓq`-`ℓ1` solver.
///
/// Samples `i_t` and `j_t` from their exact laws, replaces the norms
/// `‖A_{i_t}‖_p^p` and `‖y_t‖_q^q` by median-boosted noisy estimates of precision
/// `δ = η²`, and charges modeled oracle queries to the ledger:
///
/// * `|y_t⟩`: maximum finding `⌈23√d⌉` plus `2(2r+1)` amplification calls, each
///   call to the `y`-oracle costing `2t` reads of `A`;
/// * norm estimates: `⌈√d/δ⌉` per repetition, at 1 read per call for a row of
///   `A` and `2t` per call for `y_t`;
/// * `|p_{t+1}⟩`: maximum finding `⌈23√n⌉` plus amplification, at `2t` reads of
///   `A` per call to the weight oracle.
///
/// Failed amplifications (probability `1 − sin²((2r+1)θ)`) are repeated and charged again.
pub fn quantum_solver_sim_with<S: Scalar>(
    instance: &GameInstance<S>,
    q: S,
    epsilon: S,
    seed: u64,
    options: &QuantumOptions,
) -> Result<QuantumRun<S>> {
    let started = Instant::now();
    let (n, d) = (instance.n(), instance.d());
    let mut params = SolverParams::derive(n, q, epsilon, seed, QUANTUM_LOG_COEFF)?;
    if let Some(t) = options.iterations {
        params = params.with_iterations(t);
    }
    let pair = NormPair::from_q(q)?;
    let p = pair.p();
    instance.check_rows_in_ball(p)?;

    let big_t = params.iterations;
    let eta = params.eta;
    let iota = params.iota;
    let clip_bound = params.clip_bound();
    let eta_f = eta.f64();
    // With one row η = 0; fall back to 1/T so estimates stay meaningful.
    let delta = if eta_f > 0.0 { eta_f * eta_f } else { 1.0 / big_t as f64 }.min(0.5);
    let boost = options.boost.unwrap_or_else(|| median_boost(big_t)).max(1);
    let coordinate_bound =
        COORDINATE_BOUND_CONSTANT * (p * q).f64().sqrt() / epsilon.f64() * (big_t as f64).ln().max(1.0);

    let pow_q = AbsPow::new(q);
    let pow_q_minus_1 = AbsPow::new(q - S::one());
    let pow_p_minus_1 = AbsPow::new(p - S::one());
    let row_norm_exp = AbsPow::new((p - S::of(2.0)) / p);
    let inv_q = q.recip();
    let rescale_every = options.rescale_every.max(1);
    let queries_before = instance.queries();

    let mut rng = RngStream::new(seed);
    let mut noise = rng.split();
    let mut ledger = QueryLedger::default();
    let mut diag = QuantumDiagnostics {
        delta,
        boost,
        coordinate_bound,
        ..Default::default()
    };

    let mut y = vec![S::zero(); d];
    let mut mass = vec![S::zero(); d];
    let mut x_sum = vec![S::zero(); d];
    let mut row = vec![S::zero(); d];
    let mut column = vec![S::zero(); n];
    let mut w = vec![S::one(); n];
    let mut w_total = S::of_usize(n);
    let mut steps = Vec::with_capacity(big_t);
    let capacity = if options.record_traces { big_t } else { 0 };
    let mut i_trace = Vec::with_capacity(capacity);
    let mut j_trace = Vec::with_capacity(capacity);
    let mut max_abs_update = S::zero();
    let mut skipped = 0u64;

    for t in 1..=big_t {
        let oracle_cost = 2 * t as u64;

        let i_t = draw_index(&w, w_total, &mut rng);
        instance.read_row(i_t, &mut row);

        let (row_est, row_charge) = simulate_norm_estimate(
            norm_pow(&row, p).f64(),
            delta,
            boost,
            d,
            options.failure_mode,
            &mut noise,
        )?;
        ledger.charge(Subroutine::NormEstimation, row_charge);
        if !row_est.within_bound {
            diag.estimate_failures += 1;
        }

        let y_pow = pow_q.fill(&y, &mut mass);
        let (y_est, y_charge) = simulate_norm_estimate(y_pow.f64(), delta, boost, d, options.failure_mode, &mut noise)?;
        ledger.charge(Subroutine::NormEstimation, y_charge.saturating_mul(oracle_cost));
        if !y_est.within_bound {
            diag.estimate_failures += 1;
        }
        let est_pow = S::of(y_est.value);
        let est_norm = est_pow.powf(inv_q);
        let est_scale = est_norm.max(S::one()).recip();
        for (s, yj) in x_sum.iter_mut().zip(&y) {
            *s += est_scale * *yj;
        }
        steps.push(SuccinctStep {
            i: i_t as u32,
            row_norm_pow: S::of(row_est.value),
            y_norm: est_norm,
        });

        let j_t = if y_pow > S::zero() {
            let y_vec = DenseVector::from_raw(y.clone());
            charge_state_prep(
                &y_vec,
                q,
                d,
                oracle_cost,
                Subroutine::StatePrep,
                &mut ledger,
                &mut diag,
                &mut rng,
            )?;
            Some(draw_index(&mass, y_pow, &mut rng))
        } else {
            None
        };
        if options.record_traces {
            i_trace.push(i_t as u32);
            j_trace.push(j_t.map(|j| j as u32));
        }

        if let Some(j) = j_t {
            instance.read_column(j, &mut column);
            let link = pow_q_minus_1.signed(y[j]);
            let true_norm = y_pow.powf(inv_q);
            let approx_factor = est_pow / (link * est_norm.max(S::one()));
            let true_factor = y_pow / (link * true_norm.max(S::one()));
            let check = y_est.within_bound;
            if check {
                diag.va_vt_checks += 1;
            }
            let limit = S::of(delta) * clip_bound;
            let mut new_total = S::zero();
            for (wi, a) in w.iter_mut().zip(&column) {
                let v = clamp(*a * approx_factor, clip_bound);
                if check && clip_bound.is_finite() {
                    let gap = (v - clamp(*a * true_factor, clip_bound)).abs();
                    let ratio = (gap / limit).f64();
                    if ratio > diag.va_vt_max_ratio {
                        diag.va_vt_max_ratio = ratio;
                    }
                    if gap > limit * (S::one() + S::of(1e-9)) {
                        diag.va_vt_violations += 1;
                    }
                }
                if v.abs() > max_abs_update {
                    max_abs_update = v.abs();
                }
                let ev = eta * v;
                *wi *= S::one() - ev + ev * ev;
                new_total += *wi;
            }
            w_total = new_total;
        }

        if row_est.value > 0.0 {
            let denom = row_norm_exp.abs(S::of(row_est.value));
            pow_p_minus_1.axpy_signed(iota / denom, &row, &mut y);
        } else {
            skipped += 1;
        }
        let y_max = y.iter().fold(0.0f64, |m, v| m.max(v.f64().abs()));
        diag.max_abs_y = diag.max_abs_y.max(y_max);

        if t % rescale_every == 0 {
            let m = w.iter().fold(S::zero(), |m, x| m.max(*x));
            w.iter_mut().for_each(|x| *x /= m);
            w_total = w.iter().copied().sum();
        }

        if t < big_t {
            // |p_{t+1}⟩ has amplitudes √w_i, so its measurement law is w/Σw.
            let amps = DenseVector::from_raw(w.iter().map(|x| x.sqrt()).collect());
            charge_state_prep(
                &amps,
                S::of(2.0),
                n,
                oracle_cost,
                Subroutine::DualPrep,
                &mut ledger,
                &mut diag,
                &mut rng,
            )?;
        }
    }
    diag.coordinate_bound_exceeded = diag.max_abs_y > coordinate_bound;

    let inv_t = S::of_usize(big_t).recip();
    let x_bar = DenseVector::from_raw(x_sum.iter().map(|s| *s * inv_t).collect());
    let queries = instance.queries() - queries_before;
    let evaluator = instance.fork();
    let value = primal_value(&evaluator, &x_bar)?;

    let report = SolveReport {
        path: SolverPath::LqL1,
        params: params.into(),
        x_bar,
        primal_value: value,
        i_trace,
        j_trace,
        queries,
        evaluation_queries: evaluator.queries(),
        wall_time: started.elapsed().as_secs_f64(),
        iterations: big_t,
        error_bound: epsilon,
        max_abs_update,
        skipped_primal_steps: skipped,
    };
    Ok(QuantumRun {
        report,
        succinct: SuccinctSolution { q, p, iota, steps },
        ledger,
        diagnostics: diag,
    })
}

#[inline]
fn clamp<S: Scalar>(v: S, bound: S) -> S {
    if v > bound {
        bound
    } else if v < -bound {
        -bound
    } else {
        v
    }
}

/// Charges one amplified preparation of the `ℓq` state of `a`, repeating on failure.
///
/// Min-finding over `a` goes to [`Subroutine::MinFinding`] for the primal state
/// and stays under `kind` for the dual state.
#[allow(clippy::too_many_arguments)]
fn charge_state_prep<S: Scalar>(
    a: &DenseVector<S>,
    q: S,
    dims: usize,
    oracle_cost: u64,
    kind: Subroutine,
    ledger: &mut QueryLedger,
    diag: &mut QuantumDiagnostics,
    rng: &mut RngStream,
) -> Result<()> {
    let theta = super::state::initial_angle(a, q)?;
    let plan = AmplificationPlan::for_angle(theta, dims);
    let success = grover_success_probability(theta, plan.rounds).min(1.0);
    let min_kind = if kind == Subroutine::StatePrep {
        Subroutine::MinFinding
    } else {
        kind
    };
    loop {
        ledger.charge(min_kind, plan.min_finding_queries.saturating_mul(oracle_cost));
        ledger.charge(kind, plan.amplification_queries.saturating_mul(oracle_cost));
        if success >= 1.0 || rng.random_bool(success) {
            return Ok(());
        }
        diag.state_prep_retries += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversarial::{build_hard_instance, HardCase, HardInstanceSpec};

    #[test]
    fn one_by_one() {
        let g = GameInstance::from_rows(&[vec![1.0]], 2.0).unwrap();
        let opts = QuantumOptions {
            iterations: Some(400),
            ..Default::default()
        };
        let run = quantum_solver_sim_with(&g, 2.0, 0.1, 1, &opts).unwrap();
        assert!(run.report.x_bar[0] > 0.9);
        assert!(run.ledger.is_consistent());
        let b = run.ledger.breakdown;
        assert!(b.norm_estimation > b.state_prep + b.min_finding + b.dual_prep);
    }

    #[test]
    fn succinct_matches_accumulated() {
        let spec = HardInstanceSpec {
            case: HardCase::One,
            n: 12,
            d: 6,
            l: 2,
            k: Some(4),
            p: 2.0,
        };
        let g = build_hard_instance::<f64>(&spec).unwrap();
        let opts = QuantumOptions {
            iterations: Some(300),
            ..Default::default()
        };
        let run = quantum_solver_sim_with(&g, 2.0, 0.2, 9, &opts).unwrap();
        let rebuilt = run.succinct.reconstruct(&g.fork()).unwrap();
        for j in 0..6 {
            assert!((rebuilt[j] - run.report.x_bar[j]).abs() <= 1e-9);
        }
        assert_eq!(run.diagnostics.va_vt_violations, 0);
        assert!(run.diagnostics.va_vt_checks > 0);
    }

    #[test]
    fn adversarial_failures_still_bounded() {
        let spec = HardInstanceSpec {
            case: HardCase::Two,
            n: 8,
            d: 4,
            l: 1,
            k: None,
            p: 2.0,
        };
        let g = build_hard_instance::<f64>(&spec).unwrap();
        for mode in [FailureMode::Zero, FailureMode::Double] {
            let opts = QuantumOptions {
                iterations: Some(200),
                boost: Some(hoeffding_boost(200)),
                failure_mode: mode,
                ..Default::default()
            };
            let run = quantum_solver_sim_with(&g, 2.0, 0.2, 2, &opts).unwrap();
            assert_eq!(run.diagnostics.va_vt_violations, 0);
            assert_eq!(run.diagnostics.estimate_failures, 0);
            let slack = 1.0 + run.diagnostics.delta + 1e-9;
            assert!(run.report.x_bar.norm(2.0).unwrap() <= slack);
        }
    }
}
