use std::time::Instant;

use crate::error::{invalid, Result};
use crate::estimator::{draw_index, RngStream};
use crate::game::GameInstance;
use crate::oracle::primal_value;
use crate::scalar::Scalar;
use crate::vector::DenseVector;

use super::{RunParams, SolveReport, SolverPath};

/// Default `c` in `T' = ⌈c·ln(n+d)/ε²⌉`.
pub const DEFAULT_L1_CONSTANT: f64 = 64.0;

#[derive(Clone, Copy, Debug)]
pub struct L1L1Options {
    pub constant: f64,
    pub record_traces: bool,
    /// Overrides the derived iteration count.
    pub iterations: Option<usize>,
}

impl Default for L1L1Options {
    fn default() -> Self {
        Self {
            constant: DEFAULT_L1_CONSTANT,
            record_traces: true,
            iterations: None,
        }
    }
}

pub fn solve_l1_l1<S: Scalar>(instance: &GameInstance<S>, epsilon: S, seed: u64) -> Result<SolveReport<S>> {
    solve_l1_l1_with(instance, epsilon, seed, &L1L1Options::default())
}

/// Solves `max_{x ∈ B_1} min_{p ∈ Δ_n} pᵀAx` by sampled multiplicative weights.
///
/// The maximizer mixes over the `2d` vertices `±e_j` of `B_1`, the minimizer over
/// rows. Each iteration samples one pure strategy per player and updates the
/// opponent's weights against it with exponentiated steps, reading one row and
/// one column (`n + d` entries). The reported `x̄` averages the maximizer's
/// mixed strategies, so `‖x̄‖_1 ≤ 1`.
pub fn solve_l1_l1_with<S: Scalar>(
    instance: &GameInstance<S>,
    epsilon: S,
    seed: u64,
    options: &L1L1Options,
) -> Result<SolveReport<S>> {
    let started = Instant::now();
    if !(epsilon > S::zero() && epsilon < S::one()) {
        return Err(invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(options.constant > 0.0) {
        return Err(invalid("l1-l1 iteration constant must be positive"));
    }
    let (n, d) = (instance.n(), instance.d());
    let log_strategies = ((n + d) as f64).ln();
    let eps = epsilon.f64();
    let big_t = options
        .iterations
        .unwrap_or_else(|| (options.constant * log_strategies / (eps * eps)).ceil() as usize)
        .max(1);
    let step = S::of((log_strategies / big_t as f64).sqrt());

    let queries_before = instance.queries();
    let mut rng = RngStream::new(seed);
    let mut row_w = vec![S::one(); n];
    let mut row_total = S::of_usize(n);
    // Vertices +e_j at k = j and −e_j at k = d + j.
    let mut vert_w = vec![S::one(); 2 * d];
    let mut vert_total = S::of_usize(2 * d);
    let mut x_sum = vec![S::zero(); d];
    let mut row = vec![S::zero(); d];
    let mut column = vec![S::zero(); n];

    let capacity = if options.record_traces { big_t } else { 0 };
    let mut i_trace = Vec::with_capacity(capacity);
    let mut j_trace = Vec::with_capacity(capacity);
    let mut max_abs_update = S::zero();

    for _ in 0..big_t {
        let inv = vert_total.recip();
        for (j, s) in x_sum.iter_mut().enumerate() {
            *s += (vert_w[j] - vert_w[d + j]) * inv;
        }

        let i_t = draw_index(&row_w, row_total, &mut rng);
        let k_t = draw_index(&vert_w, vert_total, &mut rng);
        let (j_t, sign) = if k_t < d { (k_t, S::one()) } else { (k_t - d, -S::one()) };
        if options.record_traces {
            i_trace.push(i_t as u32);
            j_trace.push(Some(k_t as u32));
        }

        instance.read_row(i_t, &mut row);
        instance.read_column(j_t, &mut column);

        // Maximizer gains A_{i_t}·(±e_j).
        for (j, a) in row.iter().enumerate() {
            let up = (step * *a).exp();
            vert_w[j] *= up;
            vert_w[d + j] /= up;
        }
        // Minimizer pays ±A_{i, j_t}.
        for (w, a) in row_w.iter_mut().zip(&column) {
            let payoff = sign * *a;
            if payoff.abs() > max_abs_update {
                max_abs_update = payoff.abs();
            }
            *w *= (-step * payoff).exp();
        }
        renormalize(&mut vert_w, &mut vert_total);
        renormalize(&mut row_w, &mut row_total);
    }

    let inv_t = S::of_usize(big_t).recip();
    let x_bar = DenseVector::from_raw(x_sum.iter().map(|s| *s * inv_t).collect());
    let queries = instance.queries() - queries_before;
    let evaluator = instance.fork();
    let value = primal_value(&evaluator, &x_bar)?;

    Ok(SolveReport {
        path: SolverPath::L1L1,
        params: RunParams {
            q: None,
            p: None,
            epsilon,
            iterations: big_t,
            eta: step,
            iota: None,
            seed,
        },
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
        skipped_primal_steps: 0,
    })
}

/// Divides by the maximum weight and refreshes the total.
fn renormalize<S: Scalar>(w: &mut [S], total: &mut S) {
    let m = w.iter().fold(S::zero(), |m, x| m.max(*x));
    let inv = m.recip();
    *total = S::zero();
    for x in w.iter_mut() {
        *x *= inv;
        *total += *x;
    }
}
