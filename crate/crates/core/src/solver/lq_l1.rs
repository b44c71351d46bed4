use std::time::Instant;

use crate::error::{invalid, Result};
use crate::estimator::{draw_index, RngStream};
use crate::game::GameInstance;
use crate::norm::norm_pow;
use crate::oracle::primal_value;
use crate::scalar::{AbsPow, Scalar};
use crate::vector::DenseVector;

use super::steps::mwu_factor;
use super::{SolveOptions, SolveReport, SolverParams, SolverPath};

/// Runs the sublinear `ℓq`-`ℓ1` solver with derived constants.
pub fn solve_lq_l1<S: Scalar>(instance: &GameInstance<S>, q: S, epsilon: S, seed: u64) -> Result<SolveReport<S>> {
    let params = SolverParams::classical(instance.n(), q, epsilon, seed)?;
    solve_lq_l1_with(instance, &params, &SolveOptions::default())
}

/// Runs the solver for exactly `params.iterations` iterations.
///
/// Entry reads are charged to `instance`; at most `T·(n + d)` are made.
pub fn solve_lq_l1_with<S: Scalar>(
    instance: &GameInstance<S>,
    params: &SolverParams<S>,
    options: &SolveOptions,
) -> Result<SolveReport<S>> {
    let started = Instant::now();
    let (n, d) = (instance.n(), instance.d());
    if params.n != n {
        return Err(invalid(format!(
            "parameters derived for n = {}, instance has n = {n}",
            params.n
        )));
    }
    let q = params.pair.q();
    let p = params.pair.p();
    instance.check_rows_in_ball(p)?;

    let pow_q = AbsPow::new(q);
    let pow_q_minus_1 = AbsPow::new(q - S::one());
    let pow_p_minus_1 = AbsPow::new(p - S::one());
    let row_norm_exp = AbsPow::new((p - S::of(2.0)) / p);
    let inv_q = AbsPow::new(q.recip());

    let big_t = params.iterations;
    let eta = params.eta;
    let iota = params.iota;
    let clip_bound = params.clip_bound();
    let rescale_every = options.rescale_every.max(1);
    let queries_before = instance.queries();
    let mut rng = RngStream::new(params.seed);

    let mut y = vec![S::zero(); d];
    let mut mass = vec![S::zero(); d];
    let mut x_sum = vec![S::zero(); d];
    let mut row = vec![S::zero(); d];
    let mut column = vec![S::zero(); n];
    let mut w = vec![S::one(); n];
    let mut w_total = S::of_usize(n);

    let capacity = if options.record_traces { big_t } else { 0 };
    let mut i_trace = Vec::with_capacity(capacity);
    let mut j_trace = Vec::with_capacity(capacity);
    let mut max_abs_update = S::zero();
    let mut skipped = 0u64;

    for t in 0..big_t {
        // x_t = y_t / max{1, ‖y_t‖_q}; the ℓq law of x_t equals that of y_t.
        let total = pow_q.fill(&y, &mut mass);
        let y_norm = inv_q.abs(total);
        let scale = if y_norm > S::one() { y_norm.recip() } else { S::one() };
        for (s, yj) in x_sum.iter_mut().zip(&y) {
            *s += scale * *yj;
        }

        let i_t = draw_index(&w, w_total, &mut rng);
        let j_t = (total > S::zero()).then(|| draw_index(&mass, total, &mut rng));
        if options.record_traces {
            i_trace.push(i_t as u32);
            j_trace.push(j_t.map(|j| j as u32));
        }

        // Dual estimates use x_t, so capture ‖x_t‖_q^q / x_t(j)^{q−1} before y moves.
        let estimate_scale = j_t.map(|j| scale * total / pow_q_minus_1.signed(y[j]));

        instance.read_row(i_t, &mut row);
        let row_norm_p = norm_pow(&row, p);
        if row_norm_p > S::zero() {
            let denom = row_norm_exp.abs(row_norm_p);
            pow_p_minus_1.axpy_signed(iota / denom, &row, &mut y);
        } else {
            skipped += 1;
        }

        if let (Some(j), Some(factor)) = (j_t, estimate_scale) {
            instance.read_column(j, &mut column);
            let mut new_total = S::zero();
            for (wi, a) in w.iter_mut().zip(&column) {
                let raw = *a * factor;
                let v = if raw > clip_bound {
                    clip_bound
                } else if raw < -clip_bound {
                    -clip_bound
                } else {
                    raw
                };
                let abs_v = v.abs();
                if abs_v > max_abs_update {
                    max_abs_update = abs_v;
                }
                let f = mwu_factor(v, eta);
                debug_assert!(f >= S::of(0.75) - S::epsilon());
                *wi *= f;
                new_total += *wi;
            }
            w_total = new_total;
        }
        // x_t = 0 only at t = 1 in practice: the true payoffs A_i·x_t are all zero,
        // so v_t = 0 and the weights stay put.

        if (t + 1) % rescale_every == 0 {
            let w_max = w.iter().fold(S::zero(), |m, x| m.max(*x));
            let inv = w_max.recip();
            w.iter_mut().for_each(|x| *x *= inv);
            w_total = w.iter().copied().sum();
        }
    }

    let inv_t = S::of_usize(big_t).recip();
    let x_bar = DenseVector::from_raw(x_sum.iter().map(|s| *s * inv_t).collect());
    let queries = instance.queries() - queries_before;

    let evaluator = instance.fork();
    let value = primal_value(&evaluator, &x_bar)?;

    Ok(SolveReport {
        path: SolverPath::LqL1,
        params: (*params).into(),
        x_bar,
        primal_value: value,
        i_trace,
        j_trace,
        queries,
        evaluation_queries: evaluator.queries(),
        wall_time: started.elapsed().as_secs_f64(),
        iterations: big_t,
        error_bound: params.epsilon,
        max_abs_update,
        skipped_primal_steps: skipped,
    })
}
