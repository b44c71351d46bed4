use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::estimator::RngStream;

/// Each amplitude-estimation repetition is charged `⌈c·√dims/δ⌉` with `c = 1`.
pub const AMPLITUDE_ESTIMATION_CONSTANT: f64 = 1.0;

const SUCCESS_RATE: f64 = 2.0 / 3.0;

/// What a failed repetition reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureMode {
    /// Uniform on `[0, 2m]`.
    #[default]
    Uniform,
    /// Always `0`.
    Zero,
    /// Always `2m`.
    Double,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoisyEstimate {
    /// Reported value `m̃`.
    pub value: f64,
    /// Relative precision `δ` of a successful repetition.
    pub relative_bound: f64,
    /// Probability that the median meets the bound: more than half the
    /// repetitions succeed.
    pub confidence: f64,
    /// Whether `|m̃ − m| ≤ δm` actually holds for this draw.
    pub within_bound: bool,
}

/// Median of `boost` noisy repetitions of a relative-`δ` estimate of `m`, and
/// the queries charged (`boost·⌈√dims/δ⌉`).
///
/// Each repetition succeeds with probability 2/3 and then lies uniformly in
/// `[m(1−δ), m(1+δ)]`; failures follow `mode`. The lower median is reported.
pub fn simulate_norm_estimate(
    true_value: f64,
    delta: f64,
    boost: usize,
    dims: usize,
    mode: FailureMode,
    rng: &mut RngStream,
) -> Result<(NoisyEstimate, u64)> {
    if !(true_value >= 0.0 && true_value.is_finite()) {
        return Err(invalid(format!("true value must be finite and >= 0, got {true_value}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    if boost == 0 {
        return Err(invalid("boost must be at least 1"));
    }
    let per_run = (AMPLITUDE_ESTIMATION_CONSTANT * (dims as f64).sqrt() / delta).ceil() as u64;
    let charged = per_run.saturating_mul(boost as u64);
    let m = true_value;
    let mut draws: Vec<f64> = (0..boost)
        .map(|_| {
            if rng.random_bool(SUCCESS_RATE) {
                m * (1.0 - delta + 2.0 * delta * rng.uniform())
            } else {
                match mode {
                    FailureMode::Uniform => 2.0 * m * rng.uniform(),
                    FailureMode::Zero => 0.0,
                    FailureMode::Double => 2.0 * m,
                }
            }
        })
        .collect();
    draws.sort_by(f64::total_cmp);
    let value = draws[(boost - 1) / 2];
    let estimate = NoisyEstimate {
        value,
        relative_bound: delta,
        confidence: median_success_probability(boost),
        within_bound: (value - m).abs() <= delta * m,
    };
    Ok((estimate, charged))
}

/// `P[Binomial(k, 2/3) ≥ ⌊k/2⌋ + 1]`, the chance that the lower median of `k`
/// repetitions is a successful one.
pub fn median_success_probability(k: usize) -> f64 {
    let need = k / 2 + 1;
    let (ln_p, ln_q) = (SUCCESS_RATE.ln(), (1.0 - SUCCESS_RATE).ln());
    let mut ln_choose = 0.0f64;
    let mut total = 0.0;
    for j in 0..=k {
        if j > 0 {
            ln_choose += ((k - j + 1) as f64).ln() - (j as f64).ln();
        }
        if j >= need {
            total += (ln_choose + j as f64 * ln_p + (k - j) as f64 * ln_q).exp();
        }
    }
    total.min(1.0)
}
