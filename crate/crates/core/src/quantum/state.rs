use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::estimator::{draw_index, RngStream};
use crate::scalar::Scalar;
use crate::vector::DenseVector;

/// Maximum finding is charged `⌈23·√n⌉` oracle calls.
pub const MIN_FINDING_CONSTANT: f64 = 23.0;

/// Amplification stops at the first round count reaching this success probability.
pub const TARGET_SUCCESS: f64 = 0.99;

/// Unit vector `sgn(a_i)|a_i|^{q/2}/‖a‖_q^{q/2}`, whose measurement law is the `ℓq` law of `a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmplitudeState {
    pub amplitudes: Vec<f64>,
}

impl AmplitudeState {
    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    /// Born-rule probabilities `amplitude_i²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }

    /// One computational-basis measurement.
    pub fn measure(&self, rng: &mut RngStream) -> usize {
        let probs = self.probabilities();
        let total = probs.iter().sum();
        draw_index(&probs, total, rng)
    }
}

pub fn lq_state_amplitudes<S: Scalar>(a: &DenseVector<S>, q: S) -> Result<AmplitudeState> {
    let q = q.f64();
    if !(q > 1.0 && q <= 2.0) {
        return Err(invalid(format!("q must lie in (1, 2], got {q}")));
    }
    if a.is_zero() {
        return Err(invalid("cannot prepare a state from the zero vector"));
    }
    let m = a.iter().fold(0.0f64, |m, x| m.max(x.f64().abs()));
    let half = q / 2.0;
    // Scale by the max entry first so tiny or huge inputs keep full precision.
    let raw: Vec<f64> = a
        .iter()
        .map(|x| {
            let v = x.f64() / m;
            v.signum() * v.abs().powf(half) * f64::from(v != 0.0)
        })
        .collect();
    let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(AmplitudeState {
        amplitudes: raw.iter().map(|v| v / norm).collect(),
    })
}

/// `θ = arcsin(‖a‖_q^{q/2} / (√n·max_i |a_i|^{q/2}))`, the initial success angle.
pub fn initial_angle<S: Scalar>(a: &DenseVector<S>, q: S) -> Result<f64> {
    if a.is_zero() {
        return Err(invalid("cannot prepare a state from the zero vector"));
    }
    let q = q.f64();
    let m = a.iter().fold(0.0f64, |m, x| m.max(x.f64().abs()));
    let mass: f64 = a.iter().map(|x| (x.f64().abs() / m).powf(q)).sum();
    let s = (mass / a.len() as f64).sqrt();
    Ok(s.min(1.0).asin())
}

/// `sin²((2r + 1)θ)`.
pub fn grover_success_probability(theta: f64, rounds: u64) -> f64 {
    ((2 * rounds + 1) as f64 * theta).sin().powi(2)
}

/// The same probability obtained by applying the Grover iterate `r` times to
/// `(cos θ, sin θ)` in the (bad, good) plane.
pub fn grover_success_probability_iterated(theta: f64, rounds: u64) -> f64 {
    let psi = [theta.cos(), theta.sin()];
    let mut state = psi;
    for _ in 0..rounds {
        // Oracle: reflect the good component.
        state[1] = -state[1];
        // Diffusion: 2|ψ⟩⟨ψ| − I.
        let overlap = psi[0] * state[0] + psi[1] * state[1];
        state = [2.0 * overlap * psi[0] - state[0], 2.0 * overlap * psi[1] - state[1]];
    }
    state[1] * state[1]
}

/// Round count and charges of one amplified state preparation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AmplificationPlan {
    pub theta: f64,
    pub rounds: u64,
    pub success_probability: f64,
    /// Two oracle calls per Grover iterate plus the initial preparation.
    pub amplification_queries: u64,
    /// `⌈23·√n⌉` for finding `max_i |a_i|^{q/2}`.
    pub min_finding_queries: u64,
}

impl AmplificationPlan {
    pub fn charged_queries(&self) -> u64 {
        self.amplification_queries + self.min_finding_queries
    }

    pub fn for_angle(theta: f64, n: usize) -> Self {
        let rounds = rounds_for(theta);
        Self {
            theta,
            rounds,
            success_probability: grover_success_probability(theta, rounds),
            amplification_queries: 2 * (2 * rounds + 1),
            min_finding_queries: (MIN_FINDING_CONSTANT * (n as f64).sqrt()).ceil() as u64,
        }
    }
}

/// Smallest `r` with `sin²((2r+1)θ) ≥ 0.99`, else the `r` putting `(2r+1)θ` nearest `π/2`.
fn rounds_for(theta: f64) -> u64 {
    if theta <= 0.0 {
        return 0;
    }
    let limit = (FRAC_PI_2 / (2.0 * theta)).ceil() as u64 + 1;
    if let Some(r) = (0..=limit).find(|r| grover_success_probability(theta, *r) >= TARGET_SUCCESS) {
        return r;
    }
    (0..=limit)
        .min_by(|a, b| {
            let da = ((2 * a + 1) as f64 * theta - FRAC_PI_2).abs();
            let db = ((2 * b + 1) as f64 * theta - FRAC_PI_2).abs();
            da.total_cmp(&db)
        })
        .unwrap_or(0)
}

/// `(rounds, charged_queries)` for preparing the `ℓq` state of `a`.
pub fn amplification_rounds<S: Scalar>(a: &DenseVector<S>, q: S) -> Result<(u64, u64)> {
    let plan = AmplificationPlan::for_angle(initial_angle(a, q)?, a.len());
    Ok((plan.rounds, plan.charged_queries()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn amplitude_examples() {
        let s = lq_state_amplitudes(&DenseVector::new(vec![2.0; 4]).unwrap(), 1.5).unwrap();
        for a in &s.amplitudes {
            assert_relative_eq!(*a, 0.5, max_relative = 1e-15);
        }
        let s = lq_state_amplitudes(&DenseVector::<f64>::basis(5, 0), 1.3).unwrap();
        assert_eq!(s.amplitudes, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        let s = lq_state_amplitudes(&DenseVector::new(vec![0.6, -0.8]).unwrap(), 2.0).unwrap();
        assert_relative_eq!(s.amplitudes[0], 0.6, max_relative = 1e-14);
        assert_relative_eq!(s.amplitudes[1], -0.8, max_relative = 1e-14);
        assert!(lq_state_amplitudes(&DenseVector::<f64>::zeros(3), 2.0).is_err());
    }

    #[test]
    fn rounds_examples() {
        let uniform = DenseVector::new(vec![1.0; 9]).unwrap();
        assert_relative_eq!(initial_angle(&uniform, 1.5).unwrap(), PI / 2.0);
        assert_eq!(amplification_rounds(&uniform, 1.5).unwrap(), (0, 2 + 69));

        let e0 = DenseVector::<f64>::basis(4, 0);
        assert_relative_eq!(initial_angle(&e0, 2.0).unwrap(), PI / 6.0, max_relative = 1e-14);
        let (r, charged) = amplification_rounds(&e0, 2.0).unwrap();
        assert_eq!(r, 1);
        assert_eq!(charged, 6 + 46);
        assert_relative_eq!(grover_success_probability(PI / 6.0, 1), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn rounds_track_grover_closed_form() {
        for n in [4usize, 16, 64, 256, 1024] {
            let e0 = DenseVector::<f64>::basis(n, 0);
            let theta = initial_angle(&e0, 2.0).unwrap();
            let (r, _) = amplification_rounds(&e0, 2.0).unwrap();
            let closed = (PI / (4.0 * theta) - 0.5).round() as i64;
            assert!((r as i64 - closed).abs() <= 1, "n={n}: {r} vs {closed}");
        }
    }

    #[test]
    fn iterated_rotation_matches_closed_form() {
        for theta in [0.01, 0.1, 0.3, 0.7, PI / 2.0] {
            for r in 0..40 {
                let a = grover_success_probability(theta, r);
                let b = grover_success_probability_iterated(theta, r);
                assert!((a - b).abs() <= 1e-10, "theta={theta} r={r}");
            }
        }
    }
}
