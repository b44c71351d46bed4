use serde::Serialize;

use crate::error::{invalid, Result};
use crate::estimator::{draw_index, RngStream};
use crate::game::GameInstance;
use crate::norm::{norm_unchecked, NormPair};
use crate::scalar::{AbsPow, Scalar};
use crate::solver::CLASSICAL_LOG_COEFF;
use crate::vector::{dot, DenseVector};

#[derive(Clone, Debug, Serialize)]
pub struct SvmSolution<S> {
    /// Average iterate `w̄`.
    pub w: DenseVector<S>,
    /// `min_i 2y_i·X_iᵀw̄ − ‖w̄‖_q^q`.
    pub margin_value: S,
    /// Radius of the `ℓq` ball the iterates were confined to.
    pub radius_used: S,
    /// Set when `margin_value ≤ 0`: the data may be unseparable, or `ε ≥ σ_SVM`.
    pub possibly_unseparable: bool,
    pub iterations: usize,
    pub queries: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct SvmOptions {
    /// Overrides the derived iteration count.
    pub iterations: Option<usize>,
    pub rescale_every: usize,
}

impl Default for SvmOptions {
    fn default() -> Self {
        Self {
            iterations: None,
            rescale_every: 1000,
        }
    }
}

/// `R = 2^{1/(q−1)}`. Every maximizer of the margin objective has `‖w‖_q ≤ R`.
pub fn svm_radius(q: f64) -> f64 {
    2f64.powf(1.0 / (q - 1.0))
}

/// Bound `R' = max(1, R^q + 2R)` on the payoffs `|2X_iᵀw − ‖w‖_q^q|` over the radius-`R` ball.
fn payoff_bound(q: f64) -> f64 {
    let r = svm_radius(q);
    (r.powf(q) + 2.0 * r).max(1.0)
}

/// `T = ⌈(895 ln n + 4p)·R'²/ε²⌉`.
pub fn svm_iterations(n: usize, q: f64, epsilon: f64) -> usize {
    let p = q / (q - 1.0);
    let rp = payoff_bound(q);
    ((CLASSICAL_LOG_COEFF * (n as f64).ln() + 4.0 * p) * rp * rp / (epsilon * epsilon)).ceil() as usize
}

pub fn svm_solve<S: Scalar>(points: &[Vec<S>], labels: &[i8], q: S, epsilon: S, seed: u64) -> Result<SvmSolution<S>> {
    svm_solve_with(points, labels, q, epsilon, seed, &SvmOptions::default())
}

/// Approximately maximizes `min_i 2y_i·X_iᵀw − ‖w‖_q^q`.
///
/// Labels are folded into the points. The primal runs `p`-norm OGD on the
/// radius-`R` ball against the concave payoff of the sampled row, with
/// gradients `2X_i − q·sgn(w)|w|^{q−1}` scaled into the unit `ℓp` ball. The
/// dual runs multiplicative weights on `ℓq`-sampled estimates
/// `2X_i(j)‖w‖_q^q / (sgn(w_j)|w_j|^{q−1}) − ‖w‖_q^q`, divided by `R'` and
/// clipped at `1/η`.
pub fn svm_solve_with<S: Scalar>(
    points: &[Vec<S>],
    labels: &[i8],
    q: S,
    epsilon: S,
    seed: u64,
    options: &SvmOptions,
) -> Result<SvmSolution<S>> {
    let pair = NormPair::from_q(q)?;
    let p = pair.p();
    if !(epsilon > S::zero() && epsilon < S::one()) {
        return Err(invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let folded = fold(points, labels)?;
    let n = folded.len();
    let instance = GameInstance::from_rows(&folded, p)?;
    let d = instance.d();

    let qf = q.f64();
    let radius = S::of(svm_radius(qf));
    let rp = S::of(payoff_bound(qf));
    let grad_bound = S::of(2.0) + q * radius.powf(q - S::one());
    let big_t = options
        .iterations
        .unwrap_or_else(|| svm_iterations(n, qf, epsilon.f64()))
        .max(1);
    let tf = big_t as f64;
    let eta = S::of((11.0 * (n as f64).ln() / (12.0 * tf)).sqrt());
    let iota = S::of(((qf - 1.0) / (2.0 * tf)).sqrt());
    let clip_bound = if eta > S::zero() { eta.recip() } else { S::infinity() };

    let pow_q = AbsPow::new(q);
    let pow_q_minus_1 = AbsPow::new(q - S::one());
    let pow_p_minus_1 = AbsPow::new(p - S::one());
    let step_denominator = AbsPow::new(p - S::of(2.0));
    let rescale_every = options.rescale_every.max(1);
    let mut rng = RngStream::new(seed);

    let mut y = vec![S::zero(); d];
    let mut w = vec![S::zero(); d];
    let mut mass = vec![S::zero(); d];
    let mut w_sum = vec![S::zero(); d];
    let mut grad = vec![S::zero(); d];
    let mut row = vec![S::zero(); d];
    let mut column = vec![S::zero(); n];
    let mut weights = vec![S::one(); n];
    let mut weight_total = S::of_usize(n);

    for t in 0..big_t {
        let y_norm = norm_unchecked(&y, q);
        let scale = if y_norm > radius { radius / y_norm } else { S::one() };
        for ((wj, yj), sj) in w.iter_mut().zip(&y).zip(w_sum.iter_mut()) {
            *wj = scale * *yj;
            *sj += *wj;
        }
        let w_pow = pow_q.fill(&w, &mut mass);

        let i_t = draw_index(&weights, weight_total, &mut rng);
        let j_t = (w_pow > S::zero()).then(|| draw_index(&mass, w_pow, &mut rng));

        instance.read_row(i_t, &mut row);
        for ((g, a), wj) in grad.iter_mut().zip(&row).zip(&w) {
            *g = (S::of(2.0) * *a - q * pow_q_minus_1.signed(*wj)) / grad_bound;
        }
        let g_norm = norm_unchecked(&grad, p);
        if g_norm > S::zero() {
            let step = iota * radius / step_denominator.abs(g_norm);
            pow_p_minus_1.axpy_signed(step, &grad, &mut y);
        }

        if let Some(j) = j_t {
            instance.read_column(j, &mut column);
            let factor = S::of(2.0) * w_pow / pow_q_minus_1.signed(w[j]);
            let mut total = S::zero();
            for (wi, a) in weights.iter_mut().zip(&column) {
                let raw = (*a * factor - w_pow) / rp;
                let v = if raw > clip_bound {
                    clip_bound
                } else if raw < -clip_bound {
                    -clip_bound
                } else {
                    raw
                };
                let ev = eta * v;
                *wi *= S::one() - ev + ev * ev;
                total += *wi;
            }
            weight_total = total;
        }

        if (t + 1) % rescale_every == 0 {
            let m = weights.iter().fold(S::zero(), |m, x| m.max(*x));
            weights.iter_mut().for_each(|x| *x /= m);
            weight_total = weights.iter().copied().sum();
        }
    }

    let inv_t = S::of_usize(big_t).recip();
    let w_bar = DenseVector::from_raw(w_sum.iter().map(|s| *s * inv_t).collect());
    let margin_value = svm_margin_value(points, labels, &w_bar, q)?;
    Ok(SvmSolution {
        w: w_bar,
        margin_value,
        radius_used: radius,
        possibly_unseparable: margin_value <= S::zero(),
        iterations: big_t,
        queries: instance.queries(),
    })
}

/// `min_i 2y_i·X_iᵀw − ‖w‖_q^q`, evaluated densely.
pub fn svm_margin_value<S: Scalar>(points: &[Vec<S>], labels: &[i8], w: &DenseVector<S>, q: S) -> Result<S> {
    let folded = fold(points, labels)?;
    if folded[0].len() != w.len() {
        return Err(invalid("w and points differ in dimension"));
    }
    let penalty = AbsPow::new(q).sum(w.as_slice());
    Ok(folded
        .iter()
        .map(|x| S::of(2.0) * dot(x, w.as_slice()) - penalty)
        .fold(S::infinity(), |m, v| m.min(v)))
}

/// `X_i ← y_i·X_i`.
fn fold<S: Scalar>(points: &[Vec<S>], labels: &[i8]) -> Result<Vec<Vec<S>>> {
    if points.is_empty() {
        return Err(invalid("need at least one point"));
    }
    if points.len() != labels.len() {
        return Err(invalid(format!("{} points but {} labels", points.len(), labels.len())));
    }
    let d = points[0].len();
    if d == 0 || points.iter().any(|x| x.len() != d) {
        return Err(invalid("points must share a positive dimension"));
    }
    points
        .iter()
        .zip(labels)
        .map(|(x, &y)| match y {
            1 => Ok(x.clone()),
            -1 => Ok(x.iter().map(|v| -*v).collect()),
            other => Err(invalid(format!("labels must be +1 or -1, got {other}"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn margin_examples() {
        let x = vec![vec![1.0, 0.0]];
        let zero = DenseVector::zeros(2);
        assert_eq!(svm_margin_value(&x, &[1], &zero, 2.0).unwrap(), 0.0);
        let e0 = DenseVector::basis(2, 0);
        assert_eq!(svm_margin_value(&x, &[1], &e0, 2.0).unwrap(), 1.0);
        let m = DenseVector::new(vec![-1.0, 0.0]).unwrap();
        assert_eq!(svm_margin_value(&x, &[1], &m, 2.0).unwrap(), -3.0);
    }

    #[test]
    fn folding_identity() {
        let x = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        let e0 = DenseVector::basis(2, 0);
        assert_eq!(svm_margin_value(&x, &[1, -1], &e0, 2.0).unwrap(), 1.0);
        assert!(svm_margin_value(&x, &[1, 0], &e0, 2.0).is_err());
    }

    #[test]
    fn constants() {
        assert_relative_eq!(svm_radius(2.0), 2.0);
        assert_relative_eq!(payoff_bound(2.0), 8.0);
        assert_eq!(svm_iterations(1, 2.0, 0.1), 51_200);
    }

    #[test]
    fn single_point_reaches_margin_one() {
        let x = vec![vec![1.0, 0.0]];
        let sol = svm_solve(&x, &[1], 2.0, 0.1, 3).unwrap();
        assert!(sol.margin_value >= 0.9, "margin {}", sol.margin_value);
        assert!(norm_unchecked(sol.w.as_slice(), 2.0) <= sol.radius_used + 1e-9);
        assert!(!sol.possibly_unseparable);
    }

    #[test]
    fn unseparable_is_flagged() {
        let x = vec![vec![1.0], vec![-1.0]];
        let opts = SvmOptions {
            iterations: Some(20_000),
            ..Default::default()
        };
        let sol = svm_solve_with(&x, &[1, 1], 2.0, 0.1, 0, &opts).unwrap();
        assert!(sol.possibly_unseparable);
    }
}
