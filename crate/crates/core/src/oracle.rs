//! Dense, high-accuracy reference computations.
//!
//! Everything here relies on the minimax identity
//! `σ = max_{x ∈ B_q} min_{p ∈ Δ} pᵀAx = min_{p ∈ Δ} ‖Aᵀp‖_p`
//! together with Hölder equality for the inner maximization.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::estimator::RngStream;
use crate::game::GameInstance;
use crate::norm::{norm_unchecked, NormPair};
use crate::scalar::{AbsPow, Scalar};
use crate::vector::{dot, DenseVector};

/// Iteration cap of [`game_value_exact`].
pub const ORACLE_ITERATION_CAP: usize = 1_000_000;

/// A feasible primal-dual pair bracketing the game value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueCertificate<S> {
    /// `min_i A_i·x` for the feasible `x` below.
    pub lower: S,
    /// `‖Aᵀp‖_p` for the simplex point `p_dist` below.
    pub upper: S,
    pub gap: S,
    pub iterations_used: usize,
    pub x: DenseVector<S>,
    pub p_dist: DenseVector<S>,
}

impl<S: Scalar> ValueCertificate<S> {
    /// Midpoint of the bracket.
    pub fn value(&self) -> S {
        (self.lower + self.upper) / S::of(2.0)
    }

    pub fn cast<T: Scalar>(&self) -> ValueCertificate<T> {
        ValueCertificate {
            lower: T::of(self.lower.f64()),
            upper: T::of(self.upper.f64()),
            gap: T::of(self.gap.f64()),
            iterations_used: self.iterations_used,
            x: self.x.cast(),
            p_dist: self.p_dist.cast(),
        }
    }
}

/// `x_j = sgn(y_j)|y_j|^{p−1} / ‖y‖_p^{p−1}`, the maximizer of `yᵀx` over `B_q`.
///
/// Returns the zero vector for `y = 0`.
pub fn best_response_x<S: Scalar>(y: &DenseVector<S>, q: S) -> Result<DenseVector<S>> {
    let pair = NormPair::from_q(q)?;
    Ok(DenseVector::from_raw(best_response(y.as_slice(), pair.p())))
}

fn best_response<S: Scalar>(y: &[S], p: S) -> Vec<S> {
    let norm = norm_unchecked(y, p);
    if norm == S::zero() {
        return vec![S::zero(); y.len()];
    }
    let link = AbsPow::new(p - S::one());
    // Normalizing by the norm first keeps |y_j/‖y‖|^{p−1} in [0, 1].
    y.iter().map(|v| link.signed(*v / norm)).collect()
}

/// `min_i A_i·x`, charging `n·d` queries.
pub fn primal_value<S: Scalar>(instance: &GameInstance<S>, x: &DenseVector<S>) -> Result<S> {
    if x.len() != instance.d() {
        return Err(invalid(format!(
            "x has length {}, instance has d = {}",
            x.len(),
            instance.d()
        )));
    }
    let mut row = vec![S::zero(); instance.d()];
    let mut best = S::infinity();
    for i in 0..instance.n() {
        instance.read_row(i, &mut row);
        best = best.min(dot(&row, x.as_slice()));
    }
    Ok(best)
}

/// `‖Aᵀp‖_p − min_i A_i·x` for feasible `x ∈ B_q` and `p_dist ∈ Δ_n`.
pub fn duality_gap<S: Scalar>(
    instance: &GameInstance<S>,
    x: &DenseVector<S>,
    p_dist: &DenseVector<S>,
    q: S,
) -> Result<S> {
    let pair = NormPair::from_q(q)?;
    let tol = S::of(1e-9);
    let x_norm = norm_unchecked(x.as_slice(), q);
    if x_norm > S::one() + tol {
        return Err(invalid(format!("x has l{q}-norm {x_norm} > 1")));
    }
    if p_dist.len() != instance.n() {
        return Err(invalid("p_dist length must equal n"));
    }
    let mass: S = p_dist.iter().copied().sum();
    if p_dist.iter().any(|v| *v < -tol) || (mass - S::one()).abs() > tol {
        return Err(invalid("p_dist must lie on the probability simplex"));
    }
    let lower = primal_value(instance, x)?;
    let mut row = vec![S::zero(); instance.d()];
    let mut y = vec![S::zero(); instance.d()];
    for i in 0..instance.n() {
        instance.read_row(i, &mut row);
        for (acc, a) in y.iter_mut().zip(&row) {
            *acc += p_dist[i] * *a;
        }
    }
    Ok(norm_unchecked(&y, pair.p()) - lower)
}

/// Options for [`game_value_exact_with`].
#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub max_iterations: usize,
    /// `None` starts from the uniform distribution; `Some(seed)` from a random simplex point.
    pub seed: Option<u64>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            max_iterations: ORACLE_ITERATION_CAP,
            seed: None,
        }
    }
}

/// Computes `σ` to within `tol` with a certificate, from the uniform start.
pub fn game_value_exact<S: Scalar>(instance: &GameInstance<S>, q: S, tol: S) -> Result<ValueCertificate<S>> {
    game_value_exact_with(instance, q, tol, &OracleOptions::default())
}

/// Computes `σ` to within `tol` with a certificate.
///
/// Minimizes the smooth convex surrogate `f(p) = ‖Aᵀp‖_p^p` over the simplex with
/// accelerated projected gradient (backtracking step, function-value restart).
/// Every iterate yields `upper = ‖Aᵀp‖_p` and, through the best response
/// `x = ∇‖·‖_p(Aᵀp)`, `lower = min_i A_i·x`. The best of each is kept and the
/// loop stops once they are within `tol`. The matrix is read once (`n·d` queries);
/// arithmetic is done in `f64`.
pub fn game_value_exact_with<S: Scalar>(
    instance: &GameInstance<S>,
    q: S,
    tol: S,
    options: &OracleOptions,
) -> Result<ValueCertificate<S>> {
    let pair = NormPair::from_q(q)?;
    if !(tol > S::zero()) {
        return Err(invalid("tol must be positive"));
    }
    let a: Vec<f64> = instance.materialize().iter().map(|v| v.f64()).collect();
    let problem = Problem {
        a,
        n: instance.n(),
        d: instance.d(),
        p: pair.p().f64(),
    };
    let cert = problem.solve(tol.f64(), options);
    if cert.gap <= tol.f64() {
        Ok(cert.cast())
    } else {
        Err(Error::NotConverged {
            tol: tol.f64(),
            certificate: Box::new(cert),
        })
    }
}

struct Problem {
    a: Vec<f64>,
    n: usize,
    d: usize,
    p: f64,
}

struct Tracker {
    lower: f64,
    x: Vec<f64>,
    upper: f64,
    p_dist: Vec<f64>,
}

impl Problem {
    fn y_of(&self, w: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (wi, row) in w.iter().zip(self.a.chunks(self.d)) {
            if *wi != 0.0 {
                for (acc, a) in y.iter_mut().zip(row) {
                    *acc += wi * a;
                }
            }
        }
    }

    /// `f(w) = ‖Aᵀw‖_p^p` and, optionally, its gradient `A·(p·sgn(y)|y|^{p−1})`.
    fn value_grad(&self, w: &[f64], y: &mut [f64], grad: Option<&mut [f64]>) -> f64 {
        self.y_of(w, y);
        let pow = AbsPow::new(self.p);
        let f: f64 = y.iter().map(|v| pow.abs(*v)).sum();
        if let Some(g) = grad {
            let link = AbsPow::new(self.p - 1.0);
            let s: Vec<f64> = y.iter().map(|v| self.p * link.signed(*v)).collect();
            for (gi, row) in g.iter_mut().zip(self.a.chunks(self.d)) {
                *gi = dot(row, &s);
            }
        }
        f
    }

    fn min_payoff(&self, x: &[f64]) -> f64 {
        self.a
            .chunks(self.d)
            .map(|row| dot(row, x))
            .fold(f64::INFINITY, f64::min)
    }

    fn observe(&self, w: &[f64], y: &[f64], best: &mut Tracker) {
        let upper = norm_unchecked(y, self.p);
        if upper < best.upper {
            best.upper = upper;
            best.p_dist.copy_from_slice(w);
        }
        let x = best_response(y, self.p);
        let lower = self.min_payoff(&x);
        if lower > best.lower {
            best.lower = lower;
            best.x = x;
        }
    }

    fn solve(&self, tol: f64, options: &OracleOptions) -> ValueCertificate<f64> {
        let (n, d) = (self.n, self.d);
        let mut w = match options.seed {
            None => vec![1.0 / n as f64; n],
            Some(seed) => {
                let mut rng = RngStream::new(seed);
                let mut v: Vec<f64> = (0..n).map(|_| -(1.0 - rng.uniform()).ln()).collect();
                let s: f64 = v.iter().sum();
                v.iter_mut().for_each(|x| *x /= s);
                v
            }
        };
        let mut y = vec![0.0; d];
        let mut grad = vec![0.0; n];
        // x = 0 is always feasible with payoff 0.
        let mut best = Tracker {
            lower: 0.0,
            x: vec![0.0; d],
            upper: f64::INFINITY,
            p_dist: w.clone(),
        };
        let mut f_w = self.value_grad(&w, &mut y, None);
        self.observe(&w, &y, &mut best);

        let mut z = w.clone();
        let mut momentum = 1.0f64;
        let mut lipschitz = 1.0f64;
        let mut cand = vec![0.0; n];
        let mut iterations = 0;

        while best.upper - best.lower > tol && iterations < options.max_iterations {
            iterations += 1;
            let f_z = self.value_grad(&z, &mut y, Some(&mut grad));
            let mut f_cand;
            loop {
                for ((c, zi), gi) in cand.iter_mut().zip(&z).zip(&grad) {
                    *c = zi - gi / lipschitz;
                }
                project_simplex(&mut cand);
                f_cand = self.value_grad(&cand, &mut y, None);
                let mut lin = 0.0;
                let mut sq = 0.0;
                for ((c, zi), gi) in cand.iter().zip(&z).zip(&grad) {
                    lin += gi * (c - zi);
                    sq += (c - zi) * (c - zi);
                }
                let model = f_z + lin + 0.5 * lipschitz * sq;
                if f_cand <= model + 1e-15 * f_z.abs().max(1e-300) || lipschitz > 1e300 {
                    break;
                }
                lipschitz *= 2.0;
            }
            self.observe(&cand, &y, &mut best);

            if f_cand > f_w {
                // Restart: drop momentum and continue from the better point.
                momentum = 1.0;
                z.copy_from_slice(&w);
            } else {
                let next = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
                let beta = (momentum - 1.0) / next;
                for ((zi, c), wi) in z.iter_mut().zip(&cand).zip(&w) {
                    *zi = c + beta * (c - wi);
                }
                momentum = next;
                w.copy_from_slice(&cand);
                f_w = f_cand;
            }
            lipschitz *= 0.9;
        }

        ValueCertificate {
            lower: best.lower,
            upper: best.upper,
            gap: best.upper - best.lower,
            iterations_used: iterations,
            x: DenseVector::from_raw(best.x),
            p_dist: DenseVector::from_raw(best.p_dist),
        }
    }
}

/// Euclidean projection onto the probability simplex (sort-based).
fn project_simplex(v: &mut [f64]) {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, uk) in u.iter().enumerate() {
        cumsum += uk;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    v.iter_mut().for_each(|x| *x = (*x - theta).max(0.0));
}
