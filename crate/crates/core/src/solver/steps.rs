use crate::error::{invalid, Error, Result};
use crate::norm::norm_unchecked;
use crate::scalar::{AbsPow, Scalar};
use crate::vector::DenseVector;

/// `y'_j = y_j + ι·sgn(u_j)|u_j|^{p−1} / ‖u‖_p^{p−2}`.
pub fn pnorm_ogd_step<S: Scalar>(y: &DenseVector<S>, u: &DenseVector<S>, iota: S, p: S) -> Result<DenseVector<S>> {
    if y.len() != u.len() {
        return Err(invalid("gradient and iterate lengths differ"));
    }
    let norm = norm_unchecked(u.as_slice(), p);
    if norm == S::zero() {
        return Err(Error::ZeroGradient);
    }
    if norm > S::one() + S::ball_slack() {
        return Err(invalid(format!("gradient has l{p}-norm {norm} > 1")));
    }
    let link = AbsPow::new(p - S::one());
    let denom = AbsPow::new(p - S::of(2.0)).abs(norm);
    Ok(DenseVector::from_raw(
        y.iter()
            .zip(u.iter())
            .map(|(yj, uj)| *yj + iota * link.signed(*uj) / denom)
            .collect(),
    ))
}

/// `w'_i = w_i(1 − ηv_i + η²v_i²)`.
pub fn mwu_step<S: Scalar>(w: &DenseVector<S>, v: &DenseVector<S>, eta: S) -> Result<DenseVector<S>> {
    if w.len() != v.len() {
        return Err(invalid("weight and payoff lengths differ"));
    }
    if w.iter().any(|x| *x <= S::zero()) {
        return Err(invalid("weights must be strictly positive"));
    }
    if eta > S::zero() {
        let bound = eta.recip() * (S::one() + S::ball_slack());
        if v.iter().any(|x| x.abs() > bound) {
            return Err(invalid("payoff estimates must satisfy |v_i| <= 1/eta"));
        }
    }
    Ok(DenseVector::from_raw(
        w.iter()
            .zip(v.iter())
            .map(|(wi, vi)| *wi * mwu_factor(*vi, eta))
            .collect(),
    ))
}

/// `1 − ηv + η²v²`, which is at least 3/4 for every real `v`.
#[inline(always)]
pub(crate) fn mwu_factor<S: Scalar>(v: S, eta: S) -> S {
    let ev = eta * v;
    S::one() - ev + ev * ev
}
