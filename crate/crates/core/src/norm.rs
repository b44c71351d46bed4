//! Conjugate exponents, `ℓs` norms and the `ℓq`-ball projection.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::{AbsPow, Scalar};
use crate::vector::DenseVector;

/// Conjugate exponents with `q ∈ (1, 2]`, `p ∈ [2, ∞)` and `1/p + 1/q = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormPair<S> {
    q: S,
    p: S,
}

impl<S: Scalar> NormPair<S> {
    pub fn from_q(q: S) -> Result<Self> {
        if !(q > S::one() && q <= S::of(2.0)) {
            return Err(invalid(format!("q must lie in (1, 2], got {q}")));
        }
        let p = q / (q - S::one());
        Ok(Self { q, p })
    }

    pub fn from_p(p: S) -> Result<Self> {
        if !(p >= S::of(2.0) && p.is_finite()) {
            return Err(invalid(format!("p must lie in [2, inf), got {p}")));
        }
        let q = p / (p - S::one());
        Ok(Self { q, p })
    }

    pub fn q(&self) -> S {
        self.q
    }

    pub fn p(&self) -> S {
        self.p
    }

    /// `|1/p + 1/q − 1|`.
    pub fn conjugacy_defect(&self) -> S {
        (self.p.recip() + self.q.recip() - S::one()).abs()
    }
}

/// `(Σ_j |v_j|^s)^{1/s}`, computed with max-scaling so large `s` does not overflow.
pub fn lq_norm<S: Scalar>(v: &[S], s: S) -> Result<S> {
    if !(s >= S::one()) {
        return Err(invalid(format!("norm exponent must be >= 1, got {s}")));
    }
    Ok(norm_unchecked(v, s))
}

pub(crate) fn norm_unchecked<S: Scalar>(v: &[S], s: S) -> S {
    let m = v.iter().fold(S::zero(), |m, x| m.max(x.abs()));
    if m == S::zero() {
        return S::zero();
    }
    if s == S::one() {
        return v.iter().map(|x| x.abs()).sum();
    }
    let pow = AbsPow::new(s);
    let total: S = v.iter().map(|x| pow.abs(*x / m)).sum();
    m * total.powf(s.recip())
}

/// `Σ_j |v_j|^s` without scaling; callers keep `v` in a bounded range.
pub(crate) fn norm_pow<S: Scalar>(v: &[S], s: S) -> S {
    AbsPow::new(s).sum(v)
}

/// `sgn(x)·|x|^e`.
pub fn signed_pow<S: Scalar>(x: S, e: S) -> S {
    AbsPow::new(e).signed(x)
}

/// `y / max{1, ‖y‖_q}`.
///
/// Norms within a few ulps of 1 count as inside the ball, which makes the
/// projection exactly idempotent under rounding.
pub fn project_lq_ball<S: Scalar>(y: &DenseVector<S>, q: S) -> DenseVector<S> {
    let norm = norm_unchecked(y.as_slice(), q);
    if norm <= S::one() + S::of(8.0) * S::epsilon() {
        return y.clone();
    }
    DenseVector::from_raw(y.iter().map(|c| *c / norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn norm_examples() {
        assert_eq!(lq_norm(&[3.0, 4.0], 2.0).unwrap(), 5.0);
        assert_relative_eq!(
            lq_norm(&[1.0, 1.0, 1.0, 1.0], 1.5).unwrap(),
            4f64.powf(2.0 / 3.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(lq_norm(&[1.0, 1.0, 1.0, 1.0], 1.5).unwrap(), 2.51984, epsilon = 1e-5);
        assert_eq!(lq_norm(&[0.0, 0.0], 3.0).unwrap(), 0.0);
        assert!(lq_norm(&[1.0], 0.5).is_err());
    }

    #[test]
    fn large_exponent_does_not_overflow() {
        let v = [1e3, 2e3];
        let n: f64 = lq_norm(&v, 101.0).unwrap();
        assert!(n.is_finite());
        assert!((2e3..2.001e3).contains(&n));
    }

    #[test]
    fn projection_examples() {
        let inside = DenseVector::new(vec![0.3, 0.4]).unwrap();
        assert_eq!(project_lq_ball(&inside, 2.0), inside);
        let y = DenseVector::new(vec![2.0, 0.0]).unwrap();
        assert_eq!(project_lq_ball(&y, 2.0).as_slice(), &[1.0, 0.0]);
        let y = DenseVector::new(vec![1.0, 1.0]).unwrap();
        let x = project_lq_ball(&y, 1.5);
        assert_relative_eq!(x[0], 0.62996, epsilon = 1e-5);
        assert_relative_eq!(x[1], 2f64.powf(-2.0 / 3.0), max_relative = 1e-14);
        let z = DenseVector::<f64>::zeros(3);
        assert_eq!(project_lq_ball(&z, 1.5), z);
    }

    #[test]
    fn pair_validation() {
        assert!(NormPair::from_q(1.0).is_err());
        assert!(NormPair::from_q(2.5).is_err());
        assert!(NormPair::from_p(1.5).is_err());
        let pr = NormPair::from_q(2.0).unwrap();
        assert_eq!(pr.p(), 2.0);
        let pr = NormPair::from_q(1.01f64).unwrap();
        assert_relative_eq!(pr.p(), 101.0, max_relative = 1e-12);
    }

    #[test]
    fn signed_pow_keeps_sign() {
        assert_eq!(signed_pow(-0.6, 1.0), -0.6);
        assert_relative_eq!(signed_pow(-4.0, 0.5), -2.0);
        assert_eq!(signed_pow(0.0, 0.5), 0.0);
    }

    proptest! {
        #[test]
        fn conjugacy_round_trip(q in 1.0001f64..=2.0) {
            let pair = NormPair::from_q(q).unwrap();
            prop_assert!(pair.conjugacy_defect() <= 1e-12);
            let back = NormPair::from_p(pair.p()).unwrap();
            prop_assert!((back.q() - q).abs() <= 1e-12);
        }

        #[test]
        fn holder_duality(
            v in prop::collection::vec(-3.0f64..3.0, 1..12),
            u_raw in prop::collection::vec(-3.0f64..3.0, 12),
            q in 1.05f64..=2.0,
        ) {
            let pair = NormPair::from_q(q).unwrap();
            let u = DenseVector::new(u_raw[..v.len()].to_vec()).unwrap().project_lq_ball(q);
            let lhs = u.dot(&v).abs();
            prop_assert!(lhs <= lq_norm(&v, pair.p()).unwrap() + 1e-9);
        }

        #[test]
        fn projection_idempotent_and_feasible(
            y in prop::collection::vec(-5.0f64..5.0, 1..10),
            q in 1.05f64..=2.0,
        ) {
            let y = DenseVector::new(y).unwrap();
            let x = project_lq_ball(&y, q);
            prop_assert!(x.norm(q).unwrap() <= 1.0 + 1e-12);
            prop_assert_eq!(project_lq_ball(&x, q), x.clone());
        }
    }
}
