//! Floating-point abstraction shared by every solver in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the solvers are generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Slack accepted on norm-ball memberships (`‖v‖ ≤ 1 + slack`).
    fn ball_slack() -> Self;

    /// Tolerance used for conjugacy `1/p + 1/q = 1`.
    fn conjugacy_tol() -> Self;

    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    #[inline]
    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable in scalar type")
    }

    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn ball_slack() -> Self {
        1e-9
    }
    fn conjugacy_tol() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn ball_slack() -> Self {
        1e-5
    }
    fn conjugacy_tol() -> Self {
        1e-6
    }
}

/// `|x|^e` with exact fast paths for the exponents that show up at `q = p = 2`.
#[derive(Clone, Copy, Debug)]
pub(crate) enum AbsPow<S> {
    Zero,
    Half,
    One,
    Two,
    General(S),
}

impl<S: Scalar> AbsPow<S> {
    pub(crate) fn new(e: S) -> Self {
        if e == S::zero() {
            AbsPow::Zero
        } else if e == S::of(0.5) {
            AbsPow::Half
        } else if e == S::one() {
            AbsPow::One
        } else if e == S::of(2.0) {
            AbsPow::Two
        } else {
            AbsPow::General(e)
        }
    }

    #[inline(always)]
    pub(crate) fn abs(self, x: S) -> S {
        let a = x.abs();
        match self {
            AbsPow::Zero => S::one(),
            AbsPow::Half => a.sqrt(),
            AbsPow::One => a,
            AbsPow::Two => a * a,
            AbsPow::General(e) => {
                if a == S::zero() {
                    S::zero()
                } else {
                    a.powf(e)
                }
            }
        }
    }

    /// `sgn(x)·|x|^e`, zero at zero.
    #[inline(always)]
    pub(crate) fn signed(self, x: S) -> S {
        if x > S::zero() {
            self.abs(x)
        } else if x < S::zero() {
            -self.abs(x)
        } else {
            S::zero()
        }
    }

    /// `dst_j = |src_j|^e`, returning the sum. The exponent is matched once.
    #[inline]
    pub(crate) fn fill(self, src: &[S], dst: &mut [S]) -> S {
        macro_rules! run {
            ($f:expr) => {{
                let mut total = S::zero();
                for (d, s) in dst.iter_mut().zip(src) {
                    *d = $f(s.abs());
                    total += *d;
                }
                total
            }};
        }
        match self {
            AbsPow::Zero => run!(|_a: S| S::one()),
            AbsPow::Half => run!(|a: S| a.sqrt()),
            AbsPow::One => run!(|a: S| a),
            AbsPow::Two => run!(|a: S| a * a),
            AbsPow::General(e) => run!(|a: S| if a == S::zero() { S::zero() } else { a.powf(e) }),
        }
    }

    /// `Σ_j |v_j|^e`. The exponent is matched once.
    #[inline]
    pub(crate) fn sum(self, v: &[S]) -> S {
        match self {
            AbsPow::One => v.iter().map(|x| x.abs()).sum(),
            AbsPow::Two => v.iter().map(|x| *x * *x).sum(),
            other => v.iter().map(|x| other.abs(*x)).sum(),
        }
    }

    /// `y_j += step·sgn(a_j)|a_j|^e`. The exponent is matched once.
    #[inline]
    pub(crate) fn axpy_signed(self, step: S, a: &[S], y: &mut [S]) {
        match self {
            AbsPow::One => y.iter_mut().zip(a).for_each(|(y, a)| *y += step * *a),
            AbsPow::Two => y.iter_mut().zip(a).for_each(|(y, a)| *y += step * *a * a.abs()),
            other => y.iter_mut().zip(a).for_each(|(y, a)| *y += step * other.signed(*a)),
        }
    }
}
