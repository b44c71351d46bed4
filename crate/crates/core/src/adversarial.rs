//! Hard instance pairs for the lower bound, their closed-form values, and the
//! procedure that reads the hidden case and column off an `ε`-solution.
//!
//! Indices are 0-based: the special column `l` ranges over `1..d` and the
//! Case-1 special row `k` over `2..n`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::estimator::RngStream;
use crate::game::{EntrySource, GameInstance};
use crate::norm::norm_unchecked;
use crate::scalar::Scalar;
use crate::vector::DenseVector;

/// Margin used by the separation argument and the classifier.
pub const SEPARATION_EPSILON: f64 = 0.04;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HardCase {
    /// Row `k` is `(1 at column 0, 0 at column l)`.
    One,
    /// Every row but the first is `(a, a)` at columns `0` and `l`.
    Two,
}

impl HardCase {
    pub fn number(self) -> u8 {
        match self {
            HardCase::One => 1,
            HardCase::Two => 2,
        }
    }

    pub fn from_number(c: u8) -> Result<Self> {
        match c {
            1 => Ok(HardCase::One),
            2 => Ok(HardCase::Two),
            _ => Err(invalid(format!("case must be 1 or 2, got {c}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardInstanceSpec {
    pub case: HardCase,
    pub n: usize,
    pub d: usize,
    pub l: usize,
    /// Special row; Case 1 only.
    pub k: Option<usize>,
    pub p: f64,
}

impl HardInstanceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 || self.d < 2 {
            return Err(invalid(format!(
                "hard instances need n >= 3 and d >= 2, got {}x{}",
                self.n, self.d
            )));
        }
        if !(1..self.d).contains(&self.l) {
            return Err(invalid(format!("l must lie in 1..{}, got {}", self.d, self.l)));
        }
        if !(self.p >= 2.0) {
            return Err(invalid(format!("p must be >= 2, got {}", self.p)));
        }
        match (self.case, self.k) {
            (HardCase::One, Some(k)) if (2..self.n).contains(&k) => Ok(()),
            (HardCase::One, Some(k)) => Err(invalid(format!("k must lie in 2..{}, got {k}", self.n))),
            (HardCase::One, None) => Err(invalid("case 1 needs a special row k")),
            (HardCase::Two, None) => Ok(()),
            (HardCase::Two, Some(_)) => Err(invalid("case 2 has no special row")),
        }
    }

    /// Uniformly random case, `l` and (for Case 1) `k`.
    pub fn random(n: usize, d: usize, p: f64, rng: &mut RngStream) -> Result<Self> {
        let case = if rng.random_bool(0.5) {
            HardCase::One
        } else {
            HardCase::Two
        };
        Self::random_of_case(case, n, d, p, rng)
    }

    pub fn random_of_case(case: HardCase, n: usize, d: usize, p: f64, rng: &mut RngStream) -> Result<Self> {
        if n < 3 || d < 2 {
            return Err(invalid(format!("hard instances need n >= 3 and d >= 2, got {n}x{d}")));
        }
        let l = rng.random_range(1..d);
        let k = match case {
            HardCase::One => Some(rng.random_range(2..n)),
            HardCase::Two => None,
        };
        let spec = Self { case, n, d, l, k, p };
        spec.validate()?;
        Ok(spec)
    }

    /// Closed-form game value at the conjugate `q = p/(p−1)`.
    pub fn sigma(&self) -> f64 {
        match self.case {
            HardCase::One => sigma_case1(self.p / (self.p - 1.0)),
            HardCase::Two => sigma_case2(self.p),
        }
    }
}

/// Generator-backed hard instance; entries cost one query each.
pub fn build_hard_instance<S: Scalar>(spec: &HardInstanceSpec) -> Result<GameInstance<S>> {
    spec.validate()?;
    let source = HardSource {
        a: S::of(2f64.powf(-1.0 / spec.p)),
        l: spec.l,
        special: if spec.case == HardCase::One { spec.k } else { None },
    };
    GameInstance::from_source(spec.n, spec.d, S::of(spec.p), source)
}

struct HardSource<S> {
    a: S,
    l: usize,
    special: Option<usize>,
}

impl<S: Scalar> EntrySource<S> for HardSource<S> {
    fn entry(&self, i: usize, j: usize) -> S {
        if Some(i) == self.special {
            if j == 0 {
                S::one()
            } else {
                S::zero()
            }
        } else if j == 0 {
            if i == 0 {
                -self.a
            } else {
                self.a
            }
        } else if j == self.l {
            self.a
        } else {
            S::zero()
        }
    }

    fn fill_row(&self, i: usize, out: &mut [S]) {
        out.iter_mut().for_each(|o| *o = S::zero());
        out[0] = self.entry(i, 0);
        out[self.l] = self.entry(i, self.l);
    }

    fn fill_column(&self, j: usize, out: &mut [S]) {
        if j == 0 || j == self.l {
            out.iter_mut().enumerate().for_each(|(i, o)| *o = self.entry(i, j));
        } else {
            out.iter_mut().for_each(|o| *o = S::zero());
        }
    }
}

/// `σ₁ = 1/(1 + (2^{1−1/q} + 1)^q)^{1/q}` for `q ∈ [1, 2]`.
pub fn sigma_case1(q: f64) -> f64 {
    let c = 2f64.powf(1.0 - 1.0 / q) + 1.0;
    (1.0 + c.powf(q)).powf(-1.0 / q)
}

/// `σ₂ = 2^{−1/p}`.
pub fn sigma_case2(p: f64) -> f64 {
    2f64.powf(-1.0 / p)
}

/// `f₁(q) = 1 − (1 − 0.04·2^{1−1/q})^q − (σ₁(q) − 0.04)^q`.
pub fn f1(q: f64) -> f64 {
    let e = SEPARATION_EPSILON;
    1.0 - (1.0 - e * 2f64.powf(1.0 - 1.0 / q)).powf(q) - (sigma_case1(q) - e).powf(q)
}

/// `f₂(q) = 2(2^{1−1/q} + 1)^q (σ₁(q) − 0.04)^q`.
pub fn f2(q: f64) -> f64 {
    let c = 2f64.powf(1.0 - 1.0 / q) + 1.0;
    2.0 * c.powf(q) * (sigma_case1(q) - SEPARATION_EPSILON).powf(q)
}

/// Case-2 threshold `1 − 0.04·2^{1/p}` on the off-first coordinates.
pub fn classification_threshold(p: f64) -> f64 {
    1.0 - SEPARATION_EPSILON * 2f64.powf(1.0 / p)
}

/// Reads `(case, l)` off an approximate solution `x̄ ∈ B_q`.
///
/// Case 2 if some `x̄_j` with `j ≥ 1` reaches [`classification_threshold`],
/// choosing the smallest such `j`; otherwise Case 1 with `l` the argmax over
/// `j ≥ 1` (smallest index on ties).
pub fn classify_from_solution<S: Scalar>(x_bar: &DenseVector<S>, p: S, q: S) -> Result<(HardCase, usize)> {
    if x_bar.len() < 2 {
        return Err(invalid("classification needs d >= 2"));
    }
    let norm = norm_unchecked(x_bar.as_slice(), q);
    if norm.f64() > 1.0 + 1e-9 {
        return Err(invalid(format!("x_bar has l{q}-norm {norm} > 1")));
    }
    let threshold = classification_threshold(p.f64());
    let tail = &x_bar.as_slice()[1..];
    if let Some(j) = tail.iter().position(|v| v.f64() >= threshold) {
        return Ok((HardCase::Two, j + 1));
    }
    let mut best = 0;
    for (j, v) in tail.iter().enumerate() {
        if *v > tail[best] {
            best = j;
        }
    }
    Ok((HardCase::One, best + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(case: HardCase, k: Option<usize>, p: f64) -> HardInstanceSpec {
        HardInstanceSpec {
            case,
            n: 6,
            d: 5,
            l: 3,
            k,
            p,
        }
    }

    #[test]
    fn case2_entries() {
        let g = build_hard_instance::<f64>(&spec(HardCase::Two, None, 2.0)).unwrap();
        let a = 0.5f64.sqrt();
        assert_relative_eq!(g.query(0, 0).unwrap(), -a, max_relative = 1e-15);
        assert_relative_eq!(g.query(1, 3).unwrap(), a, max_relative = 1e-15);
        assert_eq!(g.query(2, 1).unwrap(), 0.0);
        assert_eq!(g.queries(), 3);
    }

    #[test]
    fn case1_special_row() {
        let g = build_hard_instance::<f64>(&spec(HardCase::One, Some(3), 2.0)).unwrap();
        assert_eq!(g.query(3, 0).unwrap(), 1.0);
        assert_eq!(g.query(3, 3).unwrap(), 0.0);
        assert_relative_eq!(g.query(2, 0).unwrap(), 0.5f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn rows_on_unit_sphere() {
        for p in [2.0, 3.0, 5.0] {
            let g = build_hard_instance::<f64>(&spec(HardCase::One, Some(4), p)).unwrap();
            let a = g.snapshot();
            for row in a.chunks(5) {
                assert_relative_eq!(norm_unchecked(row, p), 1.0, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(spec(HardCase::One, None, 2.0).validate().is_err());
        assert!(spec(HardCase::One, Some(1), 2.0).validate().is_err());
        assert!(spec(HardCase::Two, Some(3), 2.0).validate().is_err());
        assert!(HardInstanceSpec {
            l: 0,
            ..spec(HardCase::Two, None, 2.0)
        }
        .validate()
        .is_err());
        assert!(spec(HardCase::Two, None, 1.5).validate().is_err());
    }

    #[test]
    fn closed_forms() {
        assert_relative_eq!(sigma_case1(2.0), 0.3826834, epsilon = 1e-7);
        assert_relative_eq!(sigma_case1(1.0), 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(sigma_case1(1.0 + 1e-9), 1.0 / 3.0, epsilon = 1e-8);
        assert!(sigma_case1(1.5) > 1.0 / 3.0 && sigma_case1(1.5) < sigma_case1(2.0));
        assert_relative_eq!(sigma_case2(2.0), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(sigma_case2(4.0), 0.8408964, epsilon = 1e-7);
        assert_eq!(sigma_case2(f64::INFINITY), 1.0);
    }

    #[test]
    fn separation_on_grid() {
        for k in 0..100 {
            let q = 1.0 + (k as f64 + 0.5) / 100.0;
            let p = q / (q - 1.0);
            assert!(sigma_case2(p) - sigma_case1(q) > 0.08, "q = {q}");
        }
    }

    #[test]
    fn f2_increasing_and_above_one() {
        assert!(f2(1.0) > 1.0);
        let grid: Vec<f64> = (0..1000).map(|k| f2(1.0 + k as f64 / 999.0)).collect();
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn minus_f1_certifies_case1_separation() {
        // The Case-1 argument needs (1 − 0.04·2^{1/p})^q + (σ₁ − 0.04)^q > 1, i.e. f₁ < 0.
        let grid: Vec<f64> = (0..1000).map(|k| f1(1.0 + k as f64 / 999.0)).collect();
        assert!(grid.iter().all(|v| *v < 0.0));
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
        assert_relative_eq!(f1(2.0), -0.0074948, epsilon = 1e-6);
    }

    #[test]
    fn classification_examples() {
        let e5 = DenseVector::<f64>::basis(8, 5);
        assert_eq!(classify_from_solution(&e5, 2.0, 2.0).unwrap(), (HardCase::Two, 5));

        let x = DenseVector::new(vec![0.3, 0.1, 0.5, 0.2]).unwrap();
        assert_eq!(classify_from_solution(&x, 2.0, 2.0).unwrap(), (HardCase::One, 2));

        let s = sigma_case1(2.0);
        let mut v = vec![0.0; 6];
        v[0] = s;
        v[4] = (2f64.sqrt() + 1.0) * s;
        assert_relative_eq!(v[4], 0.92388, epsilon = 1e-5);
        let x = DenseVector::new(v).unwrap();
        assert_eq!(classify_from_solution(&x, 2.0, 2.0).unwrap(), (HardCase::One, 4));
        assert_relative_eq!(classification_threshold(2.0), 0.94343, epsilon = 1e-5);
    }

    #[test]
    fn classification_ties_take_smallest_index() {
        let x = DenseVector::new(vec![0.1, 0.4, 0.4, 0.1]).unwrap();
        assert_eq!(classify_from_solution(&x, 2.0, 2.0).unwrap(), (HardCase::One, 1));
        assert!(classify_from_solution(&DenseVector::new(vec![1.0, 1.0]).unwrap(), 2.0, 2.0).is_err());
    }
}
