use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::norm::{lq_norm, project_lq_ball};
use crate::scalar::Scalar;

/// A finite, non-empty real vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DenseVector<S> {
    coords: Vec<S>,
}

impl<S: Scalar> DenseVector<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("vector must have positive length"));
        }
        if let Some(k) = coords.iter().position(|c| !c.is_finite()) {
            return Err(invalid(format!("coordinate {k} is not finite")));
        }
        Ok(Self { coords })
    }

    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "vector must have positive length");
        Self {
            coords: vec![S::zero(); len],
        }
    }

    pub fn basis(len: usize, k: usize) -> Self {
        let mut v = Self::zeros(len);
        v.coords[k] = S::one();
        v
    }

    /// Wraps coordinates produced by internal arithmetic; finiteness is a debug assertion.
    pub(crate) fn from_raw(coords: Vec<S>) -> Self {
        debug_assert!(!coords.is_empty());
        debug_assert!(coords.iter().all(|c| c.is_finite()), "non-finite coordinate");
        Self { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[S] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<S> {
        self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.coords.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == S::zero())
    }

    pub fn norm(&self, s: S) -> Result<S> {
        lq_norm(&self.coords, s)
    }

    pub fn dot(&self, other: &[S]) -> S {
        dot(&self.coords, other)
    }

    pub fn project_lq_ball(&self, q: S) -> Self {
        project_lq_ball(self, q)
    }

    pub fn cast<T: Scalar>(&self) -> DenseVector<T> {
        DenseVector {
            coords: self.coords.iter().map(|c| T::of(c.f64())).collect(),
        }
    }
}

impl<S> Index<usize> for DenseVector<S> {
    type Output = S;
    fn index(&self, k: usize) -> &S {
        &self.coords[k]
    }
}

impl<S> AsRef<[S]> for DenseVector<S> {
    fn as_ref(&self) -> &[S] {
        &self.coords
    }
}

#[inline]
pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + *x * *y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(DenseVector::<f64>::new(vec![]).is_err());
        assert!(DenseVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(DenseVector::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(DenseVector::new(vec![1.0f32, 2.0]).is_ok());
    }

    #[test]
    fn basis_and_dot() {
        let e1 = DenseVector::<f64>::basis(3, 1);
        assert_eq!(e1.as_slice(), &[0.0, 1.0, 0.0]);
        assert_eq!(e1.dot(&[4.0, 5.0, 6.0]), 5.0);
        assert!(DenseVector::<f64>::zeros(2).is_zero());
    }
}
