use serde::Serialize;

use crate::error::{invalid, Result};
use crate::game::{EntrySource, GameInstance};
use crate::norm::{norm_unchecked, NormPair};
use crate::scalar::Scalar;
use crate::solver::{solve_lq_l1_with, SolveOptions, SolveReport, SolverParams};
use crate::vector::DenseVector;

/// `Σ_k weights[k]·v_{indices[k]}` with distinct indices and positive weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseConvexCombination<S> {
    pub indices: Vec<usize>,
    pub weights: Vec<S>,
    pub support_size: usize,
}

impl<S: Scalar> SparseConvexCombination<S> {
    /// Empirical distribution of `samples`, sorted by index.
    pub fn from_samples(samples: &[u32], n: usize) -> Result<Self> {
        if samples.is_empty() {
            return Err(invalid("no samples"));
        }
        let mut counts = vec![0usize; n];
        for &i in samples {
            let i = i as usize;
            if i >= n {
                return Err(invalid(format!("sample {i} out of range for {n} vertices")));
            }
            counts[i] += 1;
        }
        let total = S::of_usize(samples.len());
        let (indices, weights): (Vec<usize>, Vec<S>) = counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0)
            .map(|(i, c)| (i, S::of_usize(*c) / total))
            .unzip();
        Ok(Self {
            support_size: indices.len(),
            indices,
            weights,
        })
    }
}

/// Rows `(v_i − u)/2`, computed on demand.
struct HalfDifference<S> {
    vertices: Vec<S>,
    u: Vec<S>,
}

impl<S: Scalar> EntrySource<S> for HalfDifference<S> {
    fn entry(&self, i: usize, j: usize) -> S {
        let d = self.u.len();
        (self.vertices[i * d + j] - self.u[j]) * S::of(0.5)
    }

    fn fill_row(&self, i: usize, out: &mut [S]) {
        let d = self.u.len();
        let row = &self.vertices[i * d..(i + 1) * d];
        for ((o, v), u) in out.iter_mut().zip(row).zip(&self.u) {
            *o = (*v - *u) * S::of(0.5);
        }
    }
}

pub fn caratheodory_solve<S: Scalar>(
    vertices: &[Vec<S>],
    u: &DenseVector<S>,
    p: S,
    epsilon: S,
    seed: u64,
) -> Result<SparseConvexCombination<S>> {
    caratheodory_solve_with(vertices, u, p, epsilon, seed, &SolveOptions::default()).map(|(c, _)| c)
}

/// Finds a sparse convex combination of `vertices` close to `u` in `ℓp`.
///
/// Solves the game on `(V − U)/2`, whose rows lie in `B_p` and whose value is 0
/// when `u ∈ conv(V)`, to precision `ε/2`, and returns the empirical
/// distribution of the sampled rows. The support is at most the iteration count.
pub fn caratheodory_solve_with<S: Scalar>(
    vertices: &[Vec<S>],
    u: &DenseVector<S>,
    p: S,
    epsilon: S,
    seed: u64,
    options: &SolveOptions,
) -> Result<(SparseConvexCombination<S>, SolveReport<S>)> {
    let pair = NormPair::from_p(p)?;
    let d = u.len();
    check_vertices(vertices, d, p)?;
    if norm_unchecked(u.as_slice(), p) > S::one() + S::ball_slack() {
        return Err(invalid("u must lie in the unit l_p ball"));
    }
    let n = vertices.len();
    let source = HalfDifference {
        vertices: vertices.concat(),
        u: u.as_slice().to_vec(),
    };
    let instance = GameInstance::from_source(n, d, p, source)?;
    let half = epsilon * S::of(0.5);
    let params = SolverParams::classical(n, pair.q(), half, seed)?;
    let options = SolveOptions {
        record_traces: true,
        ..*options
    };
    let report = solve_lq_l1_with(&instance, &params, &options)?;
    let combination = SparseConvexCombination::from_samples(&report.i_trace, n)?;
    Ok((combination, report))
}

/// `‖Σ_k x_k v_k − u‖_p`.
pub fn caratheodory_residual<S: Scalar>(
    vertices: &[Vec<S>],
    u: &DenseVector<S>,
    combo: &SparseConvexCombination<S>,
    p: S,
) -> Result<S> {
    let d = u.len();
    if vertices.iter().any(|v| v.len() != d) {
        return Err(invalid("vertex and target dimensions differ"));
    }
    if combo.indices.len() != combo.weights.len() {
        return Err(invalid("indices and weights differ in length"));
    }
    let mut acc: Vec<S> = u.iter().map(|x| -*x).collect();
    for (&i, &w) in combo.indices.iter().zip(&combo.weights) {
        let v = vertices
            .get(i)
            .ok_or_else(|| invalid(format!("vertex index {i} out of range")))?;
        for (a, x) in acc.iter_mut().zip(v) {
            *a += w * *x;
        }
    }
    Ok(norm_unchecked(&acc, p))
}

fn check_vertices<S: Scalar>(vertices: &[Vec<S>], d: usize, p: S) -> Result<()> {
    if vertices.is_empty() {
        return Err(invalid("need at least one vertex"));
    }
    for (i, v) in vertices.iter().enumerate() {
        if v.len() != d {
            return Err(invalid(format!("vertex {i} has dimension {}, target has {d}", v.len())));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(invalid(format!("vertex {i} is not finite")));
        }
        if norm_unchecked(v, p) > S::one() + S::ball_slack() {
            return Err(invalid(format!("vertex {i} lies outside the unit l_p ball")));
        }
    }
    Ok(())
}
