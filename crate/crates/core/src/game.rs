//! Oracle-access payoff matrices with an honest entry-read counter.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::norm::norm_unchecked;
use crate::scalar::Scalar;

/// On-demand entries of a matrix too large or too structured to store.
pub trait EntrySource<S>: Send + Sync {
    fn entry(&self, i: usize, j: usize) -> S;

    fn fill_row(&self, i: usize, out: &mut [S]) {
        out.iter_mut().enumerate().for_each(|(j, o)| *o = self.entry(i, j));
    }

    fn fill_column(&self, j: usize, out: &mut [S]) {
        out.iter_mut().enumerate().for_each(|(i, o)| *o = self.entry(i, j));
    }
}

struct FnSource<F>(F);

impl<S, F: Fn(usize, usize) -> S + Send + Sync> EntrySource<S> for FnSource<F> {
    fn entry(&self, i: usize, j: usize) -> S {
        (self.0)(i, j)
    }
}

enum Storage<S> {
    Dense(Vec<S>),
    Generator(Box<dyn EntrySource<S>>),
}

/// An `n × d` payoff matrix whose rows lie in the `ℓp` unit ball.
///
/// Every entry read through the public accessors is charged to a monotone
/// counter. Storage is shared between [`fork`](Self::fork)ed views, each of
/// which owns a fresh counter, so parallel runs can account independently.
pub struct GameInstance<S> {
    n: usize,
    d: usize,
    p: S,
    storage: Arc<Storage<S>>,
    queries: AtomicU64,
}

impl<S: Scalar> GameInstance<S> {
    /// Row-major dense matrix. Rows with `‖A_i‖_p ∈ (1, 1 + slack]` are rescaled
    /// onto the sphere; anything larger is rejected.
    pub fn dense(n: usize, d: usize, mut data: Vec<S>, p: S) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(invalid("matrix must be non-empty"));
        }
        if data.len() != n * d {
            return Err(invalid(format!(
                "expected {} entries for a {n}x{d} matrix, got {}",
                n * d,
                data.len()
            )));
        }
        if !(p >= S::one()) {
            return Err(invalid(format!("row-norm exponent must be >= 1, got {p}")));
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("entry ({}, {}) is not finite", k / d, k % d)));
        }
        for (row, chunk) in data.chunks_mut(d).enumerate() {
            let norm = norm_unchecked(chunk, p);
            if norm > S::one() + S::ball_slack() {
                return Err(Error::RowOutsideBall {
                    row,
                    p: p.f64(),
                    norm: norm.f64(),
                });
            }
            if norm > S::one() {
                chunk.iter_mut().for_each(|v| *v /= norm);
            }
        }
        Ok(Self::with_storage(n, d, p, Storage::Dense(data)))
    }

    pub fn from_rows(rows: &[Vec<S>], p: S) -> Result<Self> {
        let (n, d) = shape(rows)?;
        Self::dense(n, d, rows.concat(), p)
    }

    /// Generator-backed matrix; entries are computed on demand.
    ///
    /// The caller promises every row lies in the `ℓp` unit ball. The promise is
    /// not checked, since checking would read the whole matrix.
    pub fn from_fn<F>(n: usize, d: usize, p: S, entry: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> S + Send + Sync + 'static,
    {
        if n == 0 || d == 0 {
            return Err(invalid("matrix must be non-empty"));
        }
        Self::from_source(n, d, p, FnSource(entry))
    }

    /// Like [`from_fn`](Self::from_fn), with row and column reads supplied by `source`.
    pub fn from_source(n: usize, d: usize, p: S, source: impl EntrySource<S> + 'static) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(invalid("matrix must be non-empty"));
        }
        Ok(Self::with_storage(n, d, p, Storage::Generator(Box::new(source))))
    }

    fn with_storage(n: usize, d: usize, p: S, storage: Storage<S>) -> Self {
        Self {
            n,
            d,
            p,
            storage: Arc::new(storage),
            queries: AtomicU64::new(0),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Exponent of the ball the rows are known (dense) or promised (generator) to lie in.
    pub fn row_norm_exponent(&self) -> S {
        self.p
    }

    pub fn is_dense(&self) -> bool {
        matches!(*self.storage, Storage::Dense(_))
    }

    /// Entry reads charged so far.
    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// A view over the same entries with its own zeroed counter.
    pub fn fork(&self) -> Self {
        Self {
            n: self.n,
            d: self.d,
            p: self.p,
            storage: Arc::clone(&self.storage),
            queries: AtomicU64::new(0),
        }
    }

    /// Reads `A_{ij}` and charges one query.
    pub fn query(&self, i: usize, j: usize) -> Result<S> {
        if i >= self.n || j >= self.d {
            return Err(Error::IndexOutOfRange {
                i,
                j,
                n: self.n,
                d: self.d,
            });
        }
        self.charge(1);
        Ok(self.entry(i, j))
    }

    /// Reads row `i` into `out` (length `d`), charging `d` queries.
    pub fn read_row(&self, i: usize, out: &mut [S]) {
        assert!(i < self.n && out.len() == self.d, "row read out of range");
        self.charge(self.d as u64);
        match &*self.storage {
            Storage::Dense(data) => out.copy_from_slice(&data[i * self.d..(i + 1) * self.d]),
            Storage::Generator(f) => f.fill_row(i, out),
        }
    }

    /// Reads column `j` into `out` (length `n`), charging `n` queries.
    pub fn read_column(&self, j: usize, out: &mut [S]) {
        assert!(j < self.d && out.len() == self.n, "column read out of range");
        self.charge(self.n as u64);
        match &*self.storage {
            Storage::Dense(data) => out.iter_mut().enumerate().for_each(|(i, o)| *o = data[i * self.d + j]),
            Storage::Generator(f) => f.fill_column(j, out),
        }
    }

    /// The full matrix, row-major, charging `n·d` queries.
    pub fn materialize(&self) -> Vec<S> {
        let mut out = vec![S::zero(); self.n * self.d];
        for (i, row) in out.chunks_mut(self.d).enumerate() {
            self.read_row(i, row);
        }
        out
    }

    /// Uncharged access for validation and serialization.
    pub(crate) fn entry(&self, i: usize, j: usize) -> S {
        match &*self.storage {
            Storage::Dense(data) => data[i * self.d + j],
            Storage::Generator(f) => f.entry(i, j),
        }
    }

    /// Uncharged copy of the entries. Intended for serialization and tests.
    pub fn snapshot(&self) -> Vec<S> {
        (0..self.n * self.d)
            .map(|k| self.entry(k / self.d, k % self.d))
            .collect()
    }

    /// Checks, without charging, that rows lie in the `ℓp` ball.
    ///
    /// Generator instances are accepted when their promised exponent is at
    /// most `p`, because `‖·‖_p ≤ ‖·‖_r` for `p ≥ r`.
    pub fn check_rows_in_ball(&self, p: S) -> Result<()> {
        if p >= self.p {
            return Ok(());
        }
        match &*self.storage {
            Storage::Dense(data) => {
                for (row, chunk) in data.chunks(self.d).enumerate() {
                    let norm = norm_unchecked(chunk, p);
                    if norm > S::one() + S::ball_slack() {
                        return Err(Error::RowOutsideBall {
                            row,
                            p: p.f64(),
                            norm: norm.f64(),
                        });
                    }
                }
                Ok(())
            }
            Storage::Generator(_) => Err(invalid(format!(
                "generator rows are only promised to lie in the l{} ball, not l{p}",
                self.p
            ))),
        }
    }

    #[inline]
    fn charge(&self, k: u64) {
        self.queries.fetch_add(k, Ordering::Relaxed);
    }
}

impl<S: Scalar> fmt::Debug for GameInstance<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameInstance")
            .field("n", &self.n)
            .field("d", &self.d)
            .field("p", &self.p)
            .field("dense", &self.is_dense())
            .field("queries", &self.queries())
            .finish()
    }
}

/// Divides each row by `max{1, ‖row‖_p}`.
pub fn normalize_rows<S: Scalar>(rows: &[Vec<S>], p: S) -> Result<GameInstance<S>> {
    let (n, d) = shape(rows)?;
    let mut data = Vec::with_capacity(n * d);
    for row in rows {
        let norm = norm_unchecked(row, p);
        let scale = if norm > S::one() { norm } else { S::one() };
        data.extend(row.iter().map(|v| *v / scale));
    }
    GameInstance::dense(n, d, data, p)
}

fn shape<S>(rows: &[Vec<S>]) -> Result<(usize, usize)> {
    let n = rows.len();
    let d = rows.first().map_or(0, Vec::len);
    if n == 0 || d == 0 {
        return Err(invalid("matrix must be non-empty"));
    }
    if let Some(k) = rows.iter().position(|r| r.len() != d) {
        return Err(invalid(format!("row {k} has length {}, expected {d}", rows[k].len())));
    }
    Ok((n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn identity2() -> GameInstance<f64> {
        GameInstance::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]], 2.0).unwrap()
    }

    #[test]
    fn query_counts_every_read() {
        let a = identity2();
        assert_eq!(a.queries(), 0);
        assert_eq!(a.query(0, 0).unwrap(), 1.0);
        assert_eq!(a.queries(), 1);
        a.query(1, 1).unwrap();
        a.query(1, 1).unwrap();
        assert_eq!(a.queries(), 3);
        let mut row = [0.0; 2];
        a.read_row(1, &mut row);
        assert_eq!(row, [0.0, 1.0]);
        assert_eq!(a.queries(), 5);
        let mut col = [0.0; 2];
        a.read_column(0, &mut col);
        assert_eq!(col, [1.0, 0.0]);
        assert_eq!(a.queries(), 7);
    }

    #[test]
    fn out_of_range_is_an_error() {
        let a = identity2();
        assert!(matches!(a.query(2, 0), Err(Error::IndexOutOfRange { .. })));
        assert!(a.query(0, 2).is_err());
        assert_eq!(a.queries(), 0);
    }

    #[test]
    fn fork_has_fresh_counter() {
        let a = identity2();
        a.query(0, 0).unwrap();
        let b = a.fork();
        assert_eq!(b.queries(), 0);
        assert_eq!(b.query(0, 0).unwrap(), 1.0);
        assert_eq!(a.queries(), 1);
    }

    #[test]
    fn ball_violations() {
        assert!(matches!(
            GameInstance::from_rows(&[vec![1.0, 1.0]], 2.0),
            Err(Error::RowOutsideBall { row: 0, .. })
        ));
        let a = GameInstance::from_rows(&[vec![1.0 + 5e-10, 0.0]], 2.0).unwrap();
        assert!(a.snapshot()[0] <= 1.0);
        assert!(GameInstance::<f64>::dense(0, 2, vec![], 2.0).is_err());
        assert!(GameInstance::dense(1, 2, vec![0.5], 2.0).is_err());
        assert!(GameInstance::dense(1, 1, vec![f64::NAN], 2.0).is_err());
    }

    #[test]
    fn normalize_examples() {
        let a = normalize_rows(&[vec![2.0, 0.0], vec![0.1, 0.1], vec![1.0, 1.0]], 2.0).unwrap();
        let s = a.snapshot();
        assert_eq!(&s[0..2], &[1.0, 0.0]);
        assert_eq!(&s[2..4], &[0.1, 0.1]);
        let b = normalize_rows(&[vec![1.0, 1.0]], 4.0).unwrap();
        assert_relative_eq!(b.snapshot()[0], 2f64.powf(-0.25), max_relative = 1e-15);
        assert!(normalize_rows::<f64>(&[], 2.0).is_err());
    }

    #[test]
    fn rows_in_larger_ball_exponent() {
        let a = GameInstance::from_rows(&[vec![0.6, 0.8]], 2.0).unwrap();
        assert!(a.check_rows_in_ball(3.0).is_ok());
        assert!(a.check_rows_in_ball(1.2).is_err());
        let g = GameInstance::from_fn(2, 2, 2.0, |_, _| 0.5f64).unwrap();
        assert!(g.check_rows_in_ball(2.0).is_ok());
        assert!(g.check_rows_in_ball(1.5).is_err());
    }
}
