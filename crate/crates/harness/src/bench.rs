//! Query-scaling sweeps on Case-2 hard instances.

use std::time::Instant;

use lqgame::estimator::RngStream;
use lqgame::quantum::{quantum_solver_sim_with, QuantumOptions};
use lqgame::{build_hard_instance, solve_lq_l1_with, HardCase, HardInstanceSpec, NormPair, Params, SolveOptions};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchSolver {
    Classical,
    Quantum,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub grid: Vec<(usize, usize)>,
    pub q: f64,
    pub epsilon: f64,
    pub repeats: usize,
    pub seed: u64,
    pub solver: BenchSolver,
    /// Fixed iteration count instead of the derived `T`.
    pub iterations: Option<usize>,
    /// Compare against the closed-form value of each instance.
    pub with_oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub d: usize,
    pub q: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub iterations: usize,
    /// Entry reads (classical) or charged oracle calls (quantum).
    pub queries: u64,
    pub wall_ms: f64,
    pub achieved_value: f64,
    pub oracle_value: Option<f64>,
    /// `achieved_value ≥ oracle_value − ε`, when the oracle value is known.
    pub success: Option<bool>,
    /// Dual-state preparation charge (quantum only).
    pub dual_prep: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchResult {
    pub solver: BenchSolver,
    pub records: Vec<BenchRecord>,
    /// Log-log slope of the scaled quantity against the grid axis; `None` with one grid point.
    pub slope: Option<f64>,
    /// Same fit after dividing by the iteration count.
    pub per_iteration_slope: Option<f64>,
    /// `"n+d"` (queries) for the classical solver, `"n"` (dual-prep charge) for the quantum one.
    pub axis: &'static str,
}

/// Parses `"256x256,1024x1024"`; a bare `"256"` means `256x256`.
pub fn parse_grid(spec: &str) -> Result<Vec<(usize, usize)>> {
    let bad = |cell: &str| HarnessError::Usage(format!("bad grid cell {cell:?}; expected NxD"));
    let grid = spec
        .split(',')
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .map(|cell| {
            let (n, d) = cell.split_once(['x', 'X']).unwrap_or((cell, cell));
            let n: usize = n.trim().parse().map_err(|_| bad(cell))?;
            let d: usize = d.trim().parse().map_err(|_| bad(cell))?;
            if n < 3 || d < 2 {
                return Err(HarnessError::Usage(format!(
                    "grid cell {cell:?}: need n >= 3 and d >= 2"
                )));
            }
            Ok((n, d))
        })
        .collect::<Result<Vec<_>>>()?;
    if grid.is_empty() {
        return Err(HarnessError::Usage("grid is empty".into()));
    }
    Ok(grid)
}

/// Least-squares slope of `ln y` on `ln x`; `None` without two distinct `x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if logs.len() < 2 || sxx < 1e-12 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

pub fn run_benchmark(config: &BenchConfig) -> Result<BenchResult> {
    if config.grid.is_empty() {
        return Err(HarnessError::Usage("grid is empty".into()));
    }
    if config.repeats == 0 {
        return Err(HarnessError::Usage("repeats must be at least 1".into()));
    }
    let jobs: Vec<(usize, usize, u64)> = config
        .grid
        .iter()
        .flat_map(|&(n, d)| (0..config.repeats as u64).map(move |r| (n, d, r)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(n, d, r)| run_cell(config, n, d, config.seed.wrapping_add(r)))
        .collect::<Result<Vec<_>>>()?;

    let (axis, points, per_iter): (_, Vec<_>, Vec<_>) = match config.solver {
        BenchSolver::Classical => {
            let pts = records.iter().map(|r| ((r.n + r.d) as f64, r.queries as f64)).collect();
            let per = records
                .iter()
                .map(|r| ((r.n + r.d) as f64, r.queries as f64 / r.iterations as f64))
                .collect();
            ("n+d", pts, per)
        }
        BenchSolver::Quantum => {
            let charge = |r: &BenchRecord| r.dual_prep.unwrap_or(0) as f64;
            let pts = records.iter().map(|r| (r.n as f64, charge(r))).collect();
            let per = records
                .iter()
                .map(|r| (r.n as f64, charge(r) / r.iterations as f64))
                .collect();
            ("n", pts, per)
        }
    };
    Ok(BenchResult {
        solver: config.solver,
        slope: log_log_slope(&points),
        per_iteration_slope: log_log_slope(&per_iter),
        records,
        axis,
    })
}

fn run_cell(config: &BenchConfig, n: usize, d: usize, seed: u64) -> Result<BenchRecord> {
    let p = NormPair::from_q(config.q)?.p();
    let spec = HardInstanceSpec::random_of_case(HardCase::Two, n, d, p, &mut RngStream::new(seed))?;
    let game = build_hard_instance::<f64>(&spec)?;
    let started = Instant::now();
    let (iterations, queries, value, dual_prep) = match config.solver {
        BenchSolver::Classical => {
            let mut params = Params::classical(n, config.q, config.epsilon, seed)?;
            if let Some(t) = config.iterations {
                params = params.with_iterations(t);
            }
            let options = SolveOptions {
                record_traces: false,
                ..Default::default()
            };
            let report = solve_lq_l1_with(&game, &params, &options)?;
            (report.iterations, report.queries, report.primal_value, None)
        }
        BenchSolver::Quantum => {
            let options = QuantumOptions {
                iterations: config.iterations,
                record_traces: false,
                ..Default::default()
            };
            let run = quantum_solver_sim_with(&game, config.q, config.epsilon, seed, &options)?;
            let dual = run.ledger.breakdown.dual_prep;
            (
                run.report.iterations,
                run.ledger.oracle_calls,
                run.report.primal_value,
                Some(dual),
            )
        }
    };
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    let oracle_value = config.with_oracle.then(|| spec.sigma());
    Ok(BenchRecord {
        n,
        d,
        q: config.q,
        epsilon: config.epsilon,
        seed,
        iterations,
        queries,
        wall_ms,
        achieved_value: value,
        oracle_value,
        success: oracle_value.map(|o| value >= o - config.epsilon),
        dual_prep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("256x256, 8x4").unwrap(), vec![(256, 256), (8, 4)]);
        assert_eq!(parse_grid("16").unwrap(), vec![(16, 16)]);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("2x2").is_err());
        assert!(parse_grid("axb").is_err());
    }

    #[test]
    fn slopes() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0].iter().map(|x| (*x, 3.0 * x * x)).collect();
        assert!((log_log_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(log_log_slope(&[(2.0, 5.0), (2.0, 7.0)]), None);
        assert_eq!(log_log_slope(&[(2.0, 5.0)]), None);
    }
}
