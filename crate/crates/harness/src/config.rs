use std::path::PathBuf;

use lqgame::quantum::FailureMode;
use lqgame::LogBase;
use serde::Serialize;

use crate::bench::BenchSolver;
use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Solve,
    SolveL1,
    Caratheodory,
    Svm,
    Qsim,
    Hardgen,
    Bench,
    Oracle,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Solve => "solve",
            Self::SolveL1 => "solve-l1",
            Self::Caratheodory => "caratheodory",
            Self::Svm => "svm",
            Self::Qsim => "qsim",
            Self::Hardgen => "hardgen",
            Self::Bench => "bench",
            Self::Oracle => "oracle",
        }
    }
}

/// Knobs that change defaults of the algorithms.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    /// Logarithm used in the `p > log(d)/ε` dispatch test.
    pub log_base: LogBase,
    /// Iteration constant of the `ℓ1`-`ℓ1` solver.
    pub l1_constant: Option<f64>,
    /// Target duality gap of the reference oracle.
    pub oracle_tol: Option<f64>,
    /// Fixed iteration count instead of the derived one.
    pub iterations: Option<usize>,
    pub failure_mode: FailureMode,
}

/// How `hardgen` writes its output.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HardFormat {
    /// One-line generator stanza.
    #[default]
    Stanza,
    /// Materialized `LQG1` file.
    Binary,
    Csv,
}

#[derive(Clone, Debug, Default)]
pub struct HardgenArgs {
    pub case: u8,
    pub n: usize,
    pub d: usize,
    pub l: usize,
    pub k: Option<usize>,
    pub p: f64,
    pub format: HardFormat,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub instance_path: Option<PathBuf>,
    pub q: Option<f64>,
    pub p: Option<f64>,
    pub epsilon: f64,
    pub seed: u64,
    pub repeats: usize,
    pub output_path: Option<PathBuf>,
    pub overrides: Overrides,
    /// `solve`: also run the reference oracle and check the guarantee.
    pub with_oracle: bool,
    /// `caratheodory` vertices or `svm` points.
    pub rows_path: Option<PathBuf>,
    /// `caratheodory` target or `svm` labels.
    pub aux_path: Option<PathBuf>,
    pub grid: Option<String>,
    pub bench_solver: BenchSolver,
    pub hardgen: Option<HardgenArgs>,
}

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            instance_path: None,
            q: None,
            p: None,
            epsilon: 0.1,
            seed: 0,
            repeats: 1,
            output_path: None,
            overrides: Overrides::default(),
            with_oracle: false,
            rows_path: None,
            aux_path: None,
            grid: None,
            bench_solver: BenchSolver::Classical,
            hardgen: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let uses_epsilon = !matches!(self.mode, Mode::Hardgen | Mode::Oracle);
        if uses_epsilon && !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(HarnessError::Usage(format!(
                "--eps must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if self.repeats == 0 {
            return Err(HarnessError::Usage("--repeats must be at least 1".into()));
        }
        if let Some(tol) = self.overrides.oracle_tol {
            if !(tol > 0.0) {
                return Err(HarnessError::Usage(format!("--tol must be positive, got {tol}")));
            }
        }
        if let Some(c) = self.overrides.l1_constant {
            if !(c > 0.0 && c.is_finite()) {
                return Err(HarnessError::Usage(format!("--l1-constant must be positive, got {c}")));
            }
        }
        Ok(())
    }

    /// Where the JSON report goes; `hardgen` writes its instance to `output_path`
    /// and its report to stdout.
    pub fn report_path(&self) -> Option<&std::path::Path> {
        match self.mode {
            Mode::Hardgen => None,
            _ => self.output_path.as_deref(),
        }
    }

    pub(crate) fn require_q(&self) -> Result<f64> {
        self.q
            .ok_or_else(|| HarnessError::Usage(format!("{} needs --q", self.mode.name())))
    }

    pub(crate) fn require_instance(&self) -> Result<&PathBuf> {
        self.instance_path
            .as_ref()
            .ok_or_else(|| HarnessError::Usage(format!("{} needs --instance", self.mode.name())))
    }
}
