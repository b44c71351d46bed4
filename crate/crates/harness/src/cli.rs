use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lqgame::quantum::FailureMode;
use lqgame::LogBase;

use crate::bench::BenchSolver;
use crate::config::{HardFormat, HardgenArgs, Mode, Overrides, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "lqgame", version, about = "Sublinear solvers for lq-l1 matrix games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LogBaseArg {
    Ln,
    Log2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FailureArg {
    Uniform,
    Zero,
    Double,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SolverArg {
    Classical,
    Qsim,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Stanza,
    Binary,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fixed iteration count instead of the derived one.
    #[arg(long)]
    pub iterations: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a game, dispatching large p to the l1-l1 solver.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        common: Common,
        /// Also compute the value with the reference oracle and check the guarantee.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long, value_enum, default_value = "ln")]
        log_base: LogBaseArg,
        #[arg(long)]
        l1_constant: Option<f64>,
    },
    /// Solve the l1-l1 game directly.
    SolveL1 {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        l1_constant: Option<f64>,
    },
    /// Sparse convex combination of vertices near a target point.
    Caratheodory {
        #[arg(long)]
        vertices: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Approximate margin maximizer of labelled points.
    Svm {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Simulated quantum solver with a query ledger.
    Qsim {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "uniform")]
        failure_mode: FailureArg,
    },
    /// Write a hard instance.
    Hardgen {
        #[arg(long)]
        case: u8,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "stanza")]
        format: FormatArg,
    },
    /// Query-scaling sweep over a grid of Case-2 hard instances.
    Bench {
        /// Cells such as "256x256,1024x1024".
        #[arg(long)]
        grid: String,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long, value_enum, default_value = "classical")]
        solver: SolverArg,
        /// Compare each run against the closed-form value.
        #[arg(long)]
        oracle: bool,
    },
    /// Reference value with a duality-gap certificate.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn apply_common(config: &mut RunConfig, common: Common) {
    config.epsilon = common.eps;
    config.seed = common.seed;
    config.output_path = common.out;
    config.overrides.iterations = common.iterations;
}

impl Command {
    pub fn into_config(self) -> RunConfig {
        match self {
            Command::Solve {
                instance,
                q,
                common,
                oracle,
                tol,
                repeats,
                log_base,
                l1_constant,
            } => {
                let mut c = RunConfig::new(Mode::Solve);
                apply_common(&mut c, common);
                c.instance_path = Some(instance);
                c.q = Some(q);
                c.with_oracle = oracle;
                c.repeats = repeats;
                c.overrides = Overrides {
                    log_base: match log_base {
                        LogBaseArg::Ln => LogBase::Natural,
                        LogBaseArg::Log2 => LogBase::Two,
                    },
                    l1_constant,
                    oracle_tol: tol,
                    ..c.overrides
                };
                c
            }
            Command::SolveL1 {
                instance,
                common,
                l1_constant,
            } => {
                let mut c = RunConfig::new(Mode::SolveL1);
                apply_common(&mut c, common);
                c.instance_path = Some(instance);
                c.overrides.l1_constant = l1_constant;
                c
            }
            Command::Caratheodory {
                vertices,
                target,
                p,
                common,
            } => {
                let mut c = RunConfig::new(Mode::Caratheodory);
                apply_common(&mut c, common);
                c.rows_path = Some(vertices);
                c.aux_path = Some(target);
                c.p = Some(p);
                c
            }
            Command::Svm {
                points,
                labels,
                q,
                common,
            } => {
                let mut c = RunConfig::new(Mode::Svm);
                apply_common(&mut c, common);
                c.rows_path = Some(points);
                c.aux_path = Some(labels);
                c.q = Some(q);
                c
            }
            Command::Qsim {
                instance,
                q,
                common,
                failure_mode,
            } => {
                let mut c = RunConfig::new(Mode::Qsim);
                apply_common(&mut c, common);
                c.instance_path = Some(instance);
                c.q = Some(q);
                c.overrides.failure_mode = match failure_mode {
                    FailureArg::Uniform => FailureMode::Uniform,
                    FailureArg::Zero => FailureMode::Zero,
                    FailureArg::Double => FailureMode::Double,
                };
                c
            }
            Command::Hardgen {
                case,
                n,
                d,
                l,
                k,
                p,
                out,
                format,
            } => {
                let mut c = RunConfig::new(Mode::Hardgen);
                c.output_path = Some(out);
                c.hardgen = Some(HardgenArgs {
                    case,
                    n,
                    d,
                    l,
                    k,
                    p,
                    format: match format {
                        FormatArg::Stanza => HardFormat::Stanza,
                        FormatArg::Binary => HardFormat::Binary,
                        FormatArg::Csv => HardFormat::Csv,
                    },
                });
                c
            }
            Command::Bench {
                grid,
                q,
                common,
                repeats,
                solver,
                oracle,
            } => {
                let mut c = RunConfig::new(Mode::Bench);
                apply_common(&mut c, common);
                c.grid = Some(grid);
                c.q = Some(q);
                c.repeats = repeats;
                c.with_oracle = oracle;
                c.bench_solver = match solver {
                    SolverArg::Classical => BenchSolver::Classical,
                    SolverArg::Qsim => BenchSolver::Quantum,
                };
                c
            }
            Command::Oracle {
                instance,
                q,
                tol,
                seed,
                out,
            } => {
                let mut c = RunConfig::new(Mode::Oracle);
                c.instance_path = Some(instance);
                c.q = Some(q);
                c.seed = seed;
                c.output_path = out;
                c.overrides.oracle_tol = Some(tol);
                c
            }
        }
    }
}
