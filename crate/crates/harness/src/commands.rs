use lqgame::applications::{caratheodory_solve_with, svm_solve_with, SvmOptions};
use lqgame::quantum::{quantum_solver_sim_with, QuantumOptions};
use lqgame::{
    build_hard_instance, caratheodory_residual, game_value_exact_with, solve_dispatch_with, solve_l1_l1_with,
    Certificate, DispatchOptions, Game, HardCase, HardInstanceSpec, L1L1Options, NormPair, OracleOptions, SolveOptions,
};
use serde_json::{json, Value};

use crate::bench::{parse_grid, run_benchmark, BenchConfig};
use crate::config::{HardFormat, Mode, RunConfig};
use crate::error::{HarnessError, Result};
use crate::format::{hard_stanza, load_instance, load_labels, load_rows, load_vector, save_binary, save_csv, write};
use crate::report::{document, float, params_value, solve_fields, to_value, vector_value};

/// Default duality-gap target of the reference oracle.
pub const DEFAULT_ORACLE_TOL: f64 = 1e-4;

/// A finished run: the report, and whether the checked guarantee held.
pub struct Outcome {
    pub report: Value,
    /// `false` only when an oracle comparison was requested and failed.
    pub guarantee_met: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self {
            report,
            guarantee_met: true,
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let outcome = match config.mode {
        Mode::Solve => solve(config)?,
        Mode::SolveL1 => Outcome::ok(solve_l1(config)?),
        Mode::Caratheodory => Outcome::ok(caratheodory(config)?),
        Mode::Svm => Outcome::ok(svm(config)?),
        Mode::Qsim => Outcome::ok(qsim(config)?),
        Mode::Hardgen => Outcome::ok(hardgen(config)?),
        Mode::Bench => bench(config)?,
        Mode::Oracle => Outcome::ok(oracle(config)?),
    };
    Ok(Outcome {
        report: document(config.mode.name(), outcome.report),
        ..outcome
    })
}

fn certificate_value(cert: &Certificate) -> Value {
    json!({
        "lower": float(cert.lower),
        "upper": float(cert.upper),
        "gap": float(cert.gap),
        "iterations": cert.iterations_used,
    })
}

fn oracle_certificate(game: &Game, q: f64, config: &RunConfig) -> Result<Certificate> {
    let tol = config.overrides.oracle_tol.unwrap_or(DEFAULT_ORACLE_TOL);
    let options = OracleOptions {
        seed: Some(config.seed),
        ..Default::default()
    };
    Ok(game_value_exact_with(&game.fork(), q, tol, &options)?)
}

fn solve(config: &RunConfig) -> Result<Outcome> {
    let q = config.require_q()?;
    let loaded = load_instance(config.require_instance()?)?;
    let game = loaded.game;
    let (n, d) = (game.n(), game.d());
    let mut l1 = L1L1Options {
        record_traces: false,
        ..Default::default()
    };
    if let Some(c) = config.overrides.l1_constant {
        l1.constant = c;
    }
    let options = DispatchOptions {
        log_base: config.overrides.log_base,
        l1,
        solve: SolveOptions {
            record_traces: false,
            ..Default::default()
        },
        iterations: config.overrides.iterations,
    };
    let certificate = if config.with_oracle {
        Some(oracle_certificate(&game, q, config)?)
    } else {
        None
    };

    let mut records = Vec::with_capacity(config.repeats);
    let mut met = 0usize;
    let mut all_met = true;
    for r in 0..config.repeats as u64 {
        let seed = config.seed.wrapping_add(r);
        let report = solve_dispatch_with(&game.fork(), q, config.epsilon, seed, &options)?;
        let mut fields = solve_fields(&report, n, d, config.output_path.as_deref())?;
        if let Some(cert) = &certificate {
            let lower = cert.lower;
            let success = report.primal_value >= lower - report.error_bound;
            fields["success"] = json!(success);
            if success {
                met += 1;
            } else {
                all_met = false;
            }
        }
        records.push(fields);
    }
    let mut body = if config.repeats == 1 {
        records.pop().unwrap()
    } else {
        json!({ "records": records })
    };
    if let Some(cert) = &certificate {
        body["certificate"] = certificate_value(cert);
        body["success_count"] = json!(met);
    }
    if let Some(spec) = loaded.hard {
        body["hard_instance"] = to_value(&spec);
        body["closed_form_value"] = float(spec.sigma());
    }
    Ok(Outcome {
        report: body,
        guarantee_met: all_met,
    })
}

fn solve_l1(config: &RunConfig) -> Result<Value> {
    let game = load_instance(config.require_instance()?)?.game;
    let mut options = L1L1Options {
        record_traces: false,
        iterations: config.overrides.iterations,
        ..Default::default()
    };
    if let Some(c) = config.overrides.l1_constant {
        options.constant = c;
    }
    let report = solve_l1_l1_with(&game, config.epsilon, config.seed, &options)?;
    let mut body = solve_fields(&report, game.n(), game.d(), config.output_path.as_deref())?;
    body["l1_constant"] = float(options.constant);
    Ok(body)
}

fn caratheodory(config: &RunConfig) -> Result<Value> {
    let p = config
        .p
        .ok_or_else(|| HarnessError::Usage("caratheodory needs --p".into()))?;
    let vertices_path = config
        .rows_path
        .as_ref()
        .ok_or_else(|| HarnessError::Usage("caratheodory needs --vertices".into()))?;
    let target_path = config
        .aux_path
        .as_ref()
        .ok_or_else(|| HarnessError::Usage("caratheodory needs --target".into()))?;
    let vertices = load_rows(vertices_path)?;
    let u = load_vector(target_path)?;
    let options = SolveOptions::default();
    let (combo, report) = caratheodory_solve_with(&vertices, &u, p, config.epsilon, config.seed, &options)?;
    let residual = caratheodory_residual(&vertices, &u, &combo, p)?;
    Ok(json!({
        "params": params_value(&report.params, vertices.len(), u.len()),
        "residual": float(residual),
        "support_size": combo.support_size,
        "iterations": report.iterations,
        "indices": combo.indices,
        "weights": combo.weights.iter().map(|w| float(*w)).collect::<Vec<_>>(),
        "queries": report.queries,
        "wall_ms": float(report.wall_time * 1e3),
    }))
}

fn svm(config: &RunConfig) -> Result<Value> {
    let q = config.require_q()?;
    let points_path = config
        .rows_path
        .as_ref()
        .ok_or_else(|| HarnessError::Usage("svm needs --points".into()))?;
    let labels_path = config
        .aux_path
        .as_ref()
        .ok_or_else(|| HarnessError::Usage("svm needs --labels".into()))?;
    let points = load_rows(points_path)?;
    let labels = load_labels(labels_path)?;
    let options = SvmOptions {
        iterations: config.overrides.iterations,
        ..Default::default()
    };
    let sol = svm_solve_with(&points, &labels, q, config.epsilon, config.seed, &options)?;
    Ok(json!({
        "q": float(q),
        "epsilon": float(config.epsilon),
        "seed": config.seed,
        "margin_value": float(sol.margin_value),
        "radius_used": float(sol.radius_used),
        "possibly_unseparable": sol.possibly_unseparable,
        "iterations": sol.iterations,
        "queries": sol.queries,
        "w": vector_value(&sol.w, config.output_path.as_deref(), "w")?,
    }))
}

fn qsim(config: &RunConfig) -> Result<Value> {
    let q = config.require_q()?;
    let game = load_instance(config.require_instance()?)?.game;
    let options = QuantumOptions {
        iterations: config.overrides.iterations,
        failure_mode: config.overrides.failure_mode,
        record_traces: false,
        ..Default::default()
    };
    let run = quantum_solver_sim_with(&game, q, config.epsilon, config.seed, &options)?;
    let mut body = solve_fields(&run.report, game.n(), game.d(), config.output_path.as_deref())?;
    body["quantum_sim"] = json!({
        "ledger": to_value(&run.ledger),
        "diagnostics": to_value(&run.diagnostics),
        "failure_mode": to_value(&options.failure_mode),
        "succinct_steps": run.succinct.steps.len(),
    });
    Ok(body)
}

fn hardgen(config: &RunConfig) -> Result<Value> {
    let args = config
        .hardgen
        .as_ref()
        .ok_or_else(|| HarnessError::Usage("hardgen needs --case, --n, --d, --l and --p".into()))?;
    let out = config
        .output_path
        .as_ref()
        .ok_or_else(|| HarnessError::Usage("hardgen needs --out".into()))?;
    let spec = HardInstanceSpec {
        case: HardCase::from_number(args.case)?,
        n: args.n,
        d: args.d,
        l: args.l,
        k: args.k,
        p: args.p,
    };
    spec.validate()?;
    match args.format {
        HardFormat::Stanza => write(out, hard_stanza(&spec).as_bytes())?,
        HardFormat::Binary => save_binary(&build_hard_instance(&spec)?, out)?,
        HardFormat::Csv => save_csv(&build_hard_instance(&spec)?, out)?,
    }
    Ok(json!({
        "hard_instance": to_value(&spec),
        "closed_form_value": float(spec.sigma()),
        "written": out.display().to_string(),
    }))
}

fn bench(config: &RunConfig) -> Result<Outcome> {
    let grid = parse_grid(
        config
            .grid
            .as_deref()
            .ok_or_else(|| HarnessError::Usage("bench needs --grid".into()))?,
    )?;
    let bench = BenchConfig {
        grid,
        q: config.require_q()?,
        epsilon: config.epsilon,
        repeats: config.repeats,
        seed: config.seed,
        solver: config.bench_solver,
        iterations: config.overrides.iterations,
        with_oracle: config.with_oracle,
    };
    let result = run_benchmark(&bench)?;
    let met = result.records.iter().all(|r| r.success != Some(false));
    let records: Vec<Value> = result.records.iter().map(to_value).collect();
    let report = json!({
        "params": {
            "q": float(bench.q),
            "p": float(NormPair::from_q(bench.q)?.p()),
            "epsilon": float(bench.epsilon),
            "repeats": bench.repeats,
            "seed": bench.seed,
            "iterations_override": bench.iterations,
            "solver": to_value(&bench.solver),
        },
        "records": records,
        "slope": result.slope.map(float),
        "per_iteration_slope": result.per_iteration_slope.map(float),
        "axis": result.axis,
    });
    Ok(Outcome {
        report,
        guarantee_met: met,
    })
}

fn oracle(config: &RunConfig) -> Result<Value> {
    let q = config.require_q()?;
    let game = load_instance(config.require_instance()?)?.game;
    let cert = oracle_certificate(&game, q, config)?;
    let mut body = certificate_value(&cert);
    body["q"] = float(q);
    body["tol"] = float(config.overrides.oracle_tol.unwrap_or(DEFAULT_ORACLE_TOL));
    body["x"] = vector_value(&cert.x, config.output_path.as_deref(), "x")?;
    body["p_dist"] = vector_value(&cert.p_dist, config.output_path.as_deref(), "p_dist")?;
    Ok(body)
}
