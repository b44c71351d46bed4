use lqgame::estimator::RngStream;
use lqgame::quantum::{
    amplification_rounds, lq_state_amplitudes, quantum_solver_sim_with, FailureMode, QuantumOptions,
};
use lqgame::{build_hard_instance, HardCase, HardInstanceSpec, Vector};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn measurement_law_is_the_lq_law() {
    let a = Vector::new(vec![0.3, -0.7, 0.0, 1.2, 0.05]).unwrap();
    let mut rng = RngStream::new(21);
    for q in [1.3, 1.7, 2.0] {
        let state = lq_state_amplitudes(&a, q).unwrap();
        let norm: f64 = state.amplitudes.iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() <= 1e-10);
        let mass: Vec<f64> = a.iter().map(|v| v.abs().powf(q)).collect();
        let total: f64 = mass.iter().sum();
        let shots = 100_000;
        let mut counts = vec![0usize; a.len()];
        for _ in 0..shots {
            counts[state.measure(&mut rng)] += 1;
        }
        assert_eq!(counts[2], 0);
        let stat: f64 = counts
            .iter()
            .zip(&mass)
            .filter(|(_, m)| **m > 0.0)
            .map(|(c, m)| {
                let e = m / total * shots as f64;
                (*c as f64 - e).powi(2) / e
            })
            .sum();
        let pv = 1.0 - ChiSquared::new(3.0).unwrap().cdf(stat);
        assert!(pv > 0.01, "q={q}: p-value {pv}");
    }
}

#[test]
fn amplification_charges_grow_like_sqrt_n() {
    let charges: Vec<f64> = [64usize, 256, 1024, 4096]
        .iter()
        .map(|&n| amplification_rounds(&Vector::basis(n, 0), 2.0).unwrap().1 as f64)
        .collect();
    for w in charges.windows(2) {
        let ratio = w[1] / w[0];
        assert!((1.8..2.2).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn ledger_breakdown_is_consistent_under_every_failure_mode() {
    let spec = HardInstanceSpec {
        case: HardCase::Two,
        n: 16,
        d: 8,
        l: 2,
        k: None,
        p: 2.0,
    };
    let g = build_hard_instance::<f64>(&spec).unwrap();
    for mode in [FailureMode::Uniform, FailureMode::Zero, FailureMode::Double] {
        let opts = QuantumOptions {
            iterations: Some(500),
            failure_mode: mode,
            ..Default::default()
        };
        let run = quantum_solver_sim_with(&g, 2.0, 0.1, 3, &opts).unwrap();
        assert!(run.ledger.is_consistent());
        assert_eq!(run.diagnostics.va_vt_violations, 0);
        assert_eq!(run.succinct.steps.len(), 500);
        let rebuilt = run.succinct.reconstruct(&g).unwrap();
        for (a, b) in rebuilt.iter().zip(run.report.x_bar.iter()) {
            assert!((a - b).abs() <= 1e-9);
        }
    }
}
