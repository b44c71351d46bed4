use lqgame::estimator::RngStream;
use lqgame::{
    lq_norm, normalize_rows, pnorm_ogd_step, solve_lq_l1, solve_lq_l1_with, Game32, NormPair, Params, SolveOptions,
    SolverPath, Vector,
};
use proptest::prelude::*;

fn random_rows(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = RngStream::new(seed);
    (0..n)
        .map(|_| (0..d).map(|_| 2.0 * rng.uniform() - 1.0).collect())
        .collect()
}

fn project(y: &Vector, q: f64) -> Vector {
    y.project_lq_ball(q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ogd_regret_is_bounded(d in 1usize..8, q_index in 0usize..3, seed in any::<u64>()) {
        let q = [1.25, 1.5, 2.0][q_index];
        let p = NormPair::from_q(q).unwrap().p();
        let big_t = 400;
        let iota = ((q - 1.0) / (2.0 * big_t as f64)).sqrt();
        let mut rng = RngStream::new(seed);
        let mut y = Vector::zeros(d);
        let mut sum_u = vec![0.0; d];
        let mut gained = 0.0;
        for _ in 0..big_t {
            let raw: Vec<f64> = (0..d).map(|_| 2.0 * rng.uniform() - 1.0).collect();
            let norm = lq_norm(&raw, p).unwrap();
            prop_assume!(norm > 0.0);
            let scale = rng.uniform().max(1e-3) / norm;
            let u = Vector::new(raw.iter().map(|v| v * scale).collect()).unwrap();
            let x = project(&y, q);
            gained += x.dot(u.as_slice());
            for (s, v) in sum_u.iter_mut().zip(u.iter()) {
                *s += v;
            }
            y = pnorm_ogd_step(&y, &u, iota, p).unwrap();
        }
        let regret = lq_norm(&sum_u, p).unwrap() - gained;
        prop_assert!(regret <= (2.0 * big_t as f64 / (q - 1.0)).sqrt() + 1e-9);
    }

    #[test]
    fn runs_respect_budget_ball_and_clip(
        n in 2usize..12,
        d in 1usize..12,
        q_index in 0usize..3,
        seed in any::<u64>(),
    ) {
        let q = [1.25, 1.5, 2.0][q_index];
        let p = NormPair::from_q(q).unwrap().p();
        let g = normalize_rows(&random_rows(n, d, seed), p).unwrap();
        let params = Params::classical(n, q, 0.5, seed).unwrap().with_iterations(300);
        let report = solve_lq_l1_with(&g, &params, &SolveOptions::default()).unwrap();
        prop_assert_eq!(report.path, SolverPath::LqL1);
        prop_assert!(report.queries <= params.query_budget(d));
        prop_assert!(report.x_bar.norm(q).unwrap() <= 1.0 + 1e-9);
        prop_assert!(report.max_abs_update <= params.clip_bound());
        prop_assert_eq!(report.i_trace.len(), 300);
        prop_assert!(report.i_trace.iter().all(|i| (*i as usize) < n));
        // Only the first iterate can be zero.
        prop_assert!(report.j_trace.iter().skip(1).all(|j| j.is_some()));
    }

    #[test]
    fn same_seed_same_run(seed in any::<u64>()) {
        let g = normalize_rows(&random_rows(6, 5, seed), 2.0).unwrap();
        let params = Params::classical(6, 2.0, 0.5, seed).unwrap().with_iterations(200);
        let a = solve_lq_l1_with(&g, &params, &SolveOptions::default()).unwrap();
        let b = solve_lq_l1_with(&g.fork(), &params, &SolveOptions::default()).unwrap();
        prop_assert_eq!(a.x_bar, b.x_bar);
        prop_assert_eq!(a.i_trace, b.i_trace);
    }
}

#[test]
fn derived_budget_holds_exactly() {
    let g = normalize_rows(&random_rows(20, 30, 7), 2.0).unwrap();
    let report = solve_lq_l1(&g, 2.0, 0.3, 7).unwrap();
    let t = ((895.0 * 20f64.ln() + 8.0) / 0.09).ceil() as u64;
    assert_eq!(report.iterations as u64, t);
    assert!(report.queries <= t * 50);
}

#[test]
fn single_precision_run() {
    let rows: Vec<Vec<f32>> = random_rows(8, 8, 3)
        .into_iter()
        .map(|r| r.into_iter().map(|v| v as f32).collect())
        .collect();
    let g: Game32 = normalize_rows(&rows, 2.0f32).unwrap();
    let params = lqgame::Params32::classical(8, 2.0, 0.5, 3)
        .unwrap()
        .with_iterations(500);
    let report = solve_lq_l1_with(&g, &params, &SolveOptions::default()).unwrap();
    assert!(report.x_bar.norm(2.0).unwrap() <= 1.0 + 1e-4);
    assert!(report.queries <= params.query_budget(8));
}
