use lqgame::applications::{svm_solve_with, SvmOptions};
use lqgame::estimator::RngStream;
use lqgame::{caratheodory_residual, caratheodory_solve, svm_margin_value, Vector};

#[test]
fn caratheodory_recovers_a_vertex() {
    let vertices = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0]];
    let u = Vector::new(vec![0.0, 1.0]).unwrap();
    let combo = caratheodory_solve(&vertices, &u, 2.0, 0.5, 4).unwrap();
    let total: f64 = combo.weights.iter().sum();
    assert!((total - 1.0).abs() <= 1e-12);
    assert!(combo.weights.iter().all(|w| *w > 0.0));
    assert_eq!(combo.support_size, combo.indices.len());
    assert!(caratheodory_residual(&vertices, &u, &combo, 2.0).unwrap() <= 0.5);
}

#[test]
fn caratheodory_rejects_bad_input() {
    let u = Vector::new(vec![0.0, 0.0]).unwrap();
    assert!(caratheodory_solve(&[vec![2.0, 0.0]], &u, 2.0, 0.5, 0).is_err());
    assert!(caratheodory_solve(&[vec![1.0]], &u, 2.0, 0.5, 0).is_err());
    let far = Vector::new(vec![3.0, 0.0]).unwrap();
    assert!(caratheodory_solve(&[vec![1.0, 0.0]], &far, 2.0, 0.5, 0).is_err());
}

#[test]
fn svm_margin_on_random_separable_data() {
    let mut rng = RngStream::new(8);
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..20 {
        let y: i8 = if rng.uniform() < 0.5 { 1 } else { -1 };
        let offset = 0.6 + 0.3 * rng.uniform();
        points.push(vec![f64::from(y) * offset, 0.2 * (2.0 * rng.uniform() - 1.0)]);
        labels.push(y);
    }
    let opts = SvmOptions {
        iterations: Some(200_000),
        ..Default::default()
    };
    let sol = svm_solve_with(&points, &labels, 2.0, 0.2, 1, &opts).unwrap();
    assert!(!sol.possibly_unseparable);
    let recomputed = svm_margin_value(&points, &labels, &sol.w, 2.0).unwrap();
    assert_eq!(recomputed, sol.margin_value);
}
