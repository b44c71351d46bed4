use lqgame::estimator::RngStream;
use lqgame::{lq_norm, lq_sample, normalize_rows, unbiased_estimate, Vector};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn chi_square_p_value(counts: &[usize], probs: &[f64]) -> f64 {
    let shots: usize = counts.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0;
    for (c, p) in counts.iter().zip(probs) {
        if *p > 0.0 {
            let e = p * shots as f64;
            stat += (*c as f64 - e).powi(2) / e;
            cells += 1;
        } else {
            assert_eq!(*c, 0, "sampled a zero-probability cell");
        }
    }
    1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat)
}

fn random_vector(d: usize, rng: &mut RngStream) -> Vec<f64> {
    (0..d).map(|_| 2.0 * rng.uniform() - 1.0).collect()
}

#[test]
fn estimates_are_unbiased_and_bounded_in_moment() {
    let mut rng = RngStream::new(11);
    let shots = 100_000;
    for trial in 0..20 {
        let d = 3 + trial % 6;
        let q = [1.2, 1.5, 1.8, 2.0][trial % 4];
        let p = q / (q - 1.0);
        let x_raw = random_vector(d, &mut rng);
        let x_norm = lq_norm(&x_raw, q).unwrap();
        let x = Vector::new(x_raw.iter().map(|v| v / x_norm).collect()).unwrap();
        let g = normalize_rows(&[random_vector(d, &mut rng)], p).unwrap();
        let truth = (0..d).map(|j| g.query(0, j).unwrap() * x[j]).sum::<f64>();

        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let mut moment = 0.0;
        for _ in 0..shots {
            let j = lq_sample(&x, q, &mut rng).unwrap();
            let v = unbiased_estimate(&g, 0, &x, j, q).unwrap();
            sum += v;
            sum_sq += v * v;
            moment += v.abs().powf(p);
        }
        let n = shots as f64;
        let mean = sum / n;
        let se = ((sum_sq / n - mean * mean) / n).sqrt();
        assert!(
            (mean - truth).abs() <= 4.0 * se + 1e-12,
            "trial {trial}: mean {mean} truth {truth} se {se}"
        );
        assert!(moment / n <= 1.05, "trial {trial}: E|v|^p = {}", moment / n);
    }
}

#[test]
fn lq_sampling_matches_its_law() {
    let mut rng = RngStream::new(5);
    for q in [1.25, 1.5, 2.0] {
        let x = Vector::new(vec![0.5, -0.1, 0.0, 0.9, -0.3, 0.05]).unwrap();
        let mass: Vec<f64> = x.iter().map(|v| v.abs().powf(q)).collect();
        let total: f64 = mass.iter().sum();
        let probs: Vec<f64> = mass.iter().map(|m| m / total).collect();
        let mut counts = vec![0; x.len()];
        for _ in 0..100_000 {
            counts[lq_sample(&x, q, &mut rng).unwrap()] += 1;
        }
        let pv = chi_square_p_value(&counts, &probs);
        assert!(pv > 0.01, "q={q}: p-value {pv}");
    }
}
