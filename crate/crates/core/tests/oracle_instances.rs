use lqgame::estimator::RngStream;
use lqgame::{
    build_hard_instance, classify_from_solution, duality_gap, game_value_exact, normalize_rows, sigma_case1,
    sigma_case2, HardCase, HardInstanceSpec, NormPair,
};
use proptest::prelude::*;

#[test]
fn closed_form_values() {
    for q in [1.25, 1.5, 2.0] {
        let p = NormPair::from_q(q).unwrap().p();
        let one = HardInstanceSpec {
            case: HardCase::One,
            n: 10,
            d: 8,
            l: 3,
            k: Some(5),
            p,
        };
        let two = HardInstanceSpec {
            case: HardCase::Two,
            n: 10,
            d: 8,
            l: 3,
            k: None,
            p,
        };
        let c1 = game_value_exact(&build_hard_instance::<f64>(&one).unwrap(), q, 1e-6).unwrap();
        let c2 = game_value_exact(&build_hard_instance::<f64>(&two).unwrap(), q, 1e-6).unwrap();
        assert!(
            (c1.value() - sigma_case1(q)).abs() <= 1e-4,
            "q={q}: {} vs {}",
            c1.value(),
            sigma_case1(q)
        );
        assert!(
            (c2.value() - sigma_case2(p)).abs() <= 1e-4,
            "q={q}: {} vs {}",
            c2.value(),
            sigma_case2(p)
        );
    }
}

#[test]
fn exact_solutions_classify_correctly() {
    let mut rng = RngStream::new(17);
    for _ in 0..20 {
        let spec = HardInstanceSpec::random(12, 12, 2.0, &mut rng).unwrap();
        let g = build_hard_instance::<f64>(&spec).unwrap();
        let cert = game_value_exact(&g, 2.0, 1e-7).unwrap();
        assert_eq!(classify_from_solution(&cert.x, 2.0, 2.0).unwrap(), (spec.case, spec.l));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn certificate_brackets_value(n in 1usize..8, d in 1usize..8, seed in any::<u64>(), q_index in 0usize..3) {
        let q = [1.25, 1.5, 2.0][q_index];
        let p = NormPair::from_q(q).unwrap().p();
        let mut rng = RngStream::new(seed);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| 2.0 * rng.uniform() - 1.0).collect()).collect();
        let g = normalize_rows(&rows, p).unwrap();
        let cert = game_value_exact(&g, q, 1e-6).unwrap();
        prop_assert!(cert.lower <= cert.upper + 1e-12);
        prop_assert!(cert.gap <= 1e-6);
        let gap = duality_gap(&g, &cert.x, &cert.p_dist, q).unwrap();
        prop_assert!(gap >= -1e-12);
        prop_assert!((gap - cert.gap).abs() <= 1e-9);
    }
}
