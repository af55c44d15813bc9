use avgop::operators::{
    eval_infinity, eval_mean, eval_p_harmonious, eval_p_laplacian, p_laplacian_lambda,
    AveragingOperator, NeighborValues, OperatorSpec, RootFinderConfig,
};
use proptest::prelude::*;

/// Plain bisection on the unnormalized balance `sum (s - t_i)|s - t_i|^(p-2)`.
fn oracle_p_laplacian(t: &[f64], p: f64) -> f64 {
    let g = |s: f64| -> f64 {
        t.iter()
            .map(|&ti| {
                let x = s - ti;
                if x == 0.0 {
                    0.0
                } else {
                    x.signum() * x.abs().powf(p - 1.0)
                }
            })
            .sum()
    };
    let mut lo = t.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn neighbours(max_dim: usize) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_dim).prop_flat_map(|d| prop::collection::vec(-10.0f64..10.0, 2 * d))
}

fn averaging_ops(dim: usize) -> Vec<OperatorSpec> {
    vec![
        OperatorSpec::mean(dim).unwrap(),
        OperatorSpec::p_laplacian(dim, 1.5).unwrap(),
        OperatorSpec::p_laplacian(dim, 4.0).unwrap(),
        OperatorSpec::p_harmonious(dim, 0.4).unwrap(),
        OperatorSpec::infinity(dim).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn values_stay_in_the_data_range(t in neighbours(4)) {
        let (lo, hi) = (
            t.iter().copied().fold(f64::INFINITY, f64::min),
            t.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        );
        for op in averaging_ops(t.len() / 2) {
            let v = op.eval(&t).unwrap();
            prop_assert!(lo <= v && v <= hi, "{} gave {v}", op.label());
        }
    }

    #[test]
    fn translation_equivariance(t in neighbours(3), c in -20.0f64..20.0) {
        for op in averaging_ops(t.len() / 2) {
            let shifted: Vec<f64> = t.iter().map(|v| v + c).collect();
            let lhs = op.eval(&shifted).unwrap();
            let rhs = c + op.eval(&t).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10, "{}: {lhs} vs {rhs}", op.label());
        }
    }

    #[test]
    fn scaling_equivariance(t in neighbours(3), c in -5.0f64..5.0) {
        for op in averaging_ops(t.len() / 2) {
            let scaled: Vec<f64> = t.iter().map(|v| v * c).collect();
            let lhs = op.eval(&scaled).unwrap();
            let rhs = c * op.eval(&t).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + c.abs() * 10.0), "{}", op.label());
        }
    }

    #[test]
    fn permutation_invariance(t in neighbours(4), seed in any::<u64>()) {
        let mut perm = t.clone();
        // Fisher-Yates driven by a simple LCG so the test needs no extra RNG.
        let mut state = seed | 1;
        for i in (1..perm.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let scale = t.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for op in averaging_ops(t.len() / 2) {
            let diff = (op.eval(&t).unwrap() - op.eval(&perm).unwrap()).abs();
            prop_assert!(diff <= 1e-12 * scale, "{}: {diff}", op.label());
        }
    }

    #[test]
    fn p_two_is_the_mean(t in neighbours(4)) {
        let nv = NeighborValues::new(t).unwrap();
        let p2 = eval_p_laplacian(&nv, 2.0, &RootFinderConfig::default()).unwrap();
        prop_assert!((p2 - eval_mean(&nv)).abs() <= 1e-10);
    }

    #[test]
    fn p_laplacian_matches_plain_bisection(t in neighbours(3), p in 1.3f64..8.0) {
        let nv = NeighborValues::new(t.clone()).unwrap();
        let v = eval_p_laplacian(&nv, p, &RootFinderConfig::default()).unwrap();
        let width = t.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            - t.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert!((v - oracle_p_laplacian(&t, p)).abs() <= 1e-10 * width.max(1.0));
    }

    #[test]
    fn single_slot_lipschitz_one(t in neighbours(3), slot in 0usize..6, new in -10.0f64..10.0) {
        let slot = slot % t.len();
        let mut other = t.clone();
        other[slot] = new;
        for op in averaging_ops(t.len() / 2) {
            let diff = (op.eval(&t).unwrap() - op.eval(&other).unwrap()).abs();
            prop_assert!(diff <= (t[slot] - new).abs() + 1e-10, "{}", op.label());
        }
    }

    #[test]
    fn p_harmonious_interpolates(t in neighbours(4), alpha in 0.0f64..1.0) {
        let nv = NeighborValues::new(t).unwrap();
        let expected = alpha * eval_infinity(&nv) + (1.0 - alpha) * eval_mean(&nv);
        prop_assert!((eval_p_harmonious(&nv, alpha).unwrap() - expected).abs() <= 1e-12);
    }

    #[test]
    fn unit_vectors_give_lambda(d in 1usize..=4, p in 1.2f64..10.0, slot in 0usize..8) {
        let slot = slot % (2 * d);
        let oracle = 1.0 / (1.0 + ((2 * d - 1) as f64).powf(1.0 / (p - 1.0)));
        let v = eval_p_laplacian(&NeighborValues::unit(d, slot), p, &RootFinderConfig::default())
            .unwrap();
        prop_assert!((v - oracle).abs() <= 1e-10);
        prop_assert!((p_laplacian_lambda(d, p) - oracle).abs() <= 1e-14);
    }

    #[test]
    fn compare_agrees_with_eval(t in neighbours(3), p in 1.2f64..6.0, offset in 1e-6f64..1.0) {
        let op = OperatorSpec::p_laplacian(t.len() / 2, p).unwrap();
        let v = op.eval(&t).unwrap();
        prop_assert_eq!(op.compare(&t, v - offset).unwrap(), std::cmp::Ordering::Greater);
        prop_assert_eq!(op.compare(&t, v + offset).unwrap(), std::cmp::Ordering::Less);
    }
}

#[test]
fn spec_values() {
    let nv = |v: &[f64]| NeighborValues::new(v.to_vec()).unwrap();
    let cfg = RootFinderConfig::default();
    // The unit vector in d = 2 at p = 3 gives 1 / (1 + sqrt 3).
    let v = eval_p_laplacian(&nv(&[1.0, 0.0, 0.0, 0.0]), 3.0, &cfg).unwrap();
    assert!((v - 0.366_025_403_784_438_6).abs() < 1e-12);
    assert_eq!(eval_infinity(&nv(&[2.0, 1.0, 0.0, 0.0])), 1.0);
    assert_eq!(eval_infinity(&nv(&[2.0, 1.5, 0.0, 0.0])), 1.0);
    assert!(eval_p_laplacian(&nv(&[1.0, 0.0, 0.0, 0.0]), 1.05, &cfg).is_err());
}
