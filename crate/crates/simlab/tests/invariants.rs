//! Statistical properties of the simulated model.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use volbreak_core::{log_total_qv, realized_qv, StreamKey, TestConfig};
use volbreak_simlab::{
    generate_panel, generate_panel_keyed, ito_path, run_power_experiment, run_replications, ArSpec, Hypothesis,
    ScenarioConfig, SigmaShape,
};

fn shapes() -> [SigmaShape; 4] {
    [SigmaShape::flat(), SigmaShape::slope(), SigmaShape::sine(), SigmaShape::u_shape()]
}

#[test]
fn squared_increment_sum_variance() {
    // Σd_k² with independent N(0, v) increments has variance 2·Σv²
    let k = 78;
    let shape = SigmaShape::flat();
    let v = shape.grid_variances(k);
    let target: f64 = 2.0 * v.iter().map(|x| x * x).sum::<f64>();
    assert!((target - 2.0 * 78.0 * (0.04f64 / 78.0).powi(2)).abs() < 1e-18);

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let reps = 100_000;
    let sums: Vec<f64> = (0..reps)
        .map(|_| ito_path(&shape, k, &mut rng).unwrap().0.iter().map(|d| d * d).sum())
        .collect();
    let mean = sums.iter().sum::<f64>() / reps as f64;
    let var = sums.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
    assert!((var / target - 1.0).abs() < 0.05, "{var} vs {target}");
    assert!((mean / 0.04 - 1.0).abs() < 0.01, "{mean}");
}

#[test]
fn path_is_running_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (d, path) = ito_path(&SigmaShape::sine(), 10, &mut rng).unwrap();
    let mut acc = 0.0;
    for (x, p) in d.iter().zip(&path) {
        acc += x;
        assert!((acc - p).abs() < 1e-15);
    }
    assert!(ito_path(&SigmaShape::sine(), 1, &mut rng).is_err());
}

#[test]
fn geometric_mean_of_total_qv_identifies_total_volatility() {
    // A single N = 2000 panel carries about 5% sampling noise from the mean
    // of g alone, so 20 independent panels are averaged.
    for (i, shape) in shapes().into_iter().enumerate() {
        let panels = 20;
        let mut sum = 0.0;
        for p in 0..panels {
            let cfg = ScenarioConfig::null(shape.clone(), 2000, 78, 1000 + 100 * i as u64 + p);
            let lq = log_total_qv(&realized_qv(&generate_panel(&cfg).unwrap()).unwrap()).unwrap();
            sum += lq.values().iter().sum::<f64>() / 2000.0;
        }
        let ratio = (sum / panels as f64).exp() / shape.total();
        assert!((ratio - 1.0).abs() < 0.05, "{}: {ratio}", shape.label());
    }
}

#[test]
fn realized_qv_error_shrinks_with_k() {
    let shape = SigmaShape::u_shape();
    let median_sup_error = |k: usize| {
        let cfg = ScenarioConfig {
            ar: ArSpec::Constant { phi: 0.0, sigma_eps2: 0.0 },
            ..ScenarioConfig::null(shape.clone(), 2, k, 0)
        };
        let mut errs: Vec<f64> = (0..200u64)
            .map(|rep| {
                let panel = generate_panel_keyed(&cfg, StreamKey::new(7).child(rep)).unwrap();
                let q = realized_qv(&panel).unwrap();
                q.row(0)
                    .iter()
                    .enumerate()
                    .map(|(j, v)| (v - shape.integral((j + 1) as f64 / k as f64)).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        errs.sort_by(f64::total_cmp);
        0.5 * (errs[99] + errs[100])
    };
    let coarse = median_sup_error(78);
    let fine = median_sup_error(312);
    assert!(fine < 0.5 * coarse, "{fine} vs {coarse}");
}

#[test]
fn pure_shape_change_leaves_total_test_at_nominal_size() {
    let cfg = ScenarioConfig::alternative(Hypothesis::HA1, 0.5, 250, 78, 404).unwrap();
    let tests = TestConfig { draws: 1000, ..TestConfig::default() };
    let rows = run_power_experiment(&cfg, &tests, 400, &[0.05]).unwrap();
    assert!((rows[0].total_test - 0.05).abs() <= 0.03, "{:?}", rows[0]);
}

#[test]
fn replications_independent_of_thread_count() {
    let cfg = ScenarioConfig::alternative(Hypothesis::HA3, 0.5, 60, 13, 9).unwrap();
    let tests = TestConfig { draws: 300, series_terms: 100, eigen_threshold: 0.95 };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_replications(&cfg, &tests, 12).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(1));
}

mod clock {
    use proptest::prelude::*;
    use volbreak_simlab::SigmaShape;

    fn parametric() -> impl Strategy<Value = SigmaShape> {
        prop_oneof![
            (0.01f64..1.0).prop_map(|level| SigmaShape::Flat { level }),
            (0.01f64..1.0, 0.0f64..1.0).prop_map(|(intercept, slope)| SigmaShape::Slope { intercept, slope }),
            (0.0f64..0.5, 0.0f64..1.0).prop_map(|(a, extra)| SigmaShape::Sine { amplitude: a, offset: a + 0.01 + extra }),
            (0.001f64..1.0).prop_map(|offset| SigmaShape::UShape { offset }),
        ]
    }

    proptest! {
        #[test]
        fn clock_starts_at_zero_and_increases(shape in parametric(), k in 2usize..200) {
            prop_assert!(shape.validate().is_ok());
            prop_assert!(shape.integral(0.0).abs() < 1e-15);
            let v = shape.grid_variances(k);
            prop_assert!(v.iter().all(|&x| x > 0.0));
            let total: f64 = v.iter().sum();
            prop_assert!((total - shape.total()).abs() <= 1e-12 * shape.total());
        }
    }
}
