//! Fast statistics, estimators and covariance against naive evaluations.

use proptest::prelude::*;
use volbreak_core::cusum::{fde_covariance, shape_statistic, total_statistic};
use volbreak_core::{
    log_total_qv, realized_qv, shape_changepoint, standardized_qv, total_changepoint, DayId, ReturnPanel,
};

/// `‖Σ_{i≤n} x_i − (n/N) Σ_{i≤N} x_i‖²`, every sum recomputed from scratch.
fn naive_objective(rows: &[Vec<f64>], n: usize) -> f64 {
    let big_n = rows.len();
    let cols = rows[0].len();
    (0..cols)
        .map(|k| {
            let head: f64 = (0..n).map(|i| rows[i][k]).sum();
            let all: f64 = (0..big_n).map(|i| rows[i][k]).sum();
            let d = head - n as f64 / big_n as f64 * all;
            d * d
        })
        .sum()
}

fn naive_statistic(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    (1..=n).map(|m| naive_objective(rows, m)).sum::<f64>() / (n * n) as f64
}

fn naive_argmax(rows: &[Vec<f64>]) -> usize {
    let mut best = (1, naive_objective(rows, 1));
    for m in 2..=rows.len() {
        let v = naive_objective(rows, m);
        if v > best.1 {
            best = (m, v);
        }
    }
    best.0
}

fn naive_fde(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let k = rows[0].len();
    let mut c = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in 0..k {
            let s: f64 = (1..n).map(|i| (rows[i][a] - rows[i - 1][a]) * (rows[i][b] - rows[i - 1][b])).sum();
            c[a][b] = s / (2.0 * (n - 1) as f64);
        }
    }
    c
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn panel_strategy() -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (2usize..=50, 2usize..=20).prop_flat_map(|(n, k)| {
        (Just(n), Just(k), prop::collection::vec(-1.0f64..1.0, n * k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fast_matches_naive((n, k, incr) in panel_strategy()) {
        // cumulative returns with a zero first column
        let mut data = Vec::with_capacity(n * (k + 1));
        for row in incr.chunks_exact(k) {
            let mut acc = 0.0;
            data.push(0.0);
            for (j, d) in row.iter().enumerate() {
                // vary the scale across the day so curves differ
                acc += d * (1.0 + j as f64 / k as f64);
                data.push(acc);
            }
        }
        let returns = ReturnPanel::from_row_major(DayId::sequence(n), k + 1, data).unwrap();
        let qv = realized_qv(&returns).unwrap();
        let f = standardized_qv(&qv).unwrap();
        let lq = log_total_qv(&qv).unwrap();
        let rows: Vec<Vec<f64>> = f.rows().map(<[f64]>::to_vec).collect();
        let scalars: Vec<Vec<f64>> = lq.values().iter().map(|&v| vec![v]).collect();

        prop_assert!(rel_close(shape_statistic(&f).unwrap(), naive_statistic(&rows), 1e-10));
        prop_assert!(rel_close(total_statistic(&lq).unwrap(), naive_statistic(&scalars), 1e-10));
        prop_assert_eq!(shape_changepoint(&f).unwrap().index, naive_argmax(&rows));
        prop_assert_eq!(total_changepoint(&lq).unwrap().index, naive_argmax(&scalars));

        let fast = fde_covariance(&f).unwrap();
        let slow = naive_fde(&rows);
        let scale = slow.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for a in 0..k {
            for b in 0..k {
                prop_assert!((fast[(a, b)] - slow[a][b]).abs() <= 1e-10 * scale.max(f64::MIN_POSITIVE));
            }
        }
    }

    #[test]
    fn fde_is_symmetric_psd((n, k, vals) in panel_strategy()) {
        let rows: Vec<Vec<f64>> = vals.chunks_exact(k).map(<[f64]>::to_vec).collect();
        let f = volbreak_core::StdQvPanel::from_rows(rows).unwrap();
        let c = fde_covariance(&f).unwrap();
        prop_assert_eq!(c.clone(), c.transpose());
        let trace = c.trace();
        let min = c.symmetric_eigenvalues().min();
        prop_assert!(min >= -1e-10 * trace.max(1e-300), "n={} min={} trace={}", n, min, trace);
    }

    #[test]
    fn shape_statistic_location_invariant((_n, k, vals) in panel_strategy(), shift in prop::collection::vec(-5.0f64..5.0, 20)) {
        let rows: Vec<Vec<f64>> = vals.chunks_exact(k).map(<[f64]>::to_vec).collect();
        let moved: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
        let a = shape_statistic(&volbreak_core::StdQvPanel::from_rows(rows).unwrap()).unwrap();
        let b = shape_statistic(&volbreak_core::StdQvPanel::from_rows(moved).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-12), "{} vs {}", a, b);
    }
}
