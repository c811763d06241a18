//! Prints empirical size for one null configuration.
//!
//! `cargo run --release -p volbreak-simlab --example size_table -- flat 500 78 1000 1000`
//! (shape, N, K, replications, limit draws).

use std::time::Instant;

use volbreak_core::TestConfig;
use volbreak_simlab::{run_size_experiment, ScenarioConfig, SigmaShape, DEFAULT_LEVELS};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let get = |i: usize, d: &str| args.get(i).cloned().unwrap_or_else(|| d.to_string());
    let shape = SigmaShape::from_name(&get(0, "flat")).expect("unknown shape");
    let n: usize = get(1, "500").parse().unwrap();
    let k: usize = get(2, "78").parse().unwrap();
    let reps: usize = get(3, "200").parse().unwrap();
    let draws: usize = get(4, "1000").parse().unwrap();
    let tests = TestConfig { draws, ..TestConfig::default() };
    let cfg = ScenarioConfig::null(shape, n, k, 20240501);
    let start = Instant::now();
    for row in run_size_experiment(&cfg, &tests, reps, &DEFAULT_LEVELS).unwrap() {
        println!(
            "{} N={} K={} level={:.2}: shape {:.3} total {:.3} global {:.3}",
            row.shape, row.n, row.k, row.level, row.shape_test, row.total_test, row.global_test
        );
    }
    eprintln!("{reps} reps in {:.1?}", start.elapsed());
}
