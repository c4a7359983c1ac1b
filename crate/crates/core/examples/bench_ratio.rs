//! Approximation ratio against the brute-force optimum on random instances.
//!
//! IOSELECT_THREADS sets the worker count.

use ioselect::bench::{bench, BenchConfig};
use ioselect::generator::GeneratorConfig;

fn main() {
    let configs: Vec<BenchConfig> = (3..=8)
        .map(|n| {
            let mut g = GeneratorConfig::new(n, 4, 4, 1000 * n as u64);
            g.state_density = 0.25;
            BenchConfig { generator: g, trials: 50, oracle: true, timings: false }
        })
        .collect();
    let out = bench(&configs);
    for n in 3..=8 {
        let ratios: Vec<f64> = out.records.iter().filter(|r| r.n == n).filter_map(|r| r.ratio).collect();
        let max = ratios.iter().cloned().fold(1.0, f64::max);
        let mean = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;
        let envelope = 1.0 + 2.0 * (n as f64).ln();
        println!("n={n}  instances {:>3}  mean {mean:.3}  max {max:.3}  envelope {envelope:.3}", ratios.len());
    }
    let s = &out.summary;
    println!("failures {}  infeasible outputs {}  zero denominators {}", s.failures, s.infeasible_outputs, s.zero_denominators);
}
