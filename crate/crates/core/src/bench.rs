//! Approximation-ratio and runtime harness over generated instances.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::generator::{generate, GeneratorConfig};
use crate::io::{ratio, write_instance};
use crate::oracle::{exact_select, EXACT_SELECT_LIMIT};
use crate::selector::{check_no_sfm, select_min_cost_io_timed, SelectorOptions};
use crate::system::StructuredSystem;

/// Environment variable capping the bench thread pool.
pub const THREADS_ENV: &str = "IOSELECT_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub generator: GeneratorConfig,
    pub trials: usize,
    /// Run the brute-force optimum when `m + p` is within its guard.
    pub oracle: bool,
    /// Record wall-clock timings. Off keeps output byte-identical across runs.
    pub timings: bool,
}

/// One trial. Trial `t` of a config with seed `s` uses seed `s + t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub config: usize,
    pub trial: usize,
    pub seed: u64,
    pub digest: String,
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub k: usize,
    pub mu_max: usize,
    pub eta_max: usize,
    pub special_case: String,
    pub algo_cost: String,
    pub cycle_cost: Option<String>,
    pub lower_bound: String,
    pub oracle_cost: Option<String>,
    pub ratio: Option<f64>,
    /// The optimum was 0 and the ratio was recorded as 1.
    pub zero_denominator: bool,
    pub feasible_output: bool,
    pub total_ms: Option<f64>,
    pub accessibility_ms: Option<f64>,
    pub sensability_ms: Option<f64>,
    pub cycle_ms: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeRow {
    pub n: usize,
    pub instances: usize,
    pub mean_ms: f64,
    pub max_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub instances: usize,
    pub failures: usize,
    pub infeasible_outputs: usize,
    pub oracle_runs: usize,
    pub max_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub zero_denominators: usize,
    pub runtime_by_n: Vec<RuntimeRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutput {
    pub records: Vec<BenchRecord>,
    pub summary: BenchSummary,
}

/// SHA-256 of the canonical instance JSON, lowercase hex.
pub fn instance_digest(system: &StructuredSystem) -> String {
    let hash = Sha256::digest(write_instance(system).as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn run_trial(cfg: &BenchConfig, config: usize, trial: usize) -> BenchRecord {
    let gen = cfg.generator.with_seed(cfg.generator.seed.wrapping_add(trial as u64));
    let mut rec = BenchRecord {
        config,
        trial,
        seed: gen.seed,
        digest: String::new(),
        n: gen.n,
        m: gen.m,
        p: gen.p,
        q: 0,
        k: 0,
        mu_max: 0,
        eta_max: 0,
        special_case: String::new(),
        algo_cost: String::new(),
        cycle_cost: None,
        lower_bound: String::new(),
        oracle_cost: None,
        ratio: None,
        zero_denominator: false,
        feasible_output: false,
        total_ms: None,
        accessibility_ms: None,
        sensability_ms: None,
        cycle_ms: None,
        error: None,
    };
    let system = match generate(&gen) {
        Ok(s) => s,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.digest = instance_digest(&system);
    let opts = SelectorOptions { exact: false, parallel: false };
    let (report, t) = match select_min_cost_io_timed(&system, opts) {
        Ok(v) => v,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    let dec = |c: crate::cost::Cost| system.cost_str(c);
    rec.q = report.q;
    rec.k = report.k;
    rec.mu_max = report.mu_max;
    rec.eta_max = report.eta_max;
    rec.special_case = report.special_case.tag().into();
    rec.algo_cost = dec(report.total_cost);
    rec.cycle_cost = report.stage_costs.cycle.map(dec);
    rec.lower_bound = dec(report.lower_bound);
    rec.feasible_output = check_no_sfm(&system, &report.selection).is_free();
    if cfg.timings {
        rec.total_ms = Some(ms(t.total));
        rec.accessibility_ms = Some(ms(t.accessibility));
        rec.sensability_ms = Some(ms(t.sensability));
        rec.cycle_ms = Some(ms(t.cycle));
    }
    if cfg.oracle && system.m() + system.p() <= EXACT_SELECT_LIMIT {
        match exact_select(&system) {
            Ok((_, opt)) => {
                rec.oracle_cost = Some(dec(opt));
                rec.ratio = Some(ratio(report.total_cost, opt));
                rec.zero_denominator = opt.raw() == 0;
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
    }
    rec
}

fn summarize(records: &[BenchRecord]) -> BenchSummary {
    let ratios: Vec<f64> = records.iter().filter_map(|r| r.ratio).collect();
    let mut by_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records {
        if let Some(t) = r.total_ms {
            by_n.entry(r.n).or_default().push(t);
        }
    }
    BenchSummary {
        instances: records.len(),
        failures: records.iter().filter(|r| r.error.is_some()).count(),
        infeasible_outputs: records
            .iter()
            .filter(|r| r.error.is_none() && !r.feasible_output)
            .count(),
        oracle_runs: ratios.len(),
        max_ratio: ratios.iter().copied().reduce(f64::max),
        mean_ratio: (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
        zero_denominators: records.iter().filter(|r| r.zero_denominator).count(),
        runtime_by_n: by_n
            .into_iter()
            .map(|(n, ts)| RuntimeRow {
                n,
                instances: ts.len(),
                mean_ms: ts.iter().sum::<f64>() / ts.len() as f64,
                max_ms: ts.iter().copied().fold(0.0, f64::max),
            })
            .collect(),
    }
}

/// Thread count from [`THREADS_ENV`], if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&t| t > 0)
}

/// Runs every trial of every config. Records come back ordered by config
/// then trial regardless of scheduling.
pub fn bench(configs: &[BenchConfig]) -> BenchOutput {
    let jobs: Vec<(usize, usize)> = configs
        .iter()
        .enumerate()
        .flat_map(|(c, cfg)| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let work = || -> Vec<BenchRecord> {
        jobs.par_iter()
            .map(|&(c, t)| run_trial(&configs[c], c, t))
            .collect()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads_from_env() {
        builder = builder.num_threads(t);
    }
    let records = match builder.build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    };
    let summary = summarize(&records);
    BenchOutput { records, summary }
}

/// One JSON object per record, then `{"summary": …}`.
pub fn write_jsonl(out: &BenchOutput) -> String {
    let mut s = String::new();
    for r in &out.records {
        s.push_str(&serde_json::to_string(r).expect("record serializes"));
        s.push('\n');
    }
    let summary = serde_json::json!({ "summary": out.summary });
    s.push_str(&summary.to_string());
    s.push('\n');
    s
}

pub fn write_csv(records: &[BenchRecord]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::StateShape;

    fn config(shape: StateShape, trials: usize) -> BenchConfig {
        let mut g = GeneratorConfig::new(5, 3, 3, 11);
        g.shape = shape;
        BenchConfig { generator: g, trials, oracle: true, timings: false }
    }

    #[test]
    fn deterministic_output() {
        let cfgs = [config(StateShape::Random, 12)];
        assert_eq!(write_jsonl(&bench(&cfgs)), write_jsonl(&bench(&cfgs)));
    }

    #[test]
    fn irreducible_ratios_are_one() {
        let out = bench(&[config(StateShape::Irreducible, 20)]);
        assert_eq!(out.summary.failures, 0);
        assert!(out.records.iter().all(|r| r.ratio == Some(1.0)));
    }

    #[test]
    fn diagonal_cycle_stage_free() {
        let out = bench(&[config(StateShape::Diagonal, 10)]);
        assert!(out.records.iter().all(|r| r.cycle_cost.as_deref() == Some("0")));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let out = bench(&[config(StateShape::Random, 3)]);
        let text = write_csv(&out.records).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("config,trial,seed,digest"));
    }

    #[test]
    fn digest_is_stable_hex() {
        let d = instance_digest(&crate::fixtures::four_state_example());
        assert_eq!(d.len(), 64);
        assert!(d.bytes().all(|b| b.is_ascii_hexdigit()));
    }
}
