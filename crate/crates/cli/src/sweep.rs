use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use hbisect_core::combinatorics::big_f64;
use hbisect_core::cut::random_bisection_expectation;
use hbisect_core::disc::{disc_exact, disc_plus_heuristic, oracle_bw, EXHAUSTIVE_BW_LIMIT, EXHAUSTIVE_DISC_LIMIT};
use hbisect_core::spectral::{default_candidates, lambda2_certificate};
use hbisect_core::{bisect, combinatorics::rat_f64, BalanceMode, Hypergraph};

use crate::config::GenSpec;

/// Sweep settings shared by every cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub n: Vec<usize>,
    pub r: Vec<usize>,
    pub d: Vec<usize>,
    pub seeds: u64,
    pub base_seed: u64,
    pub trials: usize,
    pub alpha: f64,
    pub mode: BalanceMode,
    pub disc_trials: usize,
    pub spectral: bool,
    pub timing: bool,
}

/// One bisection run on one generated instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    /// Position in the grid, `((n, r, d), seed)` in row-major order.
    pub index: usize,
    pub n: usize,
    pub r: usize,
    pub d: usize,
    pub seed: u64,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross: Option<u64>,
    /// Exact mean cut of a uniformly random bisection.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline: Option<f64>,
    /// `e(H)(1 − 2^{1−r}) − cross`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// `s / (√d · n)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disc_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_bw: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_disc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

/// Min and median empirical `c` per `(n, r)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub n: usize,
    pub r: usize,
    pub runs: usize,
    pub failed: usize,
    pub min_c: Option<f64>,
    pub median_c: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub records: Vec<BenchRecord>,
    pub summary: Vec<SweepSummary>,
}

struct Job {
    index: usize,
    n: usize,
    r: usize,
    d: usize,
    seed: u64,
}

fn jobs(cfg: &SweepConfig) -> Vec<Job> {
    let mut out = Vec::new();
    for &n in &cfg.n {
        for &r in &cfg.r {
            for &d in &cfg.d {
                for k in 0..cfg.seeds {
                    out.push(Job {
                        index: out.len(),
                        n,
                        r,
                        d,
                        seed: cfg.base_seed + k,
                    });
                }
            }
        }
    }
    out
}

fn run_job(cfg: &SweepConfig, job: &Job) -> BenchRecord {
    let start = Instant::now();
    let spec = GenSpec::Regular {
        n: job.n,
        r: job.r,
        d: job.d,
        seed: job.seed,
    };
    let mut rec = BenchRecord {
        index: job.index,
        n: job.n,
        r: job.r,
        d: job.d,
        seed: job.seed,
        instance: spec.to_string(),
        error: None,
        edges: None,
        cross: None,
        baseline: None,
        s: None,
        c: None,
        disc_plus: None,
        lambda2: None,
        oracle_bw: None,
        oracle_disc: None,
        wall_ms: None,
    };
    if let Err(e) = fill(cfg, job, &spec, &mut rec) {
        rec.error = Some(e.to_string());
    }
    if cfg.timing {
        rec.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    rec
}

fn fill(cfg: &SweepConfig, job: &Job, spec: &GenSpec, rec: &mut BenchRecord) -> hbisect_core::Result<()> {
    let h: Hypergraph = spec.generate()?;
    let rep = bisect(&h, cfg.trials, cfg.alpha, job.seed, cfg.mode)?;
    let s = rep.baseline_asymptote - rep.result.cross as f64;
    rec.edges = Some(h.edge_count());
    rec.cross = Some(rep.result.cross);
    rec.baseline = Some(big_f64(&random_bisection_expectation(h.store())));
    rec.s = Some(s);
    rec.c = Some(s / ((job.d as f64).sqrt() * job.n as f64));
    if cfg.disc_trials > 0 && h.edge_count() > 0 {
        rec.disc_plus = Some(rat_f64(&disc_plus_heuristic(&h, cfg.disc_trials, cfg.alpha, job.seed)?.value));
    }
    if cfg.spectral {
        let cands = default_candidates(h.n(), job.seed, 32, &[]);
        rec.lambda2 = Some(lambda2_certificate(&h, h.r() as f64, &cands)?.value);
    }
    if h.n() <= EXHAUSTIVE_BW_LIMIT {
        rec.oracle_bw = Some(oracle_bw(&h)?.width);
    }
    if h.n() <= EXHAUSTIVE_DISC_LIMIT {
        rec.oracle_disc = disc_exact(&h)?.disc.as_ref().map(rat_f64);
    }
    Ok(())
}

fn median(sorted: &[f64]) -> Option<f64> {
    let k = sorted.len();
    match k {
        0 => None,
        _ if k % 2 == 1 => Some(sorted[k / 2]),
        _ => Some((sorted[k / 2 - 1] + sorted[k / 2]) / 2.0),
    }
}

/// Runs every `(n, r, d, seed)` cell in parallel. Records come back in grid
/// order; a generator failure is recorded in its cell and the sweep goes on.
pub fn bench_sweep(cfg: &SweepConfig) -> SweepTable {
    let jobs = jobs(cfg);
    let records: Vec<BenchRecord> = jobs.par_iter().map(|j| run_job(cfg, j)).collect();
    let mut summary: Vec<SweepSummary> = Vec::new();
    for &n in &cfg.n {
        for &r in &cfg.r {
            let group: Vec<&BenchRecord> = records.iter().filter(|x| x.n == n && x.r == r).collect();
            if group.is_empty() {
                continue;
            }
            let mut cs: Vec<f64> = group.iter().filter_map(|x| x.c).collect();
            cs.sort_by(f64::total_cmp);
            summary.push(SweepSummary {
                n,
                r,
                runs: group.len(),
                failed: group.iter().filter(|x| x.error.is_some()).count(),
                min_c: cs.first().copied(),
                median_c: median(&cs),
            });
        }
    }
    SweepTable { records, summary }
}
