//! Named benchmark suites. Seeds are fixed here so that runs are comparable
//! across machines; wall times are reported and never asserted.

use std::time::Instant;

use hopforge_core::generate::{generate, InstanceSpec, Mode};
use hopforge_core::solver::{bellman_ford, solve, verify};
use hopforge_core::{SolveResult, SolverConfig};
use serde::Serialize;

const SEEDS: [u64; 16] = [1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597];

pub struct Suite {
    pub name: &'static str,
    pub mode: Mode,
    pub n: usize,
    pub m: usize,
    pub neg_fraction: f64,
}

pub const SUITES: &[Suite] = &[
    Suite { name: "small", mode: Mode::Shifted, n: 256, m: 1024, neg_fraction: 0.25 },
    Suite { name: "sparse", mode: Mode::Shifted, n: 2000, m: 16000, neg_fraction: 0.02 },
    Suite { name: "dense", mode: Mode::Shifted, n: 1000, m: 8000, neg_fraction: 0.3 },
    Suite { name: "planted", mode: Mode::PlantedCycle, n: 1000, m: 6000, neg_fraction: 0.1 },
    Suite { name: "smoke", mode: Mode::Shifted, n: 5000, m: 40000, neg_fraction: 0.02 },
];

#[derive(Serialize)]
pub struct BenchRow {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub negative_arcs: usize,
    pub status: &'static str,
    pub iterations: usize,
    pub max_retries: usize,
    pub pops: u64,
    pub relaxations: u64,
    pub solve_ms: f64,
    pub bellman_ford_ms: f64,
    pub agrees: bool,
    pub verified: bool,
}

#[derive(Serialize)]
pub struct BenchReport {
    pub format_version: u32,
    pub suite: &'static str,
    pub rows: Vec<BenchRow>,
}

pub fn find(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

/// Runs the first `seeds` seeds one after another; the work counters are
/// process-wide, so instances are not run concurrently.
pub fn run(suite: &'static Suite, seeds: usize, cfg: &SolverConfig) -> BenchReport {
    let rows = SEEDS
        .iter()
        .take(seeds)
        .map(|&seed| {
            let spec = InstanceSpec {
                mode: suite.mode,
                n: suite.n,
                m: suite.m,
                neg_fraction: suite.neg_fraction,
                weight_bound: 8,
                seed,
            };
            let g = generate(&spec);
            let start = Instant::now();
            let out = solve(&g, 0, &SolverConfig { seed, ..cfg.clone() });
            let solve_ms = start.elapsed().as_secs_f64() * 1e3;
            let start = Instant::now();
            let baseline = bellman_ford(&g, 0);
            let bellman_ford_ms = start.elapsed().as_secs_f64() * 1e3;
            let agrees = match (&out.result, &baseline) {
                (SolveResult::Distances { dist: a, .. }, SolveResult::Distances { dist: b, .. }) => a == b,
                (SolveResult::NegativeCycle(_), SolveResult::NegativeCycle(_)) => true,
                _ => false,
            };
            BenchRow {
                seed,
                n: g.n(),
                m: g.m(),
                negative_arcs: g.hop_arcs().count(),
                status: match out.result {
                    SolveResult::Distances { .. } => "ok",
                    SolveResult::NegativeCycle(_) => "negative_cycle",
                },
                iterations: out.iterations.len(),
                max_retries: out.iterations.iter().map(|it| it.retries).max().unwrap_or(0),
                pops: out.counters.pops,
                relaxations: out.counters.relaxations,
                solve_ms,
                bellman_ford_ms,
                agrees,
                verified: verify(&g, &out.result).is_ok(),
            }
        })
        .collect();
    BenchReport { format_version: crate::report::FORMAT_VERSION, suite: suite.name, rows }
}
