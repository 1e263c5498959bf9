//! The iteration driver, the Bellman-Ford baseline and the result checker.
//!
//! Each iteration freezes the current negative arcs and returns valid
//! potentials that neutralize at least one of them (or a negative cycle).
//! Small negative sets are cleaned up one vertex at a time; larger ones go
//! through sampling, betweenness reduction, the probe and, when the probe
//! finds a sandwich, remotization plus a hop reducer.

mod baseline;
mod config;

pub use baseline::{bellman_ford, verify};
pub use config::{schedule, Regime, Schedule, SolverConfig};

use std::collections::VecDeque;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dist::Dist;
use crate::forge::{bootstrap_reducer, build_envelopes, neutralize_via_reducer, remotize_cert};
use crate::graph::{certify_potential, preprocess, PotentialVector, Walk, WeightedDigraph};
use crate::hop::{dijkstra_from, find_negative_cycle, johnson, Direction, JohnsonOutcome};
use crate::log2_ceil;
use crate::sandwich::{
    multiscale_reduce, sample_negatives, sandwich_probe_with, sparse_multiscale_reduce, Reduction, SandwichCert,
    SandwichOutcome,
};
use crate::stats::Counters;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Distances {
        source: usize,
        dist: Vec<Dist>,
        /// Tree arc into each reached vertex other than the source.
        parent: Vec<Option<usize>>,
        /// Potentials under which every arc is nonnegative.
        potentials: PotentialVector,
    },
    NegativeCycle(Walk),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IterationReport {
    pub index: usize,
    /// `dense`, `sparse`, `cleanup` or `fallback`.
    pub regime: String,
    pub k: usize,
    pub h: usize,
    pub q: f64,
    pub h0: usize,
    pub sample_size: usize,
    pub sandwich_size: usize,
    pub retries: usize,
    pub neutralized: usize,
    /// `probe`, `direct`, `reducer`, `cleanup`, `fallback` or `negative_cycle`.
    pub outcome: String,
    pub pops: u64,
    pub relaxations: u64,
    pub wall_ms: f64,
}

#[derive(Clone, Debug)]
pub struct SolveOutput {
    pub result: SolveResult,
    pub iterations: Vec<IterationReport>,
    pub counters: Counters,
}

#[derive(Clone, Debug)]
pub enum RoundOutcome {
    /// Valid potentials for the frozen graph; `neutralized` lists the
    /// negative vertices whose arcs are all nonnegative under them.
    Neutralized { potentials: PotentialVector, neutralized: Vec<usize> },
    NegativeCycle(Walk),
}

/// Negative vertices of `g` whose hop arcs are all nonnegative under `φ`.
fn neutralized_by(g: &WeightedDigraph, phi: &PotentialVector) -> Vec<usize> {
    g.negative_vertices().iter().copied().filter(|&u| g.neutralizes(phi, &[u])).collect()
}

fn done(g: &WeightedDigraph, phi: PotentialVector) -> RoundOutcome {
    assert!(certify_potential(g, &phi), "round potentials invalid");
    let neutralized = neutralized_by(g, &phi);
    RoundOutcome::Neutralized { potentials: phi, neutralized }
}

/// Neutralizes every negative vertex, one Johnson call with a single
/// negative vertex at a time, refreezing in between so that finished
/// vertices stay finished.
pub fn cleanup(g: &WeightedDigraph) -> RoundOutcome {
    let mut phi = PotentialVector::zeros(g.n());
    loop {
        let cur = g.reweighted(&phi).refreeze();
        let Some(&u) = cur.negative_vertices().first() else { break };
        match single_vertex(&cur, u) {
            Ok(psi) => phi = phi.compose(&psi),
            Err(c) => return RoundOutcome::NegativeCycle(c.unweighted(&phi)),
        }
    }
    done(g, phi)
}

/// Johnson potentials of `G_{u}`; one hop round always decides.
fn single_vertex(g: &WeightedDigraph, u: usize) -> Result<PotentialVector, Walk> {
    let gu = g.restrict_negatives(&[u]).expect("u is negative");
    match johnson(&gu, 1) {
        JohnsonOutcome::Potentials(psi) => Ok(psi),
        JohnsonOutcome::NegativeCycle(c) => Err(c),
        JohnsonOutcome::Unstable => unreachable!("one negative vertex, budget one"),
    }
}

/// One iteration on the frozen graph `g`.
pub fn neutralize_round(g: &WeightedDigraph, cfg: &SolverConfig, rng: &mut ChaCha8Rng) -> (RoundOutcome, IterationReport) {
    let start = Instant::now();
    let before = Counters::snapshot();
    let k = g.negative_vertices().len();
    let sched = schedule(g.n(), g.m(), k, cfg);
    let mut report = IterationReport {
        regime: format!("{:?}", sched.regime).to_lowercase(),
        k,
        h: sched.h,
        q: sched.q,
        h0: sched.h0,
        ..Default::default()
    };
    let outcome = if k == 0 {
        report.outcome = "cleanup".into();
        done(g, PotentialVector::zeros(g.n()))
    } else if k <= cfg.cleanup_threshold_for(g.n()) {
        report.regime = "cleanup".into();
        report.outcome = "cleanup".into();
        cleanup(g)
    } else {
        attempts(g, cfg, &sched, rng, &mut report)
    };
    if let RoundOutcome::Neutralized { neutralized, .. } = &outcome {
        report.neutralized = neutralized.len();
        assert!(k == 0 || !neutralized.is_empty(), "iteration made no progress");
    } else {
        report.outcome = "negative_cycle".into();
    }
    let spent = Counters::snapshot().since(before);
    report.pops = spent.pops;
    report.relaxations = spent.relaxations;
    report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    (outcome, report)
}

fn attempts(
    g: &WeightedDigraph,
    cfg: &SolverConfig,
    sched: &Schedule,
    rng: &mut ChaCha8Rng,
    report: &mut IterationReport,
) -> RoundOutcome {
    let k = g.negative_vertices().len();
    let min_sample = ((cfg.smallness * k as f64 / sched.q).ceil() as usize).max(1);
    let min_sandwich = ((cfg.smallness * sched.q * sched.h0 as f64).ceil() as usize).max(1);
    let trim_to = ((sched.q * sched.h0 as f64 / 4.0).ceil() as usize).max(1);
    let lg2 = log2_ceil(g.n()).pow(2) as f64;
    let floor = (cfg.reducer_floor * (lg2 + sched.h as f64 / lg2)).ceil() as usize;

    for attempt in 0..cfg.retry_cap {
        report.retries = attempt;
        let sample = sample_negatives(g, sched.q, rng);
        report.sample_size = sample.len();
        if sample.len() < min_sample {
            continue;
        }
        let reduced = if cfg.full_multiscale {
            multiscale_reduce(g, sched.h, &cfg.multiscale(), rng)
        } else {
            sparse_multiscale_reduce(g, sched.h, &sample, &cfg.multiscale(), rng)
        };
        let phi1 = match reduced {
            Reduction::Potentials(phi) => phi,
            Reduction::NegativeCycle(c) => return RoundOutcome::NegativeCycle(c),
        };
        let g1 = g.reweighted(&phi1);
        let mut cert = match sandwich_probe_with(&g1, &sample, sched.h0) {
            SandwichOutcome::NegativeCycle(c) => return RoundOutcome::NegativeCycle(c.unweighted(&phi1)),
            SandwichOutcome::Neutralized { potentials, .. } => {
                report.outcome = "probe".into();
                return done(g, phi1.compose(&potentials));
            }
            SandwichOutcome::Sandwich { cert, .. } => cert,
        };
        cert.trim(trim_to);
        report.sandwich_size = cert.len();
        if cert.len() < min_sandwich {
            continue;
        }
        if let Some(outcome) = neutralize_sandwich(g, &phi1, &cert, sched.h, floor, cfg, rng, report) {
            return outcome;
        }
    }
    report.retries = cfg.retry_cap;
    report.regime = "fallback".into();
    report.outcome = "fallback".into();
    let u = g.negative_vertices()[0];
    match single_vertex(g, u) {
        Ok(psi) => done(g, psi),
        Err(c) => RoundOutcome::NegativeCycle(c),
    }
}

/// Remotizes `G_{φ₁}` around the sandwich and neutralizes its members,
/// directly with Johnson below `floor` members and through the hop reducer
/// above. `None` asks the caller to resample.
#[allow(clippy::too_many_arguments)]
pub(crate) fn neutralize_sandwich(
    g: &WeightedDigraph,
    phi1: &PotentialVector,
    cert: &SandwichCert,
    h: usize,
    floor: usize,
    cfg: &SolverConfig,
    rng: &mut ChaCha8Rng,
    report: &mut IterationReport,
) -> Option<RoundOutcome> {
    let g1 = g.reweighted(phi1);
    let phi2 = phi1.compose(&remotize_cert(&g1, cert));
    let g2 = g.reweighted(&phi2);
    let set = cert.members.clone();
    let g_u = g2.restrict_negatives(&set).expect("sandwich members are negative");
    if set.len() < floor {
        report.outcome = "direct".into();
        return Some(match johnson(&g_u, set.len()) {
            JohnsonOutcome::Potentials(psi) => done(g, phi2.compose(&psi)),
            JohnsonOutcome::NegativeCycle(c) => RoundOutcome::NegativeCycle(c.unweighted(&phi2)),
            JohnsonOutcome::Unstable => unreachable!("budget |U| always decides"),
        });
    }
    let env = build_envelopes(&g_u, &set, h, cfg.enforce_envelope_sizes).ok()?;
    let psi = bootstrap_reducer(&env, &cfg.forge(), rng).and_then(|hl| neutralize_via_reducer(&g_u, &set, &hl, h));
    match psi {
        Ok(psi) => {
            report.outcome = "reducer".into();
            Some(done(g, phi2.compose(&psi)))
        }
        Err(_) => find_negative_cycle(&g_u).map(|c| RoundOutcome::NegativeCycle(c.unweighted(&phi2))),
    }
}

/// Single-source shortest paths from `s` with negative lengths.
pub fn solve(g: &WeightedDigraph, s: usize, cfg: &SolverConfig) -> SolveOutput {
    assert!(s < g.n(), "source out of range");
    let before = Counters::snapshot();
    let (gp, map) = preprocess(g);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut phi = PotentialVector::zeros(gp.n());
    let mut iterations = Vec::new();
    let cur = loop {
        let cur = gp.reweighted(&phi).refreeze();
        if cur.negative_vertices().is_empty() {
            break cur;
        }
        let (outcome, mut report) = neutralize_round(&cur, cfg, &mut rng);
        report.index = iterations.len();
        iterations.push(report);
        match outcome {
            RoundOutcome::Neutralized { potentials, .. } => {
                phi = phi.compose(&potentials);
                assert!(certify_potential(&gp, &phi), "accumulated potentials invalid");
            }
            RoundOutcome::NegativeCycle(c) => {
                let cycle = c.unweighted(&phi).project(|v| map.project(v));
                assert!(cycle.certifies_negative_cycle(g), "projected cycle failed verification");
                return SolveOutput {
                    result: SolveResult::NegativeCycle(cycle),
                    iterations,
                    counters: Counters::snapshot().since(before),
                };
            }
        }
    };

    let sp = map.to_transformed(s);
    let reduced = dijkstra_from(&cur, sp, Direction::Forward);
    let dist: Vec<Dist> = (0..g.n())
        .map(|v| reduced[map.to_transformed(v)].plus(phi[map.to_transformed(v)] - phi[sp]))
        .collect();
    let potentials = PotentialVector::from((0..g.n()).map(|v| phi[map.to_transformed(v)]).collect::<Vec<_>>());
    let parent = tight_tree(g, s, &dist);
    SolveOutput {
        result: SolveResult::Distances { source: s, dist, parent, potentials },
        iterations,
        counters: Counters::snapshot().since(before),
    }
}

/// Breadth-first search from `s` over arcs with `d(u) + ℓ = d(v)`. Every
/// shortest path consists of such arcs, so every reached vertex is found.
pub(crate) fn tight_tree(g: &WeightedDigraph, s: usize, dist: &[Dist]) -> Vec<Option<usize>> {
    let mut parent = vec![None; g.n()];
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &id in g.out_arcs(u) {
            let a = g.arc(id);
            if !seen[a.head] && dist[u].plus(a.len) == dist[a.head] {
                seen[a.head] = true;
                parent[a.head] = Some(id);
                queue.push_back(a.head);
            }
        }
    }
    parent
}
