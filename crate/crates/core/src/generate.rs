//! Seeded instance generators.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::Length;
use crate::graph::WeightedDigraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Uniform endpoints; negative arcs in `[−W, −1]`, the rest in `[0, W]`.
    Uniform,
    /// Nonnegative `w ∈ [0, W]` plus `π(u) − π(v)` for hidden `π ∈ [0, W]`,
    /// so every cycle keeps its nonnegative length.
    Shifted,
    /// A shifted graph with one cycle forced negative.
    PlantedCycle,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(Mode::Uniform),
            "shifted" => Ok(Mode::Shifted),
            "planted" | "planted-cycle" => Ok(Mode::PlantedCycle),
            _ => Err(format!("unknown mode `{s}` (uniform, shifted, planted-cycle)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub mode: Mode,
    pub n: usize,
    pub m: usize,
    /// Target share of negative arcs, rounded to an exact count.
    pub neg_fraction: f64,
    pub weight_bound: Length,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq)]
pub enum SpecError {
    #[error("arcs need at least one vertex")]
    NoVertices,
    #[error("negative fraction {0} outside [0, 1]")]
    Fraction(f64),
    #[error("weight bound must be at least 1")]
    WeightBound,
    #[error("a planted cycle needs n ≥ 1 and m ≥ 1")]
    NoRoomForCycle,
}

impl InstanceSpec {
    pub fn new(mode: Mode, n: usize, m: usize, seed: u64) -> Self {
        InstanceSpec { mode, n, m, neg_fraction: 0.25, weight_bound: 8, seed }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.n == 0 && self.m > 0 {
            return Err(SpecError::NoVertices);
        }
        if !(0.0..=1.0).contains(&self.neg_fraction) {
            return Err(SpecError::Fraction(self.neg_fraction));
        }
        if self.weight_bound < 1 {
            return Err(SpecError::WeightBound);
        }
        if self.mode == Mode::PlantedCycle && (self.n == 0 || self.m == 0) {
            return Err(SpecError::NoRoomForCycle);
        }
        Ok(())
    }

    fn negative_count(&self) -> usize {
        ((self.neg_fraction * self.m as f64).round() as usize).min(self.m)
    }
}

/// Deterministic per seed. Panics on an invalid spec.
pub fn generate(spec: &InstanceSpec) -> WeightedDigraph {
    spec.validate().expect("invalid instance spec");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let arcs = match spec.mode {
        Mode::Uniform => uniform(spec, &mut rng),
        Mode::Shifted => shifted(spec, spec.m, &mut rng).0,
        Mode::PlantedCycle => planted(spec, &mut rng),
    };
    WeightedDigraph::new(spec.n, arcs).expect("endpoints drawn from [0, n)")
}

type RawArc = (usize, usize, Length);

fn negative_mask(count: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let mut mask = vec![false; m];
    for i in index::sample(rng, m, count) {
        mask[i] = true;
    }
    mask
}

fn uniform(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Vec<RawArc> {
    let w = spec.weight_bound;
    let mask = negative_mask(spec.negative_count(), spec.m, rng);
    mask.into_iter()
        .map(|neg| {
            let (u, v) = (rng.gen_range(0..spec.n), rng.gen_range(0..spec.n));
            (u, v, if neg { rng.gen_range(-w..=-1) } else { rng.gen_range(0..=w) })
        })
        .collect()
}

/// Arcs chosen to be negative are redrawn until `w + π(u) − π(v) < 0`, and
/// the others until it is nonnegative; after 64 misses the last draw stands.
fn shifted(spec: &InstanceSpec, m: usize, rng: &mut ChaCha8Rng) -> (Vec<RawArc>, Vec<Length>) {
    let w = spec.weight_bound;
    let pi: Vec<Length> = (0..spec.n).map(|_| rng.gen_range(0..=w)).collect();
    let count = ((spec.neg_fraction * m as f64).round() as usize).min(m);
    let mask = negative_mask(count, m, rng);
    let arcs = mask
        .into_iter()
        .map(|neg| {
            let mut draw = || {
                let (u, v) = (rng.gen_range(0..spec.n), rng.gen_range(0..spec.n));
                (u, v, rng.gen_range(0..=w) + pi[u] - pi[v])
            };
            let mut a = draw();
            for _ in 0..64 {
                if (a.2 < 0) == neg {
                    break;
                }
                a = draw();
            }
            a
        })
        .collect();
    (arcs, pi)
}

/// `c ≤ min(n, m, 6)` arcs along distinct vertices close a cycle; the rest
/// are shifted arcs. The cycle starts as shifted arcs too and its last arc
/// is lowered until the total is negative.
fn planted(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Vec<RawArc> {
    let c = rng.gen_range(1..=spec.n.min(spec.m).min(6));
    let (mut arcs, pi) = shifted(spec, spec.m - c, rng);
    let ring: Vec<usize> = index::sample(rng, spec.n, c).into_vec();
    let w = spec.weight_bound;
    let mut cycle: Vec<RawArc> = (0..c)
        .map(|i| {
            let (u, v) = (ring[i], ring[(i + 1) % c]);
            (u, v, rng.gen_range(0..=w) + pi[u] - pi[v])
        })
        .collect();
    let total: Length = cycle.iter().map(|a| a.2).sum();
    cycle[c - 1].2 -= total + rng.gen_range(1..=w);
    let at = rng.gen_range(0..=arcs.len());
    arcs.splice(at..at, cycle);
    arcs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::has_negative_cycle;

    #[test]
    fn same_seed_same_arcs() {
        for mode in [Mode::Uniform, Mode::Shifted, Mode::PlantedCycle] {
            let spec = InstanceSpec::new(mode, 40, 160, 9);
            assert_eq!(generate(&spec).arcs(), generate(&spec).arcs());
            let other = InstanceSpec { seed: 10, ..spec };
            assert_ne!(generate(&spec).arcs(), generate(&other).arcs());
        }
    }

    #[test]
    fn shifted_has_no_negative_cycle() {
        for seed in 0..200 {
            let n = 2 + seed as usize % 29;
            let g = generate(&InstanceSpec::new(Mode::Shifted, n, 4 * n, seed));
            assert!(!has_negative_cycle(&g), "seed {seed}");
        }
    }

    #[test]
    fn planted_has_negative_cycle() {
        for seed in 0..200 {
            let n = 1 + seed as usize % 30;
            let g = generate(&InstanceSpec::new(Mode::PlantedCycle, n, 3 * n, seed));
            assert_eq!(g.m(), 3 * n);
            assert!(has_negative_cycle(&g), "seed {seed}");
        }
    }

    #[test]
    fn negative_counts() {
        let spec = InstanceSpec { neg_fraction: 0.02, ..InstanceSpec::new(Mode::Shifted, 5000, 40000, 1) };
        let g = generate(&spec);
        assert_eq!(g.arcs().iter().filter(|a| a.len < 0).count(), 800);
        let spec = InstanceSpec { mode: Mode::Uniform, ..spec };
        assert_eq!(generate(&spec).arcs().iter().filter(|a| a.len < 0).count(), 800);
        for a in generate(&InstanceSpec::new(Mode::Shifted, 50, 400, 2)).arcs() {
            assert!((-8..=16).contains(&a.len));
        }
    }

    #[test]
    fn degenerate_specs() {
        assert_eq!(generate(&InstanceSpec::new(Mode::Uniform, 0, 0, 0)).n(), 0);
        assert_eq!(generate(&InstanceSpec::new(Mode::Shifted, 5, 0, 0)).m(), 0);
        assert_eq!(InstanceSpec::new(Mode::PlantedCycle, 3, 0, 0).validate(), Err(SpecError::NoRoomForCycle));
        assert_eq!(InstanceSpec::new(Mode::Uniform, 0, 1, 0).validate(), Err(SpecError::NoVertices));
        assert!("planted".parse::<Mode>().is_ok() && "x".parse::<Mode>().is_err());
    }
}
