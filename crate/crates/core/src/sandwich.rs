//! Betweenness reduction and sandwich probing.
//!
//! The multiscale reduction samples `R_i` at levels `i = 0..=L` and builds
//! an auxiliary graph from `G⁺` plus star arcs `(v, r)`, `(r, v)` whose
//! lengths are `η_i`-hop distances. Johnson potentials of that graph make
//! every star arc nonnegative, which is exactly the star condition
//! `d_φ^{η_i}(r, v) ≥ 0` and `d_φ^{η_i}(v, r) ≥ 0`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{Dist, Length};
use crate::graph::{certify_potential, Arc, PotentialVector, Walk, WeightedDigraph};
use crate::hop::{find_negative_cycle, hop_distances, hop_distances_watched, johnson, Direction, JohnsonOutcome, SourceSpec};
use crate::log2_ceil;
use crate::proper::{probe, ProbeOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiscaleParams {
    /// `h₀ = c₀⌈log₂ n⌉`, also the additive slack in `η_i`.
    pub c0: usize,
    /// `|R_i| = ⌈c_R · 2^{L−i} · ⌈log₂ n⌉⌉`.
    pub c_r: f64,
}

impl Default for MultiscaleParams {
    fn default() -> Self {
        MultiscaleParams { c0: 3, c_r: 4.0 }
    }
}

impl MultiscaleParams {
    pub fn h0(&self, n: usize) -> usize {
        self.c0 * log2_ceil(n)
    }
}

/// `⌈log₂ h⌉` with `⌈log₂ 1⌉ = 0`.
pub(crate) fn ceil_log2(h: usize) -> usize {
    if h <= 1 {
        0
    } else {
        (usize::BITS - (h - 1).leading_zeros()) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiscaleLevel {
    pub eta: usize,
    pub samples: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiscaleSamples {
    pub levels: Vec<MultiscaleLevel>,
}

impl MultiscaleSamples {
    /// Uniform samples with replacement for levels `0..=⌈log₂ h⌉`.
    pub fn draw<R: Rng + ?Sized>(n: usize, h: usize, params: &MultiscaleParams, rng: &mut R) -> Self {
        let big_l = ceil_log2(h);
        let lg = log2_ceil(n);
        let levels = (0..=big_l)
            .map(|i| {
                let count = (params.c_r * (1u64 << (big_l - i)) as f64 * lg as f64).ceil() as usize;
                let samples = if n == 0 { Vec::new() } else { (0..count).map(|_| rng.gen_range(0..n)).collect() };
                MultiscaleLevel { eta: (1 << i) + params.c0 * lg, samples }
            })
            .collect();
        MultiscaleSamples { levels }
    }

    /// Each distinct sample with the largest `η` among the levels that drew
    /// it. Its star arcs are the shortest ones, so they dominate the rest.
    pub fn distinct(&self) -> Vec<(usize, usize)> {
        let mut best: Vec<(usize, usize)> = self
            .levels
            .iter()
            .flat_map(|l| l.samples.iter().map(move |&r| (r, l.eta)))
            .collect();
        best.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        best.dedup_by_key(|x| x.0);
        best
    }

    pub fn total(&self) -> usize {
        self.levels.iter().map(|l| l.samples.len()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Potentials(PotentialVector),
    NegativeCycle(Walk),
}

/// Star arcs between every sample and every vertex.
pub fn multiscale_reduce<R: Rng + ?Sized>(g: &WeightedDigraph, h: usize, params: &MultiscaleParams, rng: &mut R) -> Reduction {
    let samples = MultiscaleSamples::draw(g.n(), h, params, rng);
    reduce_with_samples(g, &samples, None)
}

/// Star arcs only between samples and the vertices of `set`.
pub fn sparse_multiscale_reduce<R: Rng + ?Sized>(
    g: &WeightedDigraph,
    h: usize,
    set: &[usize],
    params: &MultiscaleParams,
    rng: &mut R,
) -> Reduction {
    let samples = MultiscaleSamples::draw(g.n(), h, params, rng);
    reduce_with_samples(g, &samples, Some(set))
}

/// Builds the auxiliary graph for the given samples and returns its Johnson
/// potentials. `targets = None` connects samples to all of `V`.
pub fn reduce_with_samples(g: &WeightedDigraph, samples: &MultiscaleSamples, targets: Option<&[usize]>) -> Reduction {
    let all: Vec<usize>;
    let targets = match targets {
        Some(t) => t,
        None => {
            all = (0..g.n()).collect();
            &all
        }
    };
    let star = if targets.is_empty() { Vec::new() } else { star_arcs(g, samples, targets) };

    let mut arcs: Vec<Arc> = g.positive_part().arcs().to_vec();
    arcs.extend(&star);
    let aux = WeightedDigraph::with_hop_flags(g.n(), arcs.clone(), arcs.iter().map(|a| a.len < 0).collect())
        .expect("aux endpoints are vertices of G");
    let phi = match johnson(&aux, aux.negative_vertices().len()) {
        JohnsonOutcome::Potentials(phi) => phi,
        JohnsonOutcome::NegativeCycle(_) => {
            let c = find_negative_cycle(g).expect("a negative aux cycle maps to a negative closed walk in G");
            return Reduction::NegativeCycle(c);
        }
        JohnsonOutcome::Unstable => unreachable!("budget |N| always decides"),
    };
    for a in &star {
        assert!(
            a.len + phi[a.tail] - phi[a.head] >= 0,
            "star condition violated on {} -> {}",
            a.tail,
            a.head
        );
    }
    assert!(certify_potential(g, &phi), "multiscale potentials invalid for G");
    Reduction::Potentials(phi)
}

/// Runs from whichever side is smaller. From a target `v`, the label of `r`
/// after round `η_r` of a forward (reverse) run is `d^{η_r}(v, r)`
/// (`d^{η_r}(r, v)`), the same value the run from `r` would produce.
fn star_arcs(g: &WeightedDigraph, samples: &MultiscaleSamples, targets: &[usize]) -> Vec<Arc> {
    let distinct = samples.distinct();
    if targets.len() < distinct.len() {
        star_arcs_from_targets(g, &distinct, targets)
    } else {
        star_arcs_from_samples(g, &distinct, targets)
    }
}

fn star_arcs_from_samples(g: &WeightedDigraph, distinct: &[(usize, usize)], targets: &[usize]) -> Vec<Arc> {
    distinct
        .par_iter()
        .map(|&(r, eta)| {
            let fwd = hop_distances(g, &SourceSpec::single(r, Direction::Forward), eta, false);
            let rev = hop_distances(g, &SourceSpec::single(r, Direction::Reverse), eta, false);
            let mut out = Vec::new();
            for &v in targets {
                if v == r {
                    continue;
                }
                if let Dist::Finite(d) = fwd.last()[v] {
                    out.push(Arc::new(r, v, d));
                }
                if let Dist::Finite(d) = rev.last()[v] {
                    out.push(Arc::new(v, r, d));
                }
            }
            out
        })
        .flatten()
        .collect()
}

fn star_arcs_from_targets(g: &WeightedDigraph, distinct: &[(usize, usize)], targets: &[usize]) -> Vec<Arc> {
    let max_eta = distinct.iter().map(|&(_, eta)| eta).max().unwrap_or(0);
    let mut watch = vec![Vec::new(); max_eta + 1];
    for &(r, eta) in distinct {
        watch[eta].push(r);
    }
    targets
        .par_iter()
        .map(|&v| {
            let fwd = hop_distances_watched(g, &SourceSpec::single(v, Direction::Forward), &watch);
            let rev = hop_distances_watched(g, &SourceSpec::single(v, Direction::Reverse), &watch);
            let mut out = Vec::new();
            for (eta, rs) in watch.iter().enumerate() {
                for (i, &r) in rs.iter().enumerate() {
                    if r == v {
                        continue;
                    }
                    if let Dist::Finite(d) = rev[eta][i] {
                        out.push(Arc::new(r, v, d));
                    }
                    if let Dist::Finite(d) = fwd[eta][i] {
                        out.push(Arc::new(v, r, d));
                    }
                }
            }
            out
        })
        .flatten()
        .collect()
}

/// `S ⊆ N`, each negative vertex kept independently with probability `1/q`.
pub fn sample_negatives<R: Rng + ?Sized>(g: &WeightedDigraph, q: f64, rng: &mut R) -> Vec<usize> {
    let p = (1.0 / q.max(1.0)).min(1.0);
    g.negative_vertices().iter().copied().filter(|_| rng.gen_bool(p)).collect()
}

/// A weak `h₀`-hop negative sandwich `(s, U, t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichCert {
    pub s: usize,
    pub t: usize,
    pub hop_budget: usize,
    /// `U`, ascending.
    pub members: Vec<usize>,
    /// `d^{h₀}(s, x) + d^{h₀}(x, t)` for each member, same order.
    pub sums: Vec<Length>,
}

impl SandwichCert {
    /// `U = {x ∈ N : d^{h₀}(s, x) + d^{h₀}(x, t) ≤ 0}`.
    pub fn compute(g: &WeightedDigraph, s: usize, t: usize, h0: usize) -> Self {
        let sums = pair_sums(g, s, t, h0);
        let (members, sums) = g
            .negative_vertices()
            .iter()
            .filter_map(|&x| match sums[x] {
                Dist::Finite(v) if v <= 0 => Some((x, v)),
                _ => None,
            })
            .unzip();
        SandwichCert { s, t, hop_budget: h0, members, sums }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Recomputes both hop runs and checks every member and recorded sum.
    pub fn verify(&self, g: &WeightedDigraph) -> bool {
        let sums = pair_sums(g, self.s, self.t, self.hop_budget);
        self.members.len() == self.sums.len()
            && self.members.windows(2).all(|w| w[0] < w[1])
            && self.members.iter().zip(&self.sums).all(|(&x, &v)| {
                x < g.n() && g.is_negative_vertex(x) && sums[x] == Dist::Finite(v) && v <= 0
            })
    }

    /// Keeps the `target` members with the lowest sums, ties by vertex id.
    /// Any subset of a weak sandwich is again one.
    pub fn trim(&mut self, target: usize) {
        if self.members.len() <= target {
            return;
        }
        let mut idx: Vec<usize> = (0..self.members.len()).collect();
        idx.sort_by_key(|&i| (self.sums[i], self.members[i]));
        idx.truncate(target);
        idx.sort_unstable();
        self.members = idx.iter().map(|&i| self.members[i]).collect();
        self.sums = idx.iter().map(|&i| self.sums[i]).collect();
    }
}

/// `d^h(s, ·) + d^h(·, t)` for every vertex.
fn pair_sums(g: &WeightedDigraph, s: usize, t: usize, h: usize) -> Vec<Dist> {
    let (fwd, rev) = rayon::join(
        || hop_distances(g, &SourceSpec::single(s, Direction::Forward), h, false),
        || hop_distances(g, &SourceSpec::single(t, Direction::Reverse), h, false),
    );
    fwd.last().iter().zip(rev.last()).map(|(a, b)| a.join(*b)).collect()
}

/// Number of vertices `v` with `d^h(s, v) + d^h(v, t) < 0`.
pub fn betweenness_count(g: &WeightedDigraph, s: usize, t: usize, h: usize) -> usize {
    pair_sums(g, s, t, h).iter().filter(|d| d.is_negative()).count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SandwichOutcome {
    NegativeCycle(Walk),
    /// `φ = d_S(V, ·)` neutralizes every negative vertex of `sample`.
    Neutralized { potentials: PotentialVector, sample: Vec<usize> },
    Sandwich { cert: SandwichCert, sample: Vec<usize> },
}

/// Samples `S` with probability `1/q` and probes it.
pub fn sandwich_probe<R: Rng + ?Sized>(g: &WeightedDigraph, q: f64, h0: usize, rng: &mut R) -> SandwichOutcome {
    let sample = sample_negatives(g, q, rng);
    sandwich_probe_with(g, &sample, h0)
}

/// Probes a given sample `S ⊆ N` with hop budget `h₀`.
pub fn sandwich_probe_with(g: &WeightedDigraph, sample: &[usize], h0: usize) -> SandwichOutcome {
    match probe(g, sample, h0.max(1)) {
        ProbeOutcome::NegativeCycle(c) => SandwichOutcome::NegativeCycle(c),
        ProbeOutcome::Distances(d) => {
            let potentials = PotentialVector::from_finite(&d);
            assert!(certify_potential(g, &potentials), "probe distances are not valid potentials");
            assert!(g.neutralizes(&potentials, sample), "probe distances leave a sampled arc negative");
            SandwichOutcome::Neutralized { potentials, sample: sample.to_vec() }
        }
        ProbeOutcome::ProperPair { s, t, .. } => {
            let cert = SandwichCert::compute(g, s, t, h0);
            debug_assert!(cert.members.contains(&s) && cert.members.contains(&t));
            SandwichOutcome::Sandwich { cert, sample: sample.to_vec() }
        }
    }
}
