//! Brute-force oracles for desk-scale verification.
//!
//! Nothing here touches the hop-distance engine: these are textbook
//! relaxations and exhaustive enumerations over arc lists, kept deliberately
//! naive so they can serve as independent references.

use crate::dist::{Dist, Length};
use crate::graph::WeightedDigraph;
use crate::hop::Direction;

/// Single-source distances by plain Bellman-Ford relaxation. `None` when a
/// negative cycle is reachable from `s`.
pub fn bellman_ford_from(g: &WeightedDigraph, s: usize) -> Option<Vec<Dist>> {
    let mut d = vec![Dist::Infinite; g.n()];
    d[s] = Dist::ZERO;
    relax_to_fixpoint(g, &mut d, |_| true)
}

/// `d(V, v)` for every `v`: the distance from a zero-offset supersource.
/// `None` when the graph has any negative cycle.
pub fn all_sources_distances(g: &WeightedDigraph) -> Option<Vec<Dist>> {
    let mut d = vec![Dist::ZERO; g.n()];
    relax_to_fixpoint(g, &mut d, |_| true)
}

pub fn has_negative_cycle(g: &WeightedDigraph) -> bool {
    all_sources_distances(g).is_none()
}

fn relax_to_fixpoint(g: &WeightedDigraph, d: &mut [Dist], allow: impl Fn(usize) -> bool) -> Option<Vec<Dist>> {
    for _ in 0..=g.n() {
        let mut changed = false;
        for (id, a) in g.arcs().iter().enumerate() {
            if !allow(id) {
                continue;
            }
            let cand = d[a.tail].plus(a.len);
            if cand < d[a.head] {
                d[a.head] = cand;
                changed = true;
            }
        }
        if !changed {
            return Some(d.to_vec());
        }
    }
    None
}

/// Hop distances straight from the recurrence
/// `d^{i+1}(v) = min(d^i(v), min_{(u,w) hop} d^i(u) + ℓ(u,w) + d^0(w, v))`,
/// with every closure under non-hop arcs done by repeated full relaxation.
/// Returns rounds `0..=h`.
pub fn naive_hop_distances(
    g: &WeightedDigraph,
    sources: &[(usize, Length)],
    direction: Direction,
    h: usize,
) -> Vec<Vec<Dist>> {
    let n = g.n();
    let ends = |id: usize| -> (usize, usize) {
        let a = g.arc(id);
        match direction {
            Direction::Forward => (a.tail, a.head),
            Direction::Reverse => (a.head, a.tail),
        }
    };
    let close = |d: &mut Vec<Dist>| loop {
        let mut changed = false;
        for id in 0..g.m() {
            if g.is_hop(id) {
                continue;
            }
            let (u, v) = ends(id);
            let cand = d[u].plus(g.arc(id).len);
            if cand < d[v] {
                d[v] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    };
    let mut d0 = vec![Dist::Infinite; n];
    for &(v, off) in sources {
        d0[v] = d0[v].min(Dist::Finite(off));
    }
    close(&mut d0);
    let mut rounds = vec![d0];
    for _ in 0..h {
        let prev = rounds.last().unwrap();
        let mut next = prev.clone();
        for id in 0..g.m() {
            if !g.is_hop(id) {
                continue;
            }
            let (u, v) = ends(id);
            let cand = prev[u].plus(g.arc(id).len);
            if cand < next[v] {
                next[v] = cand;
            }
        }
        close(&mut next);
        rounds.push(next);
    }
    rounds
}

/// All-pairs 0-hop distances (Floyd-Warshall over non-hop arcs).
pub fn zero_hop_matrix(g: &WeightedDigraph) -> Vec<Vec<Dist>> {
    let n = g.n();
    let mut d = vec![vec![Dist::Infinite; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Dist::ZERO;
    }
    for (id, a) in g.arcs().iter().enumerate() {
        if !g.is_hop(id) && Dist::Finite(a.len) < d[a.tail][a.head] {
            d[a.tail][a.head] = Dist::Finite(a.len);
        }
    }
    for k in 0..n {
        for i in 0..n {
            if !d[i][k].is_finite() {
                continue;
            }
            for j in 0..n {
                let c = d[i][k].join(d[k][j]);
                if c < d[i][j] {
                    d[i][j] = c;
                }
            }
        }
    }
    d
}

/// Exhaustive proper hop distances.
///
/// `d̂^η(s,t)` is the minimum length of an `s→t` walk using exactly `η` hop
/// arcs whose tails are pairwise distinct. Every ordered choice of hop arcs
/// is enumerated, so keep `n ≤ 14` and `η ≤ 4` or so.
pub struct ProperWalkEnumerator {
    zero: Vec<Vec<Dist>>,
    hops: Vec<(usize, usize, Length)>,
}

impl ProperWalkEnumerator {
    pub fn new(g: &WeightedDigraph) -> Self {
        let hops = g.hop_arcs().map(|id| {
            let a = g.arc(id);
            (a.tail, a.head, a.len)
        });
        ProperWalkEnumerator { zero: zero_hop_matrix(g), hops: hops.collect() }
    }

    pub fn zero_hop(&self, s: usize, t: usize) -> Dist {
        self.zero[s][t]
    }

    /// `d̂^η(s, t)`.
    pub fn distance(&self, s: usize, t: usize, eta: usize) -> Dist {
        let mut used = Vec::with_capacity(eta);
        self.search(s, t, eta, Dist::ZERO, &mut used)
    }

    fn search(&self, at: usize, t: usize, left: usize, acc: Dist, used: &mut Vec<usize>) -> Dist {
        if !acc.is_finite() {
            return Dist::Infinite;
        }
        if left == 0 {
            return acc.join(self.zero[at][t]);
        }
        let mut best = Dist::Infinite;
        for &(u, w, len) in &self.hops {
            if used.contains(&u) {
                continue;
            }
            let reach = self.zero[at][u];
            if !reach.is_finite() {
                continue;
            }
            used.push(u);
            let cand = self.search(w, t, left - 1, acc.join(reach).plus(len), used);
            used.pop();
            best = best.min(cand);
        }
        best
    }

    /// Minimum over `η ∈ 1..=h` of `d̂^η(s, t)`.
    pub fn best_within(&self, s: usize, t: usize, h: usize) -> Dist {
        (1..=h).map(|eta| self.distance(s, t, eta)).min().unwrap_or(Dist::Infinite)
    }
}
