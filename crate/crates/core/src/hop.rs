//! Hop-limited distances, Johnson potentials and negative reach.
//!
//! Round `i` holds `d^i(S, v)`: the shortest walk from the offset source set
//! using at most `i` hop arcs. Round 0 is one Dijkstra pass over the non-hop
//! arcs; every later round relaxes one layer of hop arcs out of the vertices
//! that changed in the previous round and then runs Dijkstra from the
//! vertices that improved.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::dist::{Dist, Length};
use crate::graph::{certify_potential, Adj, PotentialVector, Walk, WalkStep, WeightedDigraph};
use crate::stats::{self, Counters};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Distances from the sources.
    Forward,
    /// Distances to the sources.
    Reverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpec {
    sources: Vec<(usize, Length)>,
    direction: Direction,
}

impl SourceSpec {
    /// Duplicate vertices keep their smallest offset.
    pub fn new(sources: impl IntoIterator<Item = (usize, Length)>, direction: Direction) -> Self {
        let mut sources: Vec<(usize, Length)> = sources.into_iter().collect();
        sources.sort_unstable();
        sources.dedup_by_key(|s| s.0);
        SourceSpec { sources, direction }
    }

    pub fn single(v: usize, direction: Direction) -> Self {
        SourceSpec { sources: vec![(v, 0)], direction }
    }

    /// Every vertex with offset 0: the `d(V, ·)` supersource.
    pub fn all_vertices(n: usize, direction: Direction) -> Self {
        SourceSpec { sources: (0..n).map(|v| (v, 0)).collect(), direction }
    }

    pub fn set(vertices: &[usize], direction: Direction) -> Self {
        Self::new(vertices.iter().map(|&v| (v, 0)), direction)
    }

    pub fn sources(&self) -> &[(usize, Length)] {
        &self.sources
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Parent {
    Root,
    /// Value unchanged from the previous round.
    Carried,
    Arc(usize),
}

#[derive(Clone, Debug)]
struct Round {
    index: usize,
    dist: Vec<Dist>,
    parent: Vec<Parent>,
    /// Vertices whose value dropped in this round (all reached ones in round 0).
    changed: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct HopDistanceTable {
    h: usize,
    direction: Direction,
    keep_rounds: bool,
    rounds: Vec<Round>,
    stable_at: Option<usize>,
    counters: Counters,
}

impl HopDistanceTable {
    /// The requested hop budget.
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Smallest `i` with round `i+1` equal to round `i`, if it was observed
    /// within the budget. Every later round equals round `i`.
    pub fn stable_at(&self) -> Option<usize> {
        self.stable_at
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    fn round_ref(&self, i: usize) -> &Round {
        assert!(i <= self.h, "round {i} beyond hop budget {}", self.h);
        let last = self.rounds.last().expect("round 0 always exists");
        if i >= last.index {
            return last;
        }
        self.rounds
            .iter()
            .find(|r| r.index == i)
            .unwrap_or_else(|| panic!("round {i} was not retained (keep_rounds is off)"))
    }

    /// `d^i(S, ·)` for all vertices.
    pub fn round(&self, i: usize) -> &[Dist] {
        &self.round_ref(i).dist
    }

    pub fn dist(&self, i: usize, v: usize) -> Dist {
        self.round_ref(i).dist[v]
    }

    /// `d^h(S, ·)`.
    pub fn last(&self) -> &[Dist] {
        self.round(self.h)
    }

    /// Vertices whose value in round `i ≥ 1` is strictly below round `i−1`.
    pub fn improved_at(&self, i: usize) -> Vec<usize> {
        assert!(i >= 1);
        if self.rounds.last().is_some_and(|r| i > r.index) {
            return Vec::new();
        }
        let mut v = self.round_ref(i).changed.clone();
        v.sort_unstable();
        v
    }

    /// A walk realizing `d^i(S, v)`, or `None` when it is infinite.
    ///
    /// Forward tables yield a walk from a source to `v`, reverse tables a
    /// walk from `v` to a source. Its length plus the source offset equals
    /// the table entry and it uses at most `i` hop arcs.
    pub fn witness(&self, g: &WeightedDigraph, i: usize, v: usize) -> Option<Walk> {
        assert!(self.keep_rounds, "witness extraction needs keep_rounds");
        let mut i = i.min(self.rounds.last().unwrap().index);
        if !self.dist(i, v).is_finite() {
            return None;
        }
        let mut at = v;
        let mut steps = Vec::new();
        loop {
            match self.round_ref(i).parent[at] {
                Parent::Root => break,
                Parent::Carried => i -= 1,
                Parent::Arc(id) => {
                    let arc = g.arc(id);
                    let hop = g.is_hop(id);
                    steps.push(WalkStep { arc, hop });
                    at = match self.direction {
                        Direction::Forward => arc.tail,
                        Direction::Reverse => arc.head,
                    };
                    if hop {
                        i -= 1;
                    }
                }
            }
        }
        let walk = match self.direction {
            Direction::Forward => {
                steps.reverse();
                Walk::from_steps(at, steps)
            }
            Direction::Reverse => Walk::from_steps(v, steps),
        };
        Some(walk.expect("parent pointers form a walk"))
    }
}

/// Exact hop-limited distances for rounds `0..=h`.
///
/// With `keep_rounds` off only the last computed round is retained and
/// witnesses cannot be extracted.
pub fn hop_distances(g: &WeightedDigraph, sources: &SourceSpec, h: usize, keep_rounds: bool) -> HopDistanceTable {
    if !keep_rounds {
        return hop_distances_in_place(g, sources, h);
    }
    let n = g.n();
    let dir = sources.direction();
    let mut pops = 0u64;
    let mut relaxations = 0u64;
    let mut heap = BinaryHeap::new();

    let mut dist = vec![Dist::Infinite; n];
    let mut parent = vec![Parent::Root; n];
    for &(v, off) in sources.sources() {
        dist[v] = Dist::Finite(off);
        heap.push(Reverse((off, v)));
    }
    let mut changed = Vec::new();
    dijkstra(g, dir, &mut dist, &mut parent, &mut heap, &mut changed, &mut pops, &mut relaxations);
    let mut rounds = vec![Round { index: 0, dist, parent, changed }];
    let mut stable_at = None;

    for i in 1..=h {
        let prev = rounds.last().unwrap();
        let mut dist = prev.dist.clone();
        let mut parent = vec![Parent::Carried; n];
        let mut changed = Vec::new();
        let mut marked = vec![false; n];
        for &u in &prev.changed {
            let du = prev.dist[u];
            let arcs = match dir {
                Direction::Forward => g.out_arcs(u),
                Direction::Reverse => g.in_arcs(u),
            };
            for &id in arcs {
                if !g.is_hop(id) {
                    continue;
                }
                relaxations += 1;
                let a = g.arc(id);
                let w = if dir == Direction::Forward { a.head } else { a.tail };
                let cand = du.plus(a.len);
                if cand < dist[w] {
                    dist[w] = cand;
                    parent[w] = Parent::Arc(id);
                    if !marked[w] {
                        marked[w] = true;
                        changed.push(w);
                    }
                }
            }
        }
        if changed.is_empty() {
            stable_at = Some(i - 1);
            break;
        }
        for &w in &changed {
            heap.push(Reverse((dist[w].finite().unwrap(), w)));
        }
        dijkstra(g, dir, &mut dist, &mut parent, &mut heap, &mut changed, &mut pops, &mut relaxations);
        // Seeds appear twice: once from the hop layer, once when settled.
        changed.sort_unstable();
        changed.dedup();
        rounds.push(Round { index: i, dist, parent, changed });
    }
    stats::record_work(pops, relaxations);
    HopDistanceTable {
        h,
        direction: dir,
        keep_rounds,
        rounds,
        stable_at,
        counters: Counters { pops, relaxations },
    }
}

/// Same rounds as [`hop_distances`] on a single label array. The hop layer
/// reads the previous round's labels of the changed vertices from a copy
/// taken before it writes, so only the last round is kept. Labels are raw
/// lengths with `UNREACHED` for infinity and no parents are tracked; this is
/// the inner loop of the multiscale reduction.
fn hop_distances_in_place(g: &WeightedDigraph, sources: &SourceSpec, h: usize) -> HopDistanceTable {
    run_in_place(g, sources, h, |_, _| {})
}

const UNREACHED: Length = Length::MAX;

fn label(d: Length) -> Dist {
    if d == UNREACHED {
        Dist::Infinite
    } else {
        Dist::Finite(d)
    }
}

/// `watch[j]` lists vertices whose `d^j(S, ·)` is wanted; the result holds
/// those labels in the same shape. Runs `watch.len() − 1` rounds at most.
pub(crate) fn hop_distances_watched(g: &WeightedDigraph, sources: &SourceSpec, watch: &[Vec<usize>]) -> Vec<Vec<Dist>> {
    assert!(!watch.is_empty(), "watch at least round 0");
    let mut out: Vec<Vec<Dist>> = vec![Vec::new(); watch.len()];
    run_in_place(g, sources, watch.len() - 1, |j, dist| {
        out[j] = watch[j].iter().map(|&v| label(dist[v])).collect();
    });
    out
}

/// Calls `on_round(j, labels)` once for every `j ∈ 0..=h`; rounds after
/// stabilization see the stable labels.
fn run_in_place(
    g: &WeightedDigraph,
    sources: &SourceSpec,
    h: usize,
    mut on_round: impl FnMut(usize, &[Length]),
) -> HopDistanceTable {
    let n = g.n();
    let dir = sources.direction();
    let mut pops = 0u64;
    let mut relaxations = 0u64;
    let mut heap: BinaryHeap<Reverse<(Length, u32)>> = BinaryHeap::new();

    let mut dist = vec![UNREACHED; n];
    let mut changed: Vec<usize> = Vec::new();
    let mut settle = |dist: &mut [Length], heap: &mut BinaryHeap<Reverse<(Length, u32)>>, changed: &mut Vec<usize>| {
        while let Some(Reverse((d, v))) = heap.pop() {
            let v = v as usize;
            if dist[v] != d {
                continue;
            }
            pops += 1;
            changed.push(v);
            for a in adjacent(g, dir, v) {
                if a.hop {
                    continue;
                }
                relaxations += 1;
                let cand = crate::dist::checked(d, a.len);
                if cand < dist[a.other] {
                    dist[a.other] = cand;
                    heap.push(Reverse((cand, a.other as u32)));
                }
            }
        }
    };

    for &(v, off) in sources.sources() {
        dist[v] = off;
        heap.push(Reverse((off, v as u32)));
    }
    settle(&mut dist, &mut heap, &mut changed);
    on_round(0, &dist);
    let mut hop_relaxations = 0u64;
    let mut index = 0;
    let mut stable_at = None;
    let mut marked = vec![false; n];
    let mut seeds: Vec<(usize, Length)> = Vec::new();

    for i in 1..=h {
        seeds.clear();
        seeds.extend(changed.iter().map(|&u| (u, dist[u])));
        changed.clear();
        for &(u, du) in &seeds {
            for a in adjacent(g, dir, u) {
                if !a.hop {
                    continue;
                }
                hop_relaxations += 1;
                let w = a.other;
                let cand = crate::dist::checked(du, a.len);
                if cand < dist[w] {
                    dist[w] = cand;
                    if !marked[w] {
                        marked[w] = true;
                        changed.push(w);
                    }
                }
            }
        }
        if changed.is_empty() {
            stable_at = Some(i - 1);
            for j in i..=h {
                on_round(j, &dist);
            }
            break;
        }
        for &w in &changed {
            marked[w] = false;
            heap.push(Reverse((dist[w], w as u32)));
        }
        settle(&mut dist, &mut heap, &mut changed);
        changed.sort_unstable();
        changed.dedup();
        index = i;
        on_round(i, &dist);
    }
    let relaxations = relaxations + hop_relaxations;
    stats::record_work(pops, relaxations);
    let dist = dist.into_iter().map(label).collect();
    HopDistanceTable {
        h,
        direction: dir,
        keep_rounds: false,
        rounds: vec![Round { index, dist, parent: Vec::new(), changed }],
        stable_at,
        counters: Counters { pops, relaxations },
    }
}

#[inline]
fn adjacent(g: &WeightedDigraph, dir: Direction, v: usize) -> &[Adj] {
    match dir {
        Direction::Forward => g.out_adj(v),
        Direction::Reverse => g.in_adj(v),
    }
}

/// Lazy-deletion Dijkstra over non-hop arcs. Entries whose key no longer
/// matches the current value are skipped without counting as pops. Every
/// settled vertex is appended to `settled`.
#[allow(clippy::too_many_arguments)]
fn dijkstra(
    g: &WeightedDigraph,
    dir: Direction,
    dist: &mut [Dist],
    parent: &mut [Parent],
    heap: &mut BinaryHeap<Reverse<(Length, usize)>>,
    settled: &mut Vec<usize>,
    pops: &mut u64,
    relaxations: &mut u64,
) {
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist[v] != Dist::Finite(d) {
            continue;
        }
        *pops += 1;
        settled.push(v);
        for a in adjacent(g, dir, v) {
            if a.hop {
                continue;
            }
            *relaxations += 1;
            debug_assert!(a.len >= 0, "non-hop arc {} is negative", a.id);
            let w = a.other;
            let cand = crate::dist::checked(d, a.len);
            if Dist::Finite(cand) < dist[w] {
                dist[w] = Dist::Finite(cand);
                parent[w] = Parent::Arc(a.id);
                heap.push(Reverse((cand, w)));
            }
        }
    }
}

/// Plain Dijkstra from one vertex over the non-hop arcs.
pub fn dijkstra_from(g: &WeightedDigraph, s: usize, direction: Direction) -> Vec<Dist> {
    hop_distances(g, &SourceSpec::single(s, direction), 0, false).last().to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JohnsonOutcome {
    /// `φ(v) = d(V, v)`; every arc is nonnegative under it.
    Potentials(PotentialVector),
    NegativeCycle(Walk),
    /// The budget was below `|N|` and distances had not stabilized.
    Unstable,
}

/// Johnson potentials `d(V, ·)` using at most `hop_budget` hop rounds.
pub fn johnson(g: &WeightedDigraph, hop_budget: usize) -> JohnsonOutcome {
    let k = g.negative_vertices().len();
    let rounds = hop_budget.min(k) + 1;
    let spec = SourceSpec::all_vertices(g.n(), Direction::Forward);
    let table = hop_distances(g, &spec, rounds, false);
    if let Some(i) = table.stable_at() {
        if i <= hop_budget {
            let phi = PotentialVector::from_finite(table.round(i));
            debug_assert!((0..g.m()).all(|id| g.reduced_len(id, &phi) >= 0));
            certify_potential(g, &phi);
            return JohnsonOutcome::Potentials(phi);
        }
    }
    if hop_budget < k {
        return JohnsonOutcome::Unstable;
    }
    JohnsonOutcome::NegativeCycle(extract_cycle(g, &spec, k))
}

/// Rebuilds the improving walk at round `k+1` and cuts the closed sub-walk
/// between two hops out of the same negative vertex.
fn extract_cycle(g: &WeightedDigraph, spec: &SourceSpec, k: usize) -> Walk {
    let table = hop_distances(g, spec, k + 1, true);
    let v = *table.improved_at(k + 1).first().expect("no stabilization implies an improved vertex");
    let walk = table.witness(g, k + 1, v).expect("improved vertex is reachable");
    let cycle = repeat_cycles(&walk)
        .find(|c| c.length() < 0)
        .expect("an improving walk with more hops than negative vertices contains a negative cycle");
    assert!(cycle.certifies_negative_cycle(g), "extracted cycle failed verification");
    cycle
}

/// Closed sub-walks between any two hops out of the same vertex.
pub(crate) fn repeat_cycles(walk: &Walk) -> impl Iterator<Item = Walk> + '_ {
    let steps = walk.steps();
    (0..steps.len()).filter(move |&i| steps[i].hop).flat_map(move |i| {
        (i + 1..steps.len())
            .filter(move |&j| steps[j].hop && steps[j].arc.tail == steps[i].arc.tail)
            .map(move |j| walk.slice(i, j))
    })
}

/// Some negative cycle of `g`, if one exists.
pub fn find_negative_cycle(g: &WeightedDigraph) -> Option<Walk> {
    match johnson(g, g.negative_vertices().len()) {
        JohnsonOutcome::NegativeCycle(c) => Some(c),
        _ => None,
    }
}

/// `{t : min_{u∈U} d^η_{G_U}(u, t) < 0}`, ascending.
pub fn negative_reach(g: &WeightedDigraph, set: &[usize], eta: usize) -> Vec<usize> {
    let gu = g.restrict_negatives(set).expect("reach set must consist of negative vertices");
    let table = hop_distances(&gu, &SourceSpec::set(set, Direction::Forward), eta, false);
    table
        .last()
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_negative())
        .map(|(v, _)| v)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::oracle;
    use proptest::prelude::*;

    #[test]
    fn gc_needs_two_hops() {
        let t = hop_distances(&gc(), &SourceSpec::single(0, Direction::Forward), 2, true);
        assert_eq!(t.dist(1, 4), Dist::Infinite);
        assert_eq!(t.dist(2, 4), Dist::Finite(-1));
        let w = t.witness(&gc(), 2, 4).unwrap();
        assert_eq!((w.start(), w.end(), w.length(), w.hops()), (0, 4, -1, 2));
    }

    #[test]
    fn ga_one_hop() {
        let t = hop_distances(&ga(), &SourceSpec::single(0, Direction::Forward), 1, false);
        assert_eq!(t.dist(1, 2), Dist::Finite(1));
        let r = hop_distances(&ga(), &SourceSpec::single(2, Direction::Reverse), 1, true);
        assert_eq!(r.dist(1, 0), Dist::Finite(1));
        let w = r.witness(&ga(), 1, 0).unwrap();
        assert_eq!((w.start(), w.end(), w.length()), (0, 2, 1));
    }

    #[test]
    fn nonnegative_graph_is_stable_at_zero() {
        let g = WeightedDigraph::new(3, [(0, 1, 2), (1, 2, 0), (2, 0, 5)]).unwrap();
        let t = hop_distances(&g, &SourceSpec::single(0, Direction::Forward), 4, false);
        assert_eq!(t.stable_at(), Some(0));
        assert_eq!(t.round(0), t.round(4));
        assert_eq!(johnson(&g, 1), JohnsonOutcome::Potentials(PotentialVector::zeros(3)));
    }

    #[test]
    fn johnson_examples() {
        let JohnsonOutcome::Potentials(phi) = johnson(&ga(), 1) else { panic!() };
        assert_eq!(phi.as_slice(), &[0, -2, 0]);
        let r = ga().reweighted(&phi);
        assert_eq!(r.arcs().iter().map(|a| a.len).collect::<Vec<_>>(), vec![0, 1]);
        let JohnsonOutcome::NegativeCycle(c) = johnson(&gb(), 1) else { panic!() };
        assert_eq!(c.length(), -1);
        assert!(c.certifies_negative_cycle(&gb()));
    }

    #[test]
    fn johnson_unstable_below_k() {
        assert_eq!(johnson(&ge(), 1), JohnsonOutcome::Unstable);
        assert!(matches!(johnson(&ge(), 2), JohnsonOutcome::Potentials(_)));
    }

    #[test]
    fn reach_examples() {
        assert!(negative_reach(&ga(), &[0], 0).is_empty());
        assert_eq!(negative_reach(&ga(), &[0], 1), vec![1]);
        assert_eq!(negative_reach(&gc(), &[0, 2], 2), vec![1, 3, 4]);
    }

    fn small_graph(max_n: usize) -> impl Strategy<Value = WeightedDigraph> {
        (2..=max_n).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n, -6i64..12), 0..3 * n)
                .prop_map(move |arcs| WeightedDigraph::new(n, arcs).unwrap())
        })
    }

    proptest! {
        #[test]
        fn matches_naive_recurrence(g in small_graph(10), h in 0usize..6, s in 0usize..10, rev in any::<bool>()) {
            let s = s % g.n();
            let dir = if rev { Direction::Reverse } else { Direction::Forward };
            let spec = SourceSpec::new([(s, 0), ((s + 1) % g.n(), -3)], dir);
            let t = hop_distances(&g, &spec, h, true);
            let naive = oracle::naive_hop_distances(&g, spec.sources(), dir, h);
            let flat = hop_distances(&g, &spec, h, false);
            prop_assert_eq!(flat.last(), t.last());
            prop_assert_eq!(flat.stable_at(), t.stable_at());
            prop_assert_eq!(flat.counters(), t.counters());
            if h >= 1 {
                prop_assert_eq!(flat.improved_at(h), t.improved_at(h));
            }
            for (i, row) in naive.iter().enumerate() {
                prop_assert_eq!(t.round(i), &row[..]);
                for v in 0..g.n() {
                    if let Some(w) = t.witness(&g, i, v) {
                        prop_assert!(w.hops() <= i);
                        let root = if rev { w.end() } else { w.start() };
                        let off = spec.sources().iter().find(|x| x.0 == root).unwrap().1;
                        prop_assert_eq!(Dist::Finite(w.length() + off), t.dist(i, v));
                    }
                }
            }
            prop_assert!(t.counters().pops <= ((h + 1) * g.n()) as u64);
        }

        #[test]
        fn johnson_agrees_with_bellman_ford(g in small_graph(9)) {
            match johnson(&g, g.negative_vertices().len()) {
                JohnsonOutcome::Potentials(phi) => {
                    let d = oracle::all_sources_distances(&g).unwrap();
                    prop_assert_eq!(phi, PotentialVector::from_finite(&d));
                }
                JohnsonOutcome::NegativeCycle(c) => {
                    prop_assert!(c.certifies_negative_cycle(&g));
                    prop_assert!(oracle::has_negative_cycle(&g));
                }
                JohnsonOutcome::Unstable => prop_assert!(false),
            }
        }

        #[test]
        fn hop_potentials_are_valid(g in small_graph(9), h in 0usize..4, s in 0usize..9) {
            let s = s % g.n();
            let fwd = hop_distances(&g, &SourceSpec::single(s, Direction::Forward), h, false);
            let rev = hop_distances(&g, &SourceSpec::single(s, Direction::Reverse), h, false);
            prop_assert!(g.is_valid_potential(&PotentialVector::from_forward(fwd.last())));
            prop_assert!(g.is_valid_potential(&PotentialVector::from_reverse(rev.last())));
        }
    }
}
