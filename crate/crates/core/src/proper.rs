//! The proper-walk probe on `G_S`.
//!
//! One all-vertex hop run over `G_S` with `h+1` rounds. If some `t ∈ S` has
//! `d^h(V, t) < 0`, its witness starts (after dropping the nonnegative
//! non-hop prefix) at a vertex of `S` and is turned into a proper walk by
//! cutting out closed sub-walks between repeated negative vertices, unless
//! one of them is a negative cycle. Otherwise round `h+1` equals round `h`:
//! an improving `(h+1)`-hop walk would have a nonnegative prefix up to its
//! second negative vertex, and dropping that prefix gives an `h`-hop walk
//! that is at least as short.

use crate::dist::Dist;
use crate::graph::{Walk, WeightedDigraph};
use crate::hop::{hop_distances, Direction, SourceSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    NegativeCycle(Walk),
    /// A proper walk from `s` to `t` with at most `h` hops and negative length.
    ProperPair { s: usize, t: usize, walk: Walk },
    /// `d_S(V, v)` for every vertex.
    Distances(Vec<Dist>),
}

/// Runs the probe with negative set `set` (a subset of `N`, any order) and
/// hop budget `h ≥ 1`. Every outcome is verified before it is returned.
pub fn probe(g: &WeightedDigraph, set: &[usize], h: usize) -> ProbeOutcome {
    assert!(h >= 1, "probe needs h >= 1");
    let gs = g.restrict_negatives(set).expect("probe set must consist of negative vertices");
    let table = hop_distances(&gs, &SourceSpec::all_vertices(g.n(), Direction::Forward), h + 1, true);

    let target = set
        .iter()
        .copied()
        .filter(|&t| table.dist(h, t).is_negative())
        .min_by_key(|&t| (table.dist(h, t), t));
    let outcome = match target {
        Some(t) => {
            let walk = table.witness(&gs, h, t).expect("negative entry is finite");
            from_negative_walk(trim_prefix(&walk))
        }
        None => {
            assert!(
                table.stable_at().is_some_and(|i| i <= h),
                "probe: round {} improved although no vertex of S is negative",
                h + 1
            );
            ProbeOutcome::Distances(table.round(h).to_vec())
        }
    };
    verify(&gs, set, h, &outcome);
    outcome
}

/// Drops the non-hop steps before the first hop.
fn trim_prefix(walk: &Walk) -> Walk {
    let first = walk.steps().iter().position(|s| s.hop).expect("a negative walk uses a hop");
    walk.slice(first, walk.steps().len())
}

/// Repeatedly cuts closed sub-walks between repeated negative vertices;
/// returns the first negative one as a cycle.
fn from_negative_walk(mut walk: Walk) -> ProbeOutcome {
    while let Some((i, j)) = walk.first_repeat() {
        let cycle = walk.slice(i, j);
        if cycle.length() < 0 {
            return ProbeOutcome::NegativeCycle(cycle);
        }
        walk = walk.excise(i, j);
    }
    if walk.is_closed() {
        return ProbeOutcome::NegativeCycle(walk);
    }
    ProbeOutcome::ProperPair { s: walk.start(), t: walk.end(), walk }
}

fn verify(gs: &WeightedDigraph, set: &[usize], h: usize, outcome: &ProbeOutcome) {
    match outcome {
        ProbeOutcome::NegativeCycle(c) => {
            assert!(c.certifies_negative_cycle(gs), "probe: cycle certificate failed")
        }
        ProbeOutcome::ProperPair { s, t, walk } => {
            assert!(set.contains(s) && set.contains(t), "probe: pair endpoints outside S");
            assert!(
                walk.start() == *s
                    && walk.end() == *t
                    && walk.is_proper()
                    && walk.hops() <= h
                    && walk.length() < 0
                    && walk.is_walk_in(gs),
                "probe: proper pair witness failed"
            );
        }
        ProbeOutcome::Distances(d) => {
            assert!(d.iter().all(|x| *x <= Dist::ZERO), "probe: d(V, v) above zero");
            assert!(
                gs.arcs().iter().all(|a| d[a.tail].plus(a.len) >= d[a.head]),
                "probe: distances admit a relaxation"
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::oracle::{self, ProperWalkEnumerator};
    use proptest::prelude::*;

    #[test]
    fn gb_cycle() {
        let ProbeOutcome::NegativeCycle(c) = probe(&gb(), &[0], 2) else { panic!() };
        assert_eq!(c.length(), -1);
    }

    #[test]
    fn ge_proper_pair() {
        let ProbeOutcome::ProperPair { s, t, walk } = probe(&ge(), &[0, 2], 2) else { panic!() };
        assert_eq!((s, t), (0, 2));
        assert_eq!(walk.vertices(), vec![0, 1, 2]);
        assert_eq!(walk.length(), -1);
    }

    #[test]
    fn ga_distances() {
        let out = probe(&ga(), &[0], 1);
        assert_eq!(out, ProbeOutcome::Distances(vec![Dist::ZERO, Dist::Finite(-2), Dist::ZERO]));
    }

    fn case() -> impl Strategy<Value = (WeightedDigraph, Vec<usize>, usize)> {
        (3usize..=9).prop_flat_map(|n| {
            (
                prop::collection::vec((0..n, 0..n, -5i64..10), n..3 * n),
                prop::collection::vec(any::<bool>(), n),
                1usize..=3,
            )
                .prop_map(move |(arcs, pick, h)| {
                    let g = WeightedDigraph::new(n, arcs).unwrap();
                    let set = g.negative_vertices().iter().copied().filter(|&v| pick[v]).collect();
                    (g, set, h)
                })
        })
    }

    proptest! {
        #[test]
        fn outcomes_agree_with_oracles((g, set, h) in case()) {
            let gs = g.restrict_negatives(&set).unwrap();
            let en = ProperWalkEnumerator::new(&gs);
            let pair_exists = set.iter().any(|&s| set.iter().any(|&t| en.best_within(s, t, h).is_negative()));
            match probe(&g, &set, h) {
                ProbeOutcome::Distances(d) => {
                    prop_assert!(!pair_exists);
                    prop_assert_eq!(Some(d), oracle::all_sources_distances(&gs));
                }
                ProbeOutcome::ProperPair { s, t, walk } => {
                    prop_assert!(en.best_within(s, t, h) <= Dist::Finite(walk.length()));
                }
                ProbeOutcome::NegativeCycle(c) => {
                    prop_assert!(c.certifies_negative_cycle(&g));
                }
            }
        }
    }
}
