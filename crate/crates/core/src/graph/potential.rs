use std::ops::Index;

use serde::{Deserialize, Serialize};

use super::WeightedDigraph;
use crate::dist::{checked, Dist, Length};
use crate::stats;

/// Per-vertex reweighting values `φ`, finite everywhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialVector(Vec<Length>);

impl PotentialVector {
    pub fn zeros(n: usize) -> Self {
        PotentialVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Length] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Length> {
        self.0
    }

    /// Pointwise sum. Reweighting by `self` and then by `other` equals
    /// reweighting once by the sum.
    pub fn compose(&self, other: &PotentialVector) -> PotentialVector {
        assert_eq!(self.len(), other.len());
        PotentialVector(self.0.iter().zip(&other.0).map(|(&a, &b)| checked(a, b)).collect())
    }

    pub fn pointwise_min(&self, other: &PotentialVector) -> PotentialVector {
        assert_eq!(self.len(), other.len());
        PotentialVector(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    pub fn pointwise_max(&self, other: &PotentialVector) -> PotentialVector {
        assert_eq!(self.len(), other.len());
        PotentialVector(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    /// Potentials that are finite distances everywhere. Panics on an
    /// unreachable entry.
    pub fn from_finite(dists: &[Dist]) -> PotentialVector {
        PotentialVector(
            dists
                .iter()
                .map(|d| d.finite().expect("potential source must be finite"))
                .collect(),
        )
    }

    /// `φ(v) = d(S, v)` for forward distances from a source set.
    ///
    /// Unreachable vertices take the largest finite value. No non-hop arc
    /// leads from a reachable vertex to an unreachable one, so the result
    /// stays valid.
    pub fn from_forward(dists: &[Dist]) -> PotentialVector {
        let cap = dists.iter().filter_map(|d| d.finite()).max().unwrap_or(0);
        PotentialVector(dists.iter().map(|d| d.finite().unwrap_or(cap)).collect())
    }

    /// `φ(v) = −d(v, T)` for reverse distances to a target set.
    ///
    /// Vertices that cannot reach the target take the smallest finite value.
    pub fn from_reverse(dists: &[Dist]) -> PotentialVector {
        let floor = dists.iter().filter_map(|d| d.finite()).map(|d| -d).min().unwrap_or(0);
        PotentialVector(dists.iter().map(|d| d.finite().map(|d| -d).unwrap_or(floor)).collect())
    }
}

impl From<Vec<Length>> for PotentialVector {
    fn from(v: Vec<Length>) -> Self {
        PotentialVector(v)
    }
}

impl Index<usize> for PotentialVector {
    type Output = Length;

    #[inline]
    fn index(&self, v: usize) -> &Length {
        &self.0[v]
    }
}

/// Checks `φ` against `g` and records the outcome in the process-wide
/// counters. Every potential handed out by the algorithms goes through here.
pub fn certify_potential(g: &WeightedDigraph, phi: &PotentialVector) -> bool {
    let valid = g.is_valid_potential(phi);
    stats::record_potential_check(valid);
    debug_assert!(valid, "emitted potential is not valid for its graph");
    valid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Arc;
    use proptest::prelude::*;

    fn arb_graph() -> impl Strategy<Value = WeightedDigraph> {
        (2usize..8).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n, -6i64..10), 0..20)
                .prop_map(move |arcs| WeightedDigraph::new(n, arcs).unwrap())
        })
    }

    fn arb_potential(n: usize) -> impl Strategy<Value = PotentialVector> {
        prop::collection::vec(-20i64..20, n).prop_map(PotentialVector::from)
    }

    proptest! {
        #[test]
        fn composition_matches_sequential_reweighting(
            (g, p1, p2) in arb_graph().prop_flat_map(|g| {
                let n = g.n();
                (Just(g), arb_potential(n), arb_potential(n))
            })
        ) {
            let seq = g.reweighted(&p1).reweighted(&p2);
            let once = g.reweighted(&p1.compose(&p2));
            prop_assert_eq!(seq.arcs(), once.arcs());
            prop_assert_eq!(seq.hop_flags(), g.hop_flags());
        }

        #[test]
        fn reweighting_telescopes_along_walks(
            (g, p, steps) in arb_graph().prop_flat_map(|g| {
                let n = g.n();
                (Just(g), arb_potential(n), prop::collection::vec(any::<prop::sample::Index>(), 1..6))
            })
        ) {
            prop_assume!(g.m() > 0);
            // random walk following out arcs
            let first = steps[0].index(g.m());
            let mut arcs: Vec<Arc> = vec![g.arc(first)];
            for s in &steps[1..] {
                let last = arcs.last().unwrap().head;
                let out = g.out_arcs(last);
                if out.is_empty() { break; }
                arcs.push(g.arc(out[s.index(out.len())]));
            }
            let raw: i64 = arcs.iter().map(|a| a.len).sum();
            let rew: i64 = arcs.iter().map(|a| a.len + p[a.tail] - p[a.head]).sum();
            let start = arcs[0].tail;
            let end = arcs.last().unwrap().head;
            prop_assert_eq!(rew, raw + p[start] - p[end]);
        }

        #[test]
        fn min_max_and_sum_closure(
            (g, p1, p2) in arb_graph().prop_flat_map(|g| {
                let n = g.n();
                (Just(g), arb_potential(n), arb_potential(n))
            })
        ) {
            if g.is_valid_potential(&p1) && g.is_valid_potential(&p2) {
                prop_assert!(g.is_valid_potential(&p1.pointwise_min(&p2)));
                prop_assert!(g.is_valid_potential(&p1.pointwise_max(&p2)));
            }
            if g.is_valid_potential(&p1) && g.reweighted(&p1).is_valid_potential(&p2) {
                prop_assert!(g.is_valid_potential(&p1.compose(&p2)));
            }
        }
    }

    #[test]
    fn unreachable_entries_are_clamped() {
        let f = PotentialVector::from_forward(&[Dist::Finite(-2), Dist::Infinite, Dist::Finite(3)]);
        assert_eq!(f.as_slice(), &[-2, 3, 3]);
        let r = PotentialVector::from_reverse(&[Dist::Finite(-2), Dist::Infinite, Dist::Finite(3)]);
        assert_eq!(r.as_slice(), &[2, -3, -3]);
    }
}
