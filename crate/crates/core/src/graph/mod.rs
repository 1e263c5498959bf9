//! Directed multigraph with signed lengths and a frozen negative-arc set.
//!
//! An arc is a *hop arc* when it was negative at the moment the graph was
//! frozen. Reweighting keeps the hop flags, so an arc that becomes
//! nonnegative halfway through an iteration still counts as a hop until the
//! next [`WeightedDigraph::refreeze`].

mod potential;
mod preprocess;
mod walk;

pub use potential::{certify_potential, PotentialVector};
pub use preprocess::{preprocess, PreprocessMapping};
pub use walk::{Walk, WalkError, WalkStep};

use thiserror::Error;

use crate::dist::{checked, Length};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub len: Length,
}

impl Arc {
    pub fn new(tail: usize, head: usize, len: Length) -> Self {
        Arc { tail, head, len }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("arc {index} has endpoint {vertex} outside [0, {n})")]
    EndpointOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("vertex {0} is not a negative vertex of the graph")]
    NotNegative(usize),
    #[error("potential has {got} entries, graph has {expected} vertices")]
    PotentialSize { expected: usize, got: usize },
}

/// An arc as seen from one endpoint, packed for the relaxation loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Adj {
    pub id: usize,
    /// The head for out-adjacency, the tail for in-adjacency.
    pub other: usize,
    pub len: Length,
    pub hop: bool,
}

#[derive(Clone, Debug)]
pub struct WeightedDigraph {
    n: usize,
    arcs: Vec<Arc>,
    hop: Vec<bool>,
    out_offsets: Vec<usize>,
    out_arcs: Vec<usize>,
    out_adj: Vec<Adj>,
    in_offsets: Vec<usize>,
    in_arcs: Vec<usize>,
    in_adj: Vec<Adj>,
    negative_vertices: Vec<usize>,
    is_negative: Vec<bool>,
}

impl WeightedDigraph {
    /// Builds a graph whose hop arcs are exactly the arcs of negative length.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize, Length)>) -> Result<Self, GraphError> {
        let arcs: Vec<Arc> = arcs.into_iter().map(|(t, h, l)| Arc::new(t, h, l)).collect();
        let hop = arcs.iter().map(|a| a.len < 0).collect();
        Self::with_hop_flags(n, arcs, hop)
    }

    /// Builds a graph with explicit hop flags. Non-hop arcs are expected to
    /// be nonnegative by every algorithm in this crate.
    pub fn with_hop_flags(n: usize, arcs: Vec<Arc>, hop: Vec<bool>) -> Result<Self, GraphError> {
        assert_eq!(arcs.len(), hop.len(), "one hop flag per arc");
        for (index, a) in arcs.iter().enumerate() {
            for vertex in [a.tail, a.head] {
                if vertex >= n {
                    return Err(GraphError::EndpointOutOfRange { index, vertex, n });
                }
            }
        }
        let (out_offsets, out_arcs) = csr(n, arcs.iter().map(|a| a.tail));
        let (in_offsets, in_arcs) = csr(n, arcs.iter().map(|a| a.head));
        let pack = |ids: &[usize], other: fn(&Arc) -> usize| -> Vec<Adj> {
            ids.iter()
                .map(|&id| Adj { id, other: other(&arcs[id]), len: arcs[id].len, hop: hop[id] })
                .collect()
        };
        let out_adj = pack(&out_arcs, |a| a.head);
        let in_adj = pack(&in_arcs, |a| a.tail);
        let mut is_negative = vec![false; n];
        for (a, &h) in arcs.iter().zip(&hop) {
            if h {
                is_negative[a.tail] = true;
            }
        }
        let negative_vertices = (0..n).filter(|&v| is_negative[v]).collect();
        Ok(WeightedDigraph {
            n,
            arcs,
            hop,
            out_offsets,
            out_arcs,
            out_adj,
            in_offsets,
            in_arcs,
            in_adj,
            negative_vertices,
            is_negative,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    /// `m + n log₂ n`, the cost unit of one hop round.
    pub fn mu(&self) -> f64 {
        let n = self.n.max(2) as f64;
        self.m() as f64 + n * n.log2()
    }

    #[inline]
    pub fn arc(&self, id: usize) -> Arc {
        self.arcs[id]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    #[inline]
    pub fn is_hop(&self, id: usize) -> bool {
        self.hop[id]
    }

    pub fn hop_flags(&self) -> &[bool] {
        &self.hop
    }

    #[inline]
    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_arcs[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    #[inline]
    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.in_arcs[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    /// `out_arcs(v)` with each arc's head, length and hop flag inline.
    #[inline]
    pub fn out_adj(&self, v: usize) -> &[Adj] {
        &self.out_adj[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    /// `in_arcs(v)` with each arc's tail, length and hop flag inline.
    #[inline]
    pub fn in_adj(&self, v: usize) -> &[Adj] {
        &self.in_adj[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    /// Ids of hop arcs, in arc order.
    pub fn hop_arcs(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.m()).filter(move |&id| self.hop[id])
    }

    /// The frozen negative set `N`: tails of hop arcs, ascending.
    pub fn negative_vertices(&self) -> &[usize] {
        &self.negative_vertices
    }

    #[inline]
    pub fn is_negative_vertex(&self, v: usize) -> bool {
        self.is_negative[v]
    }

    /// Hop arcs leaving `u`.
    pub fn hop_arcs_of(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_arcs(u).iter().copied().filter(move |&id| self.hop[id])
    }

    /// `Ū`: heads of the hop arcs of the negative vertices in `set`,
    /// ascending and deduplicated.
    pub fn heads_of(&self, set: &[usize]) -> Vec<usize> {
        let mut heads: Vec<usize> = set
            .iter()
            .flat_map(|&u| self.hop_arcs_of(u).map(|id| self.arcs[id].head))
            .collect();
        heads.sort_unstable();
        heads.dedup();
        heads
    }

    /// Looks for an arc `tail → head` of exactly length `len`.
    pub fn has_arc(&self, tail: usize, head: usize, len: Length) -> bool {
        tail < self.n
            && self
                .out_arcs(tail)
                .iter()
                .any(|&id| self.arcs[id].head == head && self.arcs[id].len == len)
    }

    /// Length of arc `id` under potentials `φ`: `ℓ(u,v) + φ(u) − φ(v)`.
    #[inline]
    pub fn reduced_len(&self, id: usize, phi: &PotentialVector) -> Length {
        let a = self.arcs[id];
        checked(checked(a.len, phi[a.tail]), -phi[a.head])
    }

    /// The reweighted view `G_φ`. Hop flags are carried over unchanged.
    pub fn reweighted(&self, phi: &PotentialVector) -> WeightedDigraph {
        assert_eq!(phi.len(), self.n, "potential size mismatch");
        let mut g = self.clone();
        for id in 0..self.m() {
            g.arcs[id].len = self.reduced_len(id, phi);
        }
        for a in g.out_adj.iter_mut().chain(g.in_adj.iter_mut()) {
            a.len = g.arcs[a.id].len;
        }
        g
    }

    /// Takes a fresh snapshot of the negative set: hop arcs become exactly
    /// the arcs that are currently negative.
    pub fn refreeze(&self) -> WeightedDigraph {
        let hop = self.arcs.iter().map(|a| a.len < 0).collect();
        Self::with_hop_flags(self.n, self.arcs.clone(), hop).expect("endpoints already checked")
    }

    /// `true` iff no non-hop arc becomes negative under `φ`.
    pub fn is_valid_potential(&self, phi: &PotentialVector) -> bool {
        phi.len() == self.n
            && (0..self.m()).all(|id| self.hop[id] || self.reduced_len(id, phi) >= 0)
    }

    /// `true` iff every hop arc leaving a vertex of `set` is nonnegative
    /// under `φ`.
    pub fn neutralizes(&self, phi: &PotentialVector, set: &[usize]) -> bool {
        set.iter()
            .all(|&u| self.hop_arcs_of(u).all(|id| self.reduced_len(id, phi) >= 0))
    }

    /// `G_U`: keeps every non-hop arc and the hop arcs of vertices in `set`.
    pub fn restrict_negatives(&self, set: &[usize]) -> Result<WeightedDigraph, GraphError> {
        let mut keep = vec![false; self.n];
        for &u in set {
            if u >= self.n || !self.is_negative[u] {
                return Err(GraphError::NotNegative(u));
            }
            keep[u] = true;
        }
        let (arcs, hop): (Vec<Arc>, Vec<bool>) = self
            .arcs
            .iter()
            .zip(&self.hop)
            .filter(|(a, &h)| !h || keep[a.tail])
            .map(|(a, &h)| (*a, h))
            .unzip();
        Self::with_hop_flags(self.n, arcs, hop)
    }

    /// `G⁺ = G_∅`.
    pub fn positive_part(&self) -> WeightedDigraph {
        self.restrict_negatives(&[]).expect("empty set is always a subset")
    }

    /// Subgraph induced by `vertices` (ascending, deduplicated), relabelled
    /// to `0..vertices.len()`. Returns the subgraph and the global→local map
    /// (`usize::MAX` for vertices outside the set).
    pub fn induced(&self, vertices: &[usize]) -> (WeightedDigraph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut arcs = Vec::new();
        let mut hop = Vec::new();
        for (a, &h) in self.arcs.iter().zip(&self.hop) {
            if local[a.tail] != usize::MAX && local[a.head] != usize::MAX {
                arcs.push(Arc::new(local[a.tail], local[a.head], a.len));
                hop.push(h);
            }
        }
        let g = Self::with_hop_flags(vertices.len(), arcs, hop).expect("local ids in range");
        (g, local)
    }

    /// Sum of |ℓ| over all arcs.
    pub fn total_abs_length(&self) -> Length {
        self.arcs.iter().fold(0, |acc, a| checked(acc, a.len.abs()))
    }
}

fn csr(n: usize, keys: impl Iterator<Item = usize> + Clone) -> (Vec<usize>, Vec<usize>) {
    let mut offsets = vec![0usize; n + 1];
    for k in keys.clone() {
        offsets[k + 1] += 1;
    }
    for v in 0..n {
        offsets[v + 1] += offsets[v];
    }
    let mut fill = offsets.clone();
    let mut ids = vec![0usize; offsets[n]];
    for (id, k) in keys.enumerate() {
        ids[fill[k]] = id;
        fill[k] += 1;
    }
    (offsets, ids)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::WeightedDigraph;

    /// `s→a:−2, a→t:3` with s=0, a=1, t=2.
    pub fn ga() -> WeightedDigraph {
        WeightedDigraph::new(3, [(0, 1, -2), (1, 2, 3)]).unwrap()
    }

    /// `a→b:−1, b→a:0`.
    pub fn gb() -> WeightedDigraph {
        WeightedDigraph::new(2, [(0, 1, -1), (1, 0, 0)]).unwrap()
    }

    /// `s→a:−1, a→b:1, b→c:−1, c→t:0` with s,a,b,c,t = 0..5.
    pub fn gc() -> WeightedDigraph {
        WeightedDigraph::new(5, [(0, 1, -1), (1, 2, 1), (2, 3, -1), (3, 4, 0)]).unwrap()
    }

    /// `s→a:−2, a→u:1, u→b:−2` with s,a,u,b = 0..4.
    pub fn ge() -> WeightedDigraph {
        WeightedDigraph::new(4, [(0, 1, -2), (1, 2, 1), (2, 3, -2)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::oracle::bellman_ford_from;

    #[test]
    fn build_small_graphs() {
        let g = ga();
        assert_eq!((g.n(), g.m()), (3, 2));
        assert_eq!(g.negative_vertices(), &[0]);

        let g = WeightedDigraph::new(1, []).unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));
        assert!(g.negative_vertices().is_empty());

        let g = WeightedDigraph::new(3, [(0, 1, -2), (0, 1, -2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.negative_vertices(), &[0]);
    }

    #[test]
    fn out_of_range_endpoint_is_rejected() {
        let err = WeightedDigraph::new(2, [(0, 1, 1), (1, 2, 1)]).unwrap_err();
        assert_eq!(err, GraphError::EndpointOutOfRange { index: 1, vertex: 2, n: 2 });
    }

    #[test]
    fn reweighting_ga() {
        let g = ga();
        let id = g.reweighted(&PotentialVector::zeros(3));
        assert_eq!(id.arcs(), g.arcs());

        let phi = PotentialVector::from(vec![0, -2, 0]);
        let r = g.reweighted(&phi);
        assert_eq!(r.arc(0).len, 0);
        assert_eq!(r.arc(1).len, 1);
        for v in 0..3 {
            assert!(r.out_adj(v).iter().chain(r.in_adj(v)).all(|a| a.len == r.arc(a.id).len));
        }
        // frozen set survives reweighting
        assert_eq!(r.negative_vertices(), &[0]);
    }

    #[test]
    fn validity_on_ga() {
        let g = ga();
        assert!(g.is_valid_potential(&PotentialVector::zeros(3)));
        let phi = PotentialVector::from(vec![0, 3, 0]);
        assert_eq!(g.reduced_len(0, &phi), -5);
        assert_eq!(g.reduced_len(1, &phi), 6);
        assert!(g.is_valid_potential(&phi));
        let phi = PotentialVector::from(vec![0, 0, 5]);
        assert_eq!(g.reduced_len(1, &phi), -2);
        assert!(!g.is_valid_potential(&phi));
    }

    #[test]
    fn restriction() {
        let g = gc();
        let plus = g.restrict_negatives(&[]).unwrap();
        assert!(plus.arcs().iter().all(|a| a.len >= 0));
        assert_eq!(plus.m(), 2);
        let full = g.restrict_negatives(&[0, 2]).unwrap();
        assert_eq!(full.arcs(), g.arcs());

        let gu = g.restrict_negatives(&[0]).unwrap();
        assert!(!gu.has_arc(2, 3, -1));
        let d = bellman_ford_from(&gu, 0).unwrap();
        assert_eq!(d[2], crate::Dist::Finite(0));
        assert_eq!(d[4], crate::Dist::Infinite);

        assert_eq!(g.restrict_negatives(&[1]).unwrap_err(), GraphError::NotNegative(1));
    }

    #[test]
    fn heads_and_induced() {
        let g = gc();
        assert_eq!(g.heads_of(&[0, 2]), vec![1, 3]);
        let (sub, local) = g.induced(&[1, 2, 3]);
        assert_eq!(sub.n(), 3);
        assert_eq!(sub.m(), 2);
        assert_eq!(local[2], 1);
        assert_eq!(local[0], usize::MAX);
        assert_eq!(sub.negative_vertices(), &[1]);
    }
}
