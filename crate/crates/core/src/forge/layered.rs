use super::{ArcKind, ReducerGraph};
use crate::dist::Length;
use crate::graph::{Arc, PotentialVector, WeightedDigraph};
use crate::hop::{hop_distances, negative_reach, Direction, SourceSpec};

/// The `r`-layer hop reducer for `G_U`.
///
/// Layer 0 is `G⁺`; layers `1..=r` copy `G_X⁺` for
/// `X = U ∪ Ū ∪ (r-hop negative reach of U)`. Negative arcs step one layer
/// up, self arcs step up for free, exit arcs drop back to layer 0 and the
/// wrap-around self arcs `(v_r, v_0)` are the only hops. Potentials are
/// `φ(v_ℓ) = d^ℓ(V, v)`.
pub fn layered_reducer(g_u: &WeightedDigraph, set: &[usize], r: usize) -> ReducerGraph {
    assert!(r >= 1, "layered reducer needs r >= 1");
    let n = g_u.n();
    let mut member = vec![false; n];
    for &v in set.iter().chain(&g_u.heads_of(set)).chain(&negative_reach(g_u, set, r)) {
        member[v] = true;
    }
    let xs: Vec<usize> = (0..n).filter(|&v| member[v]).collect();
    let mut local_x = vec![usize::MAX; n];
    for (i, &v) in xs.iter().enumerate() {
        local_x[v] = i;
    }

    let mut copies: Vec<(usize, usize)> = (0..n).map(|v| (v, 0)).collect();
    let mut offsets = vec![0];
    for layer in 1..=r {
        offsets.push(copies.len());
        copies.extend(xs.iter().map(|&v| (v, layer)));
    }
    let at = |v: usize, layer: usize| if layer == 0 { v } else { offsets[layer] + local_x[v] };

    let mut arcs = Vec::new();
    let mut kinds = Vec::new();
    let mut push = |a: Arc, k: ArcKind| {
        arcs.push(a);
        kinds.push(k);
    };
    for (id, a) in g_u.arcs().iter().enumerate() {
        if g_u.is_hop(id) {
            for layer in 0..r {
                if layer == 0 || member[a.tail] {
                    push(Arc::new(at(a.tail, layer), at(a.head, layer + 1), a.len), ArcKind::Negative);
                }
            }
            continue;
        }
        push(Arc::new(a.tail, a.head, a.len), ArcKind::Base);
        match (member[a.tail], member[a.head]) {
            (true, true) => {
                for layer in 1..=r {
                    push(Arc::new(at(a.tail, layer), at(a.head, layer), a.len), ArcKind::Base);
                }
            }
            (true, false) => {
                for layer in 1..=r {
                    push(Arc::new(at(a.tail, layer), a.head, a.len), ArcKind::Exit);
                }
            }
            _ => {}
        }
    }
    for &v in &xs {
        for layer in 0..r {
            push(Arc::new(at(v, layer), at(v, layer + 1), 0), ArcKind::SelfArc);
        }
    }
    for &v in &xs {
        push(Arc::new(at(v, r), v, 0), ArcKind::SelfArc);
    }
    let first_wrap = arcs.len() - xs.len();

    let table = hop_distances(g_u, &SourceSpec::all_vertices(n, Direction::Forward), r, true);
    let phi: Vec<Length> = copies
        .iter()
        .map(|&(v, layer)| table.dist(layer, v).finite().expect("all-vertex distances are finite"))
        .collect();
    let phi = PotentialVector::from(phi);

    let raw = arcs.iter().map(|a| a.len).collect();
    let hop = (0..arcs.len()).map(|id| id >= first_wrap).collect();
    let graph = WeightedDigraph::with_hop_flags(copies.len(), arcs, hop)
        .expect("copy ids in range")
        .reweighted(&phi);
    debug_assert!((0..graph.m()).all(|id| graph.is_hop(id) || graph.arc(id).len >= 0));

    let mut locals = vec![(0..n).collect::<Vec<usize>>()];
    locals.extend(std::iter::repeat_n(local_x, r));
    ReducerGraph {
        level: r,
        first_level: 0,
        base_level: 0,
        copies,
        offsets,
        locals,
        kinds,
        raw,
        graph,
        potentials: phi,
    }
}
