use crate::dist::Dist;
use crate::graph::{certify_potential, PotentialVector, Walk, WalkStep, WeightedDigraph};
use crate::stats;

use super::{tight_tree, SolveResult};

/// Textbook Bellman-Ford. Reports a negative cycle whenever `g` has one,
/// reachable from `s` or not, so that both solvers answer the same question.
pub fn bellman_ford(g: &WeightedDigraph, s: usize) -> SolveResult {
    assert!(s < g.n(), "source out of range");
    let n = g.n();

    // Zero-initialized labels act as a virtual source with an arc to every
    // vertex.
    let mut pot = vec![0i64; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut last = None;
    for _ in 0..n {
        last = None;
        stats::record_work(0, g.m() as u64);
        for (id, a) in g.arcs().iter().enumerate() {
            if pot[a.tail] + a.len < pot[a.head] {
                pot[a.head] = pot[a.tail] + a.len;
                pred[a.head] = Some(id);
                last = Some(a.head);
            }
        }
        if last.is_none() {
            break;
        }
    }
    if let Some(mut v) = last {
        // Walking n predecessors back from an update in round n lands on
        // the cycle.
        for _ in 0..n {
            v = g.arc(pred[v].expect("updated vertices have predecessors")).tail;
        }
        return SolveResult::NegativeCycle(cycle_through(g, &pred, v));
    }

    let mut dist = vec![Dist::Infinite; n];
    dist[s] = Dist::Finite(0);
    for _ in 0..n {
        let mut changed = false;
        stats::record_work(0, g.m() as u64);
        for a in g.arcs() {
            let cand = dist[a.tail].plus(a.len);
            if cand < dist[a.head] {
                dist[a.head] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let parent = tight_tree(g, s, &dist);
    let potentials = PotentialVector::from(pot);
    assert!(certify_potential(g, &potentials), "Bellman-Ford potentials invalid");
    SolveResult::Distances { source: s, dist, parent, potentials }
}

fn cycle_through(g: &WeightedDigraph, pred: &[Option<usize>], v: usize) -> Walk {
    let mut ids = Vec::new();
    let mut u = v;
    loop {
        let id = pred[u].expect("cycle vertices have predecessors");
        ids.push(id);
        u = g.arc(id).tail;
        if u == v {
            break;
        }
    }
    ids.reverse();
    let steps = ids.into_iter().map(|id| WalkStep { arc: g.arc(id), hop: g.is_hop(id) }).collect();
    Walk::from_steps(v, steps).expect("predecessor chain is continuous")
}

/// Checks a result against `g` without trusting how it was produced.
///
/// Distances: `d(s) = 0`, no arc can be relaxed, every finite vertex other
/// than `s` has a tight tree arc, parents lead back to `s`, infinite
/// vertices have no parent, and the potentials are valid. Together these
/// imply the labels are exact shortest-path distances.
pub fn verify(g: &WeightedDigraph, result: &SolveResult) -> Result<(), String> {
    match result {
        SolveResult::NegativeCycle(c) => {
            if c.certifies_negative_cycle(g) {
                Ok(())
            } else {
                Err(format!("walk of length {} with {} steps is not a negative cycle of the graph", c.length(), c.steps().len()))
            }
        }
        SolveResult::Distances { source, dist, parent, potentials } => {
            let (s, n) = (*source, g.n());
            if dist.len() != n || parent.len() != n || potentials.len() != n {
                return Err("result size does not match the graph".into());
            }
            if dist[s] != Dist::Finite(0) {
                return Err(format!("source {s} has label {}", dist[s]));
            }
            for a in g.arcs() {
                if dist[a.tail].plus(a.len) < dist[a.head] {
                    return Err(format!("arc {}->{} of length {} can still be relaxed", a.tail, a.head, a.len));
                }
                if a.len + potentials[a.tail] - potentials[a.head] < 0 {
                    return Err(format!("arc {}->{} is negative under the potentials", a.tail, a.head));
                }
            }
            for v in 0..n {
                match (v == s, dist[v], parent[v]) {
                    (true, _, None) | (false, Dist::Infinite, None) => {}
                    (false, Dist::Finite(_), Some(id)) => {
                        if id >= g.m() {
                            return Err(format!("parent arc {id} of {v} does not exist"));
                        }
                        let a = g.arc(id);
                        if a.head != v || dist[a.tail].plus(a.len) != dist[v] {
                            return Err(format!("parent arc of {v} is not tight"));
                        }
                    }
                    _ => return Err(format!("vertex {v} has an inconsistent parent")),
                }
            }
            // Tight parents strictly lower no label, so a parent cycle would be
            // a zero cycle; walking up at most n steps must reach s.
            for v in 0..n {
                if parent[v].is_none() {
                    continue;
                }
                let mut u = v;
                let mut steps = 0;
                while u != s {
                    match parent[u] {
                        Some(id) => u = g.arc(id).tail,
                        None => return Err(format!("parent chain from {v} stops at {u}")),
                    }
                    steps += 1;
                    if steps > n {
                        return Err(format!("parent chain from {v} does not reach the source"));
                    }
                }
            }
            Ok(())
        }
    }
}
