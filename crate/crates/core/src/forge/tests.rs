use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dist::Dist;
use crate::graph::fixtures::*;
use crate::oracle::{self, ProperWalkEnumerator};

fn shifted(n: usize, m: usize, seed: u64) -> WeightedDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi: Vec<i64> = (0..n).map(|_| rng.gen_range(0..10)).collect();
    let arcs: Vec<_> = (0..m)
        .map(|_| {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            (u, v, rng.gen_range(0..5) + pi[u] - pi[v])
        })
        .collect();
    WeightedDigraph::new(n, arcs).unwrap()
}

/// `d_G(s,t) ≤ d_H^{⌈κ/factor⌉}(s_b, t_b) ≤ d_G^κ(s,t)` for all pairs and
/// `κ ≤ kmax`, against Bellman-Ford and the naive hop recurrence.
fn sandwich_holds(g: &WeightedDigraph, h: &ReducerGraph, factor: usize, kmax: usize) -> bool {
    (0..g.n()).all(|s| {
        let exact = oracle::bellman_ford_from(g, s).expect("no negative cycle");
        let hops = oracle::naive_hop_distances(g, &[(s, 0)], Direction::Forward, kmax);
        let reduced = oracle::naive_hop_distances(h.graph(), &[(h.base(s).unwrap(), 0)], Direction::Forward, kmax);
        (0..=kmax).all(|k| {
            let mid = &reduced[k.div_ceil(factor)];
            (0..g.n()).all(|t| {
                let m = mid[h.base(t).unwrap()];
                exact[t] <= m && m <= hops[k][t]
            })
        })
    })
}

/// Property (2): `δ_i(s,t) ≤ d̂^η_i(s,t)` for every `η ∈ [2^{i−1}, 2^i]`.
fn below_proper_distances(table: &EstimateTable, env: &EnvelopeFamily) -> bool {
    let e = env.level(table.level);
    let en = ProperWalkEnumerator::new(&e.graph);
    let lo = 1usize << (table.level - 1);
    let hi = (1usize << table.level).min(env.set().len());
    table.sources.iter().enumerate().all(|(si, &s)| {
        table.targets.iter().enumerate().all(|(ti, &t)| {
            (lo..=hi).all(|eta| table.get(si, ti) <= en.distance(e.local[s], e.local[t], eta))
        })
    })
}

fn forge_params() -> ForgeParams {
    ForgeParams { c_s: 4.0, enforce_envelope_sizes: false, check_estimates: true }
}

#[test]
fn remotize_ge_is_valid() {
    let g = ge();
    let phi = remotize(&g, 0, 2, 2);
    assert!(g.is_valid_potential(&phi));
    // Forward from s: (0, −2, −1, −3); reverse to u: −d(v, u) = (1, −1, 0, clamp).
    assert_eq!(phi.as_slice(), &[0, -2, -1, -3]);
}

#[test]
fn remotize_nonnegative() {
    let g = WeightedDigraph::new(3, [(0, 1, 2), (1, 2, 3)]).unwrap();
    let phi = remotize(&g, 0, 2, 3);
    assert_eq!(phi.as_slice(), &[-5, -3, 0]);
    assert!(g.is_valid_potential(&phi));
}

#[test]
fn level_one_reducer_is_g1() {
    let g = ga();
    let env = build_envelopes(&g, &[0], 4, false).unwrap();
    let h = reducer_from_estimates(&env, &[], 1).unwrap();
    assert_eq!(h.graph().arcs(), env.level(1).graph.arcs());
    assert_eq!(h.count(ArcKind::Negative), 1);
    assert!(h.dump().starts_with("reducer level 1 copies 2 arcs 1\n"));
}

#[test]
fn gc_pipeline_neutralizes() {
    let g = gc();
    let set = [0, 2];
    let env = build_envelopes(&g, &set, 2, false).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (tables, h) = bootstrap(&env, &forge_params(), &mut rng).unwrap();
    assert_eq!(tables.len(), 1);
    assert!(sandwich_holds(&g, &h, 2, 2));
    let psi = neutralize_via_reducer(&g, &set, &h, 2).unwrap();
    let r = g.reweighted(&psi);
    assert!(r.arcs().iter().all(|a| a.len >= 0));
    let before = oracle::bellman_ford_from(&g, 0).unwrap();
    let after = oracle::bellman_ford_from(&r, 0).unwrap();
    for v in 0..g.n() {
        assert_eq!(before[v], after[v].plus(psi[v] - psi[0]));
    }
}

#[test]
fn layered_gc() {
    let g = gc();
    let h = layered_reducer(&g, &[0, 2], 2);
    assert!(sandwich_holds(&g, &h, 2, 2));
    assert_eq!(h.count(ArcKind::Negative), 2 * 2);
    let psi = neutralize_via_reducer(&g, &[0, 2], &h, 2).unwrap();
    assert!(g.reweighted(&psi).arcs().iter().all(|a| a.len >= 0));
}

#[test]
fn layered_one_layer() {
    let g = ga();
    let h = layered_reducer(&g, &[0], 1);
    assert_eq!(h.copies().len(), 3 + 2);
    assert!(sandwich_holds(&g, &h, 1, 1));
}

#[test]
fn bootstrap_on_random_instances() {
    let mut passed = 0;
    for seed in 0..20 {
        let g0 = shifted(16, 40, seed);
        let set: Vec<usize> = g0.negative_vertices().iter().copied().take(5).collect();
        assert!(set.len() >= 3);
        let g = g0.restrict_negatives(&set).unwrap();
        let h = 4;
        let env = build_envelopes(&g, &set, h, false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (tables, hl) = bootstrap(&env, &forge_params(), &mut rng).unwrap();
        for t in &tables {
            assert!(t.respects_boundary());
            assert!(estimate::dominates_true_distances(t, &env));
        }
        let shortcuts: usize = tables.iter().map(|t| t.delta.iter().filter(|d| d.is_finite()).count()).sum();
        assert_eq!(hl.count(ArcKind::Shortcut), shortcuts);
        let ok = sandwich_holds(&g, &hl, 1 << (env.levels() - 1), set.len())
            && tables.iter().all(|t| below_proper_distances(t, &env));
        let psi = neutralize_via_reducer(&g, &set, &hl, h);
        if ok {
            assert!(psi.is_ok());
            passed += 1;
        }
    }
    assert!(passed >= 19, "only {passed}/20 seeds passed");
}

#[test]
fn corrupted_estimates_are_caught() {
    let g = gc();
    let set = [0, 2];
    let env = build_envelopes(&g, &set, 2, false).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h1 = reducer_from_estimates(&env, &[], 1).unwrap();
    let mut t = estimates_from_reducer(&h1, &env, 1, &forge_params(), &mut rng);
    t.delta.iter_mut().for_each(|d| *d = Dist::Infinite);
    let h2 = reducer_from_estimates(&env, &[t], 2).unwrap();
    assert_eq!(neutralize_via_reducer(&g, &set, &h2, 2), Err(ForgeError::NotNeutralized));
}

#[test]
fn empty_set_needs_nothing() {
    let g = ga().positive_part();
    let env = build_envelopes(&g, &[], 2, true).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = bootstrap_reducer(&env, &forge_params(), &mut rng).unwrap();
    assert_eq!(neutralize_via_reducer(&g, &[], &h, 2).unwrap(), PotentialVector::zeros(3));
}
