use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EnvelopeFamily, ForgeParams, ReducerGraph};
use crate::dist::Dist;
use crate::hop::{hop_distances, Direction, SourceSpec};
use crate::log2_ceil;

/// Valid distance estimates `δ_i(s, t)` for `s ∈ U`, `t ∈ Ū` at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateTable {
    pub level: usize,
    /// `U`, ascending.
    pub sources: Vec<usize>,
    /// `Ū`, ascending.
    pub targets: Vec<usize>,
    /// Row-major `|U| × |Ū|`; `Infinite` means no shortcut arc.
    pub delta: Vec<Dist>,
    /// `λ_i(t) = min over (x, y) ∈ ∂⁺(V_i) of d⁰_i(t, x) + ℓ(x, y)`.
    pub lambda: Vec<Dist>,
    /// `U₀`.
    pub sample: Vec<usize>,
}

impl EstimateTable {
    /// `δ` by row index into `sources` and column index into `targets`.
    pub fn get(&self, si: usize, ti: usize) -> Dist {
        self.delta[si * self.targets.len() + ti]
    }

    /// Property (3): `δ(s, t) ≥ −λ(t)` for every finite entry.
    pub fn respects_boundary(&self) -> bool {
        (0..self.sources.len()).all(|si| {
            self.lambda.iter().enumerate().all(|(ti, &l)| match (self.get(si, ti), l) {
                (Dist::Finite(d), Dist::Finite(l)) => d + l >= 0,
                _ => true,
            })
        })
    }
}

/// Reads level-`i` estimates off `H_i`:
/// `δ_i(s, t) = max{min_{u ∈ U₀} d²_{H_i}(s, u) + d²_{H_i}(u, t), −λ_i(t)}`.
/// An empty or unreachable minimum leaves the entry infinite.
pub fn estimates_from_reducer<R: Rng + ?Sized>(
    reducer: &ReducerGraph,
    env: &EnvelopeFamily,
    i: usize,
    params: &ForgeParams,
    rng: &mut R,
) -> EstimateTable {
    assert_eq!(reducer.level(), i, "reducer level mismatch");
    let set = env.set();
    let heads = env.heads();
    let n = env.graph().n();
    let p = params.c_s * log2_ceil(n) as f64 / (1u64 << i.min(62)) as f64;
    let sample: Vec<usize> = set.iter().copied().filter(|_| p >= 1.0 || rng.gen_bool(p)).collect();

    let e = env.level(i);
    let boundary = e.boundary.iter().map(|a| (e.local[a.tail], a.len));
    let lam = hop_distances(&e.graph, &SourceSpec::new(boundary, Direction::Reverse), 0, false);
    let lambda: Vec<Dist> = heads.iter().map(|&t| lam.last()[e.local[t]]).collect();

    let base = |v: usize| reducer.base(v).expect("U ∪ Ū ⊆ V_i");
    let via: Vec<(Vec<Dist>, Vec<Dist>)> = sample
        .par_iter()
        .map(|&u| {
            let g = reducer.graph();
            let fwd = hop_distances(g, &SourceSpec::single(base(u), Direction::Forward), 2, false);
            let rev = hop_distances(g, &SourceSpec::single(base(u), Direction::Reverse), 2, false);
            let to_u = set.iter().map(|&s| rev.last()[base(s)]).collect();
            let from_u = heads.iter().map(|&t| fwd.last()[base(t)]).collect();
            (to_u, from_u)
        })
        .collect();

    let mut delta = vec![Dist::Infinite; set.len() * heads.len()];
    for (si, row) in delta.chunks_mut(heads.len().max(1)).enumerate().take(set.len()) {
        for (ti, cell) in row.iter_mut().enumerate() {
            let best = via.iter().map(|(to_u, from_u)| to_u[si].join(from_u[ti])).min().unwrap_or(Dist::Infinite);
            *cell = match (best, lambda[ti]) {
                (Dist::Finite(d), Dist::Finite(l)) => Dist::Finite(d.max(-l)),
                (b, _) => b,
            };
        }
    }
    let table = EstimateTable { level: i, sources: set.to_vec(), targets: heads.to_vec(), delta, lambda, sample };
    assert!(table.respects_boundary(), "estimate property (3) violated");
    if params.check_estimates {
        assert!(dominates_true_distances(&table, env), "estimate property (1) violated");
    }
    table
}

/// Property (1): `δ_i(s, t) ≥ d_i(s, t)`, with `d_i` computed exactly in
/// `G_i`. Sources that reach a negative cycle are skipped.
pub(crate) fn dominates_true_distances(table: &EstimateTable, env: &EnvelopeFamily) -> bool {
    let e = env.level(table.level);
    let k = e.graph.negative_vertices().len();
    table.sources.iter().enumerate().all(|(si, &s)| {
        let t = hop_distances(&e.graph, &SourceSpec::single(e.local[s], Direction::Forward), k + 1, false);
        if t.stable_at().is_none() {
            return true;
        }
        table.targets.iter().enumerate().all(|(ti, &x)| table.get(si, ti) >= t.last()[e.local[x]])
    })
}
