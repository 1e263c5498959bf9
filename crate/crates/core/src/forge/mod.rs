//! Remotization, envelopes, distance estimates and hop reducers.
//!
//! Given a remotized `G_U`, the envelopes `V_1 ⊆ … ⊆ V_L = V` hold the
//! `2^i`-hop negative reach of `U`. Reducers and estimates are built by
//! alternation: `H_1 = G_1`, estimates `δ_1` from `H_1`, `H_2` from `δ_1`,
//! and so on up to `H_L`, an `h`-hop reducer for all of `G_U`.

mod envelope;
mod estimate;
mod layered;
mod reducer;

pub use envelope::{build_envelopes, Envelope, EnvelopeFamily};
pub use estimate::{estimates_from_reducer, EstimateTable};
pub use layered::layered_reducer;
pub use reducer::{reducer_from_estimates, ArcKind, ReducerGraph};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{certify_potential, PotentialVector, WeightedDigraph};
use crate::hop::{hop_distances, Direction, SourceSpec};
use crate::sandwich::SandwichCert;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForgeError {
    #[error("envelope level {level} has {size} vertices outside U, bound is {bound}")]
    EnvelopeTooLarge { level: usize, size: usize, bound: usize },
    #[error("Johnson on the level-{level} reducer did not stabilize after one round")]
    Unstable { level: usize },
    #[error("reducer potentials do not neutralize U")]
    NotNeutralized,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForgeParams {
    /// `U₀` keeps each vertex with probability `min(1, c_s⌈log₂ n⌉ / 2^i)`.
    pub c_s: f64,
    /// Reject envelopes with `|V_i \ U| > n·2^i/h`.
    pub enforce_envelope_sizes: bool,
    /// Recompute `d_i(s, t)` exactly to check `δ_i(s, t) ≥ d_i(s, t)`.
    pub check_estimates: bool,
}

impl Default for ForgeParams {
    fn default() -> Self {
        ForgeParams { c_s: 4.0, enforce_envelope_sizes: true, check_estimates: false }
    }
}

/// `φ(v) = min{d^{h₀}(s, v), −d^{h₀}(v, t)}`. Unreachable entries are
/// clamped as in [`PotentialVector::from_forward`] and
/// [`PotentialVector::from_reverse`], which keeps both halves valid.
pub fn remotize(g: &WeightedDigraph, s: usize, t: usize, h0: usize) -> PotentialVector {
    let (fwd, rev) = rayon::join(
        || hop_distances(g, &SourceSpec::single(s, Direction::Forward), h0, false),
        || hop_distances(g, &SourceSpec::single(t, Direction::Reverse), h0, false),
    );
    let phi = PotentialVector::from_forward(fwd.last()).pointwise_min(&PotentialVector::from_reverse(rev.last()));
    assert!(certify_potential(g, &phi), "remotization potentials invalid");
    phi
}

/// [`remotize`] for the endpoints of a sandwich certificate.
pub fn remotize_cert(g: &WeightedDigraph, cert: &SandwichCert) -> PotentialVector {
    remotize(g, cert.s, cert.t, cert.hop_budget)
}

/// Runs the alternation for levels `1..=L` and returns every estimate table
/// together with `H_L`.
pub fn bootstrap<R: Rng + ?Sized>(
    env: &EnvelopeFamily,
    params: &ForgeParams,
    rng: &mut R,
) -> Result<(Vec<EstimateTable>, ReducerGraph), ForgeError> {
    let big_l = env.levels();
    let mut tables = Vec::with_capacity(big_l.saturating_sub(1));
    for i in 1..big_l {
        let h = reducer_from_estimates(env, &tables, i)?;
        tables.push(estimates_from_reducer(&h, env, i, params, rng));
    }
    let h = reducer_from_estimates(env, &tables, big_l)?;
    Ok((tables, h))
}

/// `H_L` for a remotized `G_U`.
pub fn bootstrap_reducer<R: Rng + ?Sized>(
    env: &EnvelopeFamily,
    params: &ForgeParams,
    rng: &mut R,
) -> Result<ReducerGraph, ForgeError> {
    bootstrap(env, params, rng).map(|(_, h)| h)
}

/// Johnson potentials for `G_U` read off a reducer: `⌈|U|/h⌉` hop rounds
/// in `H` from every base copy, `ψ(v)` = value at `v`'s base copy.
pub fn neutralize_via_reducer(
    g_u: &WeightedDigraph,
    set: &[usize],
    reducer: &ReducerGraph,
    h: usize,
) -> Result<PotentialVector, ForgeError> {
    if set.is_empty() {
        return Ok(PotentialVector::zeros(g_u.n()));
    }
    let rounds = set.len().div_ceil(h.max(1));
    let base: Vec<usize> = (0..g_u.n()).map(|v| reducer.base(v).expect("H_L embeds every vertex")).collect();
    let spec = SourceSpec::new(base.iter().map(|&c| (c, 0)), Direction::Forward);
    let table = hop_distances(reducer.graph(), &spec, rounds, false);
    let last = table.last();
    let mut psi = Vec::with_capacity(g_u.n());
    for &c in &base {
        psi.push(last[c].finite().expect("base copies are sources"));
    }
    let psi = PotentialVector::from(psi);
    if g_u.is_valid_potential(&psi) && g_u.neutralizes(&psi, set) {
        assert!(certify_potential(g_u, &psi));
        Ok(psi)
    } else {
        Err(ForgeError::NotNeutralized)
    }
}

#[cfg(test)]
mod tests;
