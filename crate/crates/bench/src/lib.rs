//! Fixed benchmark instances, shared by the criterion benches and their
//! sanity test.

use hopforge_core::generate::{generate, InstanceSpec, Mode};
use hopforge_core::WeightedDigraph;

/// `(label, instance)` pairs: no negative cycle, increasing size.
pub fn instances() -> Vec<(String, WeightedDigraph)> {
    [(500, 2000, 0.1), (2000, 16000, 0.02), (5000, 40000, 0.02)]
        .into_iter()
        .map(|(n, m, neg_fraction)| {
            let spec = InstanceSpec { mode: Mode::Shifted, n, m, neg_fraction, weight_bound: 8, seed: 1 };
            (format!("n{n}_m{m}"), generate(&spec))
        })
        .collect()
}
