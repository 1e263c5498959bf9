//! Negative-length single-source shortest paths.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`]: the digraph with a frozen set of negative ("hop") arcs,
//!   potentials, walks and the degree-bounding preprocessing transform.
//! - [`hop`]: hop-limited distances (Dijkstra rounds interleaved with one
//!   layer of negative arcs), Johnson potentials and negative reach.
//! - [`proper`]: the probe that returns a negative cycle, a negative proper
//!   walk between sampled negative vertices, or exact distances.
//! - [`sandwich`]: multiscale betweenness reduction and sandwich probing.
//! - [`forge`]: remotization, envelopes, distance estimates and the
//!   bootstrapped hop reducer.
//! - [`solver`]: the iteration driver, the Bellman-Ford baseline and the
//!   result checker.
//! - [`dimacs`], [`generate`], [`oracle`]: file format, instance generators
//!   and brute-force oracles used by the workbench and the test suites.

pub mod dimacs;
pub mod dist;
pub mod forge;
pub mod generate;
pub mod graph;
pub mod hop;
pub mod oracle;
pub mod proper;
pub mod sandwich;
pub mod solver;
pub mod stats;

pub use dist::{Dist, Length};
pub use graph::{Arc, GraphError, PotentialVector, PreprocessMapping, Walk, WeightedDigraph};
pub use hop::{Direction, HopDistanceTable, JohnsonOutcome, SourceSpec};
pub use proper::ProbeOutcome;
pub use sandwich::{SandwichCert, SandwichOutcome};
pub use forge::{EnvelopeFamily, EstimateTable, ForgeError, ReducerGraph};
pub use solver::{IterationReport, SolveOutput, SolveResult, SolverConfig};

/// `⌈log₂ n⌉`, floored at 1 so that it can be used as a multiplier.
pub fn log2_ceil(n: usize) -> usize {
    if n <= 2 {
        1
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::log2_ceil;

    #[test]
    fn log2_ceil_values() {
        assert_eq!(log2_ceil(0), 1);
        assert_eq!(log2_ceil(2), 1);
        assert_eq!(log2_ceil(3), 2);
        assert_eq!(log2_ceil(4), 2);
        assert_eq!(log2_ceil(5), 3);
        assert_eq!(log2_ceil(256), 8);
        assert_eq!(log2_ceil(257), 9);
    }
}
