use hopforge_bench::instances;
use hopforge_core::solver::{bellman_ford, solve, verify};
use hopforge_core::{SolveResult, SolverConfig};

#[test]
fn bench_instances_have_no_negative_cycle_and_solve_agrees() {
    for (label, g) in instances().into_iter().take(2) {
        let out = solve(&g, 0, &SolverConfig::default());
        verify(&g, &out.result).unwrap();
        let (SolveResult::Distances { dist, .. }, SolveResult::Distances { dist: expected, .. }) =
            (&out.result, &bellman_ford(&g, 0))
        else {
            panic!("{label}: unexpected negative cycle");
        };
        assert_eq!(dist, expected, "{label}");
    }
}
