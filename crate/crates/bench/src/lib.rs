//! Shared fixtures for the criterion benchmarks.

use folp_core::instances::{barabasi_albert, pagerank_lp, random_lp, RandomLpConfig, DEFAULT_ATTACH, DEFAULT_DAMPING};
use folp_core::{LinearProgram, PrimalDualPoint};

pub fn pagerank(nodes: usize) -> LinearProgram {
    let graph = barabasi_albert(nodes, DEFAULT_ATTACH, 7).expect("valid graph size");
    pagerank_lp(&graph, DEFAULT_DAMPING).expect("graph has no isolated nodes")
}

/// Dense random LP with `n` variables and `n/2` inequality rows.
pub fn random_dense(n: usize) -> LinearProgram {
    let config = RandomLpConfig {
        num_vars: n,
        num_inequalities: n / 2,
        num_equalities: n / 10,
        density: 1.0,
        scale_exponent: 1.0,
    };
    random_lp(&config, 11).expect("valid config").lp
}

/// A deterministic non-trivial point for kernel timings.
pub fn ramp_point(lp: &LinearProgram) -> PrimalDualPoint {
    let ramp = |len: usize| (0..len).map(|i| (i % 17) as f64 / 17.0).collect::<Vec<_>>();
    lp.project_point(&PrimalDualPoint::new(ramp(lp.num_vars()), ramp(lp.num_constraints()))).expect("dimensions match")
}
