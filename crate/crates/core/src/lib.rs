//! A first-order linear programming solver based on restarted primal-dual
//! hybrid gradient iterations.
//!
//! Problems are stated as
//!
//! ```text
//! min  cᵀx + offset   s.t.  Gx ≥ h,  Ax = b,  l ≤ x ≤ u
//! ```
//!
//! with `K = [G; A]` stored as a [`SparseMatrix`] and `q = [h; b]`. The
//! usual entry point is [`solve`]:
//!
//! ```
//! use folp_core::{solve, LinearProgram, SolverParams, SparseMatrix, TerminationReason};
//!
//! // min x  s.t.  x ≥ 1, x ≥ 0
//! let lp = LinearProgram::new(
//!     vec![1.0],
//!     SparseMatrix::identity(1),
//!     vec![1.0],
//!     1,
//!     vec![0.0],
//!     vec![f64::INFINITY],
//! )
//! .unwrap();
//! let result = solve(&lp, &SolverParams::default(), None).unwrap();
//! assert_eq!(result.termination_reason, TerminationReason::Optimal);
//! assert!((result.primal_solution[0] - 1.0).abs() < 1e-6);
//! ```

pub mod bench;
pub mod error;
pub mod instances;
pub mod linalg;
pub mod lp;
pub mod mps;
pub mod output;
pub mod presolve;
pub mod scaling;
pub mod solver;
pub mod sparse;
pub mod termination;

pub use error::{Error, Result};
pub use instances::{barabasi_albert, handcrafted_suite, pagerank_lp, random_lp, Graph, HandcraftedLp};
pub use lp::{weighted_norm, LinearProgram, PrimalDualPoint, ReducedCosts};
pub use mps::{parse_mps, write_mps, MpsError, MpsModel, ObjectiveSense};
pub use output::{write_result, ResultSummary};
pub use presolve::{postsolve, presolve, PresolveTransform};
pub use scaling::{rescale_problem, unscale_point, DiagonalScaling};
pub use solver::{
    solve, solve_with_observer, RestartScheme, SolveResult, SolverParams, SolverState, StepEvent, StepPolicy,
    TerminationReason, TraceEntry,
};
pub use sparse::{estimate_spectral_norm, PowerIteration, SparseMatrix};
pub use termination::{
    check_termination, convergence_info, kkt_passes, sgm10, shifted_geometric_mean, ConvergenceInfo, KktPassLedger,
};
