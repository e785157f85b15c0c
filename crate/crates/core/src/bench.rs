//! Benchmark runner: solves a set of instances, possibly in parallel, and
//! summarizes KKT passes with the shifted geometric mean.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instances::handcrafted_suite;
use crate::lp::LinearProgram;
use crate::mps::{read_mps_file, MpsError};
use crate::solver::{solve, SolverParams, TerminationReason};
use crate::termination::sgm10;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchInstance {
    pub name: String,
    pub lp: LinearProgram,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub name: String,
    pub termination_reason: TerminationReason,
    pub kkt_passes: f64,
    pub iterations: usize,
    pub objective: f64,
}

impl BenchRecord {
    pub fn solved(&self) -> bool {
        self.termination_reason == TerminationReason::Optimal
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    /// Sorted by instance name.
    pub records: Vec<BenchRecord>,
    pub kkt_pass_limit: f64,
}

impl BenchReport {
    pub fn num_solved(&self) -> usize {
        self.records.iter().filter(|r| r.solved()).count()
    }

    /// Passes charged to each instance for aggregation: unsolved instances
    /// count at the pass limit when one is set.
    pub fn charged_passes(&self) -> Vec<f64> {
        self.records
            .iter()
            .map(|r| {
                if !r.solved() && self.kkt_pass_limit.is_finite() {
                    self.kkt_pass_limit.max(r.kkt_passes)
                } else {
                    r.kkt_passes
                }
            })
            .collect()
    }

    pub fn sgm10_kkt_passes(&self) -> Result<f64> {
        sgm10(&self.charged_passes())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("instance,termination_reason,solved,kkt_passes,iterations,objective\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{:?},{},{},{},{:?}",
                r.name,
                r.termination_reason,
                r.solved(),
                r.kkt_passes,
                r.iterations,
                r.objective
            );
        }
        if let Ok(sgm) = self.sgm10_kkt_passes() {
            let _ = writeln!(out, "SGM10,,{}/{},{sgm:.6},,", self.num_solved(), self.records.len());
        }
        out
    }
}

/// Solves every instance with `params` on `threads` worker threads. Each
/// solve is single-threaded, so results do not depend on `threads`.
pub fn run_bench(instances: &[BenchInstance], params: &SolverParams, threads: usize) -> Result<BenchReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let mut records = pool.install(|| {
        instances
            .par_iter()
            .map(|inst| {
                let r = solve(&inst.lp, params, None)?;
                Ok(BenchRecord {
                    name: inst.name.clone(),
                    termination_reason: r.termination_reason,
                    kkt_passes: r.kkt_passes(),
                    iterations: r.iterations,
                    objective: r.primal_objective(),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(BenchReport { records, kkt_pass_limit: params.kkt_pass_limit })
}

pub fn handcrafted_instances() -> Vec<BenchInstance> {
    handcrafted_suite().into_iter().map(|c| BenchInstance { name: c.name.to_string(), lp: c.lp }).collect()
}

/// Every `*.mps` file in `dir`, sorted by file name. Maximization problems
/// are solved in their negated form.
pub fn load_corpus(dir: &Path) -> Result<Vec<BenchInstance>, MpsError> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("mps")))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let model = read_mps_file(&p)?;
            let name = p.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            Ok(BenchInstance { name, lp: model.lp })
        })
        .collect()
}
