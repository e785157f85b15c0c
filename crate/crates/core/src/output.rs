//! Writing solve results: a JSON summary, plain-text solution vectors and a
//! separate timing file.
//!
//! The summary holds only quantities that are deterministic for fixed input,
//! so repeated runs produce byte-identical files. Wall-clock time goes to
//! `<stem>_timing.json`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::lp::LinearProgram;
use crate::mps::ObjectiveSense;
use crate::solver::{SolveResult, TerminationReason, TraceEntry};
use crate::termination::{convergence_info, ConvergenceInfo, KktPassLedger};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSummary {
    pub instance: String,
    pub termination_reason: TerminationReason,
    pub objective_sense: ObjectiveSense,
    /// In the instance's own sense.
    pub objective: f64,
    /// Diagnostics of the returned solution on the original problem
    /// (minimization form). Absent when presolve decided the outcome.
    pub original_problem: Option<ConvergenceInfo>,
    /// Diagnostics on the presolved problem, as used by the termination test.
    pub final_info: ConvergenceInfo,
    pub iterations: usize,
    pub restarts: usize,
    pub kkt_passes: f64,
    pub ledger: KktPassLedger,
    pub primal_weight: f64,
    pub step_size: f64,
    pub presolve_message: Option<String>,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

impl ResultSummary {
    pub fn new(instance: &str, lp: &LinearProgram, sense: ObjectiveSense, result: &SolveResult) -> Self {
        let detected = matches!(
            result.termination_reason,
            TerminationReason::PrimalInfeasibleDetected | TerminationReason::DualUnboundedDetected
        );
        let original_problem =
            if detected { None } else { convergence_info(lp, &result.primal_solution, &result.dual_solution).ok() };
        let minimized = original_problem.map_or(result.final_info.primal_objective, |i| i.primal_objective);
        let objective = match sense {
            ObjectiveSense::Minimize => minimized,
            ObjectiveSense::Maximize => -minimized,
        };
        Self {
            instance: instance.to_string(),
            termination_reason: result.termination_reason,
            objective_sense: sense,
            objective,
            original_problem,
            final_info: result.final_info,
            iterations: result.iterations,
            restarts: result.restarts,
            kkt_passes: result.kkt_passes(),
            ledger: result.ledger,
            primal_weight: result.primal_weight,
            step_size: result.step_size,
            presolve_message: result.presolve_message.clone(),
            trace: result.trace.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// Paths written by [`write_result`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultFiles {
    pub summary: PathBuf,
    pub primal: PathBuf,
    pub dual: PathBuf,
    pub reduced_costs: PathBuf,
    pub timing: PathBuf,
}

impl ResultFiles {
    pub fn new(dir: &Path, stem: &str) -> Self {
        let at = |suffix: &str| dir.join(format!("{stem}_{suffix}"));
        Self {
            summary: at("summary.json"),
            primal: at("primal.txt"),
            dual: at("dual.txt"),
            reduced_costs: at("reduced_costs.txt"),
            timing: at("timing.json"),
        }
    }
}

/// One value per line, formatted so that parsing recovers the exact `f64`.
pub fn format_vector(v: &[f64]) -> String {
    let mut out = String::with_capacity(v.len() * 24);
    for x in v {
        out.push_str(&format!("{x:?}\n"));
    }
    out
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>, std::num::ParseFloatError> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| l.trim().parse()).collect()
}

pub fn write_result(summary: &ResultSummary, result: &SolveResult, dir: &Path, stem: &str) -> io::Result<ResultFiles> {
    fs::create_dir_all(dir)?;
    let files = ResultFiles::new(dir, stem);
    fs::write(&files.summary, summary.to_json())?;
    fs::write(&files.primal, format_vector(&result.primal_solution))?;
    fs::write(&files.dual, format_vector(&result.dual_solution))?;
    fs::write(&files.reduced_costs, format_vector(&result.reduced_costs))?;
    let timing = Timing { wall_seconds: result.wall_seconds };
    fs::write(&files.timing, serde_json::to_string_pretty(&timing).expect("timing serializes"))?;
    Ok(files)
}

pub fn read_summary(path: &Path) -> io::Result<ResultSummary> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::handcrafted_suite;
    use crate::solver::{solve, SolverParams};

    #[test]
    fn summary_round_trip() {
        let lp = handcrafted_suite()[0].lp.clone();
        let result = solve(&lp, &SolverParams::default(), None).unwrap();
        let summary = ResultSummary::new("single", &lp, ObjectiveSense::Minimize, &result);
        assert_eq!(summary.termination_reason, TerminationReason::Optimal);
        assert!(summary.to_json().contains("\"termination_reason\": \"Optimal\""));

        let dir = tempfile::tempdir().unwrap();
        let files = write_result(&summary, &result, dir.path(), "single").unwrap();
        assert_eq!(read_summary(&files.summary).unwrap(), summary);
        let primal = parse_vector(&fs::read_to_string(&files.primal).unwrap()).unwrap();
        assert_eq!(primal, result.primal_solution);
        assert!(fs::read_to_string(&files.timing).unwrap().contains("wall_seconds"));
    }

    #[test]
    fn limit_run_keeps_partial_solution() {
        let lp = handcrafted_suite()[6].lp.clone();
        let params = SolverParams { kkt_pass_limit: 5.0, ..SolverParams::default() };
        let result = solve(&lp, &params, None).unwrap();
        let summary = ResultSummary::new("limit", &lp, ObjectiveSense::Minimize, &result);
        assert_eq!(summary.termination_reason, TerminationReason::KktPassLimit);
        assert_eq!(result.primal_solution.len(), 2);
        assert!(summary.to_json().contains("KktPassLimit"));
    }

    #[test]
    fn vectors_round_trip_exactly() {
        let v = vec![0.1 + 0.2, -1e-300, 5.0, f64::MAX];
        assert_eq!(parse_vector(&format_vector(&v)).unwrap(), v);
    }
}
