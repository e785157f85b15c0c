//! Restart criteria and the primal weight rule.

use serde::{Deserialize, Serialize};

use super::{RestartScheme, SolverParams, SolverState};
use crate::linalg::{distance2, norm2};
use crate::lp::PrimalDualPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RestartReason {
    Sufficient,
    NecessaryNoProgress,
    Artificial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestartDecision {
    NoRestart,
    Restart(RestartReason),
}

/// Which of the three restart criteria hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RestartCriteria {
    pub sufficient: bool,
    pub necessary_no_progress: bool,
    pub artificial: bool,
}

/// Evaluates all criteria; `None` under the `none` scheme.
pub fn restart_criteria(state: &SolverState, candidate_gap: f64, params: &SolverParams) -> Option<RestartCriteria> {
    let (sufficient, necessary, artificial) = params.restart_betas()?;
    let reference = state.reference_gap;
    Some(RestartCriteria {
        sufficient: candidate_gap <= sufficient * reference,
        necessary_no_progress: state
            .last_candidate_gap
            .is_some_and(|last| candidate_gap <= necessary * reference && candidate_gap > last),
        artificial: artificial_restart_due(state.t_inner, state.k_total, artificial),
    })
}

/// Reports the first criterion that holds, checked in the order
/// sufficient, necessary, artificial. The `none` scheme never restarts.
///
/// With `β_necessary < β_sufficient` the necessary criterion implies the
/// sufficient one, so it is only reported when the sufficient test fails,
/// which cannot happen for valid parameters. The restart is the same either
/// way.
pub fn should_restart(state: &SolverState, candidate_gap: f64, params: &SolverParams) -> RestartDecision {
    let Some(c) = restart_criteria(state, candidate_gap, params) else {
        return RestartDecision::NoRestart;
    };
    if c.sufficient {
        RestartDecision::Restart(RestartReason::Sufficient)
    } else if c.necessary_no_progress {
        RestartDecision::Restart(RestartReason::NecessaryNoProgress)
    } else if c.artificial {
        RestartDecision::Restart(RestartReason::Artificial)
    } else {
        RestartDecision::NoRestart
    }
}

pub(crate) fn artificial_restart_due(t_inner: usize, k_total: usize, beta: f64) -> bool {
    t_inner as f64 >= beta * k_total as f64
}

impl SolverParams {
    /// `(β_sufficient, β_necessary, β_artificial)` for the configured scheme.
    pub fn restart_betas(&self) -> Option<(f64, f64, f64)> {
        match self.restart_scheme {
            RestartScheme::Pdlp => Some((self.beta_sufficient, self.beta_necessary, self.beta_artificial)),
            RestartScheme::Theory => Some((THEORY_BETA, THEORY_BETA, self.beta_artificial)),
            RestartScheme::None => None,
        }
    }
}

pub const THEORY_BETA: f64 = 0.37;

/// `‖c‖/‖q‖` when both norms exceed `eps_zero`, otherwise 1.
pub fn initialize_primal_weight(c: &[f64], q: &[f64], eps_zero: f64) -> f64 {
    let nc = norm2(c);
    let nq = norm2(q);
    if nc > eps_zero && nq > eps_zero {
        nc / nq
    } else {
        1.0
    }
}

/// Log-space smoothing toward `Δy/Δx`; keeps `omega_prev` when either
/// movement is negligible.
pub fn update_primal_weight(
    new_start: &PrimalDualPoint,
    old_start: &PrimalDualPoint,
    omega_prev: f64,
    theta: f64,
    eps_zero: f64,
) -> f64 {
    let dx = distance2(&new_start.primal, &old_start.primal);
    let dy = distance2(&new_start.dual, &old_start.dual);
    if theta == 0.0 {
        return omega_prev;
    }
    if dx > eps_zero && dy > eps_zero {
        (theta * (dy / dx).ln() + (1.0 - theta) * omega_prev.ln()).exp()
    } else {
        omega_prev
    }
}
