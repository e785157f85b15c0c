//! Restarted PDHG with adaptive steps, primal weight updates and
//! diagonal preconditioning.

mod gap;
mod restart;
mod step;

pub use gap::{gap_to_reference, normalized_duality_gap, restart_candidate, RestartCandidate};
pub use restart::{
    initialize_primal_weight, restart_criteria, should_restart, update_primal_weight, RestartCriteria, RestartDecision,
    RestartReason, THEORY_BETA,
};
pub use step::{
    adaptive_step, malitsky_pock_step, pdhg_step, pdhg_trial, step_size_limit, AdaptiveStep, MalitskyPockParams,
    MalitskyPockState, MalitskyPockStep, PdhgTrial, MIN_STEP_SIZE,
};

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::lp::{LinearProgram, PrimalDualPoint};
use crate::presolve::{postsolve, presolve, PresolveTransform};
use crate::scaling::{rescale_problem, scale_point, unscale_point, DiagonalScaling};
use crate::sparse::PowerIteration;
use crate::termination::{check_termination, evaluate, ConvergenceInfo, Evaluation, KktPassLedger};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepPolicy {
    Adaptive,
    Constant,
    MalitskyPock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RestartScheme {
    Pdlp,
    Theory,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    pub eps_optimal: f64,
    pub beta_sufficient: f64,
    pub beta_necessary: f64,
    pub beta_artificial: f64,
    pub theta_smoothing: f64,
    pub eps_zero: f64,
    pub step_policy: StepPolicy,
    pub malitsky_pock: MalitskyPockParams,
    pub restart_scheme: RestartScheme,
    pub evaluation_cadence: usize,
    pub kkt_pass_limit: f64,
    pub iteration_limit: usize,
    pub time_limit_seconds: f64,
    pub ruiz_iterations: usize,
    pub use_pock_chambolle: bool,
    pub pc_alpha: f64,
    pub scale_invariant_initial_primal_weight: bool,
    pub presolve: bool,
    /// Used to size the constant step.
    pub power_iteration: PowerIteration,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            eps_optimal: 1e-8,
            beta_sufficient: 0.9,
            beta_necessary: 0.1,
            beta_artificial: 0.5,
            theta_smoothing: 0.5,
            eps_zero: 1e-10,
            step_policy: StepPolicy::Adaptive,
            malitsky_pock: MalitskyPockParams::default(),
            restart_scheme: RestartScheme::Pdlp,
            evaluation_cadence: 40,
            kkt_pass_limit: f64::INFINITY,
            iteration_limit: usize::MAX,
            time_limit_seconds: f64::INFINITY,
            ruiz_iterations: 10,
            use_pock_chambolle: true,
            pc_alpha: 1.0,
            scale_invariant_initial_primal_weight: true,
            presolve: true,
            power_iteration: PowerIteration::default(),
        }
    }
}

impl SolverParams {
    /// The full method: adaptive steps, adaptive restarts, primal weight
    /// updates, presolve and diagonal preconditioning.
    pub fn pdlp() -> Self {
        Self::default()
    }

    /// Plain PDHG: constant step, fixed unit primal weight, no restarts,
    /// no presolve or preconditioning.
    pub fn baseline_pdhg() -> Self {
        Self {
            step_policy: StepPolicy::Constant,
            restart_scheme: RestartScheme::None,
            theta_smoothing: 0.0,
            scale_invariant_initial_primal_weight: false,
            ruiz_iterations: 0,
            use_pock_chambolle: false,
            presolve: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.eps_optimal > 0.0) {
            return bad(format!("eps_optimal must be positive, got {}", self.eps_optimal));
        }
        if self.restart_scheme == RestartScheme::Pdlp
            && !(0.0 < self.beta_necessary && self.beta_necessary < self.beta_sufficient && self.beta_sufficient < 1.0)
        {
            return bad(format!(
                "need 0 < beta_necessary < beta_sufficient < 1, got {} and {}",
                self.beta_necessary, self.beta_sufficient
            ));
        }
        if !(0.0 < self.beta_artificial && self.beta_artificial < 1.0) {
            return bad(format!("beta_artificial must lie in (0, 1), got {}", self.beta_artificial));
        }
        if !(0.0..=1.0).contains(&self.theta_smoothing) {
            return bad(format!("theta_smoothing must lie in [0, 1], got {}", self.theta_smoothing));
        }
        if !(self.eps_zero >= 0.0) {
            return bad(format!("eps_zero must be nonnegative, got {}", self.eps_zero));
        }
        if self.evaluation_cadence == 0 {
            return bad("evaluation_cadence must be positive".into());
        }
        let mp = &self.malitsky_pock;
        if !(mp.breaking_factor > 0.0)
            || !(0.0 < mp.downscaling_factor && mp.downscaling_factor < 1.0)
            || !(mp.interpolation_coefficient >= 0.0)
        {
            return bad(format!("invalid line-search parameters {mp:?}"));
        }
        if !(0.0..=2.0).contains(&self.pc_alpha) {
            return bad(format!("pc_alpha must lie in [0, 2], got {}", self.pc_alpha));
        }
        if self.kkt_pass_limit.is_nan() || self.time_limit_seconds.is_nan() {
            return bad("limits must not be NaN".into());
        }
        Ok(())
    }
}

/// Iteration state of the restarted loop, in the working (scaled,
/// presolved) space.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub current: PrimalDualPoint,
    pub last_restart: PrimalDualPoint,
    pub prev_restart: Option<PrimalDualPoint>,
    pub avg_weighted_sum: PrimalDualPoint,
    pub avg_weight_sum: f64,
    pub eta_hat: f64,
    pub eta_last: f64,
    pub omega: f64,
    pub k_total: usize,
    pub n_outer: usize,
    pub t_inner: usize,
    pub last_candidate_gap: Option<f64>,
    pub reference_gap: f64,
    pub ledger: KktPassLedger,
}

impl SolverState {
    pub fn new(start: PrimalDualPoint, omega: f64, eta_hat: f64) -> Self {
        let zeros = PrimalDualPoint::zeros(start.primal.len(), start.dual.len());
        Self {
            last_restart: start.clone(),
            current: start,
            prev_restart: None,
            avg_weighted_sum: zeros,
            avg_weight_sum: 0.0,
            eta_hat,
            eta_last: eta_hat,
            omega,
            k_total: 0,
            n_outer: 0,
            t_inner: 0,
            last_candidate_gap: None,
            reference_gap: f64::INFINITY,
            ledger: KktPassLedger::default(),
        }
    }

    /// `Σηᵢzⁱ / Σηᵢ` over the current outer loop; the restart point before
    /// any step has been taken.
    pub fn average(&self) -> PrimalDualPoint {
        if self.avg_weight_sum <= 0.0 {
            return self.last_restart.clone();
        }
        let w = self.avg_weight_sum;
        PrimalDualPoint::new(
            self.avg_weighted_sum.primal.iter().map(|v| v / w).collect(),
            self.avg_weighted_sum.dual.iter().map(|v| v / w).collect(),
        )
    }

    fn accumulate(&mut self, z: &PrimalDualPoint, weight: f64) {
        for (s, v) in self.avg_weighted_sum.primal.iter_mut().zip(&z.primal) {
            *s += weight * v;
        }
        for (s, v) in self.avg_weighted_sum.dual.iter_mut().zip(&z.dual) {
            *s += weight * v;
        }
        self.avg_weight_sum += weight;
    }

    fn reset_average(&mut self) {
        self.avg_weighted_sum.primal.iter_mut().for_each(|v| *v = 0.0);
        self.avg_weighted_sum.dual.iter_mut().for_each(|v| *v = 0.0);
        self.avg_weight_sum = 0.0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminationReason {
    Optimal,
    IterationLimit,
    KktPassLimit,
    TimeLimit,
    NumericalError,
    PrimalInfeasibleDetected,
    DualUnboundedDetected,
}

impl TerminationReason {
    pub fn is_limit(self) -> bool {
        matches!(self, Self::IterationLimit | Self::KktPassLimit | Self::TimeLimit)
    }
}

/// Diagnostics recorded at each evaluation, measured on the unscaled
/// presolved problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub outer_iteration: usize,
    pub kkt_passes: f64,
    pub primal_weight: f64,
    pub step_size: f64,
    pub current: ConvergenceInfo,
    pub average: ConvergenceInfo,
    pub restart: Option<RestartReason>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub termination_reason: TerminationReason,
    /// Original-space solution.
    pub primal_solution: Vec<f64>,
    pub dual_solution: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    /// Diagnostics of the returned point on the presolved problem.
    pub final_info: ConvergenceInfo,
    pub iterations: usize,
    pub restarts: usize,
    pub ledger: KktPassLedger,
    pub primal_weight: f64,
    pub step_size: f64,
    pub trace: Vec<TraceEntry>,
    pub presolve_message: Option<String>,
    pub wall_seconds: f64,
}

impl SolveResult {
    pub fn kkt_passes(&self) -> f64 {
        self.ledger.kkt_passes()
    }

    pub fn primal_objective(&self) -> f64 {
        self.final_info.primal_objective
    }
}

/// Passed to the observer after every accepted step, in the working space.
#[derive(Debug)]
pub struct StepEvent<'a> {
    pub problem: &'a LinearProgram,
    /// Total steps taken, including this one.
    pub iteration: usize,
    pub outer_iteration: usize,
    pub from: &'a PrimalDualPoint,
    pub to: &'a PrimalDualPoint,
    pub step_size: f64,
    pub primal_weight: f64,
    pub average_sum: &'a PrimalDualPoint,
    pub average_weight: f64,
}

pub type Observer<'o> = &'o mut dyn FnMut(&StepEvent<'_>);

/// Solves `lp` from `z0` (the origin when absent).
pub fn solve(lp: &LinearProgram, params: &SolverParams, z0: Option<&PrimalDualPoint>) -> Result<SolveResult> {
    solve_with_observer(lp, params, z0, None)
}

pub fn solve_with_observer(
    lp: &LinearProgram,
    params: &SolverParams,
    z0: Option<&PrimalDualPoint>,
    observer: Option<Observer<'_>>,
) -> Result<SolveResult> {
    let started = Instant::now();
    params.validate()?;
    match lp.validate() {
        // Crossed bounds are reported as infeasibility by presolve.
        Err(Error::BoundViolation { .. }) if params.presolve => {}
        other => other?,
    }
    if let Some(z) = z0 {
        check_len("starting primal", lp.num_vars(), z.primal.len())?;
        check_len("starting dual", lp.num_constraints(), z.dual.len())?;
        if !z.is_finite() {
            return Err(Error::NonFiniteData { context: "starting point", index: 0 });
        }
    }

    let (presolved, transform) = if params.presolve {
        match presolve(lp) {
            Ok(v) => v,
            Err(Error::PrimalInfeasible(msg)) => {
                return Ok(detected(lp, TerminationReason::PrimalInfeasibleDetected, msg, started))
            }
            Err(Error::DualUnbounded(msg)) => {
                return Ok(detected(lp, TerminationReason::DualUnboundedDetected, msg, started))
            }
            Err(e) => return Err(e),
        }
    } else {
        (lp.clone(), PresolveTransform::identity(lp))
    };
    let (working, scaling) =
        rescale_problem(&presolved, params.ruiz_iterations, params.use_pock_chambolle, params.pc_alpha)?;

    let start = match z0 {
        Some(z) => {
            let (x, y) = transform.restrict(&z.primal, &z.dual)?;
            working.project_point(&scale_point(&scaling, &PrimalDualPoint::new(x, y))?)?
        }
        None => working.project_point(&PrimalDualPoint::zeros_for(&working))?,
    };

    let mut run = Run {
        original: lp,
        presolved: &presolved,
        working: &working,
        transform: &transform,
        scaling: &scaling,
        params,
        observer,
        started,
        trace: Vec::new(),
    };
    run.execute(start)
}

fn detected(lp: &LinearProgram, reason: TerminationReason, msg: String, started: Instant) -> SolveResult {
    SolveResult {
        termination_reason: reason,
        primal_solution: vec![0.0; lp.num_vars()],
        dual_solution: vec![0.0; lp.num_constraints()],
        reduced_costs: vec![0.0; lp.num_vars()],
        final_info: ConvergenceInfo::default(),
        iterations: 0,
        restarts: 0,
        ledger: KktPassLedger::default(),
        primal_weight: 1.0,
        step_size: 0.0,
        trace: Vec::new(),
        presolve_message: Some(msg),
        wall_seconds: started.elapsed().as_secs_f64(),
    }
}

struct Run<'a, 'o> {
    original: &'a LinearProgram,
    presolved: &'a LinearProgram,
    working: &'a LinearProgram,
    transform: &'a PresolveTransform,
    scaling: &'a DiagonalScaling,
    params: &'a SolverParams,
    observer: Option<Observer<'o>>,
    started: Instant,
    trace: Vec<TraceEntry>,
}

enum Outcome {
    Continue,
    Done(PrimalDualPoint, TerminationReason, Evaluation),
}

impl Run<'_, '_> {
    fn execute(&mut self, start: PrimalDualPoint) -> Result<SolveResult> {
        let params = self.params;
        let working = self.working;
        let mut ledger = KktPassLedger::default();

        let omega = if params.scale_invariant_initial_primal_weight {
            initialize_primal_weight(&working.objective_vector, &working.right_hand_side, params.eps_zero)
        } else {
            1.0
        };
        let k = &working.constraint_matrix;
        let initial_step = if k.nnz() == 0 {
            1.0
        } else {
            match params.step_policy {
                StepPolicy::Adaptive | StepPolicy::MalitskyPock => 1.0 / k.max_abs_entry()?,
                StepPolicy::Constant => {
                    let est = params.power_iteration.run(k)?;
                    ledger.k_multiplies += est.iterations as u64;
                    ledger.kt_multiplies += est.iterations as u64;
                    if est.value > 0.0 {
                        0.9 / est.value
                    } else {
                        1.0
                    }
                }
            }
        };
        let mut state = SolverState::new(start, omega, initial_step);
        state.ledger = ledger;
        let mut mp_state = MalitskyPockState::new(initial_step);

        let first = self.evaluate(&state.current, &mut state.ledger)?;
        self.push_trace(&state, &first, &first);
        if check_termination(&first.info, params.eps_optimal) {
            let z = state.current.clone();
            return self.finish(state, z, TerminationReason::Optimal, first);
        }

        loop {
            if let Some(reason) = self.limit_reached(&state) {
                return self.finish_at_limit(state, reason);
            }
            let stepped = match params.step_policy {
                StepPolicy::Constant => {
                    pdhg_step(working, &state.current, state.eta_hat, state.omega, &mut state.ledger)
                        .map(|z| (z, state.eta_hat, state.eta_hat))
                }
                StepPolicy::Adaptive => adaptive_step(
                    working,
                    &state.current,
                    state.omega,
                    state.eta_hat,
                    state.k_total + 1,
                    &mut state.ledger,
                )
                .map(|s| (s.point, s.step_size, s.next_step_size)),
                StepPolicy::MalitskyPock => malitsky_pock_step(
                    working,
                    &state.current,
                    state.omega,
                    mp_state,
                    &params.malitsky_pock,
                    &mut state.ledger,
                )
                .map(|s| {
                    mp_state = s.state;
                    (s.point, s.state.step_size, s.state.step_size)
                }),
            };
            let (next, eta_used, eta_next) = match stepped {
                Ok(v) => v,
                Err(Error::NonFiniteIterate) | Err(Error::StepSizeUnderflow(_)) => {
                    return self.finish_numerical(state);
                }
                Err(e) => return Err(e),
            };

            state.k_total += 1;
            state.t_inner += 1;
            state.accumulate(&next, eta_used);
            state.eta_last = eta_used;
            state.eta_hat = eta_next;
            if let Some(obs) = self.observer.as_mut() {
                obs(&StepEvent {
                    problem: working,
                    iteration: state.k_total,
                    outer_iteration: state.n_outer,
                    from: &state.current,
                    to: &next,
                    step_size: eta_used,
                    primal_weight: state.omega,
                    average_sum: &state.avg_weighted_sum,
                    average_weight: state.avg_weight_sum,
                });
            }
            state.current = next;

            if state.t_inner % params.evaluation_cadence == 0 {
                match self.evaluate_and_restart(&mut state) {
                    Ok(Outcome::Continue) => {}
                    Ok(Outcome::Done(z, reason, eval)) => return self.finish(state, z, reason, eval),
                    Err(Error::NonFiniteIterate) | Err(Error::NonPositiveRadius(_)) => {
                        return self.finish_numerical(state);
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }

    fn evaluate_and_restart(&mut self, state: &mut SolverState) -> Result<Outcome> {
        let params = self.params;
        let average = state.average();
        let at_current = self.evaluate(&state.current, &mut state.ledger)?;
        let at_average = self.evaluate(&average, &mut state.ledger)?;
        self.push_trace(state, &at_current, &at_average);
        log::debug!(
            "iter {} outer {} passes {:.1} current err {:.3e} average err {:.3e} omega {:.3e} eta {:.3e}",
            state.k_total,
            state.n_outer,
            state.ledger.kkt_passes(),
            at_current.info.max_relative_error(),
            at_average.info.max_relative_error(),
            state.omega,
            state.eta_last
        );
        if check_termination(&at_current.info, params.eps_optimal) {
            return Ok(Outcome::Done(state.current.clone(), TerminationReason::Optimal, at_current));
        }
        if check_termination(&at_average.info, params.eps_optimal) {
            return Ok(Outcome::Done(average, TerminationReason::Optimal, at_average));
        }

        if params.restart_scheme == RestartScheme::None {
            // No restarts, but the primal weight still adapts on the
            // artificial schedule.
            if restart::artificial_restart_due(state.t_inner, state.k_total, params.beta_artificial) {
                let anchor = state.current.clone();
                state.omega = update_primal_weight(
                    &anchor,
                    &state.last_restart,
                    state.omega,
                    params.theta_smoothing,
                    params.eps_zero,
                );
                state.last_restart = anchor;
                state.t_inner = 0;
                state.n_outer += 1;
            }
            return Ok(Outcome::Continue);
        }

        let candidate = restart_candidate(
            self.working,
            &state.current,
            &average,
            &state.last_restart,
            state.omega,
            &mut state.ledger,
        )?;
        let decision = should_restart(state, candidate.gap, params);
        state.last_candidate_gap = Some(candidate.gap);
        if let RestartDecision::Restart(reason) = decision {
            let new_start = candidate.point;
            let old_start = std::mem::replace(&mut state.last_restart, new_start.clone());
            state.omega =
                update_primal_weight(&new_start, &old_start, state.omega, params.theta_smoothing, params.eps_zero);
            state.reference_gap =
                gap_to_reference(self.working, &new_start, &old_start, state.omega, &mut state.ledger)?;
            state.prev_restart = Some(old_start);
            state.current = new_start;
            state.reset_average();
            state.t_inner = 0;
            state.n_outer += 1;
            state.last_candidate_gap = None;
            if let Some(last) = self.trace.last_mut() {
                last.restart = Some(reason);
            }
        }
        Ok(Outcome::Continue)
    }

    fn limit_reached(&self, state: &SolverState) -> Option<TerminationReason> {
        let p = self.params;
        if state.k_total >= p.iteration_limit {
            Some(TerminationReason::IterationLimit)
        } else if state.ledger.kkt_passes() >= p.kkt_pass_limit {
            Some(TerminationReason::KktPassLimit)
        } else if self.started.elapsed().as_secs_f64() >= p.time_limit_seconds {
            Some(TerminationReason::TimeLimit)
        } else {
            None
        }
    }

    /// Returns the better of the current iterate and the average.
    fn finish_at_limit(&mut self, mut state: SolverState, reason: TerminationReason) -> Result<SolveResult> {
        let average = state.average();
        let at_current = self.evaluate(&state.current, &mut state.ledger)?;
        let at_average = self.evaluate(&average, &mut state.ledger)?;
        let eps = self.params.eps_optimal;
        let (z, eval) = if at_average.info.max_relative_error() < at_current.info.max_relative_error() {
            (average, at_average)
        } else {
            (state.current.clone(), at_current)
        };
        let reason = if check_termination(&eval.info, eps) { TerminationReason::Optimal } else { reason };
        self.finish(state, z, reason, eval)
    }

    /// Falls back to the running average, or to the last restart point if
    /// the average cannot be evaluated either.
    fn finish_numerical(&mut self, mut state: SolverState) -> Result<SolveResult> {
        let average = state.average();
        let (z, eval) = match self.evaluate(&average, &mut state.ledger) {
            Ok(eval) => (average, eval),
            Err(Error::NonFiniteIterate) => {
                let anchor = state.last_restart.clone();
                let eval = self.evaluate(&anchor, &mut state.ledger)?;
                (anchor, eval)
            }
            Err(e) => return Err(e),
        };
        let reason = if check_termination(&eval.info, self.params.eps_optimal) {
            TerminationReason::Optimal
        } else {
            TerminationReason::NumericalError
        };
        self.finish(state, z, reason, eval)
    }

    /// Unscales to the presolved problem and evaluates there.
    fn evaluate(&self, z: &PrimalDualPoint, ledger: &mut KktPassLedger) -> Result<Evaluation> {
        let unscaled = unscale_point(self.scaling, z)?;
        match evaluate(self.presolved, &unscaled.primal, &unscaled.dual, ledger) {
            Err(Error::NonFiniteData { .. }) => Err(Error::NonFiniteIterate),
            other => other,
        }
    }

    fn push_trace(&mut self, state: &SolverState, current: &Evaluation, average: &Evaluation) {
        self.trace.push(TraceEntry {
            iteration: state.k_total,
            outer_iteration: state.n_outer,
            kkt_passes: state.ledger.kkt_passes(),
            primal_weight: state.omega,
            step_size: state.eta_last,
            current: current.info,
            average: average.info,
            restart: None,
        });
    }

    fn finish(
        &mut self,
        mut state: SolverState,
        z: PrimalDualPoint,
        reason: TerminationReason,
        eval: Evaluation,
    ) -> Result<SolveResult> {
        let unscaled = unscale_point(self.scaling, &z)?;
        let (x, y) = postsolve(self.transform, &unscaled.primal, &unscaled.dual)?;
        let lp = self.original;
        let kty = state.ledger.multiply_transpose(&lp.constraint_matrix, &y);
        let grad: Vec<f64> = lp.objective_vector.iter().zip(&kty).map(|(c, g)| c - g).collect();
        let reduced = lp.project_reduced_costs(&grad)?;
        Ok(SolveResult {
            termination_reason: reason,
            primal_solution: x,
            dual_solution: y,
            reduced_costs: reduced.values,
            final_info: eval.info,
            iterations: state.k_total,
            restarts: state.n_outer,
            ledger: state.ledger,
            primal_weight: state.omega,
            step_size: state.eta_last,
            trace: std::mem::take(&mut self.trace),
            presolve_message: None,
            wall_seconds: self.started.elapsed().as_secs_f64(),
        })
    }
}
