//! PDHG steps and the step-size policies built on them.

use crate::error::{Error, Result};
use crate::linalg::{dot, sub};
use crate::lp::{weighted_norm_unchecked, LinearProgram, PrimalDualPoint};
use crate::termination::KktPassLedger;

/// Step sizes below this are treated as a numerical failure.
pub const MIN_STEP_SIZE: f64 = 1e-300;

/// A PDHG step together with `(y' − y)ᵀ K (x' − x)`, which the adaptive
/// rule needs and which falls out of the step's own products.
#[derive(Debug, Clone, PartialEq)]
pub struct PdhgTrial {
    pub point: PrimalDualPoint,
    pub cross_term: f64,
}

/// One PDHG iteration with `τ = η/ω` and `σ = ηω`. Charges two `K` and one
/// `Kᵀ` product.
pub fn pdhg_trial(
    lp: &LinearProgram,
    z: &PrimalDualPoint,
    eta: f64,
    omega: f64,
    ledger: &mut KktPassLedger,
) -> Result<PdhgTrial> {
    let k = &lp.constraint_matrix;
    let kty = ledger.multiply_transpose(k, &z.dual);
    let tau = eta / omega;
    let mut x_new: Vec<f64> =
        z.primal.iter().zip(&lp.objective_vector).zip(&kty).map(|((x, c), g)| x - tau * (c - g)).collect();
    lp.project_primal_in_place(&mut x_new);

    let kx_new = ledger.multiply(k, &x_new);
    let kx = ledger.multiply(k, &z.primal);
    let sigma = eta * omega;
    let mut y_new: Vec<f64> = z
        .dual
        .iter()
        .zip(&lp.right_hand_side)
        .zip(kx_new.iter().zip(&kx))
        .map(|((y, q), (a, b))| y + sigma * (q - (2.0 * a - b)))
        .collect();
    lp.project_dual_in_place(&mut y_new);

    let point = PrimalDualPoint::new(x_new, y_new);
    if !point.is_finite() {
        return Err(Error::NonFiniteIterate);
    }
    let k_dx = sub(&kx_new, &kx);
    let dy = sub(&point.dual, &z.dual);
    Ok(PdhgTrial { point, cross_term: dot(&dy, &k_dx) })
}

pub fn pdhg_step(
    lp: &LinearProgram,
    z: &PrimalDualPoint,
    eta: f64,
    omega: f64,
    ledger: &mut KktPassLedger,
) -> Result<PrimalDualPoint> {
    if !(eta > 0.0) || !(omega > 0.0) {
        return Err(Error::InvalidParameter(format!("step size {eta} and primal weight {omega} must be positive")));
    }
    pdhg_trial(lp, z, eta, omega, ledger).map(|t| t.point)
}

/// Largest step for which `‖z' − z‖²_ω ≥ 2η (y' − y)ᵀK(x' − x)` holds.
/// Returns `+∞` when the cross term is not positive.
pub fn step_size_limit(dz: &PrimalDualPoint, cross_term: f64, omega: f64) -> f64 {
    if cross_term <= 0.0 {
        return f64::INFINITY;
    }
    let sq = weighted_norm_unchecked(&dz.primal, &dz.dual, omega).powi(2);
    sq / (2.0 * cross_term)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveStep {
    pub point: PrimalDualPoint,
    pub step_size: f64,
    pub next_step_size: f64,
    pub trials: usize,
}

/// Adaptive step: retries PDHG with shrinking `η` until
/// `η ≤ ‖z' − z‖²_ω / (2|(y' − y)ᵀK(x' − x)|)`, then proposes the next trial
/// step.
///
/// `k` is the 1-based count of the step being taken.
pub fn adaptive_step(
    lp: &LinearProgram,
    z: &PrimalDualPoint,
    omega: f64,
    eta_hat: f64,
    k: usize,
    ledger: &mut KktPassLedger,
) -> Result<AdaptiveStep> {
    assert!(k >= 1, "adaptive step counter is 1-based");
    let shrink = 1.0 - ((k + 1) as f64).powf(-0.3);
    let grow = 1.0 + ((k + 1) as f64).powf(-0.6);
    let mut eta = eta_hat;
    let mut trials = 0;
    loop {
        if !(eta >= MIN_STEP_SIZE) {
            return Err(Error::StepSizeUnderflow(MIN_STEP_SIZE));
        }
        trials += 1;
        let trial = pdhg_trial(lp, z, eta, omega, ledger)?;
        // Bounding by |cross| is stricter than the signed condition; with the
        // signed form η can grow without limit on steps where the cross term
        // is negative, and the iteration diverges.
        let limit = step_size_limit(&trial.point.difference(z), trial.cross_term.abs(), omega);
        let next = (shrink * limit).min(grow * eta);
        if eta <= limit {
            return Ok(AdaptiveStep { point: trial.point, step_size: eta, next_step_size: next, trials });
        }
        eta = next;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MalitskyPockParams {
    pub breaking_factor: f64,
    pub downscaling_factor: f64,
    pub interpolation_coefficient: f64,
}

impl Default for MalitskyPockParams {
    fn default() -> Self {
        Self { breaking_factor: 1.0, downscaling_factor: 0.5, interpolation_coefficient: 0.4 }
    }
}

/// Line-search memory: the last accepted step and the ratio of the two
/// most recent steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MalitskyPockState {
    pub step_size: f64,
    pub theta: f64,
}

impl MalitskyPockState {
    pub fn new(step_size: f64) -> Self {
        Self { step_size, theta: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MalitskyPockStep {
    pub point: PrimalDualPoint,
    pub state: MalitskyPockState,
    pub trials: usize,
}

/// One step of the Malitsky-Pock line search. The primal update uses the
/// previous step; each dual trial costs one `K` and one `Kᵀ` product.
pub fn malitsky_pock_step(
    lp: &LinearProgram,
    z: &PrimalDualPoint,
    omega: f64,
    state: MalitskyPockState,
    params: &MalitskyPockParams,
    ledger: &mut KktPassLedger,
) -> Result<MalitskyPockStep> {
    let k = &lp.constraint_matrix;
    let eta = state.step_size;
    let kty = ledger.multiply_transpose(k, &z.dual);
    let tau = eta / omega;
    let mut x_new: Vec<f64> =
        z.primal.iter().zip(&lp.objective_vector).zip(&kty).map(|((x, c), g)| x - tau * (c - g)).collect();
    lp.project_primal_in_place(&mut x_new);
    let dx = sub(&x_new, &z.primal);

    let mut eta_hat = eta + params.interpolation_coefficient * ((1.0 + state.theta).sqrt() - 1.0) * eta;
    let mut trials = 0;
    loop {
        if !(eta_hat >= MIN_STEP_SIZE) {
            return Err(Error::StepSizeUnderflow(MIN_STEP_SIZE));
        }
        trials += 1;
        let theta_hat = eta / eta_hat;
        let extrapolated: Vec<f64> = x_new.iter().zip(&dx).map(|(x, d)| x + theta_hat * d).collect();
        let k_ext = ledger.multiply(k, &extrapolated);
        let sigma = omega * eta_hat;
        let mut y_new: Vec<f64> =
            z.dual.iter().zip(&lp.right_hand_side).zip(&k_ext).map(|((y, q), a)| y + sigma * (q - a)).collect();
        lp.project_dual_in_place(&mut y_new);
        let dy = sub(&y_new, &z.dual);
        let kt_dy = ledger.multiply_transpose(k, &dy);
        let lhs = eta_hat * dot(&kt_dy, &kt_dy).sqrt();
        let rhs = params.breaking_factor * dot(&dy, &dy).sqrt();
        if !lhs.is_finite() || !rhs.is_finite() {
            return Err(Error::NonFiniteIterate);
        }
        if lhs <= rhs {
            let point = PrimalDualPoint::new(x_new, y_new);
            if !point.is_finite() {
                return Err(Error::NonFiniteIterate);
            }
            return Ok(MalitskyPockStep {
                point,
                state: MalitskyPockState { step_size: eta_hat, theta: theta_hat },
                trials,
            });
        }
        eta_hat *= params.downscaling_factor;
    }
}
