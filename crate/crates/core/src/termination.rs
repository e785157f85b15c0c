//! Optimality termination test, convergence diagnostics, work accounting,
//! and the shifted geometric mean used to aggregate benchmark runs.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::{all_finite, dot, norm2};
use crate::lp::{LinearProgram, ReducedCosts};
use crate::sparse::SparseMatrix;

/// Residuals and objectives for a candidate `(x, y)` with `λ = proj_Λ(c − Kᵀy)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConvergenceInfo {
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap_abs: f64,
    pub primal_residual_norm: f64,
    pub dual_residual_norm: f64,
    pub norm_q: f64,
    pub norm_c: f64,
}

impl ConvergenceInfo {
    pub fn relative_gap(&self) -> f64 {
        self.gap_abs / (1.0 + self.primal_objective.abs() + self.dual_objective.abs())
    }

    pub fn relative_primal_residual(&self) -> f64 {
        self.primal_residual_norm / (1.0 + self.norm_q)
    }

    pub fn relative_dual_residual(&self) -> f64 {
        self.dual_residual_norm / (1.0 + self.norm_c)
    }

    /// Largest of the three relative errors; the termination test passes at
    /// ε exactly when this is at most ε.
    pub fn max_relative_error(&self) -> f64 {
        self.relative_gap().max(self.relative_primal_residual()).max(self.relative_dual_residual())
    }
}

/// Counts of products with `K` and `Kᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct KktPassLedger {
    pub k_multiplies: u64,
    pub kt_multiplies: u64,
}

impl KktPassLedger {
    /// One pass is one product with `K` plus one with `Kᵀ`.
    pub fn kkt_passes(&self) -> f64 {
        (self.k_multiplies + self.kt_multiplies) as f64 / 2.0
    }

    pub fn multiply_into(&mut self, k: &SparseMatrix, x: &[f64], out: &mut [f64]) {
        self.k_multiplies += 1;
        k.multiply_into(x, out);
    }

    pub fn multiply_transpose_into(&mut self, k: &SparseMatrix, y: &[f64], out: &mut [f64]) {
        self.kt_multiplies += 1;
        k.multiply_transpose_into(y, out);
    }

    pub fn multiply(&mut self, k: &SparseMatrix, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; k.num_rows()];
        self.multiply_into(k, x, &mut out);
        out
    }

    pub fn multiply_transpose(&mut self, k: &SparseMatrix, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; k.num_cols()];
        self.multiply_transpose_into(k, y, &mut out);
        out
    }
}

pub fn kkt_passes(ledger: &KktPassLedger) -> f64 {
    ledger.kkt_passes()
}

/// Diagnostics plus the reduced costs used to compute them.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub info: ConvergenceInfo,
    pub reduced_costs: ReducedCosts,
}

pub fn convergence_info(lp: &LinearProgram, x: &[f64], y: &[f64]) -> Result<ConvergenceInfo> {
    let mut ledger = KktPassLedger::default();
    evaluate(lp, x, y, &mut ledger).map(|e| e.info)
}

/// Computes [`ConvergenceInfo`], charging one `K` and one `Kᵀ` product.
pub fn evaluate(lp: &LinearProgram, x: &[f64], y: &[f64], ledger: &mut KktPassLedger) -> Result<Evaluation> {
    check_len("primal vector", lp.num_vars(), x.len())?;
    check_len("dual vector", lp.num_constraints(), y.len())?;
    if let Some(i) = x.iter().chain(y).position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteData { context: "point", index: i });
    }
    let k = &lp.constraint_matrix;
    let kx = ledger.multiply(k, x);
    let kty = ledger.multiply_transpose(k, y);

    let m1 = lp.num_inequality_rows;
    let q = &lp.right_hand_side;
    let primal_sq: f64 = (0..lp.num_constraints())
        .map(|j| {
            let r = if j < m1 { (q[j] - kx[j]).max(0.0) } else { kx[j] - q[j] };
            r * r
        })
        .sum();

    let c = &lp.objective_vector;
    let grad: Vec<f64> = c.iter().zip(&kty).map(|(ci, ki)| ci - ki).collect();
    let reduced_costs = lp.project_reduced_costs(&grad)?;
    let dual_residual_norm = grad.iter().zip(&reduced_costs.values).map(|(g, l)| (g - l) * (g - l)).sum::<f64>().sqrt();

    let primal_objective = dot(c, x) + lp.objective_constant;
    let dual_objective = lp.dual_objective(y, &reduced_costs)?;
    let info = ConvergenceInfo {
        primal_objective,
        dual_objective,
        gap_abs: (dual_objective - primal_objective).abs(),
        primal_residual_norm: primal_sq.sqrt(),
        dual_residual_norm,
        norm_q: norm2(q),
        norm_c: norm2(c),
    };
    if !all_finite(&[info.primal_objective, info.dual_objective, info.primal_residual_norm, info.dual_residual_norm]) {
        return Err(Error::NonFiniteIterate);
    }
    Ok(Evaluation { info, reduced_costs })
}

/// Relative duality gap, primal feasibility and dual feasibility all within ε.
pub fn check_termination(info: &ConvergenceInfo, eps: f64) -> bool {
    info.gap_abs <= eps * (1.0 + info.dual_objective.abs() + info.primal_objective.abs())
        && info.primal_residual_norm <= eps * (1.0 + info.norm_q)
        && info.dual_residual_norm <= eps * (1.0 + info.norm_c)
}

/// Shifted geometric mean: `exp(mean(ln(vᵢ + shift))) − shift`.
pub fn shifted_geometric_mean(values: &[f64], shift: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mean_log = values.iter().map(|v| (v + shift).ln()).sum::<f64>() / values.len() as f64;
    Ok(mean_log.exp() - shift)
}

pub fn sgm10(values: &[f64]) -> Result<f64> {
    shifted_geometric_mean(values, 10.0)
}
