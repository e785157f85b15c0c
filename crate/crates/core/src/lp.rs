//! The LP data model and its saddle-point quantities.
//!
//! Problems are stored as
//!
//! ```text
//! minimize    cᵀx + offset
//! subject to  G x ≥ h        (first `num_inequality_rows` rows of K)
//!             A x = b        (remaining rows)
//!             l ≤ x ≤ u
//! ```
//!
//! with `K = [G; A]` and `q = [h; b]`. Infinite bounds are IEEE infinities.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::dot;
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective_vector: Vec<f64>,
    pub objective_constant: f64,
    pub constraint_matrix: SparseMatrix,
    pub right_hand_side: Vec<f64>,
    pub num_inequality_rows: usize,
    pub variable_lower: Vec<f64>,
    pub variable_upper: Vec<f64>,
}

/// A primal-dual iterate `z = (x, y)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PrimalDualPoint {
    pub primal: Vec<f64>,
    pub dual: Vec<f64>,
}

/// Reduced costs `λ`, sign-constrained per variable by which bounds are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCosts {
    pub values: Vec<f64>,
}

impl LinearProgram {
    /// Assembles and validates a problem.
    pub fn new(
        objective_vector: Vec<f64>,
        constraint_matrix: SparseMatrix,
        right_hand_side: Vec<f64>,
        num_inequality_rows: usize,
        variable_lower: Vec<f64>,
        variable_upper: Vec<f64>,
    ) -> Result<Self> {
        let lp = Self {
            objective_vector,
            objective_constant: 0.0,
            constraint_matrix,
            right_hand_side,
            num_inequality_rows,
            variable_lower,
            variable_upper,
        };
        lp.validate()?;
        Ok(lp)
    }

    pub fn num_vars(&self) -> usize {
        self.objective_vector.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.right_hand_side.len()
    }

    pub fn num_equality_rows(&self) -> usize {
        self.num_constraints() - self.num_inequality_rows
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        let k = &self.constraint_matrix;
        check_len("constraint matrix columns", n, k.num_cols())?;
        check_len("right-hand side", k.num_rows(), self.right_hand_side.len())?;
        check_len("variable lower bounds", n, self.variable_lower.len())?;
        check_len("variable upper bounds", n, self.variable_upper.len())?;
        if self.num_inequality_rows > k.num_rows() {
            return Err(Error::DimensionMismatch {
                context: "inequality row count",
                expected: k.num_rows(),
                found: self.num_inequality_rows,
            });
        }
        if let Some(i) = self.objective_vector.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteData { context: "objective", index: i });
        }
        if !self.objective_constant.is_finite() {
            return Err(Error::NonFiniteData { context: "objective constant", index: 0 });
        }
        if let Some(i) = self.right_hand_side.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteData { context: "right-hand side", index: i });
        }
        for (i, (&l, &u)) in self.variable_lower.iter().zip(&self.variable_upper).enumerate() {
            if l.is_nan() || u.is_nan() || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return Err(Error::NonFiniteData { context: "variable bounds", index: i });
            }
            if l > u {
                return Err(Error::BoundViolation { index: i, lower: l, upper: u });
            }
        }
        Ok(())
    }

    fn check_point(&self, z: &PrimalDualPoint) -> Result<()> {
        check_len("primal vector", self.num_vars(), z.primal.len())?;
        check_len("dual vector", self.num_constraints(), z.dual.len())
    }

    pub fn primal_objective(&self, x: &[f64]) -> f64 {
        dot(&self.objective_vector, x) + self.objective_constant
    }

    /// `L(x, y) = cᵀx − yᵀKx + qᵀy`, plus the objective constant.
    pub fn lagrangian(&self, z: &PrimalDualPoint) -> Result<f64> {
        self.check_point(z)?;
        let kx = self.constraint_matrix.multiply(&z.primal)?;
        Ok(dot(&self.objective_vector, &z.primal) - dot(&z.dual, &kx)
            + dot(&self.right_hand_side, &z.dual)
            + self.objective_constant)
    }

    pub fn project_primal(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("primal vector", self.num_vars(), x.len())?;
        let mut out = x.to_vec();
        self.project_primal_in_place(&mut out);
        Ok(out)
    }

    pub fn project_primal_in_place(&self, x: &mut [f64]) {
        for ((v, &l), &u) in x.iter_mut().zip(&self.variable_lower).zip(&self.variable_upper) {
            *v = v.max(l).min(u);
        }
    }

    pub fn project_dual(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len("dual vector", self.num_constraints(), y.len())?;
        let mut out = y.to_vec();
        self.project_dual_in_place(&mut out);
        Ok(out)
    }

    pub fn project_dual_in_place(&self, y: &mut [f64]) {
        for v in &mut y[..self.num_inequality_rows] {
            *v = v.max(0.0);
        }
    }

    pub fn project_point(&self, z: &PrimalDualPoint) -> Result<PrimalDualPoint> {
        Ok(PrimalDualPoint { primal: self.project_primal(&z.primal)?, dual: self.project_dual(&z.dual)? })
    }

    /// Projects `v` onto the reduced-cost sign cone Λ.
    pub fn project_reduced_costs(&self, v: &[f64]) -> Result<ReducedCosts> {
        check_len("reduced costs", self.num_vars(), v.len())?;
        let values = v
            .iter()
            .zip(&self.variable_lower)
            .zip(&self.variable_upper)
            .map(|((&v, &l), &u)| match (l.is_finite(), u.is_finite()) {
                (false, false) => 0.0,
                (false, true) => v.min(0.0),
                (true, false) => v.max(0.0),
                (true, true) => v,
            })
            .collect();
        Ok(ReducedCosts { values })
    }

    /// `qᵀy + Σ lᵢ·λᵢ (λᵢ > 0) + Σ uᵢ·λᵢ (λᵢ < 0)`, plus the objective constant.
    ///
    /// Zero reduced costs contribute nothing even against an infinite bound.
    pub fn dual_objective(&self, y: &[f64], lambda: &ReducedCosts) -> Result<f64> {
        check_len("dual vector", self.num_constraints(), y.len())?;
        check_len("reduced costs", self.num_vars(), lambda.values.len())?;
        let mut total = dot(&self.right_hand_side, y) + self.objective_constant;
        for (i, &lam) in lambda.values.iter().enumerate() {
            let bound = if lam > 0.0 {
                self.variable_lower[i]
            } else if lam < 0.0 {
                self.variable_upper[i]
            } else {
                continue;
            };
            if !bound.is_finite() {
                return Err(Error::InfiniteProduct { index: i });
            }
            total += bound * lam;
        }
        Ok(total)
    }
}

impl PrimalDualPoint {
    pub fn new(primal: Vec<f64>, dual: Vec<f64>) -> Self {
        Self { primal, dual }
    }

    pub fn zeros(num_vars: usize, num_constraints: usize) -> Self {
        Self { primal: vec![0.0; num_vars], dual: vec![0.0; num_constraints] }
    }

    pub fn zeros_for(lp: &LinearProgram) -> Self {
        Self::zeros(lp.num_vars(), lp.num_constraints())
    }

    pub fn is_finite(&self) -> bool {
        self.primal.iter().chain(&self.dual).all(|v| v.is_finite())
    }

    /// `self - other`, componentwise.
    pub fn difference(&self, other: &Self) -> Self {
        Self {
            primal: crate::linalg::sub(&self.primal, &other.primal),
            dual: crate::linalg::sub(&self.dual, &other.dual),
        }
    }
}

/// `‖z‖_ω = sqrt(ω‖x‖² + ‖y‖²/ω)`.
pub fn weighted_norm(z: &PrimalDualPoint, omega: f64) -> Result<f64> {
    if omega <= 0.0 || omega.is_nan() {
        return Err(Error::NonPositiveWeight(omega));
    }
    Ok(weighted_norm_unchecked(&z.primal, &z.dual, omega))
}

pub(crate) fn weighted_norm_unchecked(x: &[f64], y: &[f64], omega: f64) -> f64 {
    (omega * dot(x, x) + dot(y, y) / omega).sqrt()
}

pub(crate) fn weighted_distance(a: &PrimalDualPoint, b: &PrimalDualPoint, omega: f64) -> f64 {
    let dx: f64 = a.primal.iter().zip(&b.primal).map(|(p, q)| (p - q) * (p - q)).sum();
    let dy: f64 = a.dual.iter().zip(&b.dual).map(|(p, q)| (p - q) * (p - q)).sum();
    (omega * dx + dy / omega).sqrt()
}
