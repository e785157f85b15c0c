//! Diagonal preconditioning of the constraint matrix.
//!
//! A scaled problem uses `K̃ = D₁ K D₂`, `c̃ = D₂ c`, `q̃ = D₁ q` and bounds
//! divided by `D₂`, so original points are recovered as `x = D₂ x̃` and
//! `y = D₁ ỹ`. Each diagonal entry is the reciprocal square root of a row or
//! column norm; that is the orientation under which repeated Ruiz steps
//! drive every row and column ∞-norm to one.

use crate::error::{check_len, Result};
use crate::lp::{LinearProgram, PrimalDualPoint};
use crate::sparse::{Axis, SparseMatrix};

/// Cumulative diagonals `D₁` (rows) and `D₂` (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalScaling {
    pub row_scale: Vec<f64>,
    pub col_scale: Vec<f64>,
}

impl DiagonalScaling {
    pub fn identity(num_rows: usize, num_cols: usize) -> Self {
        Self { row_scale: vec![1.0; num_rows], col_scale: vec![1.0; num_cols] }
    }
}

fn inverse_sqrt(norms: Vec<f64>) -> Vec<f64> {
    norms.into_iter().map(|v| if v > 0.0 { 1.0 / v.sqrt() } else { 1.0 }).collect()
}

/// One Ruiz equilibration step: reciprocal square roots of row and column
/// ∞-norms.
pub fn ruiz_step(k: &SparseMatrix) -> (Vec<f64>, Vec<f64>) {
    let rows = k.axis_norms(Axis::Rows, f64::INFINITY).expect("supported norm");
    let cols = k.axis_norms(Axis::Cols, f64::INFINITY).expect("supported norm");
    (inverse_sqrt(rows), inverse_sqrt(cols))
}

/// Pock-Chambolle diagonal: rows use the `(2 − α)`-norm, columns the
/// `α`-norm. A 0-"norm" counts stored entries.
pub fn pock_chambolle_step(k: &SparseMatrix, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let rows = k.axis_norms(Axis::Rows, 2.0 - alpha)?;
    let cols = k.axis_norms(Axis::Cols, alpha)?;
    Ok((inverse_sqrt(rows), inverse_sqrt(cols)))
}

/// Applies `ruiz_iterations` Ruiz steps and then, optionally, one
/// Pock-Chambolle step, returning the scaled problem and the cumulative
/// scaling.
pub fn rescale_problem(
    lp: &LinearProgram,
    ruiz_iterations: usize,
    apply_pock_chambolle: bool,
    alpha: f64,
) -> Result<(LinearProgram, DiagonalScaling)> {
    lp.validate()?;
    let mut k = lp.constraint_matrix.clone();
    let mut scaling = DiagonalScaling::identity(k.num_rows(), k.num_cols());
    let mut compose = |k: &mut SparseMatrix, d1: Vec<f64>, d2: Vec<f64>| -> Result<()> {
        *k = k.scaled(&d1, &d2)?;
        scaling.row_scale.iter_mut().zip(&d1).for_each(|(s, d)| *s *= d);
        scaling.col_scale.iter_mut().zip(&d2).for_each(|(s, d)| *s *= d);
        Ok(())
    };
    for _ in 0..ruiz_iterations {
        let (d1, d2) = ruiz_step(&k);
        compose(&mut k, d1, d2)?;
    }
    if apply_pock_chambolle {
        let (d1, d2) = pock_chambolle_step(&k, alpha)?;
        compose(&mut k, d1, d2)?;
    }
    let scaled = apply_scaling(lp, &scaling, k);
    Ok((scaled, scaling))
}

fn apply_scaling(lp: &LinearProgram, d: &DiagonalScaling, k: SparseMatrix) -> LinearProgram {
    let (d1, d2) = (&d.row_scale, &d.col_scale);
    LinearProgram {
        objective_vector: lp.objective_vector.iter().zip(d2).map(|(c, s)| c * s).collect(),
        objective_constant: lp.objective_constant,
        constraint_matrix: k,
        right_hand_side: lp.right_hand_side.iter().zip(d1).map(|(q, s)| q * s).collect(),
        num_inequality_rows: lp.num_inequality_rows,
        // ±∞ / s stays ±∞ for positive finite s.
        variable_lower: lp.variable_lower.iter().zip(d2).map(|(l, s)| l / s).collect(),
        variable_upper: lp.variable_upper.iter().zip(d2).map(|(u, s)| u / s).collect(),
    }
}

/// Maps a point of the scaled problem back: `x = D₂ x̃`, `y = D₁ ỹ`.
pub fn unscale_point(d: &DiagonalScaling, z: &PrimalDualPoint) -> Result<PrimalDualPoint> {
    check_len("scaled primal", d.col_scale.len(), z.primal.len())?;
    check_len("scaled dual", d.row_scale.len(), z.dual.len())?;
    Ok(PrimalDualPoint {
        primal: z.primal.iter().zip(&d.col_scale).map(|(x, s)| x * s).collect(),
        dual: z.dual.iter().zip(&d.row_scale).map(|(y, s)| y * s).collect(),
    })
}

/// Inverse of [`unscale_point`].
pub fn scale_point(d: &DiagonalScaling, z: &PrimalDualPoint) -> Result<PrimalDualPoint> {
    check_len("primal", d.col_scale.len(), z.primal.len())?;
    check_len("dual", d.row_scale.len(), z.dual.len())?;
    Ok(PrimalDualPoint {
        primal: z.primal.iter().zip(&d.col_scale).map(|(x, s)| x / s).collect(),
        dual: z.dual.iter().zip(&d.row_scale).map(|(y, s)| y / s).collect(),
    })
}
