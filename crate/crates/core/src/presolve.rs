//! Basic presolve: inconsistent bounds, fixed variables, empty rows and
//! empty columns, repeated to a fixpoint, plus postsolve back to the
//! original index space.

use crate::error::{check_len, Error, Result};
use crate::lp::LinearProgram;

/// Empty rows whose right-hand side is within this of feasible are kept as
/// vacuous. Substituting fixed variables leaves rounding noise behind.
const EMPTY_ROW_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FixedVariable {
    pub index: usize,
    pub value: f64,
    pub objective_coefficient: f64,
}

/// Record of what presolve removed, sufficient to map reduced points back.
#[derive(Debug, Clone, PartialEq)]
pub struct PresolveTransform {
    pub fixed_variables: Vec<FixedVariable>,
    pub removed_empty_rows: Vec<usize>,
    /// `(original column, assigned value)`.
    pub removed_empty_cols: Vec<(usize, f64)>,
    pub objective_offset_added: f64,
    /// `(rows, cols)` of the original problem.
    pub original_dims: (usize, usize),
    /// Original indices of the surviving rows, in order.
    pub kept_rows: Vec<usize>,
    /// Original indices of the surviving columns, in order.
    pub kept_cols: Vec<usize>,
}

impl PresolveTransform {
    pub fn identity(lp: &LinearProgram) -> Self {
        Self {
            fixed_variables: Vec::new(),
            removed_empty_rows: Vec::new(),
            removed_empty_cols: Vec::new(),
            objective_offset_added: 0.0,
            original_dims: (lp.num_constraints(), lp.num_vars()),
            kept_rows: (0..lp.num_constraints()).collect(),
            kept_cols: (0..lp.num_vars()).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.fixed_variables.is_empty() && self.removed_empty_rows.is_empty() && self.removed_empty_cols.is_empty()
    }

    /// Restricts an original-space point to the surviving coordinates.
    pub fn restrict(&self, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        check_len("original primal", self.original_dims.1, x.len())?;
        check_len("original dual", self.original_dims.0, y.len())?;
        Ok((self.kept_cols.iter().map(|&i| x[i]).collect(), self.kept_rows.iter().map(|&j| y[j]).collect()))
    }
}

/// Runs the reductions. Infeasibility and unboundedness detected along the
/// way are returned as [`Error::PrimalInfeasible`] and [`Error::DualUnbounded`].
pub fn presolve(lp: &LinearProgram) -> Result<(LinearProgram, PresolveTransform)> {
    match lp.validate() {
        Err(Error::BoundViolation { index, lower, upper }) => {
            return Err(Error::PrimalInfeasible(format!("variable {index} has bounds [{lower}, {upper}]")))
        }
        other => other?,
    }
    let (m, n) = (lp.num_constraints(), lp.num_vars());
    let k = &lp.constraint_matrix;
    let c = &lp.objective_vector;
    let (lower, upper) = (&lp.variable_lower, &lp.variable_upper);

    let mut rhs = lp.right_hand_side.clone();
    let mut row_alive = vec![true; m];
    let mut col_alive = vec![true; n];
    let mut row_count: Vec<usize> = (0..m).map(|r| k.row_nnz(r)).collect();
    let mut col_count: Vec<usize> = (0..n).map(|j| k.col_nnz(j)).collect();
    let mut t = PresolveTransform::identity(lp);
    t.kept_rows.clear();
    t.kept_cols.clear();

    // Removing a column shortens rows; removing a row shortens columns.
    let remove_col = |j: usize, value: f64, rhs: &mut [f64], row_alive: &[bool], row_count: &mut [usize]| {
        for (r, v) in k.col(j) {
            if row_alive[r] {
                rhs[r] -= v * value;
                row_count[r] -= 1;
            }
        }
    };

    let mut changed = true;
    while changed {
        changed = false;
        for j in 0..n {
            if !col_alive[j] {
                continue;
            }
            if lower[j] == upper[j] {
                let value = lower[j];
                remove_col(j, value, &mut rhs, &row_alive, &mut row_count);
                col_alive[j] = false;
                t.objective_offset_added += c[j] * value;
                t.fixed_variables.push(FixedVariable { index: j, value, objective_coefficient: c[j] });
                changed = true;
            } else if col_count[j] == 0 {
                let value = if c[j] > 0.0 {
                    lower[j]
                } else if c[j] < 0.0 {
                    upper[j]
                } else {
                    0f64.max(lower[j]).min(upper[j])
                };
                if !value.is_finite() {
                    return Err(Error::DualUnbounded(format!("empty column {j} with objective {} is unbounded", c[j])));
                }
                col_alive[j] = false;
                t.objective_offset_added += c[j] * value;
                t.removed_empty_cols.push((j, value));
                changed = true;
            }
        }
        for r in 0..m {
            if !row_alive[r] || row_count[r] != 0 {
                continue;
            }
            let inequality = r < lp.num_inequality_rows;
            let tol = EMPTY_ROW_TOLERANCE * (1.0 + lp.right_hand_side[r].abs());
            let feasible = if inequality { rhs[r] <= tol } else { rhs[r].abs() <= tol };
            if !feasible {
                return Err(Error::PrimalInfeasible(format!(
                    "empty {} row {r} has right-hand side {}",
                    if inequality { "inequality" } else { "equality" },
                    rhs[r]
                )));
            }
            row_alive[r] = false;
            for (j, _) in k.row(r) {
                if col_alive[j] {
                    col_count[j] -= 1;
                }
            }
            t.removed_empty_rows.push(r);
            changed = true;
        }
    }
    t.removed_empty_rows.sort_unstable();

    t.kept_rows = (0..m).filter(|&r| row_alive[r]).collect();
    t.kept_cols = (0..n).filter(|&j| col_alive[j]).collect();
    let reduced = LinearProgram {
        objective_vector: t.kept_cols.iter().map(|&j| c[j]).collect(),
        objective_constant: lp.objective_constant + t.objective_offset_added,
        constraint_matrix: k.select(&t.kept_rows, &t.kept_cols),
        right_hand_side: t.kept_rows.iter().map(|&r| rhs[r]).collect(),
        num_inequality_rows: t.kept_rows.iter().filter(|&&r| r < lp.num_inequality_rows).count(),
        variable_lower: t.kept_cols.iter().map(|&j| lower[j]).collect(),
        variable_upper: t.kept_cols.iter().map(|&j| upper[j]).collect(),
    };
    reduced.validate()?;
    Ok((reduced, t))
}

/// Maps a reduced-space point back to the original dimensions.
pub fn postsolve(t: &PresolveTransform, x_red: &[f64], y_red: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    check_len("reduced primal", t.kept_cols.len(), x_red.len())?;
    check_len("reduced dual", t.kept_rows.len(), y_red.len())?;
    let (m, n) = t.original_dims;
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; m];
    for (&j, &v) in t.kept_cols.iter().zip(x_red) {
        x[j] = v;
    }
    for f in &t.fixed_variables {
        x[f.index] = f.value;
    }
    for &(j, v) in &t.removed_empty_cols {
        x[j] = v;
    }
    for (&r, &v) in t.kept_rows.iter().zip(y_red) {
        y[r] = v;
    }
    Ok((x, y))
}
