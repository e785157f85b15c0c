//! Helpers shared by the integration tests. Everything here is computed
//! with dense arithmetic, independently of the library's own evaluation.

#![allow(dead_code)]

use folp_core::{LinearProgram, SparseMatrix};
use rand::Rng;

/// Relative optimality errors of `(x, y)`: duality gap, primal residual and
/// dual residual, each normalized as in the termination test.
#[derive(Debug, Clone, Copy)]
pub struct KktErrors {
    pub primal_objective: f64,
    pub gap: f64,
    pub primal: f64,
    pub dual: f64,
}

impl KktErrors {
    pub fn max(&self) -> f64 {
        self.gap.max(self.primal).max(self.dual)
    }
}

pub fn dense(lp: &LinearProgram) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; lp.num_vars()]; lp.num_constraints()];
    for (r, c, v) in lp.constraint_matrix.triplets() {
        rows[r][c] += v;
    }
    rows
}

pub fn kkt_errors(lp: &LinearProgram, x: &[f64], y: &[f64]) -> KktErrors {
    let k = dense(lp);
    let (n, m, m1) = (lp.num_vars(), lp.num_constraints(), lp.num_inequality_rows);
    let c = &lp.objective_vector;
    let q = &lp.right_hand_side;
    let (l, u) = (&lp.variable_lower, &lp.variable_upper);

    let mut primal_sq = 0.0;
    for j in 0..m {
        let kx: f64 = (0..n).map(|i| k[j][i] * x[i]).sum();
        let r = if j < m1 { (q[j] - kx).max(0.0) } else { kx - q[j] };
        primal_sq += r * r;
    }
    // Bound violations count as primal infeasibility too.
    for i in 0..n {
        let v = (l[i] - x[i]).max(0.0) + (x[i] - u[i]).max(0.0);
        primal_sq += v * v;
    }
    // Dual sign constraints on inequality rows.
    let mut dual_sq: f64 = y[..m1].iter().map(|v| v.min(0.0).powi(2)).sum();

    let mut dual_obj: f64 = (0..m).map(|j| q[j] * y[j]).sum::<f64>() + lp.objective_constant;
    for i in 0..n {
        let g = c[i] - (0..m).map(|j| k[j][i] * y[j]).sum::<f64>();
        let lambda = match (l[i].is_finite(), u[i].is_finite()) {
            (true, true) => g,
            (true, false) => g.max(0.0),
            (false, true) => g.min(0.0),
            (false, false) => 0.0,
        };
        dual_sq += (g - lambda).powi(2);
        if lambda > 0.0 {
            dual_obj += l[i] * lambda;
        } else if lambda < 0.0 {
            dual_obj += u[i] * lambda;
        }
    }
    let primal_obj: f64 = (0..n).map(|i| c[i] * x[i]).sum::<f64>() + lp.objective_constant;
    let norm = |v: &[f64]| v.iter().map(|e| e * e).sum::<f64>().sqrt();
    KktErrors {
        primal_objective: primal_obj,
        gap: (primal_obj - dual_obj).abs() / (1.0 + primal_obj.abs() + dual_obj.abs()),
        primal: primal_sq.sqrt() / (1.0 + norm(q)),
        dual: dual_sq.sqrt() / (1.0 + norm(c)),
    }
}

/// Random matrix with every row and column holding at least one entry of
/// magnitude `10^U[-e, e]` and random sign.
pub fn random_sparse_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, density: f64, e: f64) -> SparseMatrix {
    let entry = |rng: &mut R| {
        let mag = 10f64.powf(rng.gen_range(-e..=e));
        if rng.gen_bool(0.5) {
            mag
        } else {
            -mag
        }
    };
    let mut t = Vec::new();
    let mut filled = vec![vec![false; cols]; rows];
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(density) {
                filled[r][c] = true;
            }
        }
        if !filled[r].iter().any(|&f| f) {
            filled[r][rng.gen_range(0..cols)] = true;
        }
    }
    for c in 0..cols {
        if !(0..rows).any(|r| filled[r][c]) {
            filled[rng.gen_range(0..rows)][c] = true;
        }
    }
    for (r, row) in filled.iter().enumerate() {
        for (c, &f) in row.iter().enumerate() {
            if f {
                t.push((r, c, entry(rng)));
            }
        }
    }
    SparseMatrix::from_triplets(rows, cols, t).expect("indices in range")
}

/// Same problem with `K → γK`, `c → γα_y c`, `q → γα_x q`, bounds `→ α_x`.
pub fn rescaled(lp: &LinearProgram, gamma: f64, alpha_x: f64, alpha_y: f64) -> LinearProgram {
    let k = &lp.constraint_matrix;
    let t: Vec<_> = k.triplets().map(|(r, c, v)| (r, c, gamma * v)).collect();
    LinearProgram::new(
        lp.objective_vector.iter().map(|v| gamma * alpha_y * v).collect(),
        SparseMatrix::from_triplets(k.num_rows(), k.num_cols(), t).unwrap(),
        lp.right_hand_side.iter().map(|v| gamma * alpha_x * v).collect(),
        lp.num_inequality_rows,
        lp.variable_lower.iter().map(|v| alpha_x * v).collect(),
        lp.variable_upper.iter().map(|v| alpha_x * v).collect(),
    )
    .unwrap()
}
