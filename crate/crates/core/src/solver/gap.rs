//! Normalized duality gap and restart-candidate selection.

use crate::error::{Error, Result};
use crate::lp::{weighted_distance, LinearProgram, PrimalDualPoint};
use crate::termination::KktPassLedger;

const BALL_TOLERANCE: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

/// `ρ_r(z)`: the largest value of `L(x, ŷ) − L(x̂, y)` over feasible `ẑ`
/// within ω-distance `r` of `z`, divided by `r`. Charges one `K` and one
/// `Kᵀ` product.
pub fn normalized_duality_gap(
    lp: &LinearProgram,
    z: &PrimalDualPoint,
    radius: f64,
    omega: f64,
    ledger: &mut KktPassLedger,
) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::NonPositiveRadius(radius));
    }
    if !(omega > 0.0) {
        return Err(Error::NonPositiveWeight(omega));
    }
    let k = &lp.constraint_matrix;
    let kty = ledger.multiply_transpose(k, &z.dual);
    let kx = ledger.multiply(k, &z.primal);

    let n = lp.num_vars();
    let m = lp.num_constraints();
    let mut g = Vec::with_capacity(n + m);
    let mut lo = Vec::with_capacity(n + m);
    let mut hi = Vec::with_capacity(n + m);
    let mut w = Vec::with_capacity(n + m);
    for i in 0..n {
        let x = z.primal[i];
        g.push(kty[i] - lp.objective_vector[i]);
        lo.push((lp.variable_lower[i] - x).min(0.0));
        hi.push((lp.variable_upper[i] - x).max(0.0));
        w.push(omega);
    }
    for j in 0..m {
        g.push(lp.right_hand_side[j] - kx[j]);
        lo.push(if j < lp.num_inequality_rows { (-z.dual[j]).min(0.0) } else { f64::NEG_INFINITY });
        hi.push(f64::INFINITY);
        w.push(1.0 / omega);
    }
    let value = maximize_over_ball_box(&g, &lo, &hi, &w, radius);
    Ok((value / radius).max(0.0))
}

/// Maximizes `gᵀd` subject to `lo ≤ d ≤ hi` (with `lo ≤ 0 ≤ hi`) and
/// `Σ wᵢdᵢ² ≤ r²`, returning the optimal value.
pub(crate) fn maximize_over_ball_box(g: &[f64], lo: &[f64], hi: &[f64], w: &[f64], r: f64) -> f64 {
    let r2 = r * r;
    let clamp_at = |nu: f64| -> (f64, f64) {
        let mut value = 0.0;
        let mut norm = 0.0;
        for i in 0..g.len() {
            if g[i] == 0.0 {
                continue;
            }
            let d = (g[i] / (nu * w[i])).clamp(lo[i], hi[i]);
            value += g[i] * d;
            norm += w[i] * d * d;
        }
        (value, norm)
    };

    // Interior case: the box corner in the direction of g already fits.
    let mut corner_value = 0.0;
    let mut corner_norm = 0.0;
    for i in 0..g.len() {
        let d = if g[i] > 0.0 {
            hi[i]
        } else if g[i] < 0.0 {
            lo[i]
        } else {
            0.0
        };
        corner_value += g[i] * d;
        corner_norm += w[i] * d * d;
    }
    if corner_norm.is_finite() && corner_norm <= r2 {
        return corner_value;
    }

    let unclamped: f64 = g.iter().zip(w).map(|(gi, wi)| gi * gi / wi).sum();
    let mut nu_hi = unclamped.sqrt() / r;
    let mut best = clamp_at(nu_hi);
    let mut nu_lo = nu_hi;
    loop {
        nu_lo *= 0.5;
        let (v, s) = clamp_at(nu_lo);
        if s > r2 {
            break;
        }
        nu_hi = nu_lo;
        best = (v, s);
    }
    for _ in 0..MAX_BISECTIONS {
        if (r2 - best.1) <= BALL_TOLERANCE * r2 {
            break;
        }
        let mid = 0.5 * (nu_lo + nu_hi);
        if mid <= nu_lo || mid >= nu_hi {
            break;
        }
        let (v, s) = clamp_at(mid);
        if s > r2 {
            nu_lo = mid;
        } else {
            nu_hi = mid;
            best = (v, s);
        }
    }
    best.0
}

/// `μ(z, z_ref) = ρ_{‖z − z_ref‖_ω}(z)`, taken as zero when the points
/// coincide.
pub fn gap_to_reference(
    lp: &LinearProgram,
    z: &PrimalDualPoint,
    z_ref: &PrimalDualPoint,
    omega: f64,
    ledger: &mut KktPassLedger,
) -> Result<f64> {
    let radius = weighted_distance(z, z_ref, omega);
    if radius == 0.0 {
        return Ok(0.0);
    }
    normalized_duality_gap(lp, z, radius, omega, ledger)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartCandidate {
    pub point: PrimalDualPoint,
    pub gap: f64,
    pub is_average: bool,
}

/// Picks the current iterate only if its gap is strictly smaller than the
/// average's.
pub fn restart_candidate(
    lp: &LinearProgram,
    current: &PrimalDualPoint,
    average: &PrimalDualPoint,
    last_restart: &PrimalDualPoint,
    omega: f64,
    ledger: &mut KktPassLedger,
) -> Result<RestartCandidate> {
    let gap_current = gap_to_reference(lp, current, last_restart, omega, ledger)?;
    let gap_average = gap_to_reference(lp, average, last_restart, omega, ledger)?;
    Ok(if gap_current < gap_average {
        RestartCandidate { point: current.clone(), gap: gap_current, is_average: false }
    } else {
        RestartCandidate { point: average.clone(), gap: gap_average, is_average: true }
    })
}
