//! Acceptance checks for the solver. Runs as a plain binary and prints one
//! PASS/FAIL line per check; exits nonzero if any check fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use folp_core::bench::{run_bench, BenchInstance};
use folp_core::instances::{pagerank_residual, RandomLpConfig, DEFAULT_ATTACH, DEFAULT_DAMPING};
use folp_core::output::ResultSummary;
use folp_core::solver::normalized_duality_gap;
use folp_core::{
    barabasi_albert, handcrafted_suite, pagerank_lp, presolve, random_lp, rescale_problem, sgm10, solve,
    solve_with_observer, KktPassLedger, LinearProgram, ObjectiveSense, PowerIteration, PrimalDualPoint, SolverParams,
    SparseMatrix, StepEvent, StepPolicy, TerminationReason,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{kkt_errors, random_sparse_matrix, rescaled};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn handcrafted_exactness() -> Outcome {
    let start = Instant::now();
    let params = SolverParams::default();
    let suite = handcrafted_suite();
    let mut worst_obj: f64 = 0.0;
    let mut worst_kkt: f64 = 0.0;
    for case in &suite {
        let r = solve(&case.lp, &params, None).map_err(|e| format!("{}: {e}", case.name))?;
        ensure(r.termination_reason == TerminationReason::Optimal, || {
            format!("{}: {:?}", case.name, r.termination_reason)
        })?;
        let errors = kkt_errors(&case.lp, &r.primal_solution, &r.dual_solution);
        let obj_err = (errors.primal_objective - case.optimal_objective).abs() / case.optimal_objective.abs().max(1.0);
        worst_obj = worst_obj.max(obj_err);
        worst_kkt = worst_kkt.max(errors.max());
        ensure(obj_err <= 1e-6, || format!("{}: objective error {obj_err:e}", case.name))?;
        ensure(errors.max() <= params.eps_optimal, || format!("{}: {errors:?}", case.name))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} LPs, max objective error {worst_obj:.2e}, max KKT error {worst_kkt:.2e}, {elapsed:.2?}",
        suite.len()
    ))
}

/// Iterates of constant-step PDHG, recorded through the observer.
fn constant_step_iterates(lp: &LinearProgram, z0: &PrimalDualPoint, iterations: usize) -> Vec<PrimalDualPoint> {
    let params = SolverParams {
        iteration_limit: iterations,
        eps_optimal: f64::MIN_POSITIVE,
        eps_zero: 0.0,
        scale_invariant_initial_primal_weight: true,
        power_iteration: PowerIteration { relative_tol: 0.0, max_iterations: 50, seed: 3 },
        ..SolverParams::baseline_pdhg()
    };
    let mut iterates = Vec::new();
    let mut record = |e: &StepEvent<'_>| iterates.push(e.to.clone());
    solve_with_observer(lp, &params, Some(z0), Some(&mut record)).expect("solve runs");
    iterates
}

fn scale_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for p in 0..5 {
        let cfg =
            RandomLpConfig { num_vars: 8, num_inequalities: 4, num_equalities: 2, density: 0.6, scale_exponent: 0.5 };
        let lp = random_lp(&cfg, 100 + p).map_err(|e| e.to_string())?.lp;
        let z0 = lp
            .project_point(&PrimalDualPoint::new(
                (0..lp.num_vars()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                (0..lp.num_constraints()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            ))
            .unwrap();
        let base = constant_step_iterates(&lp, &z0, 100);
        ensure(base.len() == 100, || format!("LP {p}: only {} iterates", base.len()))?;
        for _ in 0..3 {
            let mut draw = || 10f64.powf(rng.gen_range(-2.0..2.0));
            let (gamma, ax, ay) = (draw(), draw(), draw());
            let scaled_lp = rescaled(&lp, gamma, ax, ay);
            let z0_hat = PrimalDualPoint::new(
                z0.primal.iter().map(|v| ax * v).collect(),
                z0.dual.iter().map(|v| ay * v).collect(),
            );
            let hat = constant_step_iterates(&scaled_lp, &z0_hat, 100);
            ensure(hat.len() == base.len(), || format!("LP {p}: iterate counts differ"))?;
            for (k, (z, zh)) in base.iter().zip(&hat).enumerate() {
                let pairs =
                    z.primal.iter().map(|v| ax * v).zip(&zh.primal).chain(z.dual.iter().map(|v| ay * v).zip(&zh.dual));
                for (expected, got) in pairs {
                    let rel = (expected - got).abs() / expected.abs().max(got.abs()).max(f64::MIN_POSITIVE);
                    let rel = if expected == *got { 0.0 } else { rel };
                    worst = worst.max(rel);
                    ensure(rel <= 1e-9, || {
                        format!(
                            "LP {p}, (γ, αx, αy) = ({gamma:.3e}, {ax:.3e}, {ay:.3e}), iterate {k}: {expected} vs {got}"
                        )
                    })?;
                }
            }
        }
    }
    Ok(format!("5 LPs x 3 scalings x 100 iterates, max relative deviation {worst:.2e}"))
}

fn step_condition() -> Outcome {
    let mut steps = 0usize;
    let mut violations = Vec::new();
    let params = SolverParams { step_policy: StepPolicy::Adaptive, ..SolverParams::default() };
    for case in handcrafted_suite() {
        let mut check = |e: &StepEvent<'_>| {
            steps += 1;
            let k = common::dense(e.problem);
            let dx: Vec<f64> = e.to.primal.iter().zip(&e.from.primal).map(|(a, b)| a - b).collect();
            let dy: Vec<f64> = e.to.dual.iter().zip(&e.from.dual).map(|(a, b)| a - b).collect();
            let cross: f64 =
                k.iter().zip(&dy).map(|(row, dyj)| dyj * row.iter().zip(&dx).map(|(a, b)| a * b).sum::<f64>()).sum();
            let w = e.primal_weight;
            let norm_sq = w * dx.iter().map(|v| v * v).sum::<f64>() + dy.iter().map(|v| v * v).sum::<f64>() / w;
            if 2.0 * e.step_size * cross > norm_sq * (1.0 + 1e-12) {
                violations.push(format!("iteration {}: η={} cross={cross} ‖dz‖²={norm_sq}", e.iteration, e.step_size));
            }
        };
        let r = solve_with_observer(&case.lp, &params, None, Some(&mut check)).map_err(|e| e.to_string())?;
        ensure(r.termination_reason == TerminationReason::Optimal, || {
            format!("{}: {:?}", case.name, r.termination_reason)
        })?;
    }
    ensure(violations.is_empty(), || format!("{} violations, first: {}", violations.len(), violations[0]))?;
    Ok(format!("{steps} accepted steps, 0 violations"))
}

/// Brute-force `ρ_r(z)` for one variable and one constraint: a grid of
/// spacing `h` over the feasible part of the ellipse, including the clipped
/// end points of each grid column.
fn brute_force_gap(lp: &LinearProgram, z: &PrimalDualPoint, r: f64, omega: f64, h: f64) -> f64 {
    let c = lp.objective_vector[0];
    let k = common::dense(lp)[0][0];
    let q = lp.right_hand_side[0];
    let (x, y) = (z.primal[0], z.dual[0]);
    let y_lo = if lp.num_inequality_rows == 1 { 0.0 } else { f64::NEG_INFINITY };
    let f = |xh: f64, yh: f64| (c * x - yh * k * x + q * yh) - (c * xh - y * k * xh + q * y);

    let rx = r / omega.sqrt();
    let x_lo = (x - rx).max(lp.variable_lower[0]);
    let x_hi = (x + rx).min(lp.variable_upper[0]);
    let mut best = f64::NEG_INFINITY;
    let mut column = |xh: f64| {
        let slack = (r * r - omega * (xh - x).powi(2)).max(0.0);
        let ry = (omega * slack).sqrt();
        let lo = (y - ry).max(y_lo);
        let hi = y + ry;
        if lo > hi {
            return;
        }
        let mut yh = lo;
        while yh < hi {
            best = best.max(f(xh, yh));
            yh += h;
        }
        best = best.max(f(xh, hi));
    };
    let mut xh = x_lo;
    while xh < x_hi {
        column(xh);
        xh += h;
    }
    column(x_hi);
    best / r
}

fn gap_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    for p in 0..20 {
        let inequality = rng.gen_bool(0.5);
        let lower = if rng.gen_bool(0.7) { rng.gen_range(-1.0..0.0) } else { f64::NEG_INFINITY };
        let upper = if rng.gen_bool(0.5) { rng.gen_range(0.2..1.5) } else { f64::INFINITY };
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let lp = LinearProgram::new(
            vec![rng.gen_range(-2.0..2.0)],
            SparseMatrix::from_dense(&[vec![sign * rng.gen_range(0.5..2.0)]]).unwrap(),
            vec![rng.gen_range(-2.0..2.0)],
            usize::from(inequality),
            vec![lower],
            vec![upper],
        )
        .unwrap();
        let x = rng.gen_range(lower.max(-1.5)..upper.min(1.5));
        let y = if inequality { rng.gen_range(0.0..1.5) } else { rng.gen_range(-1.5..1.5) };
        let z = PrimalDualPoint::new(vec![x], vec![y]);
        let r = rng.gen_range(0.2..1.0);
        let omega = rng.gen_range(0.5..2.0);
        let mut ledger = KktPassLedger::default();
        let rho = normalized_duality_gap(&lp, &z, r, omega, &mut ledger).map_err(|e| e.to_string())?;
        let oracle = brute_force_gap(&lp, &z, r, omega, 1e-3);
        let diff = (rho - oracle).abs();
        worst = worst.max(diff);
        ensure(diff <= 1e-3, || format!("problem {p}: ρ = {rho}, grid = {oracle}"))?;
    }

    let mut worst_opt: f64 = 0.0;
    for seed in 0..10 {
        let cfg =
            RandomLpConfig { num_vars: 1, num_inequalities: 1, num_equalities: 0, density: 1.0, scale_exponent: 0.0 };
        let planted = random_lp(&cfg, seed).map_err(|e| e.to_string())?;
        let z = &planted.optimum;
        let errors = kkt_errors(&planted.lp, &z.primal, &z.dual);
        ensure(errors.max() <= 1e-12, || format!("seed {seed}: planted point not optimal: {errors:?}"))?;
        for r in [1e-3, 0.1, 1.0, 10.0] {
            for omega in [0.5, 1.0, 2.0] {
                let rho = normalized_duality_gap(&planted.lp, z, r, omega, &mut KktPassLedger::default())
                    .map_err(|e| e.to_string())?;
                worst_opt = worst_opt.max(rho.abs());
                ensure(rho.abs() <= 1e-10, || format!("seed {seed}, r = {r}, ω = {omega}: ρ = {rho:e}"))?;
            }
        }
    }
    Ok(format!("20 problems, max |ρ − grid| {worst:.2e}; max |ρ| at optima {worst_opt:.2e}"))
}

fn pagerank_instance(n: usize, seed: u64) -> LinearProgram {
    pagerank_lp(&barabasi_albert(n, DEFAULT_ATTACH, seed).unwrap(), DEFAULT_DAMPING).unwrap()
}

fn ablation_suite() -> Vec<BenchInstance> {
    let mut out: Vec<BenchInstance> =
        handcrafted_suite().into_iter().map(|c| BenchInstance { name: c.name.to_string(), lp: c.lp }).collect();
    for n in [100, 1000] {
        for seed in [1, 2] {
            out.push(BenchInstance { name: format!("pagerank_{n}_{seed}"), lp: pagerank_instance(n, seed) });
        }
    }
    let cfg =
        RandomLpConfig { num_vars: 30, num_inequalities: 20, num_equalities: 5, density: 1.0, scale_exponent: 1.5 };
    for seed in 0..13 {
        out.push(BenchInstance { name: format!("random_{seed:02}"), lp: random_lp(&cfg, seed).unwrap().lp });
    }
    out
}

fn ablation() -> Outcome {
    let instances = ablation_suite();
    ensure(instances.len() == 30, || format!("{} instances", instances.len()))?;
    let limit = 100_000.0;
    let pdlp = run_bench(&instances, &SolverParams { kkt_pass_limit: limit, ..SolverParams::pdlp() }, threads())
        .map_err(|e| e.to_string())?;
    let base =
        run_bench(&instances, &SolverParams { kkt_pass_limit: limit, ..SolverParams::baseline_pdhg() }, threads())
            .map_err(|e| e.to_string())?;
    let sgm_pdlp = pdlp.sgm10_kkt_passes().map_err(|e| e.to_string())?;
    let sgm_base = base.sgm10_kkt_passes().map_err(|e| e.to_string())?;
    let much_worse = pdlp
        .records
        .iter()
        .zip(&base.records)
        .filter(|(p, b)| !b.solved() || b.kkt_passes > 10.0 * p.kkt_passes)
        .count();
    let summary = format!(
        "solved PDLP {}/30 vs baseline {}/30; SGM10 {sgm_pdlp:.1} vs {sgm_base:.1}; baseline failed or >10x on {much_worse}",
        pdlp.num_solved(),
        base.num_solved()
    );
    ensure(pdlp.num_solved() >= base.num_solved(), || summary.clone())?;
    ensure(sgm_pdlp < sgm_base, || summary.clone())?;
    ensure(much_worse >= 5, || summary.clone())?;
    Ok(summary)
}

fn pagerank() -> Outcome {
    for n in [10, 100, 1000, 10_000] {
        for seed in [1, 2] {
            let nnz = pagerank_instance(n, seed).constraint_matrix.nnz();
            ensure(nnz == 8 * n - 18, || format!("n = {n}: nnz {nnz} != {}", 8 * n - 18))?;
        }
    }
    let params = SolverParams::default();
    let mut worst: f64 = 0.0;
    for seed in [1, 2, 3] {
        let graph = barabasi_albert(1000, DEFAULT_ATTACH, seed).unwrap();
        let lp = pagerank_lp(&graph, DEFAULT_DAMPING).unwrap();
        let r = solve(&lp, &params, None).map_err(|e| e.to_string())?;
        ensure(r.termination_reason == TerminationReason::Optimal, || {
            format!("n = 1000, seed {seed}: {:?}", r.termination_reason)
        })?;
        let residual = pagerank_residual(&graph, DEFAULT_DAMPING, &r.primal_solution);
        let total: f64 = r.primal_solution.iter().sum();
        worst = worst.max(residual);
        ensure(residual <= 1e-7, || format!("n = 1000, seed {seed}: ‖Sx − x‖∞ = {residual:e}"))?;
        ensure((total - 1.0).abs() <= 1e-8, || format!("n = 1000, seed {seed}: 1ᵀx = {total}"))?;
    }

    let graph = barabasi_albert(100_000, DEFAULT_ATTACH, 1).unwrap();
    let lp = pagerank_lp(&graph, DEFAULT_DAMPING).unwrap();
    let budget = 1800.0;
    let start = Instant::now();
    let r = solve(&lp, &SolverParams { time_limit_seconds: budget, ..params }, None).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure(r.termination_reason == TerminationReason::Optimal && elapsed < budget, || {
        format!(
            "n = 1e5: {:?} after {elapsed:.1} s, {} KKT passes, {} restarts, final primal weight {:.2e}, \
             max relative KKT error {:.2e}",
            r.termination_reason,
            r.kkt_passes(),
            r.restarts,
            r.primal_weight,
            r.final_info.max_relative_error()
        )
    })?;
    let big_residual = pagerank_residual(&graph, DEFAULT_DAMPING, &r.primal_solution);
    Ok(format!(
        "nnz = 8n − 18 for n up to 1e4; n = 1000 max residual {worst:.2e}; n = 1e5 solved in {elapsed:.1} s \
         ({} KKT passes, residual {big_residual:.2e})",
        r.kkt_passes()
    ))
}

fn ruiz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for t in 0..20 {
        let rows = rng.gen_range(5..60);
        let cols = rng.gen_range(5..60);
        let density = rng.gen_range(0.05..0.5);
        let k = random_sparse_matrix(&mut rng, rows, cols, density, 2.0);
        let lp =
            LinearProgram::new(vec![1.0; cols], k, vec![1.0; rows], rows, vec![0.0; cols], vec![f64::INFINITY; cols])
                .unwrap();
        let (scaled, _) = rescale_problem(&lp, 10, false, 1.0).map_err(|e| e.to_string())?;
        let m = common::dense(&scaled);
        let row_norms = m.iter().map(|r| r.iter().fold(0.0f64, |a, v| a.max(v.abs())));
        let col_norms = (0..cols).map(|c| m.iter().fold(0.0f64, |a, r| a.max(r[c].abs())));
        for v in row_norms.chain(col_norms) {
            lo = lo.min(v);
            hi = hi.max(v);
            ensure((0.99..=1.01).contains(&v), || format!("matrix {t} ({rows}x{cols}): norm {v}"))?;
        }
    }
    Ok(format!("20 matrices, all row/column ∞-norms in [{lo:.5}, {hi:.5}]"))
}

fn sgm() -> Outcome {
    let v = sgm10(&[0.0, 90.0]).map_err(|e| e.to_string())?;
    ensure((v - 21.6228).abs() <= 1e-3, || format!("sgm10(0, 90) = {v}"))?;
    for c in [0.0, 1.0, 37.5, 1e6] {
        let s = sgm10(&[c; 7]).map_err(|e| e.to_string())?;
        ensure((s - c).abs() <= 1e-9 * c.max(1.0), || format!("sgm10 of constant {c} = {s}"))?;
    }
    Ok(format!("sgm10(0, 90) = {v:.6}; constant sequences reproduce"))
}

/// Planted random LP with fixed variables, empty rows and empty columns
/// added in a way that keeps it feasible and bounded.
fn injected_lp(seed: u64) -> LinearProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = RandomLpConfig { num_vars: 8, num_inequalities: 5, num_equalities: 2, density: 0.6, scale_exponent: 0.0 };
    let base = random_lp(&cfg, seed).unwrap().lp;
    let (n, m1) = (base.num_vars(), base.num_inequality_rows);
    let m2 = base.num_constraints() - m1;
    let num_fixed = rng.gen_range(1..=3);
    let num_empty_cols = rng.gen_range(1..=2);

    // Row layout: original inequalities, one empty inequality, original
    // equalities, one empty equality.
    let row_map = |r: usize| if r < m1 { r } else { r + 1 };
    let mut t: Vec<_> = base.constraint_matrix.triplets().map(|(r, c, v)| (row_map(r), c, v)).collect();
    let mut q = base.right_hand_side[..m1].to_vec();
    q.push(-rng.gen_range(0.0..1.0));
    q.extend_from_slice(&base.right_hand_side[m1..]);
    q.push(0.0);

    let mut c = base.objective_vector.clone();
    let mut lower = base.variable_lower.clone();
    let mut upper = base.variable_upper.clone();
    for f in 0..num_fixed {
        let col = n + f;
        let value = rng.gen_range(-2.0..2.0);
        for r in 0..m1 + m2 {
            if rng.gen_bool(0.4) {
                let a = rng.gen_range(-1.0..1.0);
                t.push((row_map(r), col, a));
                q[row_map(r)] += a * value;
            }
        }
        c.push(rng.gen_range(-1.0..1.0));
        lower.push(value);
        upper.push(value);
    }
    for e in 0..num_empty_cols {
        if e % 2 == 0 {
            c.push(rng.gen_range(0.1..1.0));
            lower.push(0.0);
            upper.push(f64::INFINITY);
        } else {
            c.push(-rng.gen_range(0.1..1.0));
            lower.push(f64::NEG_INFINITY);
            upper.push(rng.gen_range(0.0..3.0));
        }
    }
    let cols = n + num_fixed + num_empty_cols;
    let k = SparseMatrix::from_triplets(m1 + m2 + 2, cols, t).unwrap();
    LinearProgram::new(c, k, q, m1 + 1, lower, upper).unwrap()
}

fn presolve_round_trip() -> Outcome {
    let params = SolverParams::default();
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let lp = injected_lp(seed);
        let r = solve(&lp, &params, None).map_err(|e| e.to_string())?;
        ensure(r.termination_reason == TerminationReason::Optimal, || {
            format!("seed {seed}: {:?}", r.termination_reason)
        })?;
        let (_, transform) = presolve(&lp).map_err(|e| e.to_string())?;
        ensure(
            !transform.fixed_variables.is_empty()
                && transform.removed_empty_rows.len() == 2
                && !transform.removed_empty_cols.is_empty(),
            || format!("seed {seed}: presolve removed too little: {transform:?}"),
        )?;
        let errors = kkt_errors(&lp, &r.primal_solution, &r.dual_solution);
        worst = worst.max(errors.max());
        ensure(errors.max() <= 2.0 * params.eps_optimal, || format!("seed {seed}: {errors:?}"))?;
    }
    Ok(format!("20 LPs, max original-problem KKT error {worst:.2e}"))
}

fn determinism() -> Outcome {
    let cfg =
        RandomLpConfig { num_vars: 30, num_inequalities: 20, num_equalities: 5, density: 1.0, scale_exponent: 1.5 };
    let cases = [
        ("pagerank_1000", pagerank_instance(1000, 1)),
        ("random", random_lp(&cfg, 4).unwrap().lp),
        ("transportation", handcrafted_suite().into_iter().find(|c| c.name == "transportation").unwrap().lp),
    ];
    for (name, lp) in &cases {
        let json = || {
            let r = solve(lp, &SolverParams::default(), None).unwrap();
            ResultSummary::new(name, lp, ObjectiveSense::Minimize, &r).to_json()
        };
        let (a, b) = (json(), json());
        ensure(a == b, || format!("{name}: summaries differ"))?;
    }
    let instances = ablation_suite();
    let params = SolverParams { kkt_pass_limit: 20_000.0, ..SolverParams::default() };
    let csv = |t| run_bench(&instances, &params, t).unwrap().to_csv();
    let first = csv(threads());
    ensure(first == csv(threads()), || "bench CSV differs between runs".into())?;
    ensure(first == csv(1), || "bench CSV depends on thread count".into())?;
    Ok(format!("{} single solves and a 30-instance bench reproduce byte for byte", cases.len()))
}

fn main() {
    let checks: [(&str, fn() -> Outcome); 10] = [
        ("handcrafted_exactness", handcrafted_exactness),
        ("scale_invariance", scale_invariance),
        ("step_condition", step_condition),
        ("gap_oracle", gap_oracle),
        ("ablation", ablation),
        ("pagerank", pagerank),
        ("ruiz_equilibration", ruiz),
        ("sgm10", sgm),
        ("presolve_round_trip", presolve_round_trip),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in checks {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} ({secs:.1} s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({secs:.1} s): {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
