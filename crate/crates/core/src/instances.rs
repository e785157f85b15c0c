//! Test problem generators: PageRank LPs on preferential-attachment graphs,
//! random LPs with a planted optimum, and a small suite with known optima.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, PrimalDualPoint};
use crate::sparse::SparseMatrix;

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const DEFAULT_ATTACH: usize = 3;

/// Undirected simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub num_nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_nodes];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }
}

/// Barabási–Albert preferential attachment starting from `attach`
/// isolated nodes.
pub fn barabasi_albert(n: usize, attach: usize, seed: u64) -> Result<Graph> {
    barabasi_albert_with_seed_graph(n, attach, seed, false)
}

/// As [`barabasi_albert`]; with `connected_seed` the initial nodes form a
/// clique, which adds `attach·(attach − 1)/2` edges.
pub fn barabasi_albert_with_seed_graph(n: usize, attach: usize, seed: u64, connected_seed: bool) -> Result<Graph> {
    if attach == 0 || n < attach {
        return Err(Error::InvalidSize(format!("need n ≥ attach ≥ 1, got n = {n}, attach = {attach}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(attach * (n - attach) + attach * attach);
    // Every edge contributes both endpoints, so uniform draws from this list
    // are degree-proportional.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * edges.capacity());
    if connected_seed {
        for a in 0..attach {
            for b in a + 1..attach {
                edges.push((a, b));
                endpoints.extend([a, b]);
            }
        }
    }
    let mut targets = Vec::with_capacity(attach);
    for v in attach..n {
        targets.clear();
        if endpoints.is_empty() {
            let mut pool: Vec<usize> = (0..v).collect();
            pool.shuffle(&mut rng);
            targets.extend_from_slice(&pool[..attach]);
        } else {
            while targets.len() < attach {
                let t = endpoints[rng.gen_range(0..endpoints.len())];
                if !targets.contains(&t) {
                    targets.push(t);
                }
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    Ok(Graph { num_nodes: n, edges })
}

/// PageRank as a feasibility LP: `xᵢ − d·(S′x)ᵢ ≥ (1 − d)/n` for every node,
/// `Σx = 1`, `x ≥ 0`, zero objective. `S′` is the adjacency matrix with
/// columns scaled by node degree.
pub fn pagerank_lp(g: &Graph, damping: f64) -> Result<LinearProgram> {
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::InvalidParameter(format!("damping must lie in (0, 1), got {damping}")));
    }
    let n = g.num_nodes;
    let deg = g.degrees();
    if let Some(i) = deg.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedNode(i));
    }
    let mut triplets = Vec::with_capacity(2 * g.edges.len() + 2 * n);
    for i in 0..n {
        triplets.push((i, i, 1.0));
    }
    for &(a, b) in &g.edges {
        triplets.push((a, b, -damping / deg[b] as f64));
        triplets.push((b, a, -damping / deg[a] as f64));
    }
    for i in 0..n {
        triplets.push((n, i, 1.0));
    }
    let k = SparseMatrix::from_triplets(n + 1, n, triplets)?;
    let mut q = vec![(1.0 - damping) / n as f64; n];
    q.push(1.0);
    LinearProgram::new(vec![0.0; n], k, q, n, vec![0.0; n], vec![f64::INFINITY; n])
}

/// `‖Sx − x‖∞` for the damped PageRank matrix `S = d·S′ + (1 − d)·J/n`,
/// using `Jx = 1ᵀx · 1`.
pub fn pagerank_residual(g: &Graph, damping: f64, x: &[f64]) -> f64 {
    let n = g.num_nodes;
    let deg = g.degrees();
    let total: f64 = x.iter().sum();
    let mut sx = vec![(1.0 - damping) * total / n as f64; n];
    for &(a, b) in &g.edges {
        sx[a] += damping * x[b] / deg[b] as f64;
        sx[b] += damping * x[a] / deg[a] as f64;
    }
    sx.iter().zip(x).fold(0.0, |m, (s, v)| m.max((s - v).abs()))
}

/// Shape of a random LP with a planted primal-dual optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomLpConfig {
    pub num_vars: usize,
    pub num_inequalities: usize,
    pub num_equalities: usize,
    /// Probability of each matrix entry being stored.
    pub density: f64,
    /// Rows and columns are multiplied by `10^U[−s, s]`.
    pub scale_exponent: f64,
}

impl Default for RandomLpConfig {
    fn default() -> Self {
        Self { num_vars: 10, num_inequalities: 6, num_equalities: 2, density: 0.5, scale_exponent: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomLp {
    pub lp: LinearProgram,
    pub optimum: PrimalDualPoint,
    pub optimal_objective: f64,
}

/// Random LP whose optimum is known by construction: a point `(x*, y*)`
/// and reduced costs satisfying complementary slackness are drawn first,
/// then `q` and `c` are chosen to make them optimal.
pub fn random_lp(config: &RandomLpConfig, seed: u64) -> Result<RandomLp> {
    let RandomLpConfig { num_vars: n, num_inequalities: m1, num_equalities: m2, density, scale_exponent } = *config;
    if n == 0 {
        return Err(Error::InvalidSize("random LP needs at least one variable".into()));
    }
    if !(density > 0.0 && density <= 1.0) || !(scale_exponent >= 0.0) {
        return Err(Error::InvalidParameter(format!("invalid random LP config {config:?}")));
    }
    let m = m1 + m2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entry = |rng: &mut ChaCha8Rng| {
        let v: f64 = rng.gen_range(0.1..1.0);
        if rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    };

    let mut triplets = Vec::new();
    let mut row_has = vec![false; m];
    let mut col_has = vec![false; n];
    for (j, row_seen) in row_has.iter_mut().enumerate() {
        for (i, col_seen) in col_has.iter_mut().enumerate() {
            if rng.gen_bool(density) {
                triplets.push((j, i, entry(&mut rng)));
                *row_seen = true;
                *col_seen = true;
            }
        }
    }
    for j in 0..m {
        if !row_has[j] {
            let i = rng.gen_range(0..n);
            triplets.push((j, i, entry(&mut rng)));
            col_has[i] = true;
        }
    }
    for i in 0..n {
        if !col_has[i] && m > 0 {
            let j = rng.gen_range(0..m);
            triplets.push((j, i, entry(&mut rng)));
        }
    }
    let k = SparseMatrix::from_triplets(m, n, triplets)?;

    let mut lower = vec![0.0; n];
    let mut upper = vec![f64::INFINITY; n];
    let mut x = vec![0.0; n];
    let mut lambda = vec![0.0; n];
    for i in 0..n {
        match rng.gen_range(0..4) {
            0 => {}
            1 => lower[i] = f64::NEG_INFINITY,
            2 => {
                lower[i] = rng.gen_range(-2.0..0.0);
                upper[i] = rng.gen_range(0.5..3.0);
            }
            _ => {
                lower[i] = f64::NEG_INFINITY;
                upper[i] = rng.gen_range(-1.0..2.0);
            }
        }
        let at_lower = lower[i].is_finite() && rng.gen_bool(0.4);
        let at_upper = !at_lower && upper[i].is_finite() && rng.gen_bool(0.4);
        if at_lower {
            x[i] = lower[i];
            lambda[i] = rng.gen_range(0.1..2.0);
        } else if at_upper {
            x[i] = upper[i];
            lambda[i] = -rng.gen_range(0.1..2.0);
        } else {
            let lo = if lower[i].is_finite() { lower[i] } else { upper[i].min(0.0) - 2.0 };
            let hi = if upper[i].is_finite() { upper[i] } else { lo.max(0.0) + 2.0 };
            x[i] = rng.gen_range(lo..hi);
            if x[i] == lower[i] {
                x[i] = 0.5 * (lo + hi);
            }
        }
    }

    let kx = k.multiply(&x)?;
    let mut q = kx.clone();
    let mut y = vec![0.0; m];
    for j in 0..m {
        if j < m1 {
            if rng.gen_bool(0.5) {
                y[j] = rng.gen_range(0.1..2.0);
            } else {
                q[j] -= rng.gen_range(0.1..2.0);
            }
        } else {
            y[j] = rng.gen_range(-2.0..2.0);
        }
    }
    let kty = k.multiply_transpose(&y)?;
    let c: Vec<f64> = kty.iter().zip(&lambda).map(|(a, l)| a + l).collect();

    // Ill-conditioning: K' = R K C with x = C x', y = R y'.
    let row_scale: Vec<f64> = (0..m).map(|_| 10f64.powf(rng.gen_range(-1.0..=1.0) * scale_exponent)).collect();
    let col_scale: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.gen_range(-1.0..=1.0) * scale_exponent)).collect();
    let k = k.scaled(&row_scale, &col_scale)?;
    let q: Vec<f64> = q.iter().zip(&row_scale).map(|(v, r)| v * r).collect();
    let c: Vec<f64> = c.iter().zip(&col_scale).map(|(v, s)| v * s).collect();
    let lower: Vec<f64> = lower.iter().zip(&col_scale).map(|(v, s)| v / s).collect();
    let upper: Vec<f64> = upper.iter().zip(&col_scale).map(|(v, s)| v / s).collect();
    let x: Vec<f64> = x.iter().zip(&col_scale).map(|(v, s)| v / s).collect();
    let y: Vec<f64> = y.iter().zip(&row_scale).map(|(v, r)| v / r).collect();

    let optimal_objective = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    let lp = LinearProgram::new(c, k, q, m1, lower, upper)?;
    Ok(RandomLp { lp, optimum: PrimalDualPoint::new(x, y), optimal_objective })
}

/// A small LP with a known optimal value.
#[derive(Debug, Clone, PartialEq)]
pub struct HandcraftedLp {
    pub name: &'static str,
    pub lp: LinearProgram,
    pub optimal_objective: f64,
    /// Present when the primal optimum is unique.
    pub optimal_primal: Option<Vec<f64>>,
}

fn dense_lp(c: &[f64], rows: &[&[f64]], q: &[f64], m1: usize, lower: &[f64], upper: &[f64]) -> LinearProgram {
    let n = c.len();
    let k = if rows.is_empty() {
        SparseMatrix::zeros(0, n)
    } else {
        SparseMatrix::from_dense(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("valid dense rows")
    };
    LinearProgram::new(c.to_vec(), k, q.to_vec(), m1, lower.to_vec(), upper.to_vec()).expect("valid suite LP")
}

/// Thirteen LPs with one to ten variables covering free variables, two-sided
/// bounds, equality-only and inequality-only problems, degenerate optima and
/// an objective much larger than the right-hand side.
pub fn handcrafted_suite() -> Vec<HandcraftedLp> {
    const INF: f64 = f64::INFINITY;
    let case = |name, lp, optimal_objective, optimal_primal: Option<&[f64]>| HandcraftedLp {
        name,
        lp,
        optimal_objective,
        optimal_primal: optimal_primal.map(|p| p.to_vec()),
    };
    let mut upper_only = dense_lp(&[-1.0], &[&[1.0]], &[-1.0], 1, &[-INF], &[5.0]);
    upper_only.objective_constant = 2.0;
    let ten: Vec<f64> = (1..=10).map(f64::from).collect();
    vec![
        case("single_variable", dense_lp(&[1.0], &[&[1.0]], &[1.0], 1, &[0.0], &[INF]), 1.0, Some(&[1.0])),
        case(
            "two_variable",
            dense_lp(&[-1.0, -2.0], &[&[-1.0, -1.0]], &[-1.0], 1, &[0.0, 0.0], &[INF, INF]),
            -2.0,
            Some(&[0.0, 1.0]),
        ),
        case("fixed_by_equality", dense_lp(&[0.0], &[&[1.0]], &[0.3], 0, &[0.0], &[1.0]), 0.0, Some(&[0.3])),
        case(
            "free_variables",
            dense_lp(&[1.0, 2.0], &[&[1.0, 1.0], &[1.0, -1.0]], &[2.0, 0.0], 1, &[-INF, -INF], &[INF, INF]),
            3.0,
            Some(&[1.0, 1.0]),
        ),
        case("box_only", dense_lp(&[1.0, -1.0], &[], &[], 0, &[-1.0, 0.0], &[2.0, 3.0]), -4.0, Some(&[-1.0, 3.0])),
        case(
            "equality_only",
            dense_lp(&[1.0, 2.0, 3.0], &[&[1.0, 1.0, 1.0], &[1.0, -1.0, 0.0]], &[1.0, 0.0], 0, &[0.0; 3], &[INF; 3]),
            1.5,
            Some(&[0.5, 0.5, 0.0]),
        ),
        case(
            "inequality_only",
            dense_lp(
                &[-3.0, -5.0],
                &[&[-1.0, 0.0], &[0.0, -2.0], &[-3.0, -2.0]],
                &[-4.0, -12.0, -18.0],
                3,
                &[0.0, 0.0],
                &[INF, INF],
            ),
            -36.0,
            Some(&[2.0, 6.0]),
        ),
        case(
            "degenerate_vertex",
            dense_lp(
                &[-1.0, 0.0],
                &[&[-1.0, -1.0], &[-1.0, 1.0], &[-1.0, 0.0]],
                &[-1.0, -1.0, -1.0],
                3,
                &[0.0, 0.0],
                &[INF, INF],
            ),
            -1.0,
            Some(&[1.0, 0.0]),
        ),
        case(
            "large_objective",
            dense_lp(&[1000.0, 2000.0], &[&[1.0, 1.0]], &[0.001], 1, &[0.0, 0.0], &[INF, INF]),
            1.0,
            Some(&[0.001, 0.0]),
        ),
        case(
            "fractional_knapsack",
            dense_lp(&ten, &[&[1.0; 10]], &[2.5], 1, &[0.0; 10], &[1.0; 10]),
            4.5,
            Some(&[1.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
        ),
        case(
            "transportation",
            dense_lp(
                &[1.0, 4.0, 3.0, 1.0],
                &[&[1.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 1.0], &[1.0, 0.0, 1.0, 0.0], &[0.0, 1.0, 0.0, 1.0]],
                &[3.0, 2.0, 2.0, 3.0],
                0,
                &[0.0; 4],
                &[INF; 4],
            ),
            8.0,
            Some(&[2.0, 1.0, 0.0, 2.0]),
        ),
        case("upper_bound_only", upper_only, -3.0, Some(&[5.0])),
        case(
            "two_constraints",
            dense_lp(&[-1.0, -1.0], &[&[-1.0, -2.0], &[-3.0, -1.0]], &[-4.0, -6.0], 2, &[0.0, 0.0], &[INF, INF]),
            -2.8,
            Some(&[1.6, 1.2]),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::termination::convergence_info;

    #[test]
    fn edge_counts() {
        assert_eq!(barabasi_albert(5, 3, 0).unwrap().edges.len(), 6);
        assert_eq!(barabasi_albert(3, 3, 0).unwrap().edges.len(), 0);
        assert_eq!(barabasi_albert(10_000, 3, 1).unwrap().edges.len(), 29_991);
        assert!(barabasi_albert(2, 3, 0).is_err());
        assert!(barabasi_albert(5, 0, 0).is_err());
        assert_eq!(barabasi_albert_with_seed_graph(5, 3, 0, true).unwrap().edges.len(), 9);
    }

    #[test]
    fn graph_is_simple_and_deterministic() {
        let g = barabasi_albert(500, 3, 42).unwrap();
        assert_eq!(g, barabasi_albert(500, 3, 42).unwrap());
        assert_ne!(g, barabasi_albert(500, 3, 43).unwrap());
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &g.edges {
            assert_ne!(a, b);
            assert!(a < 500 && b < 500);
            assert!(seen.insert((a.min(b), a.max(b))));
        }
        assert!(*g.degrees().iter().max().unwrap() > 6);
    }

    #[test]
    fn pagerank_nnz() {
        assert_eq!(pagerank_lp(&barabasi_albert(10, 3, 0).unwrap(), 0.85).unwrap().constraint_matrix.nnz(), 62);
        let big = pagerank_lp(&barabasi_albert(10_000, 3, 0).unwrap(), 0.85).unwrap();
        assert_eq!(big.constraint_matrix.nnz(), 79_982);
        assert!(matches!(pagerank_lp(&barabasi_albert(3, 3, 0).unwrap(), 0.85), Err(Error::IsolatedNode(_))));
        assert!(pagerank_lp(&barabasi_albert(10, 3, 0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn two_cycle_uniform_vector_is_feasible() {
        let g = Graph { num_nodes: 2, edges: vec![(0, 1)] };
        let lp = pagerank_lp(&g, 0.85).unwrap();
        assert_eq!(lp.constraint_matrix.to_dense(), vec![vec![1.0, -0.85], vec![-0.85, 1.0], vec![1.0, 1.0]]);
        let x = [0.5, 0.5];
        let kx = lp.constraint_matrix.multiply(&x).unwrap();
        for j in 0..2 {
            assert!((kx[j] - lp.right_hand_side[j]).abs() < 1e-15);
        }
        assert_eq!(kx[2], 1.0);
        assert!(pagerank_residual(&g, 0.85, &x) < 1e-15);
    }

    #[test]
    fn planted_optimum_satisfies_optimality_conditions() {
        for seed in 0..20 {
            for s in [0.0, 2.0] {
                let cfg = RandomLpConfig { scale_exponent: s, ..Default::default() };
                let r = random_lp(&cfg, seed).unwrap();
                let info = convergence_info(&r.lp, &r.optimum.primal, &r.optimum.dual).unwrap();
                assert!(info.max_relative_error() < 1e-12, "seed {seed}: {info:?}");
                assert!((info.primal_objective - r.optimal_objective).abs() < 1e-9 * (1.0 + r.optimal_objective.abs()));
            }
        }
    }

    #[test]
    fn suite_optima_are_feasible() {
        let suite = handcrafted_suite();
        assert!(suite.len() >= 10);
        for case in &suite {
            let x = case.optimal_primal.as_ref().unwrap();
            assert!((case.lp.primal_objective(x) - case.optimal_objective).abs() < 1e-12, "{}", case.name);
            let info = convergence_info(&case.lp, x, &vec![0.0; case.lp.num_constraints()]).unwrap();
            assert!(info.primal_residual_norm < 1e-12, "{}", case.name);
            for i in 0..x.len() {
                assert!(case.lp.variable_lower[i] <= x[i] && x[i] <= case.lp.variable_upper[i]);
            }
        }
    }
}
