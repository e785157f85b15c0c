use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use folp_core::bench::{handcrafted_instances, load_corpus, run_bench};
use folp_core::instances::{
    barabasi_albert_with_seed_graph, handcrafted_suite, pagerank_lp, DEFAULT_ATTACH, DEFAULT_DAMPING,
};
use folp_core::mps::{read_mps_file, write_mps, MpsModel};
use folp_core::output::{write_result, ResultSummary};
use folp_core::{solve, RestartScheme, SolverParams, StepPolicy, TerminationReason};

const EXIT_OPTIMAL: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_LIMIT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_DETECTED: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "folp", version, about = "First-order LP solver (restarted PDHG)")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// MPS file to solve.
    #[arg(long = "instance_path")]
    instance_path: Option<PathBuf>,

    /// Directory for the JSON summary and solution vectors. Without it the
    /// summary is printed to stdout.
    #[arg(long = "output_dir")]
    output_dir: Option<PathBuf>,

    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write generated instances as MPS.
    #[command(subcommand)]
    Generate(Generate),
    /// Solve a set of instances and print a CSV table.
    Bench(BenchArgs),
}

#[derive(Subcommand, Debug)]
enum Generate {
    /// PageRank LP on a preferential-attachment graph.
    Pagerank {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DAMPING)]
        damping: f64,
        #[arg(long, default_value_t = DEFAULT_ATTACH)]
        attach: usize,
        /// Connect the initial nodes to each other.
        #[arg(long = "connected_seed")]
        connected_seed: bool,
        /// Output file; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The built-in suite of small LPs, one file per problem.
    Handcrafted {
        #[arg(long = "output_dir")]
        output_dir: PathBuf,
    },
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Directory of MPS files.
    #[arg(long, conflicts_with = "handcrafted", required_unless_present = "handcrafted")]
    corpus: Option<PathBuf>,
    /// Use the built-in suite instead of a corpus.
    #[arg(long)]
    handcrafted: bool,
    /// Append a shifted geometric mean row.
    #[arg(long)]
    sgm10: bool,
    /// CSV output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Pdhg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum StepArg {
    Adaptive,
    Constant,
    MalitskyPock,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RestartArg {
    Pdlp,
    Theory,
    None,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args, Debug)]
struct SolverArgs {
    /// ε of the termination test, used for both absolute and relative terms.
    #[arg(long = "relative_optimality_tol", default_value_t = 1e-8)]
    relative_optimality_tol: f64,
    /// Accepted for compatibility; must equal --relative_optimality_tol.
    #[arg(long = "absolute_optimality_tol")]
    absolute_optimality_tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Method::Pdhg)]
    method: Method,
    #[arg(long = "step_size_policy", value_enum, default_value_t = StepArg::Adaptive)]
    step_size_policy: StepArg,
    #[arg(long = "l_inf_ruiz_iterations", default_value_t = 10)]
    l_inf_ruiz_iterations: usize,
    #[arg(long = "pock_chambolle_rescaling", default_value_t = true, action = clap::ArgAction::Set)]
    pock_chambolle_rescaling: bool,
    #[arg(long = "pock_chambolle_alpha", default_value_t = 1.0)]
    pock_chambolle_alpha: f64,
    #[arg(long = "restart_scheme", value_enum, default_value_t = RestartArg::Pdlp)]
    restart_scheme: RestartArg,
    #[arg(long = "primal_weight_update_smoothing", default_value_t = 0.5)]
    primal_weight_update_smoothing: f64,
    #[arg(long = "scale_invariant_initial_primal_weight", default_value_t = true, action = clap::ArgAction::Set)]
    scale_invariant_initial_primal_weight: bool,
    #[arg(long = "kkt_matrix_pass_limit")]
    kkt_matrix_pass_limit: Option<f64>,
    #[arg(long = "iteration_limit")]
    iteration_limit: Option<usize>,
    #[arg(long = "time_sec_limit")]
    time_sec_limit: Option<f64>,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    presolve: Switch,
    /// 0 warnings only, 1 info, 2 per-evaluation progress, 3 everything.
    #[arg(long, default_value_t = 1)]
    verbosity: u8,
}

impl SolverArgs {
    fn params(&self) -> Result<SolverParams> {
        if let Some(abs) = self.absolute_optimality_tol {
            if abs != self.relative_optimality_tol {
                bail!("--absolute_optimality_tol must equal --relative_optimality_tol");
            }
        }
        let params = SolverParams {
            eps_optimal: self.relative_optimality_tol,
            step_policy: match self.step_size_policy {
                StepArg::Adaptive => StepPolicy::Adaptive,
                StepArg::Constant => StepPolicy::Constant,
                StepArg::MalitskyPock => StepPolicy::MalitskyPock,
            },
            restart_scheme: match self.restart_scheme {
                RestartArg::Pdlp => RestartScheme::Pdlp,
                RestartArg::Theory => RestartScheme::Theory,
                RestartArg::None => RestartScheme::None,
            },
            ruiz_iterations: self.l_inf_ruiz_iterations,
            use_pock_chambolle: self.pock_chambolle_rescaling,
            pc_alpha: self.pock_chambolle_alpha,
            theta_smoothing: self.primal_weight_update_smoothing,
            scale_invariant_initial_primal_weight: self.scale_invariant_initial_primal_weight,
            kkt_pass_limit: self.kkt_matrix_pass_limit.unwrap_or(f64::INFINITY),
            iteration_limit: self.iteration_limit.unwrap_or(usize::MAX),
            time_limit_seconds: self.time_sec_limit.unwrap_or(f64::INFINITY),
            presolve: self.presolve == Switch::On,
            ..SolverParams::default()
        };
        params.validate()?;
        Ok(params)
    }

    fn init_logging(&self) {
        let level = match self.verbosity {
            0 => log::LevelFilter::Warn,
            1 => log::LevelFilter::Info,
            2 => log::LevelFilter::Debug,
            _ => log::LevelFilter::Trace,
        };
        let _ = env_logger::Builder::new().filter_level(level).format_timestamp(None).try_init();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Some(Command::Generate(g)) => generate(g).map(|_| EXIT_OPTIMAL),
        Some(Command::Bench(b)) => bench(b).map(|_| EXIT_OPTIMAL),
        None => {
            let Some(path) = cli.instance_path else {
                bail!("--instance_path is required (see --help)");
            };
            solve_instance(&path, cli.output_dir.as_deref(), &cli.solver)
        }
    }
}

fn exit_code(reason: TerminationReason) -> u8 {
    match reason {
        TerminationReason::Optimal => EXIT_OPTIMAL,
        TerminationReason::IterationLimit | TerminationReason::KktPassLimit | TerminationReason::TimeLimit => {
            EXIT_LIMIT
        }
        TerminationReason::NumericalError => EXIT_NUMERICAL,
        TerminationReason::PrimalInfeasibleDetected | TerminationReason::DualUnboundedDetected => EXIT_DETECTED,
    }
}

fn solve_instance(path: &Path, output_dir: Option<&Path>, args: &SolverArgs) -> Result<u8> {
    args.init_logging();
    let params = args.params()?;
    let model = read_mps_file(path).with_context(|| format!("reading {}", path.display()))?;
    log::info!(
        "{}: {} variables, {} constraints, {} nonzeros",
        path.display(),
        model.lp.num_vars(),
        model.lp.num_constraints(),
        model.lp.constraint_matrix.nnz()
    );
    let result = solve(&model.lp, &params, None)?;
    let stem = path.file_stem().map_or_else(|| "result".to_string(), |s| s.to_string_lossy().into_owned());
    let summary = ResultSummary::new(&stem, &model.lp, model.sense, &result);
    log::info!(
        "{:?} after {} iterations, {} KKT passes, objective {:e}, {:.3}s",
        result.termination_reason,
        result.iterations,
        result.kkt_passes(),
        summary.objective,
        result.wall_seconds
    );
    match output_dir {
        Some(dir) => {
            let files = write_result(&summary, &result, dir, &stem)
                .with_context(|| format!("writing results to {}", dir.display()))?;
            log::info!("wrote {}", files.summary.display());
        }
        None => println!("{}", summary.to_json()),
    }
    Ok(exit_code(result.termination_reason))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing to stdout"),
    }
}

fn generate(g: Generate) -> Result<()> {
    match g {
        Generate::Pagerank { nodes, seed, damping, attach, connected_seed, output } => {
            let graph = barabasi_albert_with_seed_graph(nodes, attach, seed, connected_seed)?;
            let lp = pagerank_lp(&graph, damping)?;
            let model = MpsModel::from_lp(&format!("pagerank_{nodes}_{seed}"), lp);
            write_text(output.as_deref(), &write_mps(&model))
        }
        Generate::Handcrafted { output_dir } => {
            fs::create_dir_all(&output_dir).with_context(|| format!("creating {}", output_dir.display()))?;
            for case in handcrafted_suite() {
                let model = MpsModel::from_lp(case.name, case.lp);
                let path = output_dir.join(format!("{}.mps", case.name));
                write_text(Some(&path), &write_mps(&model))?;
            }
            Ok(())
        }
    }
}

fn worker_threads() -> Result<usize> {
    match std::env::var("FOLP_NUM_THREADS") {
        Ok(v) => v.trim().parse::<usize>().with_context(|| format!("FOLP_NUM_THREADS={v:?} is not a count")),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn bench(b: BenchArgs) -> Result<()> {
    b.solver.init_logging();
    let params = b.solver.params()?;
    let instances = match &b.corpus {
        Some(dir) => load_corpus(dir).with_context(|| format!("loading corpus {}", dir.display()))?,
        None => handcrafted_instances(),
    };
    if instances.is_empty() {
        bail!("no instances to run");
    }
    let report = run_bench(&instances, &params, worker_threads()?)?;
    let mut csv = report.to_csv();
    if !b.sgm10 {
        // Drop the aggregate row.
        let keep = csv.lines().filter(|l| !l.starts_with("SGM10,")).collect::<Vec<_>>().join("\n");
        csv = keep + "\n";
    }
    write_text(b.output.as_deref(), &csv)
}
