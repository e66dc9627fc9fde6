use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use coalition::bench::{self, Family222, OddMan};
use coalition::fictitious::{fp_2player, joint_fp, sync_fp, FpTrace, ThetaRule};
use coalition::game::{random_symmetric_tensor, PayoffMatrix2, PayoffTensor3};
use coalition::guts;
use coalition::lab::{self, io, CampaignConfig, MethodSpec, NashTarget, Targets};
use coalition::opt::{solve_maximin, solve_minimax, ConstraintMode, Method, SmoothingSpec, SolverConfig};
use coalition::{Error, Result};

#[derive(Parser)]
#[command(
    name = "coalition",
    version,
    about = "Coalition values of three-player zero-sum games"
)]
struct Cli {
    /// JSON file with optional "solver" and "campaign" sections; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute V_N, V_S and V_A of a tensor file.
    Solve(SolveArgs),
    /// Write a random symmetric zero-sum tensor.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form benchmark games.
    Bench(BenchArgs),
    /// Continuous Guts poker.
    #[command(subcommand)]
    Guts(GutsCommand),
    /// Fictitious play.
    Fp(FpArgs),
    /// Random-game experiments.
    #[command(subcommand)]
    Campaign(CampaignCommand),
}

#[derive(Args, Default)]
struct SolverFlags {
    /// none | lp:P | softmax:EPS
    #[arg(long)]
    smoothing: Option<SmoothingSpec>,
    #[arg(long)]
    constraint_mode: Option<ConstraintMode>,
    /// qn | pg
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    solver_seed: Option<u64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    grad_tol: Option<f64>,
    /// Coarsen softmax smoothing after a failed line search.
    #[arg(long)]
    adaptive: bool,
}

impl SolverFlags {
    fn apply(&self, mut cfg: SolverConfig) -> SolverConfig {
        if let Some(s) = self.smoothing {
            cfg.smoothing = s;
        }
        if let Some(m) = self.constraint_mode {
            cfg.constraint_mode = m;
        }
        if let Some(m) = self.method {
            cfg.method = m;
        }
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        if let Some(s) = self.solver_seed {
            cfg.rng_seed = s;
        }
        if let Some(m) = self.max_iter {
            cfg.max_iter = m;
        }
        if let Some(t) = self.grad_tol {
            cfg.grad_tol = t;
        }
        cfg.adaptive_smoothing |= self.adaptive;
        cfg
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    tensor: PathBuf,
    /// Comma-separated subset of nash,sync,async. Asking for nash on a
    /// non-symmetric tensor is an error; by default it is reported when available.
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<Target>>,
    /// Cross-check V_S with this many synchronous fictitious play iterations.
    #[arg(long)]
    fp_iters: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Nash,
    Sync,
    Async,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchGame {
    OddsEvens,
    Rps,
    Family222,
    Toy,
}

#[derive(Args)]
struct BenchArgs {
    game: BenchGame,
    /// omo | omi (for family222: omo-like | omi-like)
    #[arg(long, default_value = "omi")]
    variant: String,
    /// Family parameter, or the toy game's one-round payoff.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Toy game stakes.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Also solve the game numerically and report both.
    #[arg(long)]
    solve: bool,
    /// Write the benchmark tensor to this file.
    #[arg(long)]
    tensor_out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Subcommand)]
enum GutsCommand {
    /// Synchronous value T(V) and player 1's optimal threshold.
    Value {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        v: f64,
    },
    /// The coalition's optimal mixture of its two best replies.
    Mixture,
    /// Iterate V <- T(V) to the repeated-game value.
    Recurse {
        #[arg(long, default_value_t = 100)]
        max_rounds: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Grid certificate that the asynchronous value is zero.
    Certify {
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// Tensor of the game restricted to n thresholds.
    Discretize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Best-reply values along p1 as CSV (p1,alpha_a,alpha_b).
    Curves {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        v: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FpMode {
    Joint,
    Sync,
    #[value(name = "2player")]
    TwoPlayer,
}

#[derive(Args)]
struct FpArgs {
    /// Tensor file; in 2player mode a matrix file, or a tensor played as
    /// player 1 against pure pairs.
    #[arg(long)]
    tensor: PathBuf,
    #[arg(long, value_enum, default_value = "joint")]
    mode: FpMode,
    #[arg(long, default_value_t = 1000)]
    iters: u64,
    /// classical | floor:C
    #[arg(long, default_value = "classical")]
    theta: ThetaRule,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Runs with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Runs whose value is within this of zero count as reaching the Nash value.
    #[arg(long, default_value_t = 0.05)]
    nash_tol: f64,
    /// Print every trace as JSON instead of a summary.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum CampaignCommand {
    /// V_A - V_S and V_A / V_S over random symmetric games.
    Gap {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples_csv: Option<PathBuf>,
        #[arg(long)]
        histogram_csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Accuracy of matrix-game solvers measured on M and -M^T.
    ValueGap {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smoothings to compare, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "softmax:1e-4,none")]
        methods: Vec<SmoothingSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverFlags,
    },
}

#[derive(Default, Deserialize)]
#[serde(default)]
struct FileConfig {
    solver: SolverConfig,
    campaign: Option<CampaignConfig>,
}

#[derive(Serialize)]
struct BenchOutput {
    game: String,
    tensor: Option<PayoffTensor3>,
    oracle: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    numerical: Option<NumericalCheck>,
}

#[derive(Serialize)]
struct NumericalCheck {
    v_sync: f64,
    v_async: f64,
    sync_error: f64,
    async_error: f64,
}

#[derive(Serialize)]
struct FpSummary {
    mode: &'static str,
    iterations: u64,
    trials: u64,
    mean_value: f64,
    mean_gap: f64,
    near_zero: u64,
    near_zero_fraction: f64,
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    if let Some(p) = out {
        io::write_json(p, value)?;
    }
    Ok(())
}

fn load_tensor(path: &Path) -> Result<PayoffTensor3> {
    io::read_json(path)
}

fn run(cli: Cli) -> Result<()> {
    let file: FileConfig = match &cli.config {
        Some(p) => io::read_json(p)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Solve(a) => {
            let tensor = load_tensor(&a.tensor)?;
            let cfg = a.solver.apply(file.solver);
            let targets = match &a.targets {
                None => Targets {
                    fp_iterations: a.fp_iters,
                    ..Default::default()
                },
                Some(t) => Targets {
                    nash: if t.contains(&Target::Nash) {
                        NashTarget::Required
                    } else {
                        NashTarget::Skip
                    },
                    sync: t.contains(&Target::Sync),
                    asynchronous: t.contains(&Target::Async),
                    fp_iterations: a.fp_iters,
                },
            };
            emit(&lab::solve_game(&tensor, &targets, &cfg)?, a.out.as_deref())
        }
        Command::Generate { n, seed, out } => {
            let t = random_symmetric_tensor(n, seed)?;
            emit(&t, out.as_deref())
        }
        Command::Bench(a) => {
            let cfg = a.solver.apply(file.solver);
            let (name, tensor, oracle) = match a.game {
                BenchGame::OddsEvens => {
                    let (t, s) = bench::odds_evens(a.variant.parse::<OddMan>()?);
                    ("odds-evens", Some(t), serde_json::to_value(s)?)
                }
                BenchGame::Rps => {
                    let (t, s) = bench::rps(a.variant.parse::<OddMan>()?);
                    ("rps", Some(t), serde_json::to_value(s)?)
                }
                BenchGame::Family222 => {
                    let fam = a.variant.parse::<Family222>()?;
                    let t = bench::family222_tensor(a.alpha, fam)?;
                    (
                        "family222",
                        Some(t),
                        serde_json::to_value(bench::classify_222(a.alpha, fam)?)?,
                    )
                }
                BenchGame::Toy => (
                    "toy",
                    None,
                    serde_json::to_value(bench::recursive_toy_2x2(a.alpha, a.beta)?)?,
                ),
            };
            let numerical = match (&tensor, a.solve) {
                (Some(t), true) => {
                    let vs = solve_maximin(t, &cfg)?.value;
                    let va = solve_minimax(t, &cfg)?.value;
                    let want = |k: &str| oracle.get(k).and_then(|v| v.as_f64()).unwrap_or(f64::NAN);
                    Some(NumericalCheck {
                        v_sync: vs,
                        v_async: va,
                        sync_error: (vs - want("v_sync")).abs(),
                        async_error: (va - want("v_async")).abs(),
                    })
                }
                _ => None,
            };
            if let (Some(p), Some(t)) = (&a.tensor_out, &tensor) {
                io::write_json(p, t)?;
            }
            emit(
                &BenchOutput {
                    game: name.to_string(),
                    tensor,
                    oracle,
                    numerical,
                },
                None,
            )
        }
        Command::Guts(g) => match g {
            GutsCommand::Value { v } => emit(&guts::sync_value(v)?, None),
            GutsCommand::Mixture => emit(&guts::optimal_coalition_mixture()?, None),
            GutsCommand::Recurse { max_rounds, tol } => emit(&guts::recursive_fixed_point(max_rounds, tol)?, None),
            GutsCommand::Certify { grid } => emit(&guts::async_certificate(grid)?, None),
            GutsCommand::Discretize { n, out } => emit(&guts::discretize_guts(n)?, out.as_deref()),
            GutsCommand::Curves { v, points, out } => {
                let rows = guts::alpha_curves(v, points)?;
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in &rows {
                    w.serialize(r)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
                match out {
                    Some(p) => std::fs::write(p, &bytes)?,
                    None => print!("{}", String::from_utf8_lossy(&bytes)),
                }
                Ok(())
            }
        },
        Command::Fp(a) => run_fp(a),
        Command::Campaign(c) => match c {
            CampaignCommand::Gap {
                n,
                trials,
                seed,
                samples_csv,
                histogram_csv,
                out,
                solver,
            } => {
                let mut cfg = file.campaign.unwrap_or_default();
                cfg.sync_solver = solver.apply(cfg.sync_solver);
                cfg.async_solver = solver.apply(cfg.async_solver);
                if let Some(n) = n {
                    cfg.n = n;
                }
                if let Some(t) = trials {
                    cfg.trials = t;
                }
                if let Some(s) = seed {
                    cfg.master_seed = s;
                }
                cfg.samples_csv = samples_csv.or(cfg.samples_csv);
                cfg.histogram_csv = histogram_csv.or(cfg.histogram_csv);
                cfg.report_json = out.or(cfg.report_json);
                let report = lab::run_gap_campaign(&cfg)?;
                if let Some(p) = &cfg.samples_csv {
                    io::write_samples_file(p, &report.samples)?;
                }
                if let Some(p) = &cfg.histogram_csv {
                    io::write_histogram_file(p, &report.stats.gap_histogram)?;
                    let theta = p.with_extension("theta.csv");
                    io::write_histogram_file(&theta, &report.stats.theta_histogram)?;
                }
                if let Some(p) = &cfg.report_json {
                    io::write_json(p, &report)?;
                }
                emit(&(&report.stats, &report.failures), None)
            }
            CampaignCommand::ValueGap {
                n,
                trials,
                seed,
                methods,
                out,
                solver,
            } => {
                let base = solver.apply(file.solver);
                let specs: Vec<MethodSpec> = methods
                    .iter()
                    .map(|s| {
                        MethodSpec::new(
                            s.to_string(),
                            SolverConfig {
                                smoothing: *s,
                                ..base.clone()
                            },
                        )
                    })
                    .collect();
                emit(&lab::value_gap_benchmark(n, &specs, trials, seed)?, out.as_deref())
            }
        },
    }
}

fn run_fp(a: FpArgs) -> Result<()> {
    if a.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let text = std::fs::read_to_string(&a.tensor)?;
    let (mode, traces): (&'static str, Vec<FpTrace>) = match a.mode {
        FpMode::TwoPlayer => {
            let m: PayoffMatrix2 = match serde_json::from_str::<PayoffMatrix2>(&text) {
                Ok(m) => m,
                Err(_) => serde_json::from_str::<PayoffTensor3>(&text)?.coalition_matrix(),
            };
            let t = (0..a.trials)
                .into_par_iter()
                .map(|s| fp_2player(&m, a.iters, a.seed + s))
                .collect::<Result<_>>()?;
            ("2player", t)
        }
        FpMode::Sync => {
            let p: PayoffTensor3 = serde_json::from_str(&text)?;
            (
                "sync",
                (0..a.trials)
                    .into_par_iter()
                    .map(|s| sync_fp(&p, a.iters, a.seed + s))
                    .collect::<Result<_>>()?,
            )
        }
        FpMode::Joint => {
            let p: PayoffTensor3 = serde_json::from_str(&text)?;
            let t = (0..a.trials)
                .into_par_iter()
                .map(|s| joint_fp(&p, a.iters, a.theta, a.seed + s))
                .collect::<Result<_>>()?;
            ("joint", t)
        }
    };
    if a.json {
        return emit(&traces, None);
    }
    let k = traces.len() as f64;
    let near_zero = traces.iter().filter(|t| t.value_estimate.abs() < a.nash_tol).count() as u64;
    emit(
        &FpSummary {
            mode,
            iterations: a.iters,
            trials: a.trials,
            mean_value: traces.iter().map(|t| t.value_estimate).sum::<f64>() / k,
            mean_gap: traces.iter().map(|t| t.converged_gap).sum::<f64>() / k,
            near_zero,
            near_zero_fraction: near_zero as f64 / k,
        },
        None,
    )
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
