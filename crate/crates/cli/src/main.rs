//! Batch front end: dataset generation, exact mining, private mining,
//! evaluation, and the neighbor-exploration benchmark.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use privmine_core::dataset::{parse_dataset, write_dataset, GraphDataset};
use privmine_core::diagnostics::{trace_csv, ConvergencePolicy};
use privmine_core::graph::RuleSet;
use privmine_core::harness::{
    bench_neighbors, evaluate, fixture_fig1, gen_click, gen_dense, BenchParams, ClickParams,
    DenseParams,
};
use privmine_core::iso::Matcher;
use privmine_core::miner::{m_upper_crude, mine_exact_topk, TruthFile};
use privmine_core::neighborhood::ExploreMethod;
use privmine_core::privacy::beta_noise_bound;
use privmine_core::privacy::beta_sampling_bound;
use privmine_core::sampler::{
    mine_topk, MineConfig, MineReport, PrivacyBudget, ProposalParams, ScoreFunction,
    UtilityBoundsReport, WalkOptions,
};
use privmine_core::Pattern;

#[derive(Parser)]
#[command(
    name = "privmine",
    version,
    about = "Differentially private frequent graph-pattern mining"
)]
struct Cli {
    /// Worker threads for parallel sections (default: PRIVMINE_THREADS or all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the private top-k miner and write a result JSON
    Mine(MineArgs),
    /// Run the exact non-private miner and write a ground-truth JSON
    Baseline(BaselineArgs),
    /// Generate a synthetic dataset file
    #[command(subcommand)]
    Gen(GenCommand),
    /// Score a mining result against ground truth
    Eval(EvalArgs),
    /// Compare neighbor-exploration strategies along one walk
    BenchNeighbors(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScoreKind {
    Linear,
    Plateau,
}

#[derive(Args)]
struct RuleArgs {
    /// Minimum vertices for output patterns
    #[arg(long, default_value_t = 2)]
    v_min: usize,
    /// Maximum vertices per pattern
    #[arg(long, default_value_t = 10)]
    v_max: usize,
    /// Maximum edges per pattern (unbounded when absent)
    #[arg(long)]
    e_max: Option<usize>,
    /// File with one label per line; defaults to the labels observed in the
    /// input, which is data-dependent
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args)]
struct MineArgs {
    /// Input dataset file
    #[arg(long)]
    input: PathBuf,
    /// Output result JSON path
    #[arg(long)]
    out: PathBuf,
    /// Number of patterns to release
    #[arg(long, default_value_t = 15)]
    k: u32,
    /// Support threshold; derived by the exact miner when absent
    #[arg(long)]
    f: Option<usize>,
    /// Sampling budget
    #[arg(long, default_value_t = 0.5)]
    eps1: f64,
    /// Support-perturbation budget; 0 skips noisy supports
    #[arg(long, default_value_t = 0.0)]
    eps2: f64,
    /// Proposal mass on frequent neighbors
    #[arg(long, default_value_t = 0.9)]
    eta: f64,
    /// Proposal mass on sub-neighbors within the frequent ones
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    /// Score function shape
    #[arg(long, value_enum, default_value_t = ScoreKind::Linear)]
    score: ScoreKind,
    #[command(flatten)]
    rules: RuleArgs,
    /// Random seed (all randomness in the run flows from it)
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    min_iterations: usize,
    #[arg(long, default_value_t = 20)]
    window: usize,
    #[arg(long, default_value_t = 1.0)]
    z_bound: f64,
    #[arg(long, default_value_t = 0.1)]
    first_frac: f64,
    #[arg(long, default_value_t = 0.5)]
    last_frac: f64,
    /// Per-chain iteration cap; default 50x window
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Cap on retained mappings per host graph
    #[arg(long)]
    mapping_cap: Option<usize>,
    /// Write per-round trace CSVs with this path prefix
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Include exact supports in the output (not privacy-protected)
    #[arg(long)]
    emit_true_supports: bool,
    /// Failure probability for the reported utility bounds
    #[arg(long, default_value_t = 0.05)]
    gamma: f64,
}

#[derive(Args)]
struct BaselineArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 15)]
    k: usize,
    #[command(flatten)]
    rules: RuleArgs,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Tree graphs sampled from a master tree (click-stream shaped)
    Click(GenClickArgs),
    /// Dense graphs around a target average degree
    Dense(GenDenseArgs),
    /// The checked-in 3-graph fixture
    Fixture(GenFixtureArgs),
}

#[derive(Args)]
struct GenClickArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    master_nodes: usize,
    #[arg(long, default_value_t = 10)]
    depth: usize,
    #[arg(long, default_value_t = 6)]
    fanout: usize,
    #[arg(long, default_value_t = 4)]
    avg_nodes: usize,
    #[arg(long, default_value_t = 10)]
    alphabet: usize,
}

#[derive(Args)]
struct GenDenseArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 10)]
    avg_vertices: usize,
    #[arg(long, default_value_t = 35)]
    avg_edges: usize,
    #[arg(long, default_value_t = 4)]
    alphabet: usize,
}

#[derive(Args)]
struct GenFixtureArgs {
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Result JSON from `mine`
    #[arg(long)]
    result: PathBuf,
    /// Ground-truth JSON from `baseline`
    #[arg(long)]
    truth: PathBuf,
    /// Dataset file, used to recompute exact supports when the result file
    /// withholds them
    #[arg(long)]
    input: Option<PathBuf>,
    /// Report JSON path; defaults to runs/<config-hash>/eval.json
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    f: usize,
    #[arg(long, default_value_t = 20)]
    steps: usize,
    #[arg(long)]
    seed: u64,
    /// Comma-separated subset of naive,basic,een
    #[arg(long, default_value = "naive,basic,een", value_delimiter = ',')]
    methods: Vec<String>,
    #[command(flatten)]
    rules: RuleArgs,
    #[arg(long, default_value_t = 1.0)]
    eps1: f64,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 0.9)]
    eta: f64,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    /// Per-step CSV path; defaults to runs/<config-hash>/bench.csv
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the per-call CSV (method,pattern_code,iso_calls,micros)
    #[arg(long)]
    per_call_out: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn runtime(msg: impl Into<String>) -> Self {
        CliError::Runtime(msg.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli
        .threads
        .or_else(|| std::env::var("PRIVMINE_THREADS").ok()?.parse().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    let result = match cli.command {
        Command::Mine(args) => run_mine(args),
        Command::Baseline(args) => run_baseline(args),
        Command::Gen(args) => run_gen(args),
        Command::Eval(args) => run_eval(args),
        Command::BenchNeighbors(args) => run_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    if !path.exists() {
        return Err(CliError::usage(format!("input {} does not exist", path.display())));
    }
    fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("reading {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::runtime(format!("creating {}: {e}", dir.display())))?;
        }
    }
    fs::write(path, contents)
        .map_err(|e| CliError::runtime(format!("writing {}: {e}", path.display())))
}

fn load_dataset(path: &Path) -> Result<GraphDataset, CliError> {
    let text = read_to_string(path)?;
    parse_dataset(&text).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))
}

fn load_rules(args: &RuleArgs, d: &GraphDataset) -> Result<RuleSet, CliError> {
    let labels: Vec<String> = match &args.labels {
        Some(path) => read_to_string(path)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect(),
        None => {
            eprintln!(
                "warning: label alphabet inferred from the input data; pass --labels for a data-independent alphabet"
            );
            d.observed_labels()
        }
    };
    RuleSet::new(args.v_min, args.v_max, args.e_max, labels)
        .map_err(|e| CliError::usage(e.to_string()))
}

/// Short hex digest of a canonical parameter string, naming default run dirs.
fn config_hash(desc: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(desc.as_bytes());
    let digest = hasher.finalize();
    digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

fn run_mine(args: MineArgs) -> Result<(), CliError> {
    if !(args.eps1 > 0.0) {
        return Err(CliError::usage(format!(
            "invalid budget split: eps1 must be positive, got {}",
            args.eps1
        )));
    }
    if args.eps2 < 0.0 {
        return Err(CliError::usage(format!(
            "invalid budget split: eps2 must be non-negative, got {}",
            args.eps2
        )));
    }
    let d = load_dataset(&args.input)?;
    let rules = load_rules(&args.rules, &d)?;
    let budget = PrivacyBudget::new(args.eps1, args.eps2, args.k)
        .map_err(|e| CliError::usage(e.to_string()))?;
    let pp = ProposalParams::new(args.eta, args.rho).map_err(|e| CliError::usage(e.to_string()))?;

    let matcher = Matcher::new();
    let (f, f_derived) = match args.f {
        Some(f) => (f, false),
        None => {
            let truth = mine_exact_topk(&d, args.k as usize, &rules, &matcher)
                .map_err(|e| CliError::runtime(e.to_string()))?;
            eprintln!(
                "note: f = {} derived from the exact miner; this consultation of the data is not covered by the privacy budget",
                truth.threshold_f
            );
            (truth.threshold_f, true)
        }
    };
    let sf = match args.score {
        ScoreKind::Linear => ScoreFunction::Linear,
        ScoreKind::Plateau => ScoreFunction::Plateau(f),
    };
    let policy = ConvergencePolicy {
        first_frac: args.first_frac,
        last_frac: args.last_frac,
        window: args.window,
        z_bound: args.z_bound,
        min_iterations: args.min_iterations,
    };
    let opts = WalkOptions {
        max_iterations: args.max_iterations,
        mapping_cap: args.mapping_cap,
        keep_traces: args.trace.is_some(),
        ..WalkOptions::default()
    };
    let rounds = mine_topk(
        &d, f, &budget, &sf, &pp, &policy, &rules, args.seed, &opts,
    )
    .map_err(|e| CliError::runtime(e.to_string()))?;

    if let Some(prefix) = &args.trace {
        for (i, round) in rounds.iter().enumerate() {
            if let Some(traces) = &round.traces {
                let path = PathBuf::from(format!("{}.round{}.csv", prefix.display(), i));
                write_file(&path, &trace_csv(traces, &policy))?;
            }
        }
    }

    let m_upper = m_upper_crude(&rules);
    let utility_bounds = beta_sampling_bound(args.k, args.eps1, args.gamma, m_upper)
        .ok()
        .filter(|b| b.is_finite())
        .map(|beta_sampling| UtilityBoundsReport {
            gamma: args.gamma,
            m_upper,
            beta_sampling,
            beta_noise: (args.eps2 > 0.0)
                .then(|| beta_noise_bound(args.k, args.eps2, args.gamma).ok())
                .flatten(),
        });

    let config = MineConfig {
        input: Some(args.input.display().to_string()),
        eps1: args.eps1,
        eps2: args.eps2,
        k: args.k,
        f,
        f_derived_nonprivate: f_derived,
        eta: args.eta,
        rho: args.rho,
        score: sf,
        rules,
        seed: args.seed,
        convergence: policy.clone(),
        max_iterations: args.max_iterations.unwrap_or(50 * policy.window.max(1)),
        emit_true_supports: args.emit_true_supports,
    };
    let report = MineReport::new(config, rounds, utility_bounds);
    write_file(&args.out, &report.to_json())?;
    let certified = report.patterns.iter().filter(|p| p.converged).count();
    println!(
        "mined {} patterns ({} convergence-certified) -> {}",
        report.patterns.len(),
        certified,
        args.out.display()
    );
    Ok(())
}

fn run_baseline(args: BaselineArgs) -> Result<(), CliError> {
    if args.k == 0 {
        return Err(CliError::usage("k must be at least 1"));
    }
    let d = load_dataset(&args.input)?;
    let rules = load_rules(&args.rules, &d)?;
    let matcher = Matcher::new();
    let result = mine_exact_topk(&d, args.k, &rules, &matcher)
        .map_err(|e| CliError::runtime(e.to_string()))?;
    let truth = TruthFile::from_result(&result, args.k);
    write_file(&args.out, &truth.to_json())?;
    println!(
        "exact top-{} written (f = {}) -> {}",
        args.k,
        truth.f,
        args.out.display()
    );
    Ok(())
}

fn run_gen(cmd: GenCommand) -> Result<(), CliError> {
    match cmd {
        GenCommand::Click(args) => {
            let params = ClickParams {
                master_nodes: args.master_nodes,
                depth: args.depth,
                fanout: args.fanout,
                avg_nodes: args.avg_nodes,
                alphabet: args.alphabet,
            };
            let d = gen_click(args.n, &params, args.seed)
                .map_err(|e| CliError::usage(e.to_string()))?;
            write_file(&args.out, &write_dataset(&d))?;
            println!("wrote {} tree graphs -> {}", d.len(), args.out.display());
        }
        GenCommand::Dense(args) => {
            let params = DenseParams {
                avg_vertices: args.avg_vertices,
                avg_edges: args.avg_edges,
                alphabet: args.alphabet,
            };
            let d = gen_dense(args.n, &params, args.seed)
                .map_err(|e| CliError::usage(e.to_string()))?;
            write_file(&args.out, &write_dataset(&d))?;
            println!("wrote {} dense graphs -> {}", d.len(), args.out.display());
        }
        GenCommand::Fixture(args) => {
            let d = fixture_fig1();
            write_file(&args.out, &write_dataset(&d))?;
            println!("wrote fixture ({} graphs) -> {}", d.len(), args.out.display());
        }
    }
    Ok(())
}

fn run_eval(args: EvalArgs) -> Result<(), CliError> {
    let report = MineReport::from_json(&read_to_string(&args.result)?)
        .map_err(|e| CliError::runtime(format!("{}: {e}", args.result.display())))?;
    let truth = TruthFile::from_json(&read_to_string(&args.truth)?)
        .map_err(|e| CliError::runtime(format!("{}: {e}", args.truth.display())))?;
    let k = report.patterns.len();

    let output: Vec<(Pattern, usize)> = if report
        .patterns
        .iter()
        .all(|p| p.true_support.is_some())
    {
        report
            .patterns
            .iter()
            .map(|p| (p.pattern.clone(), p.true_support.unwrap()))
            .collect()
    } else if let Some(input) = &args.input {
        let d = load_dataset(input)?;
        let matcher = Matcher::new();
        report
            .patterns
            .iter()
            .map(|p| {
                let s = matcher.support(&p.pattern, &d, false).count;
                (p.pattern.clone(), s)
            })
            .collect()
    } else {
        return Err(CliError::usage(
            "result file has no true supports; pass --input to recompute them against the dataset",
        ));
    };

    let eval = evaluate(&output, &truth.to_result(), truth.f, k)
        .map_err(|e| CliError::runtime(e.to_string()))?;
    let out_path = args.out.unwrap_or_else(|| {
        let hash = config_hash(&format!(
            "eval|{}|{}",
            args.result.display(),
            args.truth.display()
        ));
        PathBuf::from(format!("runs/{hash}/eval.json"))
    });
    write_file(
        &out_path,
        &serde_json::to_string_pretty(&eval).expect("eval serializes"),
    )?;
    println!(
        "precision {:.4}  rse {:.4}  support_accuracy {:.4} -> {}",
        eval.precision,
        eval.rse,
        eval.support_accuracy,
        out_path.display()
    );
    Ok(())
}

fn run_bench(args: BenchArgs) -> Result<(), CliError> {
    let mut methods = Vec::new();
    for m in &args.methods {
        methods.push(match m.as_str() {
            "naive" => ExploreMethod::Naive,
            "basic" => ExploreMethod::Basic,
            "een" => ExploreMethod::Een,
            other => return Err(CliError::usage(format!("unknown method {other:?}"))),
        });
    }
    if methods.is_empty() {
        return Err(CliError::usage("at least one method is required"));
    }
    if args.f == 0 {
        return Err(CliError::usage("f must be at least 1"));
    }
    let d = load_dataset(&args.input)?;
    let rules = load_rules(&args.rules, &d)?;
    let budget =
        PrivacyBudget::new(args.eps1, 0.0, args.k).map_err(|e| CliError::usage(e.to_string()))?;
    let proposal =
        ProposalParams::new(args.eta, args.rho).map_err(|e| CliError::usage(e.to_string()))?;
    let params = BenchParams {
        methods,
        n_steps: args.steps,
        seed: args.seed,
        proposal,
        budget,
        score: ScoreFunction::Linear,
    };
    let report = bench_neighbors(&d, args.f, &rules, &params)
        .map_err(|e| CliError::runtime(e.to_string()))?;
    let out_path = args.out.unwrap_or_else(|| {
        let hash = config_hash(&format!(
            "bench|{}|{}|{}|{}",
            args.input.display(),
            args.f,
            args.steps,
            args.seed
        ));
        PathBuf::from(format!("runs/{hash}/bench.csv"))
    });
    write_file(&out_path, &report.to_csv())?;
    if let Some(per_call) = &args.per_call_out {
        write_file(per_call, &report.to_per_call_csv())?;
    }
    for m in &params.methods {
        println!(
            "{:>6}: mean {:>12.1} us/step, {:>10} matcher calls",
            m.name(),
            report.mean_micros(*m),
            report.total_calls(*m)
        );
    }
    println!("per-step rows -> {}", out_path.display());
    Ok(())
}
