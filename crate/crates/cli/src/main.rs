use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use streamcut::{
    approximation_ratio_bound, brute_force_optimal, chung_lu, generate_hp, load_edge_list,
    make_stream, partition_stream_with, power_law_weights, round_hyperplanes, solve_sdp, Alpha,
    ClSampling, Graph, Heuristic, HpParams, LoadOptions, MarginalMode, ObjectiveConfig, RunResult,
    SdpProblem, SizeMode, StreamOrder, TiePolicy,
};
use streamcut_cli::{eval_assignment, run_bench, write_assignment, write_csv, BenchSpec};

#[derive(Parser)]
#[command(name = "streamcut", version, about = "One-pass streaming graph partitioning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition a graph in one streaming pass.
    Partition(PartitionArgs),
    /// Generate a synthetic graph as an edge list.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Score an existing assignment file.
    Eval(EvalArgs),
    /// Exhaustive optimum for tiny graphs.
    Oracle(OracleArgs),
    /// Solve the semidefinite relaxation and round it.
    Sdp(SdpArgs),
    /// Run an experiment matrix described by a spec file.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GraphInput {
    /// Edge list: one `u v` pair per line, `#` comments.
    #[arg(long)]
    graph: PathBuf,
    /// Keep every component instead of the largest connected one.
    #[arg(long)]
    no_lcc: bool,
}

impl GraphInput {
    fn load(&self) -> Result<Graph> {
        load_edge_list(&self.graph, LoadOptions { lcc: !self.no_lcc })
            .with_context(|| format!("loading {}", self.graph.display()))
    }

    fn id(&self) -> String {
        self.graph.display().to_string()
    }
}

#[derive(Args)]
struct ObjectiveArgs {
    #[arg(long, default_value_t = 1.5)]
    gamma: f64,
    /// `auto` or a positive number.
    #[arg(long, default_value = "auto")]
    alpha: Alpha,
    /// Load threshold as a multiple of n/k; `inf` disables it.
    #[arg(long, default_value_t = f64::INFINITY)]
    nu: f64,
    /// derivative | discrete
    #[arg(long, default_value = "derivative")]
    marginal: MarginalMode,
    /// vertex | edge
    #[arg(long, default_value = "vertex")]
    size_mode: SizeMode,
}

impl ObjectiveArgs {
    fn config(&self) -> ObjectiveConfig {
        ObjectiveConfig {
            gamma: self.gamma,
            alpha: self.alpha,
            nu: self.nu,
            size_mode: self.size_mode,
            marginal_mode: self.marginal,
        }
    }
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "fennel")]
    heuristic: Heuristic,
    /// random | bfs | dfs
    #[arg(long, default_value = "random")]
    order: StreamOrder,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// lowest-index | min-load
    #[arg(long, default_value = "lowest-index")]
    tie_policy: TiePolicy,
    #[command(flatten)]
    objective: ObjectiveArgs,
    /// Write the assignment (`vertex,cluster`) here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Hidden partition model.
    Hp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Same-cluster edge probability.
        #[arg(long)]
        p: f64,
        /// Cross-cluster edge probability.
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write planted labels (`vertex,cluster`) here.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Chung-Lu power-law model.
    Cl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        slope: f64,
        #[arg(long, default_value_t = 10.0)]
        avg_degree: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use geometric skipping instead of one draw per pair.
        #[arg(long)]
        skip: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    assignment: PathBuf,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    objective: ObjectiveArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    objective: ObjectiveArgs,
}

#[derive(Args)]
struct SdpArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Power of two.
    #[arg(long)]
    k: usize,
    /// Reward per split vertex pair.
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, default_value_t = 20_000)]
    max_iters: usize,
}

#[derive(Args)]
struct BenchArgs {
    spec: PathBuf,
    /// Overrides `out` from the spec; stdout when neither is set.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Partition(args) => partition(args),
        Command::Generate(cmd) => generate(cmd),
        Command::Eval(args) => eval(args),
        Command::Oracle(args) => oracle(args),
        Command::Sdp(args) => sdp(args),
        Command::Bench(args) => bench(args),
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_results(results: &[RunResult]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(io::stdout().lock());
    writer.write_record(RunResult::CSV_HEADER)?;
    for r in results {
        writer.write_record(r.csv_record())?;
    }
    writer.flush()?;
    Ok(())
}

fn partition(args: PartitionArgs) -> Result<()> {
    let g = args.input.load()?;
    let config = args.objective.config();
    config.validate()?;
    let plan = make_stream(&g, args.order, args.seed)?;
    let out = partition_stream_with(&g, &plan, args.k, args.heuristic, &config, args.seed, args.tie_policy)?;
    if let Some(path) = &args.out {
        write_assignment(&g, out.snapshot.assignment(), output(Some(path))?)?;
    }
    let result = RunResult::from_outcome(args.input.id(), &g, args.order, args.heuristic, args.seed, &out);
    print_results(&[result])
}

fn generate(cmd: GenerateCommand) -> Result<()> {
    match cmd {
        GenerateCommand::Hp { n, k, p, q, seed, out, labels } => {
            let params = HpParams { n, k, p, q, seed };
            if !params.is_assortative() {
                eprintln!("warning: q > p, the planted clusters are sparser inside than across");
            }
            let planted = generate_hp(&params)?;
            planted.graph.write_edge_list(output(out.as_deref())?)?;
            if let Some(path) = labels {
                write_assignment(&planted.graph, &planted.labels, output(Some(&path))?)?;
            }
        }
        GenerateCommand::Cl { n, slope, avg_degree, seed, skip, out } => {
            let weights = power_law_weights(n, slope, avg_degree)?;
            let sampling = if skip { ClSampling::Skip } else { ClSampling::PairLoop };
            chung_lu(&weights.weights, seed, sampling)?.write_edge_list(output(out.as_deref())?)?;
        }
    }
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let g = args.input.load()?;
    let file = File::open(&args.assignment).with_context(|| format!("opening {}", args.assignment.display()))?;
    let result = eval_assignment(&g, &args.input.id(), file, args.k, &args.objective.config())?;
    print_results(&[result])
}

fn oracle(args: OracleArgs) -> Result<()> {
    let g = args.input.load()?;
    let best = brute_force_optimal(&g, args.k, &args.objective.config())?;
    let mut out = io::stdout().lock();
    writeln!(out, "alpha: {}", best.objective.alpha)?;
    writeln!(out, "partitions_enumerated: {}", best.partitions_enumerated)?;
    writeln!(out, "best_f: {}", best.best_f)?;
    writeln!(out, "best_g: {}", best.best_g)?;
    writeln!(out, "best_g_shifted: {}", best.best_g_shifted)?;
    let labels: Vec<String> = best.best_assignment.iter().map(u32::to_string).collect();
    writeln!(out, "assignment: {}", labels.join(" "))?;
    Ok(())
}

fn sdp(args: SdpArgs) -> Result<()> {
    let g = args.input.load()?;
    let problem = SdpProblem::from_graph(&g, args.alpha)?;
    let solution = solve_sdp(&problem, args.tol, args.max_iters)?;
    if !solution.converged {
        eprintln!("warning: solver stopped after {} iterations without converging", solution.iterations);
    }
    let rounding = round_hyperplanes(&problem, &solution, args.k, args.seed, args.trials)?;
    let bound = approximation_ratio_bound(args.k);
    let floor = bound * solution.sdp_value - 3.0 * rounding.std_error;
    let mut out = io::stdout().lock();
    writeln!(out, "sdp_value: {}", solution.sdp_value)?;
    writeln!(out, "feasibility_residual: {:e}", solution.feasibility_residual)?;
    writeln!(out, "iterations: {}", solution.iterations)?;
    writeln!(out, "mean_shifted_objective: {} (std error {})", rounding.mean, rounding.std_error)?;
    if let Some((_, best)) = rounding.best() {
        writeln!(out, "best_shifted_objective: {best}")?;
    }
    writeln!(out, "bound: {bound}")?;
    writeln!(out, "{}", if rounding.mean >= floor { "pass" } else { "fail" })?;
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.spec).with_context(|| format!("reading {}", args.spec.display()))?;
    let mut spec = BenchSpec::parse(&text).with_context(|| format!("in {}", args.spec.display()))?;
    if args.threads.is_some() {
        spec.threads = args.threads;
    }
    let out = args.out.or_else(|| spec.out.clone());
    eprintln!("running {} runs", spec.run_count());
    let records = match run_bench(&spec) {
        Ok(r) => r,
        Err(e) => bail!(e),
    };
    let failed = records.iter().filter(|r| r.outcome.is_err()).count();
    write_csv(&spec, &records, output(out.as_deref())?)?;
    if failed > 0 {
        eprintln!("{failed} runs failed; see the error column");
    }
    Ok(())
}
