use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use onepass_cluster::ingest::{normalize, probabilize, symmetrize, RawTrustNetwork, ThresholdParam, WeightedGraph};
use onepass_cluster::io::{
    read_clustering, read_distribution, read_edge_table, read_graph, write_clustering, write_distribution,
    write_edge_table, write_graph, write_symbol_table,
};
use onepass_cluster::oracle::{
    bell_number, exact_outcome_distribution, Partitions, RatioProfile, TightnessDistribution,
};
use onepass_cluster::sweep::{run_sweep, SweepConfig};
use onepass_cluster::{
    sample_many, select_candidate, symdiff_distance, BlackBoxSource, Error, ExplicitDistribution, Metric,
    SelectionParams,
};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAPACITY: u8 = 3;

#[derive(Parser)]
#[command(name = "onepass", version, about = "One-pass random-subgraph clustering")]
struct Cli {
    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    output: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn `source<TAB>target<TAB>rating` lines into a normalized trust graph.
    Ingest {
        input: PathBuf,
        /// Also write the probabilistic graph `min(1, w/t)`.
        #[arg(long)]
        t: Option<f64>,
    },
    /// Draw clusterings from a probabilistic graph.
    Sample {
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Distance of a sample clustering from a reference clustering.
    Distance {
        reference: PathBuf,
        sample: PathBuf,
        #[arg(long, default_value = "symdiff")]
        metric: Metric,
        /// Print the optimal cluster matching with costs and benefits.
        #[arg(long)]
        verbose: bool,
    },
    /// Best-of-m selection with evaluator samples.
    Select(SelectArgs),
    /// Threshold sweep over a weighted graph.
    Sweep(SweepArgs),
    /// Exact computations on tiny instances.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args)]
struct SelectArgs {
    input: PathBuf,
    /// Read the input as an explicit distribution instead of a graph.
    #[arg(long)]
    distribution: bool,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Candidate count, overriding the derived value.
    #[arg(long)]
    m: Option<u32>,
    /// Evaluator count, overriding the derived value.
    #[arg(long)]
    l: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    t_min: f64,
    #[arg(long, default_value_t = 30.0)]
    t_max: f64,
    #[arg(long, default_value_t = 2.0)]
    t_step: f64,
    #[arg(long, default_value_t = 30)]
    samples_per_t: usize,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// List every partition of `0..n`, one label line each.
    Partitions { n: usize },
    /// Exact outcome distribution of a probabilistic graph.
    Distribution { graph: PathBuf },
    /// Optimal clustering and the expected ratio of a random sample.
    Ratio {
        input: PathBuf,
        #[arg(long)]
        distribution: bool,
        #[arg(long, default_value = "symdiff")]
        metric: Metric,
    },
    /// The two-node distribution that makes the factor-3 bound tight.
    Tightness {
        k: u64,
        #[arg(long, default_value = "symdiff")]
        metric: Metric,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn at(path: &Path, err: Error) -> Self {
        let f = Failure::from(err);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            ..f
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Capacity(_) => EXIT_CAPACITY,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::from(Error::Io(err))
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::at(path, e.into()))
}

fn load<T>(path: &Path, read: impl FnOnce(BufReader<File>) -> onepass_cluster::Result<T>) -> CliResult<T> {
    read(open(path)?).map_err(|e| Failure::at(path, e))
}

fn create(dir: &Path, name: &str) -> CliResult<BufWriter<File>> {
    fs::create_dir_all(dir).map_err(|e| Failure::at(dir, e.into()))?;
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| Failure::at(&path, e.into()))
}

fn load_source(path: &Path, as_distribution: bool) -> CliResult<Source> {
    Ok(if as_distribution {
        Source::Distribution(load(path, read_distribution)?)
    } else {
        Source::Graph(load(path, read_graph)?)
    })
}

enum Source {
    Graph(onepass_cluster::ProbabilisticGraph),
    Distribution(ExplicitDistribution),
}

impl Source {
    fn black_box(&self) -> BlackBoxSource<'_> {
        match self {
            Source::Graph(g) => BlackBoxSource::RandomGraph(g),
            Source::Distribution(d) => BlackBoxSource::Explicit(d),
        }
    }

    fn exact(self) -> CliResult<ExplicitDistribution> {
        match self {
            Source::Graph(g) => Ok(exact_outcome_distribution(&g)?),
            Source::Distribution(d) => Ok(d),
        }
    }
}

fn rational(r: &num_rational::BigRational) -> String {
    format!("{r} ({:.6})", r.to_f64().unwrap_or(f64::NAN))
}

fn cmd_ingest(cli: &Cli, input: &Path, t: Option<f64>) -> CliResult {
    let net = load(input, RawTrustNetwork::parse)?;
    let sym = symmetrize(&net);
    let normalized = normalize(&sym.graph).map_err(|e| Failure::at(input, e))?;
    let weighted = normalized.as_weighted();
    write_edge_table(
        create(&cli.output, "normalized.tsv")?,
        weighted.node_count(),
        weighted.edges().iter().copied(),
    )?;
    write_symbol_table(create(&cli.output, "symbols.tsv")?, &net.names)?;
    if let Some(t) = t {
        let g = probabilize(weighted, ThresholdParam::new(t)?);
        write_graph(create(&cli.output, "probabilistic.tsv")?, &g)?;
    }
    eprintln!(
        "{} nodes, {} edges; dropped {} unfavorable ratings and {} self-loops",
        weighted.node_count(),
        weighted.edge_count(),
        net.unfavorable_dropped,
        sym.self_loops_dropped
    );
    Ok(())
}

fn cmd_sample(cli: &Cli, graph: &Path, count: usize) -> CliResult {
    let g = load(graph, read_graph)?;
    let samples = sample_many(BlackBoxSource::RandomGraph(&g), cli.seed, count)?;
    for (i, c) in samples.iter().enumerate() {
        write_clustering(create(&cli.output, &format!("sample_{i}.tsv"))?, c)?;
    }
    Ok(())
}

fn cmd_distance(reference: &Path, sample: &Path, metric: Metric, verbose: bool) -> CliResult {
    let x = load(reference, read_clustering)?;
    let y = load(sample, read_clustering)?;
    let d = metric.distance(&x, &y)?;
    let mut out = io::stdout().lock();
    writeln!(out, "{d}")?;
    if verbose {
        if metric == Metric::SymDiff {
            let (_, matching) = symdiff_distance(&x, &y)?;
            writeln!(out, "sample_cluster\treference_cluster\tcost\tbenefit")?;
            for p in &matching.pairs {
                let target = p.x_cluster.map_or_else(|| "-".to_string(), |c| c.to_string());
                writeln!(out, "{}\t{target}\t{}\t{}", p.y_cluster, p.cost, p.benefit)?;
            }
        } else {
            eprintln!("--verbose lists matchings for the symdiff metric only");
        }
    }
    Ok(())
}

fn cmd_select(cli: &Cli, args: &SelectArgs) -> CliResult {
    let source = load_source(&args.input, args.distribution)?;
    let n = source.black_box().universe();
    let params = match (args.m, args.l) {
        (Some(m), Some(l)) => SelectionParams::with_counts(m, l)?,
        (m, l) => {
            let derived = SelectionParams::derive(n, args.epsilon, args.tau, args.delta, args.p)?;
            let m = m.unwrap_or(derived.m);
            let l = match l {
                Some(l) => l,
                None => onepass_cluster::evaluators_needed(n, args.delta, m, args.p)?,
            };
            SelectionParams { m, l, ..derived }
        }
    };
    let result = select_candidate(source.black_box(), &params, cli.seed)?;
    write_clustering(create(&cli.output, "chosen.tsv")?, &result.chosen)?;
    let mut scores = create(&cli.output, "scores.csv")?;
    writeln!(scores, "candidate_index,d_i")?;
    for (i, d) in result.scores.iter().enumerate() {
        writeln!(scores, "{i},{d}")?;
    }
    scores.flush()?;
    println!(
        "m={} l={} chosen={} d={}",
        params.m, params.l, result.chosen_index, result.scores[result.chosen_index]
    );
    Ok(())
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> CliResult {
    let table = load(&args.graph, read_edge_table)?;
    let g = WeightedGraph::new(table.n, table.rows).map_err(|e| Failure::at(&args.graph, e))?;
    let config = SweepConfig {
        t_min: args.t_min,
        t_max: args.t_max,
        t_step: args.t_step,
        samples_per_t: args.samples_per_t,
        seed: cli.seed,
    };
    let out = run_sweep(&g, &config)?;
    out.write_sizes(create(&cli.output, "sizes.csv")?)?;
    out.write_benefits(create(&cli.output, "benefits.csv")?)?;
    out.write_distances(create(&cli.output, "distances.csv")?)?;
    Ok(())
}

fn print_profile(d: &ExplicitDistribution, metric: Metric) -> CliResult {
    let profile = RatioProfile::new(d, metric)?;
    let mut out = io::stdout().lock();
    writeln!(out, "metric\t{}", metric.name())?;
    writeln!(out, "optimal\t{}", profile.optimal)?;
    writeln!(out, "optimal_cost\t{}", rational(&profile.optimal_cost))?;
    writeln!(out, "sample_cost\t{}", rational(&profile.expected_sample_cost()))?;
    writeln!(out, "ratio\t{}", rational(&profile.ratio()))?;
    Ok(())
}

fn cmd_oracle(cmd: &OracleCommand) -> CliResult {
    match cmd {
        OracleCommand::Partitions { n } => {
            let parts = Partitions::new(*n)?;
            let mut out = BufWriter::new(io::stdout().lock());
            for c in parts {
                let labels: Vec<String> = c.labels().iter().map(u32::to_string).collect();
                writeln!(out, "{}", labels.join(","))?;
            }
            out.flush()?;
            eprintln!("{} partitions", bell_number(*n));
        }
        OracleCommand::Distribution { graph } => {
            let g = load(graph, read_graph)?;
            let d = exact_outcome_distribution(&g)?;
            write_distribution(io::stdout().lock(), &d)?;
        }
        OracleCommand::Ratio {
            input,
            distribution,
            metric,
        } => {
            let d = load_source(input, *distribution)?.exact()?;
            print_profile(&d, *metric)?;
        }
        OracleCommand::Tightness { k, metric } => {
            let d = TightnessDistribution::new(*k)?.distribution();
            print_profile(&d, *metric)?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Failure::usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Ingest { input, t } => cmd_ingest(cli, input, *t),
        Command::Sample { graph, count } => cmd_sample(cli, graph, *count),
        Command::Distance {
            reference,
            sample,
            metric,
            verbose,
        } => cmd_distance(reference, sample, *metric, *verbose),
        Command::Select(args) => cmd_select(cli, args),
        Command::Sweep(args) => cmd_sweep(cli, args),
        Command::Oracle(cmd) => cmd_oracle(cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("onepass: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
