//! The `geodesic-clt` command line.
//!
//! Every subcommand prints a short human summary to stdout. Reports go to
//! `--out` when given, otherwise to `$GEODESIC_CLT_OUT_DIR/<name>.<ext>` when
//! that variable is set, otherwise nowhere. Usage errors exit with status 2
//! and runtime errors with status 1.

use std::error::Error;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::coding_graph::{
    build_free_group_graph, count_primitive_cycles, enumerate_cycles, load_graph, trace_power,
    CodingGraph,
};
use crate::experiments::{
    bounded_defect, column_csv, estimate_l_sigma, gromov_decay, holder_decay, rn_convergence,
    run_clt, tau_residual, tv_report, with_threads, CltOptions, SamplerKind, StatisticKind,
    DEFAULT_SEED,
};
use crate::hyperbolic::{load_rep, pair_of_pants_rep, FuchsianRep, HPoint};
use crate::parry_markov::{ParryChain, SeededRng, UniformCycleSampler};

/// Environment variable naming the default report directory.
pub const OUT_DIR_ENV: &str = "GEODESIC_CLT_OUT_DIR";

type CliResult = Result<(), Box<dyn Error>>;

#[derive(Debug, Parser)]
#[command(
    name = "geodesic-clt",
    version,
    about = "Closed-path counting, sampling and length-CLT experiments for free groups acting on the hyperbolic plane"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coding graph inspection and export.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Export a representation file.
    #[command(subcommand)]
    Rep(RepCommand),
    /// Exact count of closed paths (--trace) or primitive cycles (--primitive).
    Count(CountArgs),
    /// List every closed path of length n with its word.
    Enumerate(EnumerateArgs),
    /// Draw paths from the uniform closed-path law or the Parry chain.
    Sample(SampleArgs),
    /// Self-normalized CLT run with a KS statistic against N(0, 1).
    Clt(CltArgs),
    /// Fraction of uniform closed paths with self Gromov product above ε√n.
    GromovDecay(DecayArgs),
    /// Exact total variation of the conjugacy-class pushforward.
    Tv(TvArgs),
    /// Exact prefix-density deviation sup |dλ/dν − 1|.
    Rn(RnArgs),
    /// L and σ estimates across several n.
    Estimate(EstimateArgs),
    /// Geometric diagnostics: tau-residual, holder, defect.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Subcommand)]
enum GraphCommand {
    /// Vertex and edge counts, Perron eigenvalue, aperiodicity.
    Info {
        #[command(flatten)]
        graph: GraphSource,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write the graph in the text file format.
    Export {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum RepCommand {
    /// Write a representation in the text file format.
    Export {
        #[command(flatten)]
        rep: RepSource,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
#[group(multiple = false)]
struct GraphSource {
    /// Free group of rank N with its standard coding graph [default: 2].
    #[arg(long, value_name = "N")]
    free: Option<u32>,
    /// Graph file.
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct RepSource {
    /// Pair-of-pants boundary lengths [default: 2,2,2].
    #[arg(long, value_delimiter = ',', value_name = "L1,L2,L3", conflicts_with = "rep")]
    pants: Option<Vec<f64>>,
    /// Representation file.
    #[arg(long, value_name = "FILE")]
    rep: Option<PathBuf>,
    /// Basepoint x,y; overrides the file's basepoint [default: 0,1].
    #[arg(long, value_delimiter = ',', value_name = "X,Y", allow_hyphen_values = true)]
    basepoint: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    /// Report path.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Args)]
struct RunArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads; changes wall time only.
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
#[group(id = "count_kind", required = true, multiple = false)]
struct CountKind {
    /// Tr Mⁿ, the number of based closed paths.
    #[arg(long)]
    trace: bool,
    /// Number of primitive cycles up to rotation.
    #[arg(long)]
    primitive: bool,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    kind: CountKind,
    #[arg(short = 'n')]
    n: usize,
    #[command(flatten)]
    graph: GraphSource,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(short = 'n')]
    n: usize,
    #[command(flatten)]
    graph: GraphSource,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
#[group(id = "sampler_kind", required = true, multiple = false)]
struct SamplerFlag {
    #[arg(long)]
    uniform_cycle: bool,
    #[arg(long)]
    markov: bool,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    sampler: SamplerFlag,
    #[arg(short = 'n')]
    n: usize,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[command(flatten)]
    graph: GraphSource,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatisticArg {
    TranslationLength,
    Displacement,
}

impl From<StatisticArg> for StatisticKind {
    fn from(s: StatisticArg) -> Self {
        match s {
            StatisticArg::TranslationLength => StatisticKind::TranslationLength,
            StatisticArg::Displacement => StatisticKind::Displacement,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SamplerArg {
    UniformCycle,
    Markov,
}

impl From<SamplerArg> for SamplerKind {
    fn from(s: SamplerArg) -> Self {
        match s {
            SamplerArg::UniformCycle => SamplerKind::UniformCycle,
            SamplerArg::Markov => SamplerKind::Markov,
        }
    }
}

#[derive(Debug, Args)]
struct CltArgs {
    #[arg(short = 'n')]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = StatisticArg::TranslationLength)]
    statistic: StatisticArg,
    #[arg(long, value_enum, default_value_t = SamplerArg::UniformCycle)]
    sampler: SamplerArg,
    /// Redraw non-primitive closed paths.
    #[arg(long)]
    primitive_only: bool,
    /// Also write the normalized sample, one value per line.
    #[arg(long, value_name = "FILE")]
    samples_csv: Option<PathBuf>,
    #[command(flatten)]
    graph: GraphSource,
    #[command(flatten)]
    rep: RepSource,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct DecayArgs {
    #[arg(short = 'n', value_delimiter = ',', default_value = "50,100,200,400")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    epsilon: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[command(flatten)]
    graph: GraphSource,
    #[command(flatten)]
    rep: RepSource,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct TvArgs {
    #[arg(short = 'n', value_delimiter = ',', default_value = "4,6,8,10,12")]
    n: Vec<usize>,
    #[command(flatten)]
    graph: GraphSource,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct RnArgs {
    /// Comma-separated n:m pairs [default: 10:5,20:10,...,60:30].
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    pairs: Vec<(usize, usize)>,
    #[command(flatten)]
    graph: GraphSource,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(short = 'n', value_delimiter = ',', default_value = "100,200,400")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = StatisticArg::Displacement)]
    statistic: StatisticArg,
    #[arg(long, value_enum, default_value_t = SamplerArg::UniformCycle)]
    sampler: SamplerArg,
    #[command(flatten)]
    graph: GraphSource,
    #[command(flatten)]
    rep: RepSource,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Diagnostic {
    /// |τ − d(z, gz) + 2(gz, g⁻¹z)_z| over uniform closed paths.
    TauResidual,
    /// Decay of DF differences in the common-prefix length.
    Holder,
    /// Gromov product of a prefix point against the endpoint.
    Defect,
}

#[derive(Debug, Args)]
struct DiagnoseArgs {
    #[arg(value_enum)]
    which: Diagnostic,
    /// Lengths: closed-path lengths (tau-residual) or prefix lengths (defect).
    #[arg(short = 'n', value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Largest common-prefix length (holder).
    #[arg(long, default_value_t = 20)]
    max_k: usize,
    /// Extra steps after the common prefix (holder).
    #[arg(long, default_value_t = 20)]
    tail: usize,
    /// Path length (defect).
    #[arg(long, default_value_t = 200)]
    length: usize,
    #[command(flatten)]
    graph: GraphSource,
    #[command(flatten)]
    rep: RepSource,
    #[command(flatten)]
    run: RunArgs,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (n, m) = s
        .split_once(':')
        .ok_or_else(|| format!("expected n:m, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(n)?, parse(m)?))
}

impl GraphSource {
    fn load(&self) -> Result<CodingGraph, Box<dyn Error>> {
        match (&self.graph, self.free) {
            (Some(path), _) => Ok(load_graph(&read(path)?)?),
            (None, rank) => Ok(build_free_group_graph(rank.unwrap_or(2))?),
        }
    }
}

impl RepSource {
    fn load(&self) -> Result<FuchsianRep, Box<dyn Error>> {
        let basepoint = match self.basepoint.as_deref() {
            Some(&[x, y]) => Some(HPoint::new(x, y)?),
            Some(other) => return Err(format!("--basepoint takes x,y, got {other:?}").into()),
            None => None,
        };
        let rep = match (&self.rep, &self.pants) {
            (Some(path), _) => load_rep(&read(path)?)?,
            (None, pants) => {
                let l = pants.clone().unwrap_or_else(|| vec![2.0, 2.0, 2.0]);
                let [l1, l2, l3] = l[..] else {
                    return Err(format!("--pants takes three lengths, got {l:?}").into());
                };
                pair_of_pants_rep(l1, l2, l3, HPoint::i())?
            }
        };
        Ok(match basepoint {
            Some(z) => rep.with_basepoint(z),
            None => rep,
        })
    }
}

fn read(path: &Path) -> Result<String, Box<dyn Error>> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()).into())
}

fn write(path: &Path, content: &str) -> CliResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, content).map_err(|e| format!("cannot write {}: {e}", path.display()).into())
}

impl OutputArgs {
    /// Resolved report path: --out, else the env directory, else none.
    fn path(&self, name: &str) -> Option<PathBuf> {
        let ext = match self.format {
            Format::Json => "json",
            Format::Csv => "csv",
        };
        self.out.clone().or_else(|| {
            std::env::var_os(OUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(format!("{name}.{ext}")))
        })
    }

    fn emit<T: Serialize>(&self, name: &str, report: &T, csv: impl FnOnce() -> String) -> CliResult {
        let Some(path) = self.path(name) else {
            return Ok(());
        };
        let body = match self.format {
            Format::Json => serde_json::to_string_pretty(report)? + "\n",
            Format::Csv => csv(),
        };
        write(&path, &body)?;
        println!("report written to {}", path.display());
        Ok(())
    }
}

fn rows_csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = format!("{header}\n");
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

/// Parses `args` and runs the subcommand; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Graph(GraphCommand::Info { graph, output }) => graph_info(&graph, &output),
        Command::Graph(GraphCommand::Export { graph, out }) => {
            write(&out, &graph.load()?.to_file_string())?;
            println!("graph written to {}", out.display());
            Ok(())
        }
        Command::Rep(RepCommand::Export { rep, out }) => {
            write(&out, &rep.load()?.to_file_string())?;
            println!("representation written to {}", out.display());
            Ok(())
        }
        Command::Count(args) => count(&args),
        Command::Enumerate(args) => enumerate(&args),
        Command::Sample(args) => sample(&args),
        Command::Clt(args) => clt(&args),
        Command::GromovDecay(args) => decay(&args),
        Command::Tv(args) => tv(&args),
        Command::Rn(args) => rn(&args),
        Command::Estimate(args) => estimate(&args),
        Command::Diagnose(args) => diagnose(&args),
    }
}

fn graph_info(source: &GraphSource, output: &OutputArgs) -> CliResult {
    let graph = source.load()?;
    let chain = ParryChain::new(&graph)?;
    let lambda = chain.perron().lambda;
    println!("vertices={}", graph.vertex_count());
    println!("edges={}", graph.edge_count());
    println!("lambda={lambda:?}");
    println!("aperiodic=true");
    println!("primitivity_exponent={}", graph.primitivity_exponent());
    println!("hash={}", graph.content_hash());
    let report = json!({
        "report": "graph_info",
        "graph_hash": graph.content_hash(),
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "lambda": lambda,
        "aperiodic": true,
        "primitivity_exponent": graph.primitivity_exponent(),
    });
    output.emit("graph_info", &report, || {
        rows_csv(
            "vertices,edges,lambda,aperiodic",
            [format!("{},{},{lambda:?},true", graph.vertex_count(), graph.edge_count())],
        )
    })
}

fn count(args: &CountArgs) -> CliResult {
    let graph = args.graph.load()?;
    let (kind, value) = if args.kind.trace {
        ("trace", trace_power(&graph, args.n)?)
    } else {
        ("primitive", count_primitive_cycles(&graph, args.n)?)
    };
    println!("{value}");
    let report = json!({
        "report": "count",
        "graph_hash": graph.content_hash(),
        "kind": kind,
        "n": args.n,
        "value": value.to_string(),
    });
    args.output.emit("count", &report, || {
        rows_csv("kind,n,value", [format!("{kind},{},{value}", args.n)])
    })
}

fn enumerate(args: &EnumerateArgs) -> CliResult {
    let graph = args.graph.load()?;
    let cycles = enumerate_cycles(&graph, args.n)?;
    let rows: Vec<(usize, String)> = cycles.iter().map(|c| (c.start(), c.labels().to_string())).collect();
    for (start, word) in &rows {
        println!("{start} {word}");
    }
    eprintln!("{} closed paths of length {}", rows.len(), args.n);
    let report = json!({
        "report": "enumerate",
        "graph_hash": graph.content_hash(),
        "n": args.n,
        "count": rows.len(),
        "cycles": rows.iter().map(|(s, w)| json!({"start": s, "word": w})).collect::<Vec<_>>(),
    });
    args.output.emit("enumerate", &report, || {
        rows_csv("start,word", rows.iter().map(|(s, w)| format!("{s},{w}")))
    })
}

fn sample(args: &SampleArgs) -> CliResult {
    let graph = args.graph.load()?;
    let mut rng = SeededRng::new(args.run.seed, 0);
    let (kind, paths) = if args.sampler.uniform_cycle {
        let sampler = UniformCycleSampler::new(&graph, args.n)?;
        ("uniform_cycle", (0..args.samples).map(|_| sampler.sample(&mut rng)).collect::<Vec<_>>())
    } else {
        let chain = ParryChain::new(&graph)?;
        ("markov", (0..args.samples).map(|_| chain.sample_path(args.n, &mut rng)).collect())
    };
    let rows: Vec<(usize, String)> = paths.iter().map(|p| (p.start(), p.labels().to_string())).collect();
    for (start, word) in &rows {
        println!("{start} {word}");
    }
    let report = json!({
        "report": "sample",
        "graph_hash": graph.content_hash(),
        "sampler": kind,
        "seed": args.run.seed,
        "n": args.n,
        "samples": args.samples,
        "paths": rows.iter().map(|(s, w)| json!({"start": s, "word": w})).collect::<Vec<_>>(),
    });
    args.run.output.emit("sample", &report, || {
        rows_csv("start,word", rows.iter().map(|(s, w)| format!("{s},{w}")))
    })
}

fn clt(args: &CltArgs) -> CliResult {
    let graph = args.graph.load()?;
    let chain = ParryChain::new(&graph)?;
    let rep = args.rep.load()?;
    let opts = CltOptions::new(args.n, args.samples, args.run.seed)
        .statistic(args.statistic.into())
        .sampler(args.sampler.into())
        .primitive_only(args.primitive_only);
    let mut run = with_threads(args.run.threads, || run_clt(&rep, &graph, &chain, &opts))??;
    if let Some(path) = &args.samples_csv {
        write(path, &column_csv("normalized", &run.normalized))?;
        run.report.normalized_sample_path = Some(path.display().to_string());
    }
    let r = &run.report;
    println!(
        "n={} samples={} L_hat={:.6} sigma_hat={:.6} ks={:.6}",
        r.n, r.sample_count, r.l_hat, r.sigma_hat, r.ks_statistic
    );
    args.run.output.emit("clt", r, || r.to_csv())
}

fn decay(args: &DecayArgs) -> CliResult {
    let graph = args.graph.load()?;
    let rep = args.rep.load()?;
    let report = with_threads(args.run.threads, || {
        gromov_decay(&rep, &graph, &args.epsilon, &args.n, args.samples, args.run.seed)
    })??;
    for row in &report.rows {
        println!("epsilon={} n={} exceed_fraction={:.6}", row.epsilon, row.n, row.exceed_fraction);
    }
    args.run.output.emit("gromov_decay", &report, || report.to_csv())
}

fn tv(args: &TvArgs) -> CliResult {
    let graph = args.graph.load()?;
    let report = tv_report(&graph, &args.n)?;
    for row in &report.rows {
        println!("n={} classes={} tv={:.6e}", row.n, row.classes, row.tv_distance);
    }
    args.output.emit("tv", &report, || report.to_csv())
}

fn rn(args: &RnArgs) -> CliResult {
    let graph = args.graph.load()?;
    let chain = ParryChain::new(&graph)?;
    let pairs = if args.pairs.is_empty() {
        (1..=6).map(|t| (10 * t, 5 * t)).collect()
    } else {
        args.pairs.clone()
    };
    let report = rn_convergence(&graph, &chain, &pairs)?;
    for row in &report.rows {
        println!("n={} m={} sup_deviation={:.6e}", row.n, row.m, row.sup_deviation);
    }
    args.output.emit("rn", &report, || report.to_csv())
}

fn estimate(args: &EstimateArgs) -> CliResult {
    let graph = args.graph.load()?;
    let chain = ParryChain::new(&graph)?;
    let rep = args.rep.load()?;
    let opts = CltOptions::new(args.n[0], args.samples, args.run.seed)
        .statistic(args.statistic.into())
        .sampler(args.sampler.into());
    let report = with_threads(args.run.threads, || {
        estimate_l_sigma(&rep, &graph, &chain, &args.n, &opts)
    })??;
    for row in &report.rows {
        println!("n={} L_hat={:.6} sigma_hat={:.6}", row.n, row.l_hat, row.sigma_hat);
    }
    if let (Some(l), Some(s)) = (report.l_relative_spread, report.sigma_relative_spread) {
        println!("relative spread: L {l:.4}, sigma {s:.4}");
    }
    args.run.output.emit("estimate", &report, || report.to_csv())
}

fn diagnose(args: &DiagnoseArgs) -> CliResult {
    let graph = args.graph.load()?;
    let chain = ParryChain::new(&graph)?;
    let rep = args.rep.load()?;
    let seed = args.run.seed;
    let ns = |default: &[usize]| {
        if args.n.is_empty() {
            default.to_vec()
        } else {
            args.n.clone()
        }
    };
    let output = &args.run.output;
    match args.which {
        Diagnostic::TauResidual => {
            let ns = ns(&[50, 200]);
            let report =
                with_threads(args.run.threads, || tau_residual(&rep, &graph, &ns, args.samples, seed))??;
            for row in &report.rows {
                println!("n={} max_residual={:.3e} mean_residual={:.3e}", row.n, row.max_residual, row.mean_residual);
            }
            output.emit("tau_residual", &report, || report.to_csv())
        }
        Diagnostic::Holder => {
            let report = with_threads(args.run.threads, || {
                holder_decay(&rep, &chain, args.max_k, args.samples, args.tail, seed)
            })??;
            for row in &report.rows {
                println!("k={} max_difference={:.3e}", row.k, row.max_difference);
            }
            println!("log slope {:.4}", report.log_slope);
            output.emit("holder_decay", &report, || report.to_csv())
        }
        Diagnostic::Defect => {
            let ns = ns(&[50, 100, 150]);
            let report = with_threads(args.run.threads, || {
                bounded_defect(&rep, &chain, args.length, &ns, args.samples, seed)
            })??;
            for row in &report.rows {
                println!("n={} max_product={:.4} mean_product={:.4}", row.n, row.max_product, row.mean_product);
            }
            output.emit("bounded_defect", &report, || report.to_csv())
        }
    }
}
