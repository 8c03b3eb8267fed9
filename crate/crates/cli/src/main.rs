//! `homembed`: sample pattern banks, embed graph6 datasets, build kernels,
//! size banks with Hoeffding calculators, and report distinguishability.
//!
//! Banks are the sole carrier of randomness; every other command is a pure
//! function of its input files, and each output file gets a sibling
//! `<out>.manifest.json` recording the resolved flags and input checksums.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 internal invariant
//! violation (always a bug).

mod manifest;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use homembed_core::embedding::{
    self, distinguishability_report, embed, gram, gram_min, hoeffding_samples,
    hoeffding_samples_all, EmbedMode, EmbeddingMatrix,
};
use homembed_core::graph::{self, Family, Graph};
use homembed_core::graph6::{parse_graph6_file, write_graph6_file};
use homembed_core::sampler::{sample_bank, LambdaMode, PatternBank, SamplerConfig, SizeMode};
use homembed_core::wl::wl1_signature;

use manifest::ManifestBuilder;

#[derive(Parser)]
#[command(name = "homembed", version, about)]
struct Cli {
    /// Worker threads for embedding. Affects wall-clock only, never output
    /// bytes; 0 picks the runtime default.
    #[arg(long, global = true, env = "HOMEMBED_THREADS", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a reproducible pattern bank and write it as JSON.
    Sample(SampleArgs),
    /// Embed a graph6 dataset against a bank, writing a CSV matrix.
    Embed(EmbedArgs),
    /// Turn an embedding CSV into a Gram matrix CSV.
    Gram(GramArgs),
    /// Smallest pattern count ℓ meeting a Hoeffding guarantee.
    Hoeffding(HoeffdingArgs),
    /// Count distinguishable row pairs of an embedding CSV.
    Distinguish(DistinguishArgs),
    /// 1-WL color-refinement signatures of a graph6 dataset.
    Wl1(Wl1Args),
    /// Generate benchmark graph families as graph6 files.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum LambdaModeArg {
    PaperStrict,
    Shifted,
}

#[derive(Args)]
struct SampleArgs {
    /// Size bound of the graphs the bank will embed.
    #[arg(long)]
    n: usize,
    /// Number of patterns to draw.
    #[arg(long)]
    count: usize,
    #[arg(long, env = "HOMEMBED_SEED")]
    seed: u64,
    /// Target runtime exponent in the Poisson rate λ = (1 + d·ln n)/n.
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, value_enum, default_value = "shifted")]
    lambda_mode: LambdaModeArg,
    #[arg(long, default_value_t = 1.0)]
    vertex_keep: f64,
    #[arg(long, default_value_t = 0.5)]
    edge_keep: f64,
    /// Clamp every treewidth draw to this bound (k-WL expressiveness regime).
    #[arg(long)]
    treewidth_cap: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EmbedArgs {
    /// graph6 file, one graph per line.
    #[arg(long)]
    graphs: PathBuf,
    /// Bank JSON produced by `sample`.
    #[arg(long)]
    bank: PathBuf,
    /// hom | density | truncated | log1p | standardized
    #[arg(long)]
    mode: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Dot,
    Min,
}

#[derive(Args)]
struct GramArgs {
    /// Embedding CSV produced by `embed`.
    #[arg(long)]
    emb: PathBuf,
    #[arg(long, value_enum, default_value = "dot")]
    kernel: KernelArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct HoeffdingArgs {
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    delta: f64,
    /// Dataset size |S| for the finite-set guarantee.
    #[arg(long, conflicts_with = "max_n")]
    sample_size: Option<u64>,
    /// Bound n for the guarantee over all graphs of size at most n.
    #[arg(long)]
    max_n: Option<u64>,
}

#[derive(Args)]
struct DistinguishArgs {
    #[arg(long)]
    emb: PathBuf,
    /// Optional labels CSV (graph_id,label) for per-class-pair reporting.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Componentwise tolerance for real-valued embeddings.
    #[arg(long, default_value_t = embedding::REAL_TOLERANCE)]
    tolerance: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Wl1Args {
    #[arg(long)]
    graphs: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    /// csl | cycle | path | complete | edgeless | union
    #[arg(long)]
    family: String,
    /// Vertex count for cycle/path/complete/edgeless/csl.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated CSL skips; one graph per skip, plus a labels file.
    #[arg(long)]
    skips: Option<String>,
    /// Union components as comma-separated family:size parts,
    /// e.g. cycle:3,cycle:3.
    #[arg(long)]
    components: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    // A panic past argument validation is an internal invariant violation.
    std::panic::set_hook(Box::new(|info| {
        eprintln!("internal error (bug): {info}");
        std::process::exit(3);
    }));

    let cli = Cli::parse();
    if cli.threads > 0 {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error (bug): {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> CliResult {
    let started = Instant::now();
    match command {
        Command::Sample(args) => cmd_sample(args, started),
        Command::Embed(args) => cmd_embed(args, started),
        Command::Gram(args) => cmd_gram(args, started),
        Command::Hoeffding(args) => cmd_hoeffding(args),
        Command::Distinguish(args) => cmd_distinguish(args, started),
        Command::Wl1(args) => cmd_wl1(args, started),
        Command::Gen(args) => cmd_gen(args, started),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Path, contents: &str) -> CliResult {
    fs::write(path, contents)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn read_graphs(path: &Path) -> Result<Vec<Graph>, CliError> {
    let text = read_file(path)?;
    parse_graph6_file(&text).map_err(|e| {
        CliError::usage(format!("{}: {e}", path.display()))
    })
}

fn cmd_sample(args: SampleArgs, started: Instant) -> CliResult {
    if args.count == 0 {
        return Err(CliError::usage("--count must be at least 1"));
    }
    let cfg = SamplerConfig {
        n: args.n,
        d: args.d,
        lambda_mode: match args.lambda_mode {
            LambdaModeArg::PaperStrict => LambdaMode::PaperStrict,
            LambdaModeArg::Shifted => LambdaMode::Shifted,
        },
        size_mode: SizeMode::Uniform1ToN,
        vertex_keep_prob: args.vertex_keep,
        edge_keep_prob: args.edge_keep,
        treewidth_cap: args.treewidth_cap,
        seed: args.seed,
    };
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let bank = sample_bank(&cfg, args.count);
    write_output(&args.out, &bank.to_json())?;

    let mut flags = BTreeMap::new();
    flags.insert("n".into(), args.n.to_string());
    flags.insert("count".into(), args.count.to_string());
    flags.insert("seed".into(), args.seed.to_string());
    flags.insert("d".into(), args.d.to_string());
    flags.insert(
        "lambda_mode".into(),
        match args.lambda_mode {
            LambdaModeArg::PaperStrict => "paper-strict".into(),
            LambdaModeArg::Shifted => "shifted".into(),
        },
    );
    flags.insert("vertex_keep".into(), args.vertex_keep.to_string());
    flags.insert("edge_keep".into(), args.edge_keep.to_string());
    flags.insert(
        "treewidth_cap".into(),
        args.treewidth_cap
            .map(|c| c.to_string())
            .unwrap_or_else(|| "none".into()),
    );
    ManifestBuilder::new("sample", flags)
        .bank_output(&args.out)
        .write(&args.out, started)
}

fn parse_mode(mode: &str) -> Result<EmbedMode, CliError> {
    mode.parse::<EmbedMode>()
        .map_err(|e| CliError::usage(e.to_string()))
}

fn cmd_embed(args: EmbedArgs, started: Instant) -> CliResult {
    let mode = parse_mode(&args.mode)?;
    let graphs = read_graphs(&args.graphs)?;
    let bank_text = read_file(&args.bank)?;
    let bank = PatternBank::from_json(&bank_text)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.bank.display())))?;
    for (i, g) in graphs.iter().enumerate() {
        if g.vertex_count() > bank.config.n {
            eprintln!(
                "warning: graph {i} has {} vertices, beyond the bank's n = {} \
                 (counts stay well-defined; completeness guarantees do not apply)",
                g.vertex_count(),
                bank.config.n
            );
        }
    }
    let matrix = embed(&graphs, &bank, mode).map_err(|e| CliError::usage(e.to_string()))?;
    write_output(&args.out, &matrix.to_csv())?;

    let mut flags = BTreeMap::new();
    flags.insert("graphs".into(), args.graphs.display().to_string());
    flags.insert("bank".into(), args.bank.display().to_string());
    flags.insert("mode".into(), mode.as_str().into());
    ManifestBuilder::new("embed", flags)
        .input(&args.graphs)?
        .bank_input(&args.bank)?
        .write(&args.out, started)
}

fn cmd_gram(args: GramArgs, started: Instant) -> CliResult {
    let matrix = EmbeddingMatrix::from_csv(&read_file(&args.emb)?)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.emb.display())))?;
    let gram_matrix = match args.kernel {
        KernelArg::Dot => gram(&matrix),
        KernelArg::Min => gram_min(&matrix),
    }
    .map_err(|e| CliError::usage(e.to_string()))?;
    write_output(&args.out, &gram_matrix.to_csv())?;

    let mut flags = BTreeMap::new();
    flags.insert("emb".into(), args.emb.display().to_string());
    flags.insert("kernel".into(), gram_matrix.kernel.as_str().into());
    ManifestBuilder::new("gram", flags)
        .input(&args.emb)?
        .write(&args.out, started)
}

fn cmd_hoeffding(args: HoeffdingArgs) -> CliResult {
    let ell = match (args.sample_size, args.max_n) {
        (Some(s), None) => hoeffding_samples(args.eps, args.delta, s),
        (None, Some(n)) => hoeffding_samples_all(args.eps, args.delta, n),
        _ => {
            return Err(CliError::usage(
                "exactly one of --sample-size or --max-n is required",
            ))
        }
    }
    .map_err(|e| CliError::usage(e.to_string()))?;
    println!("{ell}");
    Ok(())
}

fn read_labels(path: &Path, graph_ids: &[String]) -> Result<Vec<String>, CliError> {
    let text = read_file(path)?;
    let mut by_id: BTreeMap<String, String> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 && line == "graph_id,label" {
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let (id, label) = line.split_once(',').ok_or_else(|| {
            CliError::usage(format!("{}: line {} is not id,label", path.display(), idx + 1))
        })?;
        by_id.insert(id.to_string(), label.to_string());
    }
    graph_ids
        .iter()
        .map(|id| {
            by_id.get(id).cloned().ok_or_else(|| {
                CliError::usage(format!("{}: no label for graph {id}", path.display()))
            })
        })
        .collect()
}

fn cmd_distinguish(args: DistinguishArgs, started: Instant) -> CliResult {
    let matrix = EmbeddingMatrix::from_csv(&read_file(&args.emb)?)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.emb.display())))?;
    let labels = match &args.labels {
        Some(path) => Some(read_labels(path, &matrix.graph_ids)?),
        None => None,
    };
    let report = distinguishability_report(&matrix, labels.as_deref(), args.tolerance)
        .map_err(|e| CliError::usage(e.to_string()))?;
    write_output(&args.out, &report.to_json())?;

    let mut flags = BTreeMap::new();
    flags.insert("emb".into(), args.emb.display().to_string());
    flags.insert(
        "labels".into(),
        args.labels
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "none".into()),
    );
    flags.insert("tolerance".into(), args.tolerance.to_string());
    let mut builder = ManifestBuilder::new("distinguish", flags).input(&args.emb)?;
    if let Some(path) = &args.labels {
        builder = builder.input(path)?;
    }
    builder.write(&args.out, started)
}

fn cmd_wl1(args: Wl1Args, started: Instant) -> CliResult {
    let graphs = read_graphs(&args.graphs)?;
    let mut out = String::from("graph_id,signature_hex\n");
    for (i, g) in graphs.iter().enumerate() {
        let signature = wl1_signature(g);
        writeln!(out, "{i},{}", signature.hex()).expect("string write");
    }
    write_output(&args.out, &out)?;

    let mut flags = BTreeMap::new();
    flags.insert("graphs".into(), args.graphs.display().to_string());
    ManifestBuilder::new("wl1", flags)
        .input(&args.graphs)?
        .write(&args.out, started)
}

fn parse_component(part: &str) -> Result<Graph, CliError> {
    let (family, size) = part.split_once(':').ok_or_else(|| {
        CliError::usage(format!("component `{part}` is not family:size"))
    })?;
    let family: Family = family
        .parse()
        .map_err(|e: graph::GraphError| CliError::usage(e.to_string()))?;
    let size: usize = size
        .parse()
        .map_err(|_| CliError::usage(format!("bad component size in `{part}`")))?;
    graph::generate(family, size).map_err(|e| CliError::usage(e.to_string()))
}

fn cmd_gen(args: GenArgs, started: Instant) -> CliResult {
    let mut flags = BTreeMap::new();
    flags.insert("family".into(), args.family.clone());
    let mut labels_path = None;

    let graphs: Vec<Graph> = match args.family.as_str() {
        "csl" => {
            let n = args
                .n
                .ok_or_else(|| CliError::usage("csl requires --n"))?;
            let skips_text = args
                .skips
                .as_ref()
                .ok_or_else(|| CliError::usage("csl requires --skips"))?;
            let skips = skips_text
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::usage(format!("bad skip `{s}`")))
                })
                .collect::<Result<Vec<usize>, CliError>>()?;
            flags.insert("n".into(), n.to_string());
            flags.insert("skips".into(), skips_text.clone());
            let graphs = skips
                .iter()
                .map(|&skip| {
                    graph::generate_csl(n, skip).map_err(|e| CliError::usage(e.to_string()))
                })
                .collect::<Result<Vec<Graph>, CliError>>()?;
            // One class label per skip, alongside the dataset.
            let mut labels = String::from("graph_id,label\n");
            for (i, skip) in skips.iter().enumerate() {
                writeln!(labels, "{i},{skip}").expect("string write");
            }
            let path = args.out.with_extension("labels.csv");
            write_output(&path, &labels)?;
            labels_path = Some(path);
            graphs
        }
        "union" => {
            let components = args
                .components
                .as_ref()
                .ok_or_else(|| CliError::usage("union requires --components"))?;
            flags.insert("components".into(), components.clone());
            let parts = components
                .split(',')
                .map(parse_component)
                .collect::<Result<Vec<Graph>, CliError>>()?;
            let union = parts
                .into_iter()
                .reduce(|a, b| graph::disjoint_union(&a, &b))
                .ok_or_else(|| CliError::usage("union needs at least one component"))?;
            vec![union]
        }
        name => {
            let family: Family = name
                .parse()
                .map_err(|e: graph::GraphError| CliError::usage(e.to_string()))?;
            let n = args
                .n
                .ok_or_else(|| CliError::usage(format!("{name} requires --n")))?;
            flags.insert("n".into(), n.to_string());
            vec![graph::generate(family, n).map_err(|e| CliError::usage(e.to_string()))?]
        }
    };

    write_output(&args.out, &write_graph6_file(&graphs))?;
    let mut builder = ManifestBuilder::new("gen", flags);
    if let Some(path) = labels_path {
        builder = builder.input(&path)?;
    }
    builder.write(&args.out, started)
}
