use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rwj_core::analysis::{analyze, AnalysisOptions};
use rwj_core::format::sig;
use rwj_core::graph::{
    degree_stats, generate, parse_edgelist, parse_graph6, write_edgelist, write_graph6, Model,
    WeightedGraph, DEFAULT_RETRIES,
};
use rwj_core::perturbation::DEFAULT_FD_STEP;
use rwj_core::search::{
    classify_two_node, csv_row, scan_catalog, scan_graphs, scan_random, two_node_closed_form,
    two_node_grid_search, write_csv, write_ledger, ScanOptions, ScanOutcome, ScanRecord,
    TwoNodeGrid, TwoNodeParams, CSV_HEADER,
};
use rwj_core::spectral::{
    build_transition, dobrushin_bound, log_grid, spectrum, track_branch, Convention,
};
use rwj_core::{Error, Result};

const EXIT_COUNTEREXAMPLE: u8 = 10;

#[derive(Parser)]
#[command(
    name = "rwj",
    version,
    about = "Random walks with jumps on weighted graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one graph.
    Analyze(AnalyzeArgs),
    /// Same as `analyze --conditions-only`.
    Conditions(AnalyzeArgs),
    /// Spectral quantities along a grid of jump rates, as CSV.
    Sweep(SweepArgs),
    /// Classify every graph of a catalog, a file list or a random model.
    Scan(ScanArgs),
    /// Write a generated graph.
    Gen(GenArgs),
    /// Closed-form analysis of a two-vertex graph with self-loops.
    TwoNode(TwoNodeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Graph6,
    Edgelist,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ConventionArg {
    Slem,
    Paper,
    /// Scan only: run both conventions.
    Both,
}

impl ConventionArg {
    fn conventions(self) -> Vec<Convention> {
        match self {
            ConventionArg::Slem => vec![Convention::Slem],
            ConventionArg::Paper => vec![Convention::PaperLiteral],
            ConventionArg::Both => vec![Convention::Slem, Convention::PaperLiteral],
        }
    }

    fn single(self) -> Result<Convention> {
        match self {
            ConventionArg::Slem => Ok(Convention::Slem),
            ConventionArg::Paper => Ok(Convention::PaperLiteral),
            ConventionArg::Both => Err(Error::InvalidParameter(
                "--convention both is only accepted by scan".into(),
            )),
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Graph file: graph6 (first graph is used) or weighted edge list.
    #[arg(long)]
    input: PathBuf,
    /// Defaults from the extension: .g6 is graph6, .el/.txt/.edgelist is an edge list.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "paper")]
    convention: ConventionArg,
    /// Accuracy for the mixing-time bounds.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Finite-difference step for the derivative check.
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    h: f64,
    #[arg(long)]
    conditions_only: bool,
    /// Also write the scan CSV row for this graph.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Spacing {
    Linear,
    Log,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "paper")]
    convention: ConventionArg,
    /// Explicit ascending grid, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["alpha_max", "steps"])]
    alphas: Vec<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    /// Number of intervals; the grid has steps + 1 points.
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[arg(long, value_enum, default_value = "linear")]
    spacing: Spacing,
    /// Smallest rate of a log grid.
    #[arg(long, default_value_t = 1e-3)]
    alpha_min: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomModel {
    Er,
    Sbm,
}

#[derive(Args)]
struct ScanArgs {
    /// graph6 catalog, one graph per line.
    #[arg(long, conflicts_with_all = ["model", "graphs"], required_unless_present_any = ["model", "graphs"])]
    catalog: Option<PathBuf>,
    /// Edge-list or graph6 files scanned as one catalog.
    #[arg(long, num_args = 1.., conflicts_with = "model")]
    graphs: Vec<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<RandomModel>,
    #[command(flatten)]
    params: ModelParams,
    /// Number of random samples.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Seed of the first sample; sample i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "slem")]
    convention: ConventionArg,
    /// Worker threads. Falls back to RWJ_THREADS, then 1.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = 5)]
    top_k: usize,
    /// Stop after this many input graphs.
    #[arg(long)]
    limit: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory receiving an edge list and a report per WORSENS graph.
    #[arg(long)]
    ledger: Option<PathBuf>,
}

#[derive(Args)]
struct ModelParams {
    /// Number of vertices.
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability of the Erdos-Renyi model.
    #[arg(long)]
    p: Option<f64>,
    /// Block sizes, e.g. 10,10.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Block probabilities, rows separated by ';', e.g. "0.5,0.05;0.05,0.5".
    #[arg(long)]
    probs: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenModel {
    Path,
    Cycle,
    Star,
    Complete,
    Er,
    Sbm,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: GenModel,
    #[command(flatten)]
    params: ModelParams,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults from the --out extension, else graph6 for the fixed families
    /// and an edge list (with the seed in a comment) for random models.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct TwoNodeArgs {
    /// One value, or a comma-separated list for a grid search.
    #[arg(long, value_delimiter = ',', required = true)]
    a11: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    a12: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    a22: Vec<f64>,
    /// Grid mode CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Disconnected => 3,
        e if e.is_input_error() => 2,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => run_analyze(args, false),
        Command::Conditions(args) => run_analyze(args, true),
        Command::Sweep(args) => run_sweep(args),
        Command::Scan(args) => run_scan(args),
        Command::Gen(args) => run_gen(args),
        Command::TwoNode(args) => run_two_node(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn infer_format(path: &Path) -> Option<Format> {
    match path.extension()?.to_str()? {
        "g6" | "graph6" => Some(Format::Graph6),
        "el" | "txt" | "edgelist" | "edges" => Some(Format::Edgelist),
        _ => None,
    }
}

fn load_graph(args: &InputArgs) -> Result<(String, WeightedGraph)> {
    let format = args
        .format
        .or_else(|| infer_format(&args.input))
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "cannot infer the format of {}; pass --format",
                args.input.display()
            ))
        })?;
    let bytes = fs::read(&args.input)?;
    let g = match format {
        Format::Graph6 => {
            let line = bytes
                .split(|&b| b == b'\n')
                .map(|l| l.trim_ascii())
                .find(|l| !l.is_empty())
                .ok_or_else(|| Error::Parse("empty graph6 file".into()))?;
            parse_graph6(line)?
        }
        Format::Edgelist => {
            let text = String::from_utf8(bytes)
                .map_err(|_| Error::Parse("edge list is not UTF-8".into()))?;
            parse_edgelist(&text)?
        }
    };
    let name = g
        .name()
        .map(str::to_string)
        .unwrap_or_else(|| args.input.display().to_string());
    Ok((name, g))
}

fn run_analyze(args: AnalyzeArgs, conditions_only: bool) -> Result<u8> {
    let (name, g) = load_graph(&args.input)?;
    let options = AnalysisOptions {
        alpha: args.alpha,
        convention: args.convention.single()?,
        epsilon: args.epsilon,
        fd_step: args.h,
    };
    let a = analyze(&g, options)?;
    let text = if conditions_only || args.conditions_only {
        a.render_conditions_only(&name)
    } else {
        a.render(&name)
    };
    emit(None, &text)?;
    if let Some(path) = args.csv {
        let record = ScanRecord::from_analysis(name, &a);
        fs::write(path, format!("{CSV_HEADER}\n{}\n", csv_row(&record)))?;
    }
    Ok(0)
}

fn sweep_grid(args: &SweepArgs) -> Result<Vec<f64>> {
    let grid = if !args.alphas.is_empty() {
        args.alphas.clone()
    } else {
        let max = args
            .alpha_max
            .ok_or_else(|| Error::InvalidParameter("give --alphas or --alpha-max".into()))?;
        if args.steps == 0 {
            return Err(Error::InvalidParameter("--steps must be at least 1".into()));
        }
        match args.spacing {
            Spacing::Linear => (0..=args.steps)
                .map(|i| max * i as f64 / args.steps as f64)
                .collect(),
            Spacing::Log => {
                if !(args.alpha_min > 0.0 && args.alpha_min < max) {
                    return Err(Error::InvalidParameter(
                        "log spacing needs 0 < --alpha-min < --alpha-max".into(),
                    ));
                }
                log_grid(args.alpha_min, max, args.steps + 1)
            }
        }
    };
    if grid.iter().any(|a| !a.is_finite() || *a < 0.0) {
        return Err(Error::InvalidParameter(
            "jump rates must be finite and non-negative".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "alpha grid must be strictly ascending".into(),
        ));
    }
    Ok(grid)
}

fn run_sweep(args: SweepArgs) -> Result<u8> {
    let (_, g) = load_graph(&args.input)?;
    let convention = args.convention.single()?;
    let grid = sweep_grid(&args)?;
    let d_max = degree_stats(&g).d_max;
    let mut rows = Vec::with_capacity(grid.len());
    for &alpha in &grid {
        rows.push(spectrum(&build_transition(&g, alpha)?, convention)?);
    }
    // A branch that cannot be followed leaves the tracked column empty.
    let tracked = track_branch(&g, &grid, &rows[0].v_star).ok();
    let mut out =
        String::from("alpha,lambda_star,gap,t_rel,dobrushin_lower_bound,lambda_tracked\n");
    for (i, (alpha, s)) in grid.iter().zip(&rows).enumerate() {
        let lambda_tracked = tracked
            .as_ref()
            .map_or_else(|| "na".to_string(), |t| sig(t[i].lambda));
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            sig(*alpha),
            sig(s.lambda_star),
            sig(s.gap),
            sig(s.t_rel),
            sig(dobrushin_bound(*alpha, d_max)),
            lambda_tracked
        );
    }
    emit(args.out.as_deref(), &out)?;
    Ok(0)
}

fn parse_probs(text: &str) -> Result<Vec<Vec<f64>>> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidParameter(format!("bad probability '{x}'")))
                })
                .collect()
        })
        .collect()
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParameter(format!("missing --{flag}")))
}

fn sbm(params: &ModelParams) -> Result<Model> {
    if params.sizes.is_empty() {
        return Err(Error::InvalidParameter("missing --sizes".into()));
    }
    Ok(Model::Sbm {
        sizes: params.sizes.clone(),
        probs: parse_probs(&require(params.probs.clone(), "probs")?)?,
    })
}

fn random_model(kind: RandomModel, params: &ModelParams) -> Result<Model> {
    match kind {
        RandomModel::Er => Ok(Model::ErdosRenyi {
            n: require(params.n, "n")?,
            p: require(params.p, "p")?,
        }),
        RandomModel::Sbm => sbm(params),
    }
}

fn thread_count(flag: Option<usize>) -> Result<usize> {
    let threads = match flag {
        Some(t) => t,
        None => match std::env::var("RWJ_THREADS") {
            Ok(v) => v.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!(
                    "RWJ_THREADS must be a positive integer, got '{v}'"
                ))
            })?,
            Err(_) => 1,
        },
    };
    if threads == 0 {
        return Err(Error::InvalidParameter(
            "thread count must be at least 1".into(),
        ));
    }
    Ok(threads)
}

fn run_scan(args: ScanArgs) -> Result<u8> {
    let threads = thread_count(args.threads)?;
    let model = args
        .model
        .map(|m| random_model(m, &args.params))
        .transpose()?;
    let mut outcomes: Vec<ScanOutcome> = Vec::new();
    for convention in args.convention.conventions() {
        let options = ScanOptions {
            convention,
            limit: args.limit,
            top_k: args.top_k,
            threads,
            analysis: AnalysisOptions::default(),
        };
        let outcome = match (&args.catalog, &model) {
            (Some(path), _) => {
                let reader = BufReader::new(File::open(path)?);
                scan_catalog(reader, &path.display().to_string(), &options)?
            }
            (None, Some(model)) => scan_random(model, args.count, args.seed, &options)?,
            (None, None) if !args.graphs.is_empty() => {
                let graphs = args
                    .graphs
                    .iter()
                    .map(|path| {
                        let input = InputArgs {
                            input: path.clone(),
                            format: None,
                        };
                        let id = path.display().to_string();
                        (id, load_graph(&input).map(|(_, g)| g))
                    })
                    .collect();
                scan_graphs(graphs, &format!("{} files", args.graphs.len()), &options)?
            }
            (None, None) => {
                return Err(Error::InvalidParameter(
                    "give --catalog, --graphs or --model".into(),
                ))
            }
        };
        outcomes.push(outcome);
    }

    let records: Vec<ScanRecord> = outcomes
        .iter()
        .flat_map(|o| o.all.iter().cloned())
        .collect();
    emit(args.out.as_deref(), &write_csv(&records))?;
    if let Some(dir) = &args.ledger {
        let witnesses: Vec<_> = outcomes
            .iter()
            .flat_map(|o| o.witnesses.iter().cloned())
            .collect();
        write_ledger(dir, &witnesses)?;
    }

    let mut summary = String::new();
    for o in &outcomes {
        summary.push_str(&o.summary.render());
    }
    if args.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    if let Some(e) = outcomes.iter().find_map(|o| o.summary.io_error.clone()) {
        return Err(Error::Io(e));
    }
    let found: usize = outcomes.iter().map(|o| o.summary.counterexamples).sum();
    Ok(if found > 0 { EXIT_COUNTEREXAMPLE } else { 0 })
}

fn run_gen(args: GenArgs) -> Result<u8> {
    let p = &args.params;
    let model = match args.model {
        GenModel::Path => Model::Path {
            n: require(p.n, "n")?,
        },
        GenModel::Cycle => Model::Cycle {
            n: require(p.n, "n")?,
        },
        GenModel::Star => Model::Star {
            n: require(p.n, "n")?,
        },
        GenModel::Complete => Model::Complete {
            n: require(p.n, "n")?,
        },
        GenModel::Er => random_model(RandomModel::Er, p)?,
        GenModel::Sbm => sbm(p)?,
    };
    let generated = generate(&model, args.seed, DEFAULT_RETRIES)?;
    let format = args
        .format
        .or_else(|| args.out.as_deref().and_then(infer_format))
        .unwrap_or(if model.is_random() {
            Format::Edgelist
        } else {
            Format::Graph6
        });
    let text = match format {
        Format::Graph6 => {
            let mut bytes = write_graph6(&generated.graph)?;
            bytes.push(b'\n');
            String::from_utf8(bytes).expect("graph6 is ASCII")
        }
        Format::Edgelist => {
            let mut comments = vec![format!("model: {model}")];
            if model.is_random() {
                comments.push(format!(
                    "seed: {}  attempts: {}",
                    args.seed, generated.attempts
                ));
            }
            write_edgelist(&generated.graph, &comments)
        }
    };
    emit(args.out.as_deref(), &text)?;
    Ok(0)
}

fn run_two_node(args: TwoNodeArgs) -> Result<u8> {
    if let ([a11], [a12], [a22]) = (&args.a11[..], &args.a12[..], &args.a22[..]) {
        let params = TwoNodeParams::new(*a11, *a12, *a22)?;
        let s = two_node_closed_form(&params);
        let (d1, d2) = params.degrees();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "a11 = {}  a12 = {}  a22 = {}",
            sig(*a11),
            sig(*a12),
            sig(*a22)
        );
        let _ = writeln!(
            out,
            "degrees = [{}, {}]  det = {}",
            sig(d1),
            sig(d2),
            sig(params.det())
        );
        let _ = writeln!(out, "lambda_star = {}", sig(s.lambda_star));
        let _ = writeln!(out, "v_star = [{}, {}]", sig(s.v_star[0]), sig(s.v_star[1]));
        let _ = writeln!(
            out,
            "numerator = {}  denominator = {}  lambda_first = {}",
            sig(s.numerator),
            sig(s.denominator),
            sig(s.lambda_first)
        );
        let _ = writeln!(out, "classification: {}", classify_two_node(&s));
        emit(None, &out)?;
        return Ok(0);
    }
    let grid = TwoNodeGrid {
        a11: args.a11,
        a12: args.a12,
        a22: args.a22,
    };
    let found = two_node_grid_search(&grid)?;
    emit(args.out.as_deref(), &write_csv(&found))?;
    let points = grid.a11.len() * grid.a12.len() * grid.a22.len();
    eprintln!("grid points: {points}  worsens: {}", found.len());
    Ok(0)
}
