//! Counterexample search: two-vertex closed forms and scans over graph
//! catalogs and random models.
//!
//! A counterexample is a graph whose relaxation time grows for every small
//! enough jump rate. It is reported only when the first-order rate says
//! WORSENS, the gap of `P(alpha)` itself drops at every confirmation rate,
//! and the paper-literal convention is not merely discontinuous at zero.

use std::fmt::Write as _;
use std::fs;
use std::io::BufRead;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::analysis::{analyze, Analysis, AnalysisOptions};
use crate::error::{Error, Result};
use crate::format::sig;
use crate::graph::{generate, parse_graph6, write_edgelist, Model, WeightedGraph, DEFAULT_RETRIES};
use crate::perturbation::{classify_rate, modulus_rate, Classification, ReportFlags};
use crate::spectral::Convention;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoNodeParams {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl TwoNodeParams {
    pub fn new(a11: f64, a12: f64, a22: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !(ok(a11) && ok(a22) && ok(a12)) {
            return Err(Error::InvalidParameter(format!(
                "weights must be finite and non-negative, got ({a11}, {a12}, {a22})"
            )));
        }
        if a12 == 0.0 {
            return Err(Error::Disconnected);
        }
        Ok(Self { a11, a12, a22 })
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    pub fn degrees(&self) -> (f64, f64) {
        (self.a11 + self.a12, self.a22 + self.a12)
    }

    pub fn graph(&self) -> Result<WeightedGraph> {
        crate::graph::families::two_node(self.a11, self.a12, self.a22)
    }

    fn id(&self) -> String {
        format!("a11={};a12={};a22={}", self.a11, self.a12, self.a22)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoNodeSolution {
    /// `det(A) / (d1 d2)`.
    pub lambda_star: f64,
    /// `(1, -d1/d2)`.
    pub v_star: [f64; 2],
    /// `(1/2)(1^T v)^2 - lambda v^T v` in expanded form.
    pub numerator: f64,
    /// `v^T D v`.
    pub denominator: f64,
    pub lambda_first: f64,
}

/// Closed-form non-Perron eigenpair of a two-vertex graph with self-loops
/// and the first-order terms evaluated on it.
pub fn two_node_closed_form(p: &TwoNodeParams) -> TwoNodeSolution {
    let (d1, d2) = p.degrees();
    let det = p.det();
    let lambda_star = det / (d1 * d2);
    let v_star = [1.0, -d1 / d2];
    let numerator = ((p.a22 - p.a11).powi(2) * d1 * d2 - 2.0 * det * (d1 * d1 + d2 * d2))
        / (2.0 * d1 * d2.powi(3));
    let denominator = d1 + d2 * v_star[1] * v_star[1];
    TwoNodeSolution {
        lambda_star,
        v_star,
        numerator,
        denominator,
        lambda_first: numerator / denominator,
    }
}

pub fn classify_two_node(sol: &TwoNodeSolution) -> Classification {
    classify_rate(modulus_rate(sol.lambda_star, sol.lambda_first))
}

/// Cartesian grid over the three weights.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TwoNodeGrid {
    pub a11: Vec<f64>,
    pub a12: Vec<f64>,
    pub a22: Vec<f64>,
}

impl TwoNodeGrid {
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.a11.iter().flat_map(move |&x| {
            self.a12
                .iter()
                .flat_map(move |&y| self.a22.iter().map(move |&z| (x, y, z)))
        })
    }
}

/// Classifies every valid grid point from the closed forms and returns the
/// WORSENS points. Points with `a12 = 0` are skipped.
pub fn two_node_grid_search(grid: &TwoNodeGrid) -> Result<Vec<ScanRecord>> {
    if grid.a11.is_empty() || grid.a12.is_empty() || grid.a22.is_empty() {
        return Err(Error::InvalidParameter("two-node grid is empty".into()));
    }
    let mut out = Vec::new();
    for (a11, a12, a22) in grid.points() {
        let Ok(params) = TwoNodeParams::new(a11, a12, a22) else {
            continue;
        };
        let sol = two_node_closed_form(&params);
        let classification = classify_two_node(&sol);
        if classification == Classification::Worsens {
            out.push(ScanRecord {
                id: params.id(),
                n: 2,
                convention: Convention::PaperLiteral,
                lambda_star: sol.lambda_star,
                lambda_first: sol.lambda_first,
                classification,
                margin: -modulus_rate(sol.lambda_star, sol.lambda_first),
                cor1: None,
                cor2: None,
                thm2_sharp: None,
                thm2_paper: None,
                cor4_sharp: None,
                nand_s: None,
                comparable: false,
                flags: ReportFlags {
                    zero_case: sol.lambda_star.abs() <= crate::perturbation::TOL_SIGN,
                    ..Default::default()
                },
                confirmed: None,
                fd_agreement: None,
                violations: Vec::new(),
            });
        }
    }
    Ok(out)
}

/// One classified graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub id: String,
    pub n: usize,
    pub convention: Convention,
    pub lambda_star: f64,
    pub lambda_first: f64,
    pub classification: Classification,
    pub margin: f64,
    pub cor1: Option<bool>,
    pub cor2: Option<bool>,
    pub thm2_sharp: Option<bool>,
    pub thm2_paper: Option<bool>,
    pub cor4_sharp: Option<bool>,
    pub nand_s: Option<bool>,
    /// `lambda_star > 0` and simple.
    pub comparable: bool,
    pub flags: ReportFlags,
    pub confirmed: Option<bool>,
    pub fd_agreement: Option<f64>,
    pub violations: Vec<String>,
}

impl ScanRecord {
    pub fn from_analysis(id: String, a: &Analysis) -> Self {
        let p = &a.perturbation;
        let c = &a.conditions;
        Self {
            id,
            n: c.n,
            convention: p.convention,
            lambda_star: p.lambda_star,
            lambda_first: p.lambda_first,
            classification: p.classification,
            margin: p.margin,
            cor1: Some(c.cor1.holds),
            cor2: c.cor2.map(|s| s.verdict.holds),
            thm2_sharp: Some(c.thm2_sharp.holds),
            thm2_paper: Some(c.thm2_paper.holds),
            cor4_sharp: Some(c.cor4_sharp.holds),
            nand_s: c.nand_s.map(|x| x.holds),
            comparable: c.comparable,
            flags: p.flags,
            confirmed: a.confirmed,
            fd_agreement: p.fd_agreement,
            violations: c.violations.clone(),
        }
    }

    /// WORSENS, confirmed by the gap itself, and not a convention artifact.
    pub fn is_counterexample(&self) -> bool {
        self.classification == Classification::Worsens
            && !self.flags.bipartite_artifact
            && self.confirmed == Some(true)
    }

    pub fn flag_labels(&self) -> String {
        let mut labels = self.flags.labels();
        let mut push = |s: &str| {
            if !labels.is_empty() {
                labels.push('|');
            }
            labels.push_str(s);
        };
        if self.confirmed == Some(false) {
            push("UNCONFIRMED");
        }
        if !self.violations.is_empty() {
            push("INCONSISTENT");
        }
        labels
    }
}

pub const CSV_HEADER: &str =
    "id,n,convention,lambda_star,lambda_first,classification,margin,cor1,cor2,thm2_sharp,cor4_sharp,nand_s,flags";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_bool(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "true",
        Some(false) => "false",
        None => "na",
    }
}

pub fn csv_row(r: &ScanRecord) -> String {
    [
        csv_field(&r.id),
        r.n.to_string(),
        r.convention.to_string(),
        sig(r.lambda_star),
        sig(r.lambda_first),
        r.classification.to_string(),
        sig(r.margin),
        csv_bool(r.cor1).into(),
        csv_bool(r.cor2).into(),
        csv_bool(r.thm2_sharp).into(),
        csv_bool(r.cor4_sharp).into(),
        csv_bool(r.nand_s).into(),
        csv_field(&r.flag_labels()),
    ]
    .join(",")
}

pub fn write_csv(records: &[ScanRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub convention: Convention,
    /// Stop after this many input graphs.
    pub limit: Option<usize>,
    /// Number of closest IMPROVES records to keep.
    pub top_k: usize,
    /// Worker threads; 1 runs serially.
    pub threads: usize,
    pub analysis: AnalysisOptions,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            convention: Convention::Slem,
            limit: None,
            top_k: 5,
            threads: 1,
            analysis: AnalysisOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanSummary {
    pub source: String,
    pub convention: Option<Convention>,
    pub total: usize,
    pub classified: usize,
    pub skipped: usize,
    pub skipped_disconnected: usize,
    pub skipped_malformed: usize,
    pub skipped_failed: usize,
    pub counterexamples: usize,
    /// WORSENS whose gap check disagreed.
    pub unconfirmed: usize,
    pub improves: usize,
    pub worsens: usize,
    pub stationary: usize,
    pub degenerate: usize,
    pub tied: usize,
    pub bipartite_artifacts: usize,
    /// Graphs with a failed implication check.
    pub inconsistent: usize,
    /// Factor-4 degree condition holds while the exact condition fails.
    pub paper_constant_witnesses: usize,
    /// The `top_k` smallest margins among IMPROVES, `(id, margin)`.
    pub closest: Vec<(String, f64)>,
    pub elapsed: Duration,
    pub io_error: Option<String>,
}

impl ScanSummary {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let conv = self.convention.map(|c| c.to_string()).unwrap_or_default();
        let _ = writeln!(out, "source: {}  convention: {conv}", self.source);
        let _ = writeln!(
            out,
            "total: {}  classified: {}  skipped: {} (disconnected {}, malformed {}, failed {})",
            self.total,
            self.classified,
            self.skipped,
            self.skipped_disconnected,
            self.skipped_malformed,
            self.skipped_failed
        );
        let _ = writeln!(
            out,
            "improves: {}  worsens: {}  stationary: {}",
            self.improves, self.worsens, self.stationary
        );
        let _ = writeln!(
            out,
            "counterexamples: {}  unconfirmed: {}  bipartite artifacts: {}",
            self.counterexamples, self.unconfirmed, self.bipartite_artifacts
        );
        let _ = writeln!(
            out,
            "degenerate: {}  tied: {}  inconsistent: {}  factor-4 witnesses: {}",
            self.degenerate, self.tied, self.inconsistent, self.paper_constant_witnesses
        );
        for (id, margin) in &self.closest {
            let _ = writeln!(out, "closest: {id}  margin {}", sig(*margin));
        }
        if let Some(e) = &self.io_error {
            let _ = writeln!(out, "I/O ERROR (partial summary): {e}");
        }
        let _ = writeln!(out, "elapsed: {:.3} s", self.elapsed.as_secs_f64());
        out
    }
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub summary: ScanSummary,
    /// Every WORSENS or STATIONARY record plus the closest IMPROVES ones, in
    /// input order.
    pub records: Vec<ScanRecord>,
    /// One record per classified graph, in input order.
    pub all: Vec<ScanRecord>,
    /// Graphs behind counterexample records, for the falsification ledger.
    pub witnesses: Vec<(ScanRecord, WeightedGraph, String)>,
}

enum Item {
    Graph(String, WeightedGraph),
    Skip(Error),
}

enum Outcome {
    Done(Box<ScanRecord>, Option<(WeightedGraph, String)>),
    Skipped(Error),
}

fn run(item: Item, options: &ScanOptions) -> Outcome {
    match item {
        Item::Skip(e) => Outcome::Skipped(e),
        Item::Graph(id, g) => {
            let analysis_options = AnalysisOptions {
                convention: options.convention,
                ..options.analysis
            };
            match analyze(&g, analysis_options) {
                Ok(a) => {
                    let record = ScanRecord::from_analysis(id.clone(), &a);
                    let witness = (record.classification == Classification::Worsens)
                        .then(|| (g, a.render(&id)));
                    Outcome::Done(Box::new(record), witness)
                }
                Err(e) => Outcome::Skipped(e),
            }
        }
    }
}

fn scan_items(
    items: Vec<Item>,
    source: String,
    options: &ScanOptions,
    io_error: Option<String>,
) -> Result<ScanOutcome> {
    let start = Instant::now();
    let total = items.len();
    let outcomes: Vec<Outcome> = if options.threads <= 1 {
        items.into_iter().map(|it| run(it, options)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| items.into_par_iter().map(|it| run(it, options)).collect())
    };

    let mut summary = ScanSummary {
        source,
        convention: Some(options.convention),
        total,
        io_error,
        ..Default::default()
    };
    let mut all = Vec::new();
    let mut witnesses = Vec::new();
    for outcome in outcomes {
        match outcome {
            Outcome::Skipped(e) => {
                summary.skipped += 1;
                match e {
                    Error::Disconnected | Error::RetriesExhausted(_) => {
                        summary.skipped_disconnected += 1
                    }
                    Error::Parse(_) => summary.skipped_malformed += 1,
                    _ => summary.skipped_failed += 1,
                }
            }
            Outcome::Done(record, witness) => {
                let record = *record;
                summary.classified += 1;
                match record.classification {
                    Classification::Improves => summary.improves += 1,
                    Classification::Worsens => summary.worsens += 1,
                    Classification::Stationary => summary.stationary += 1,
                }
                if record.is_counterexample() {
                    summary.counterexamples += 1;
                }
                if record.classification == Classification::Worsens
                    && record.confirmed == Some(false)
                {
                    summary.unconfirmed += 1;
                }
                summary.degenerate += usize::from(record.flags.degenerate);
                summary.tied += usize::from(record.flags.tied);
                summary.bipartite_artifacts += usize::from(record.flags.bipartite_artifact);
                summary.inconsistent += usize::from(!record.violations.is_empty());
                summary.paper_constant_witnesses +=
                    usize::from(record.thm2_paper == Some(true) && record.nand_s == Some(false));
                if let Some((g, report)) = witness {
                    witnesses.push((record.clone(), g, report));
                }
                all.push(record);
            }
        }
    }

    let mut improving: Vec<usize> = (0..all.len())
        .filter(|&i| all[i].classification == Classification::Improves)
        .collect();
    improving.sort_by(|&i, &j| all[i].margin.total_cmp(&all[j].margin).then(i.cmp(&j)));
    improving.truncate(options.top_k);
    summary.closest = improving
        .iter()
        .map(|&i| (all[i].id.clone(), all[i].margin))
        .collect();
    improving.sort_unstable();
    let records = (0..all.len())
        .filter(|i| {
            all[*i].classification != Classification::Improves || improving.binary_search(i).is_ok()
        })
        .map(|i| all[i].clone())
        .collect();
    summary.elapsed = start.elapsed();
    Ok(ScanOutcome {
        summary,
        records,
        all,
        witnesses,
    })
}

/// Scans a graph6 stream, one graph per line. Blank lines are ignored;
/// malformed and disconnected lines are counted as skipped. A read error
/// stops the input and is reported in the summary of what was read.
pub fn scan_catalog<R: BufRead>(
    reader: R,
    source: &str,
    options: &ScanOptions,
) -> Result<ScanOutcome> {
    let mut items = Vec::new();
    let mut io_error = None;
    for line in reader.split(b'\n') {
        if options.limit.is_some_and(|l| items.len() >= l) {
            break;
        }
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                io_error = Some(e.to_string());
                break;
            }
        };
        let trimmed = line.trim_ascii();
        if trimmed.is_empty() {
            continue;
        }
        let id = String::from_utf8_lossy(trimmed).into_owned();
        items.push(match parse_graph6(trimmed) {
            Ok(g) => Item::Graph(id, g),
            Err(e) => Item::Skip(e),
        });
    }
    scan_items(items, source.to_string(), options, io_error)
}

/// Scans already loaded graphs; failed loads count as skipped.
pub fn scan_graphs(
    graphs: Vec<(String, Result<WeightedGraph>)>,
    source: &str,
    options: &ScanOptions,
) -> Result<ScanOutcome> {
    let limit = options.limit.unwrap_or(usize::MAX);
    let items = graphs
        .into_iter()
        .take(limit)
        .map(|(id, g)| match g {
            Ok(g) => Item::Graph(id, g),
            Err(e) => Item::Skip(e),
        })
        .collect();
    scan_items(items, source.to_string(), options, None)
}

/// Scans `count` samples of a random model with seeds `seed, seed+1, ...`.
pub fn scan_random(
    model: &Model,
    count: usize,
    seed: u64,
    options: &ScanOptions,
) -> Result<ScanOutcome> {
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let count = options.limit.map_or(count, |l| l.min(count));
    let mut items = Vec::with_capacity(count);
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        let id = format!("{model}#seed={s}");
        items.push(match generate(model, s, DEFAULT_RETRIES) {
            Ok(gen) => Item::Graph(id, gen.graph),
            Err(e @ Error::InvalidParameter(_)) => return Err(e),
            Err(e) => Item::Skip(e),
        });
    }
    scan_items(
        items,
        format!("{model} count={count} seed={seed}"),
        options,
        None,
    )
}

/// Writes one edge list and one text report per witness into `dir`.
pub fn write_ledger(dir: &Path, witnesses: &[(ScanRecord, WeightedGraph, String)]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (k, (record, g, report)) in witnesses.iter().enumerate() {
        let stem = format!("witness_{k:04}");
        let comments = vec![
            format!("id: {}", record.id),
            format!(
                "classification: {}  flags: {}",
                record.classification,
                record.flag_labels()
            ),
        ];
        fs::write(dir.join(format!("{stem}.el")), write_edgelist(g, &comments))?;
        fs::write(dir.join(format!("{stem}.txt")), report)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::complete;
    use crate::graph::write_graph6;
    use crate::spectral::{build_transition, spectrum};
    use approx::assert_relative_eq;

    #[test]
    fn closed_form_examples() {
        let s = two_node_closed_form(&TwoNodeParams::new(4.0, 2.0, 1.0).unwrap());
        assert_eq!(s.lambda_star, 0.0);
        assert_eq!(s.v_star, [1.0, -2.0]);
        assert_relative_eq!(s.numerator, 0.5, epsilon = 1e-15);
        assert_relative_eq!(s.lambda_first, 1.0 / 36.0, epsilon = 1e-15);
        assert_eq!(classify_two_node(&s), Classification::Worsens);

        let s = two_node_closed_form(&TwoNodeParams::new(1.0, 2.0, 3.0).unwrap());
        assert_relative_eq!(s.lambda_star, -1.0 / 15.0, epsilon = 1e-15);
        assert_relative_eq!(s.v_star[1], -0.6, epsilon = 1e-15);
        assert_eq!(classify_two_node(&s), Classification::Improves);

        let s = two_node_closed_form(&TwoNodeParams::new(3.0, 1.0, 3.0).unwrap());
        assert_relative_eq!(s.lambda_star, 0.5, epsilon = 1e-15);
        assert_eq!(s.v_star, [1.0, -1.0]);
        assert_eq!(classify_two_node(&s), Classification::Improves);
    }

    #[test]
    fn expanded_numerator_matches_direct() {
        for (a, b, c) in [
            (4.0, 2.0, 1.0),
            (1.0, 2.0, 3.0),
            (0.3, 1.7, 5.0),
            (2.0, 0.1, 0.0),
        ] {
            let p = TwoNodeParams::new(a, b, c).unwrap();
            let s = two_node_closed_form(&p);
            let sum = s.v_star[0] + s.v_star[1];
            let direct = 0.5 * sum * sum - s.lambda_star * (1.0 + s.v_star[1] * s.v_star[1]);
            assert_relative_eq!(s.numerator, direct, max_relative = 1e-12, epsilon = 1e-14);
        }
    }

    #[test]
    fn closed_form_matches_numeric_spectrum() {
        let p = TwoNodeParams::new(0.7, 1.3, 2.2).unwrap();
        let s = two_node_closed_form(&p);
        let g = p.graph().unwrap();
        let num = spectrum(&build_transition(&g, 0.0).unwrap(), Convention::Slem).unwrap();
        assert_relative_eq!(num.lambda_star, s.lambda_star, epsilon = 1e-12);
        let ratio = num.v_star[1] / num.v_star[0];
        assert_relative_eq!(ratio, s.v_star[1], max_relative = 1e-10);
    }

    #[test]
    fn invalid_two_node_params() {
        assert_eq!(TwoNodeParams::new(1.0, 0.0, 1.0), Err(Error::Disconnected));
        assert!(TwoNodeParams::new(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn grid_search_regions() {
        let steps: Vec<f64> = (0..=8).map(|i| i as f64 * 0.5).collect();
        let grid = TwoNodeGrid {
            a11: steps.clone(),
            a12: vec![2.0],
            a22: steps.clone(),
        };
        let found = two_node_grid_search(&grid).unwrap();
        assert!(found.iter().any(|r| r.id == "a11=4;a12=2;a22=1"));
        for r in &found {
            assert!(r.lambda_star >= -1e-9, "{}", r.id);
        }

        let regular: Vec<f64> = (1..=10).map(f64::from).collect();
        let diagonal = regular.iter().flat_map(|&a| {
            let g = TwoNodeGrid {
                a11: vec![a],
                a12: regular.clone(),
                a22: vec![a],
            };
            two_node_grid_search(&g).unwrap()
        });
        assert_eq!(diagonal.count(), 0);

        let negative = TwoNodeGrid {
            a11: vec![0.0, 0.5, 1.0],
            a12: vec![3.0, 5.0],
            a22: vec![0.0, 1.0, 2.0],
        };
        assert!(two_node_grid_search(&negative).unwrap().is_empty());
        assert!(two_node_grid_search(&TwoNodeGrid::default()).is_err());
    }

    #[test]
    fn catalog_with_skips() {
        let k4 = String::from_utf8(write_graph6(&complete(4)).unwrap()).unwrap();
        let text = format!("{k4}\nC`\n\nC!\nBw\n");
        let out = scan_catalog(text.as_bytes(), "inline", &ScanOptions::default()).unwrap();
        assert_eq!(out.summary.total, 4);
        assert_eq!(out.summary.skipped, 2);
        assert_eq!(out.summary.skipped_disconnected, 1);
        assert_eq!(out.summary.skipped_malformed, 1);
        assert_eq!(out.summary.classified, 2);
        assert_eq!(out.summary.counterexamples, 0);
        assert_eq!(out.all.len(), 2);
    }

    #[test]
    fn weighted_counterexample_is_counted() {
        let graphs = vec![
            (
                "two-node".to_string(),
                TwoNodeParams::new(4.0, 2.0, 1.0).unwrap().graph(),
            ),
            ("k4".to_string(), Ok(complete(4))),
            ("broken".to_string(), Err(Error::Parse("bad".into()))),
        ];
        let out = scan_graphs(graphs, "inline", &ScanOptions::default()).unwrap();
        assert_eq!(out.summary.counterexamples, 1);
        assert_eq!(out.summary.skipped_malformed, 1);
        assert_eq!(out.witnesses.len(), 1);
        assert_eq!(out.witnesses[0].0.id, "two-node");
        assert!(out.records.iter().any(|r| r.id == "k4"));

        let dir = std::env::temp_dir().join(format!("rwj-ledger-{}", std::process::id()));
        write_ledger(&dir, &out.witnesses).unwrap();
        let text = fs::read_to_string(dir.join("witness_0000.el")).unwrap();
        let back = crate::graph::parse_edgelist(&text).unwrap();
        assert_eq!(
            back.edges().collect::<Vec<_>>(),
            out.witnesses[0].1.edges().collect::<Vec<_>>()
        );
        assert!(fs::read_to_string(dir.join("witness_0000.txt"))
            .unwrap()
            .contains("WORSENS"));
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn csv_quotes_commas() {
        let model = Model::ErdosRenyi { n: 8, p: 0.5 };
        let out = scan_random(
            &model,
            2,
            3,
            &ScanOptions {
                top_k: 2,
                ..Default::default()
            },
        )
        .unwrap();
        let csv = write_csv(&out.records);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert!(lines
            .next()
            .unwrap()
            .starts_with("\"er(n=8,p=0.5)#seed=3\",8,slem,"));
    }

    #[test]
    fn random_scan_rejects_zero_count() {
        let model = Model::ErdosRenyi { n: 8, p: 0.5 };
        assert!(scan_random(&model, 0, 1, &ScanOptions::default()).is_err());
    }
}
