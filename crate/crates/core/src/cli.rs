//! Command-line surface: argument definitions, file formats and commands.
//!
//! File formats:
//! - edge list: one `u v` pair of 0-based node ids per line, `#` starts a
//!   comment; a `# nodes N` line fixes the node count, otherwise it is the
//!   largest id plus one. Pairs are undirected and deduplicated.
//! - embedding: CSV with header `node,k,coord_1,…` and one row per node;
//!   `k` is empty for Euclidean embeddings. Values carry 17 significant
//!   digits so a write-read cycle is exact.
//! - reports and run configurations: TOML.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Curvature;
use crate::inference::{
    bootstrap_ci, fit_model, information_criteria, link_prediction_auc, lrt_test, relative_errors, CiReport,
    ErrorReport, LrtReport, ModelGeometry, PipelineConfig,
};
use crate::init::InitConfig;
use crate::model::{log_likelihood, LatentEmbedding, LinkFunction, Network};
use crate::netgen::{generate_network, graph_stats, sample_uniform_disk, GraphStats, SimConfig};
use crate::optim::FitConfig;

/// Environment variable holding the default worker thread count.
pub const THREADS_ENV: &str = "HYPERLATENT_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub d: usize,
    pub link: LinkFunction,
    pub geometry: ModelGeometry,
    /// Fit with the curvature held at this value.
    pub freeze_k: Option<f64>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { d: 2, link: LinkFunction::Logistic, geometry: ModelGeometry::Hyperbolic, freeze_k: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InferenceConfig {
    /// Number of bootstrap replicates.
    pub bootstrap: usize,
    pub level: f64,
    pub holdout_fraction: f64,
    pub seed: u64,
}

impl Default for InferenceConfig {
    fn default() -> Self {
        Self { bootstrap: 100, level: 0.95, holdout_fraction: 0.2, seed: 0 }
    }
}

/// Everything a command can be configured with. Missing keys take their
/// defaults; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sim: SimConfig,
    pub model: ModelConfig,
    pub init: InitConfig,
    pub fit: FitConfig,
    pub inference: InferenceConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                Self::from_toml(&text)
            }
            None => Ok(Self::default()),
        }
    }

    /// Settings for a full fit, with a frozen curvature folded in.
    pub fn pipeline(&self) -> PipelineConfig {
        let mut cfg = PipelineConfig { init: self.init.clone(), fit: self.fit.clone() };
        if let Some(k) = self.model.freeze_k {
            cfg.init.k_candidates = vec![k];
            cfg.fit.freeze_k = true;
        }
        cfg
    }
}

#[derive(Debug, Parser)]
#[command(name = "hyperlatent", version, about = "Hyperbolic latent space models for networks")]
pub struct Cli {
    /// Worker threads for bootstrap and candidate fits.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample latent positions on a disk and a network from them.
    Simulate(SimulateArgs),
    /// Fit a latent space model to an edge list.
    Fit(FitArgs),
    /// Bootstrap likelihood ratio test of zero curvature.
    TestCurvature(InferenceArgs),
    /// Bootstrap percentile interval for the curvature.
    Ci(InferenceArgs),
    /// Descriptive statistics of an edge list.
    Stats(StatsArgs),
    /// Estimation errors against a true embedding, and link-prediction AUC.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Curvature; 0 samples a Euclidean disk.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, value_parser = parse_link)]
    pub link: Option<LinkFunction>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub edges_out: PathBuf,
    #[arg(long)]
    pub embedding_out: PathBuf,
    #[arg(long)]
    pub report_out: PathBuf,
}

/// Model and optimizer settings shared by the fitting commands.
#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, value_parser = parse_link)]
    pub link: Option<LinkFunction>,
    #[arg(long)]
    pub freeze_k: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub eta_z: Option<f64>,
    #[arg(long)]
    pub eta_k: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub k_candidates: Option<Vec<f64>>,
    /// Dimension of the Euclidean pre-fit; 0 disables it.
    #[arg(long)]
    pub prefit_dim: Option<usize>,
    #[arg(long)]
    pub tau: Option<f64>,
}

impl ModelArgs {
    fn run_config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::load(self.config.as_deref())?;
        set(&mut cfg.model.d, self.d);
        set(&mut cfg.model.link, self.link);
        if self.freeze_k.is_some() {
            cfg.model.freeze_k = self.freeze_k;
        }
        set(&mut cfg.fit.epsilon, self.epsilon);
        set(&mut cfg.fit.max_iters, self.max_iters);
        if self.eta_z.is_some() {
            cfg.fit.eta_z = self.eta_z;
        }
        if self.eta_k.is_some() {
            cfg.fit.eta_k = self.eta_k;
        }
        set(&mut cfg.init.k_candidates, self.k_candidates.clone());
        if let Some(p) = self.prefit_dim {
            cfg.init.prefit_dim = (p > 0).then_some(p);
        }
        if self.tau.is_some() {
            cfg.init.tau = self.tau;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long, value_parser = parse_geometry)]
    pub geometry: Option<ModelGeometry>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub embedding_out: PathBuf,
    #[arg(long)]
    pub report_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct InferenceArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of bootstrap replicates.
    #[arg(long)]
    pub bootstrap: Option<usize>,
    #[arg(long)]
    pub level: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub report_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub report_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long)]
    pub estimate: PathBuf,
    /// Network for the link-prediction AUC; skipped when absent.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub holdout_fraction: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub report_out: PathBuf,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn parse_link(s: &str) -> std::result::Result<LinkFunction, String> {
    match s {
        "logistic" => Ok(LinkFunction::Logistic),
        "exponential" => Ok(LinkFunction::Exponential),
        _ => Err(format!("unknown link `{s}` (expected logistic or exponential)")),
    }
}

fn parse_geometry(s: &str) -> std::result::Result<ModelGeometry, String> {
    match s {
        "hyperbolic" => Ok(ModelGeometry::Hyperbolic),
        "euclidean" => Ok(ModelGeometry::Euclidean),
        _ => Err(format!("unknown geometry `{s}` (expected hyperbolic or euclidean)")),
    }
}

/// Process exit code for an error: 2 configuration, 3 data, 4 divergence.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::InvalidArgument(_) => 2,
        Error::Divergence { .. } => 4,
        _ => 3,
    }
}

pub fn parse_edge_list(text: &str) -> Result<Network> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let parse_err = |message: String| Error::Parse { line, message };
        if let Some(comment) = raw.trim().strip_prefix('#') {
            let mut words = comment.split_whitespace();
            if words.next() == Some("nodes") {
                let n = words.next().and_then(|w| w.parse::<usize>().ok());
                declared = Some(n.ok_or_else(|| parse_err(format!("bad node count in `{raw}`")))?);
            }
            continue;
        }
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => continue,
            [u, v] => {
                let id = |t: &str| t.parse::<usize>().map_err(|_| parse_err(format!("`{t}` is not a node id")));
                let (u, v) = (id(u)?, id(v)?);
                if u == v {
                    return Err(parse_err(format!("self-loop at node {u}")));
                }
                edges.push((u.min(v), u.max(v), line));
            }
            _ => return Err(parse_err(format!("expected two node ids, got `{}`", content.trim()))),
        }
    }
    let needed = edges.iter().map(|&(_, v, _)| v + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) => {
            if let Some(&(_, v, line)) = edges.iter().find(|&&(_, v, _)| v >= n) {
                return Err(Error::Parse { line, message: format!("node {v} exceeds the declared {n} nodes") });
            }
            n
        }
        None => needed,
    };
    Network::from_edges(n, edges.into_iter().map(|(u, v, _)| (u, v)))
}

pub fn write_edge_list(net: &Network) -> String {
    let mut out = format!("# nodes {}\n", net.n());
    for (u, v) in net.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_embedding(emb: &LatentEmbedding) -> String {
    let cols = emb.coords().ncols();
    let mut out = String::from("node,k");
    for c in 1..=cols {
        let _ = write!(out, ",coord_{c}");
    }
    out.push('\n');
    let k = emb.curvature().map(|k| format!("{:.16e}", k.get())).unwrap_or_default();
    for i in 0..emb.n() {
        let _ = write!(out, "{i},{k}");
        for c in 0..cols {
            let _ = write!(out, ",{:.16e}", emb.coords()[(i, c)]);
        }
        out.push('\n');
    }
    out
}

pub fn parse_embedding(text: &str) -> Result<LatentEmbedding> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty embedding file".into() })?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let cols = names.len().saturating_sub(2);
    let expected: Vec<String> = (1..=cols).map(|c| format!("coord_{c}")).collect();
    if names.len() < 3 || names[0] != "node" || names[1] != "k" || names[2..] != expected {
        return Err(Error::Parse { line: 1, message: format!("bad header `{header}`") });
    }
    let mut k_field: Option<String> = None;
    let mut values = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let parse_err = |message: String| Error::Parse { line, message };
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        if fields.len() != cols + 2 {
            return Err(parse_err(format!("expected {} fields, got {}", cols + 2, fields.len())));
        }
        let row = values.len() / cols;
        if fields[0].parse::<usize>().ok() != Some(row) {
            return Err(parse_err(format!("expected node {row}, got `{}`", fields[0])));
        }
        match &k_field {
            None => k_field = Some(fields[1].to_string()),
            Some(k) if k != fields[1] => return Err(parse_err(format!("k `{}` differs from `{k}`", fields[1]))),
            _ => {}
        }
        for f in &fields[2..] {
            values.push(f.parse::<f64>().map_err(|_| parse_err(format!("`{f}` is not a number")))?);
        }
    }
    let n = values.len() / cols;
    if n == 0 {
        return Err(Error::Parse { line: 2, message: "no nodes".into() });
    }
    let coords = DMatrix::from_row_slice(n, cols, &values);
    match k_field.as_deref() {
        Some("") | None => Ok(LatentEmbedding::euclidean(coords)),
        Some(k) => {
            let k: f64 = k.parse().map_err(|_| Error::Parse { line: 2, message: format!("`{k}` is not a curvature") })?;
            LatentEmbedding::hyperbolic(Curvature::new(k)?, coords)
        }
    }
}

fn read_network(path: &Path) -> Result<Network> {
    parse_edge_list(&fs::read_to_string(path)?)
}

fn read_embedding(path: &Path) -> Result<LatentEmbedding> {
    parse_embedding(&fs::read_to_string(path)?)
}

fn write_report<T: Serialize>(path: &Path, report: &T) -> Result<()> {
    let text = toml::to_string(report).map_err(|e| Error::Config(e.to_string()))?;
    fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub n: usize,
    pub d: usize,
    /// True curvature; 0 for a Euclidean disk.
    pub k: f64,
    pub radius: f64,
    pub seed: u64,
    pub edges: usize,
    pub edge_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub geometry: ModelGeometry,
    /// Fitted curvature; absent for Euclidean fits.
    pub k: Option<f64>,
    pub log_likelihood: f64,
    pub bic: f64,
    pub aic: f64,
    pub iterations: usize,
    pub converged: bool,
    pub loss_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub errors: ErrorReport,
    pub auc: Option<f64>,
}

pub fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Fit(args) => cmd_fit(&args),
        Command::TestCurvature(args) => cmd_test_curvature(&args),
        Command::Ci(args) => cmd_ci(&args),
        Command::Stats(args) => cmd_stats(&args),
        Command::Eval(args) => cmd_eval(&args),
    }
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let mut sim = RunConfig::load(args.config.as_deref())?.sim;
    set(&mut sim.n, args.n);
    set(&mut sim.d, args.d);
    set(&mut sim.k, args.k);
    set(&mut sim.radius, args.radius);
    set(&mut sim.link, args.link);
    set(&mut sim.seed, args.seed);
    let truth = sample_uniform_disk(&sim)?;
    // the network stream is kept apart from the position stream
    let net = generate_network(&truth, sim.link, sim.seed.wrapping_add(1))?;
    let pairs = (sim.n * (sim.n - 1) / 2) as f64;
    let report = SimulationReport {
        n: sim.n,
        d: sim.d,
        k: sim.k,
        radius: sim.radius,
        seed: sim.seed,
        edges: net.edge_count(),
        edge_density: net.edge_count() as f64 / pairs,
    };
    fs::write(&args.edges_out, write_edge_list(&net))?;
    fs::write(&args.embedding_out, write_embedding(&truth))?;
    write_report(&args.report_out, &report)
}

pub fn cmd_fit(args: &FitArgs) -> Result<()> {
    let mut cfg = args.model.run_config()?;
    set(&mut cfg.model.geometry, args.geometry);
    let net = read_network(&args.edges)?;
    let result = fit_model(&net, cfg.model.d, cfg.model.geometry, &cfg.pipeline(), cfg.model.link)?;
    // score what is written so a reload reproduces the reported likelihood
    let text = write_embedding(&result.embedding);
    let written = parse_embedding(&text)?;
    let loglik = log_likelihood(&written, &net, cfg.model.link)?;
    let ic = information_criteria(loglik, net.n(), cfg.model.d, cfg.model.geometry)?;
    let report = FitReport {
        geometry: cfg.model.geometry,
        k: written.curvature().map(Curvature::get),
        log_likelihood: loglik,
        bic: ic.bic,
        aic: ic.aic,
        iterations: result.iterations,
        converged: result.converged,
        loss_history: result.loss_history,
    };
    fs::write(&args.embedding_out, text)?;
    write_report(&args.report_out, &report)
}

fn inference_config(args: &InferenceArgs) -> Result<RunConfig> {
    let mut cfg = args.model.run_config()?;
    set(&mut cfg.inference.bootstrap, args.bootstrap);
    set(&mut cfg.inference.level, args.level);
    set(&mut cfg.inference.seed, args.seed);
    Ok(cfg)
}

pub fn cmd_test_curvature(args: &InferenceArgs) -> Result<()> {
    let cfg = inference_config(args)?;
    let net = read_network(&args.edges)?;
    let report: LrtReport =
        lrt_test(&net, cfg.model.d, cfg.inference.bootstrap, &cfg.pipeline(), cfg.model.link, cfg.inference.seed)?;
    write_report(&args.report_out, &report)
}

pub fn cmd_ci(args: &InferenceArgs) -> Result<()> {
    let cfg = inference_config(args)?;
    let net = read_network(&args.edges)?;
    let report: CiReport = bootstrap_ci(
        &net,
        cfg.model.d,
        cfg.inference.bootstrap,
        cfg.inference.level,
        &cfg.pipeline(),
        cfg.model.link,
        cfg.inference.seed,
    )?;
    write_report(&args.report_out, &report)
}

pub fn cmd_stats(args: &StatsArgs) -> Result<()> {
    let stats: GraphStats = graph_stats(&read_network(&args.edges)?)?;
    write_report(&args.report_out, &stats)
}

pub fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let mut cfg = args.model.run_config()?;
    set(&mut cfg.inference.holdout_fraction, args.holdout_fraction);
    set(&mut cfg.inference.seed, args.seed);
    let truth = read_embedding(&args.truth)?;
    let estimate = read_embedding(&args.estimate)?;
    let errors = relative_errors(&truth, &estimate, cfg.model.link)?;
    let auc = match &args.edges {
        Some(path) => {
            let net = read_network(path)?;
            let geometry = if estimate.is_hyperbolic() { ModelGeometry::Hyperbolic } else { ModelGeometry::Euclidean };
            Some(link_prediction_auc(
                &net,
                estimate.dim(),
                geometry,
                &cfg.pipeline(),
                cfg.model.link,
                cfg.inference.holdout_fraction,
                cfg.inference.seed,
            )?)
        }
        None => None,
    };
    write_report(&args.report_out, &EvalReport { errors, auc })
}
