//! Command-line front end: run configuration, the five subcommands and the
//! exit-code mapping.
//!
//! | code | meaning                                  |
//! |------|------------------------------------------|
//! | 0    | success; for `verify`, every check agrees with its expectation |
//! | 1    | verification failure                     |
//! | 2    | invalid configuration or unwritable output |
//! | 3    | numerical failure                        |
//!
//! Matrix rows/columns and eigenvalue indices in CSV output start at 1.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::biortho::build_biorthogonal;
use crate::chain::{build_metrics, grow_chain_from, ChainTree, MAX_DEPTH};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::eig::eigvals;
use crate::linalg::matrix::{ComplexMatrix, C64};
use crate::models::{build, seed_system, ModelSpec, Normalization};
use crate::verify::{count_real, full_suite, theorem1_suite, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputSpec {
    /// Standard output when absent.
    pub path: Option<PathBuf>,
    /// CSV for spectrum, heatmap and sweep; JSON for chain and verify.
    pub format: Option<Format>,
}

/// Half-open seed range `start..end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    pub start: u64,
    pub end: u64,
}

impl std::str::FromStr for SeedRange {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("expected a..b or a..=b, got {s:?}");
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let start: u64 = a.trim().parse().map_err(|_| bad())?;
        let end: u64 = match b.strip_prefix('=') {
            Some(b) => b.trim().parse::<u64>().map_err(|_| bad())? + 1,
            None => b.trim().parse().map_err(|_| bad())?,
        };
        Ok(Self { start, end })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: ModelSpec,
    #[serde(default = "default_depth")]
    pub depth: usize,
    /// Missing fields take their defaults.
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub normalization: Normalization,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub seeds: Option<SeedRange>,
}

fn default_depth() -> usize {
    1
}

impl RunConfig {
    pub fn new(model: ModelSpec) -> Self {
        Self {
            model,
            depth: default_depth(),
            tolerances: Tolerances::default(),
            normalization: Normalization::default(),
            output: OutputSpec::default(),
            seeds: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.depth > MAX_DEPTH {
            return Err(Error::InvalidSpec(format!("depth {} exceeds {MAX_DEPTH}", self.depth)));
        }
        if let Some(r) = self.seeds {
            if r.start >= r.end {
                return Err(Error::InvalidSpec(format!("empty seed range {}..{}", r.start, r.end)));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidSpec(format!("config: {e}")))
    }
}

/// Maps an error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidSpec(_)
        | Error::UnknownNodeLabel(_)
        | Error::DepthTooShallow { .. }
        | Error::UnsupportedSymmetry { .. }
        | Error::NoClosedForm(_)
        | Error::Serialization(_)
        | Error::Io(_) => 2,
        _ => 3,
    }
}

fn write_output(out: &OutputSpec, content: &str) -> Result<()> {
    match &out.path {
        Some(p) => std::fs::write(p, content).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV `n,re,im` of the canonically sorted spectrum.
pub fn spectrum_csv(e: &[C64]) -> String {
    let mut s = String::from("n,re,im\n");
    for (n, z) in e.iter().enumerate() {
        let _ = writeln!(s, "{},{},{}", n + 1, num(z.re), num(z.im));
    }
    s
}

/// CSV `row,col,re,im` over every entry.
pub fn heatmap_csv(x: &ComplexMatrix) -> String {
    let n = x.dim();
    let mut s = String::from("row,col,re,im\n");
    for i in 0..n {
        for j in 0..n {
            let z = x[(i, j)];
            let _ = writeln!(s, "{},{},{},{}", i + 1, j + 1, num(z.re), num(z.im));
        }
    }
    s
}

pub fn render_spectrum(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let e = eigvals(&build(&cfg.model)?)?;
    Ok(match cfg.output.format.unwrap_or(Format::Csv) {
        Format::Csv => spectrum_csv(&e),
        Format::Json => {
            let pairs: Vec<[f64; 2]> = e.iter().map(|z| [z.re, z.im]).collect();
            serde_json::to_string_pretty(&pairs)? + "\n"
        }
    })
}

/// Grows the chain of the configured model from its seed system.
pub fn grow(cfg: &RunConfig) -> Result<ChainTree> {
    cfg.validate()?;
    let h = build(&cfg.model)?;
    let seed = seed_system(&cfg.model, cfg.normalization, &cfg.tolerances)?;
    grow_chain_from(&h, seed, cfg.depth, &cfg.tolerances)
}

pub fn render_chain(cfg: &RunConfig) -> Result<String> {
    if cfg.output.format == Some(Format::Csv) {
        return Err(Error::InvalidSpec("chain output is JSON only".into()));
    }
    Ok(grow(cfg)?.to_json()? + "\n")
}

pub fn verify_config(cfg: &RunConfig) -> Result<VerificationReport> {
    Ok(full_suite(&grow(cfg)?, &cfg.tolerances))
}

pub fn render_heatmap(cfg: &RunConfig, label: &str) -> Result<String> {
    let tree = grow(cfg)?;
    let x = &tree.node(label)?.hamiltonian;
    Ok(match cfg.output.format.unwrap_or(Format::Csv) {
        Format::Csv => heatmap_csv(x),
        Format::Json => serde_json::to_string_pretty(x)? + "\n",
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub seed: u64,
    pub n_real: usize,
    pub n_complex: usize,
    /// `None` when no well-conditioned metric exists for this realization.
    pub pseudo_hermitian: Option<bool>,
}

/// One row per seed of the configured random model, in seed order.
pub fn sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let ModelSpec::HnRandom { .. } = cfg.model else {
        return Err(Error::InvalidSpec(format!("sweep needs hn_random, got {}", cfg.model.family())));
    };
    let range = cfg.seeds.ok_or_else(|| Error::InvalidSpec("sweep needs a seed range".into()))?;
    let tols = cfg.tolerances;
    (range.start..range.end)
        .into_par_iter()
        .map(|s| {
            let mut spec = cfg.model.clone();
            if let ModelSpec::HnRandom { seed, .. } = &mut spec {
                *seed = s;
            }
            let h = build(&spec)?;
            let e = eigvals(&h)?;
            let n_real = count_real(&e, tols.tol_real);
            let pseudo_hermitian = build_biorthogonal(&h, &tols)
                .and_then(|b| {
                    let m = build_metrics(&b, &tols)?;
                    theorem1_suite(&h, &b, &m, &tols)
                })
                .ok()
                .map(|r| r.pseudo_hermitian);
            Ok(SweepRow { seed: s, n_real, n_complex: e.len() - n_real, pseudo_hermitian })
        })
        .collect()
}

pub fn render_sweep(cfg: &RunConfig) -> Result<String> {
    let rows = sweep(cfg)?;
    Ok(match cfg.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("seed,n_real,n_complex,pseudo_hermitian\n");
            for r in &rows {
                let ph = r.pseudo_hermitian.map_or("na".to_string(), |b| b.to_string());
                let _ = writeln!(s, "{},{},{},{}", r.seed, r.n_real, r.n_complex, ph);
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
    })
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<()> {
    write_output(&cfg.output, &render_spectrum(cfg)?)
}

pub fn cmd_chain(cfg: &RunConfig) -> Result<()> {
    write_output(&cfg.output, &render_chain(cfg)?)
}

/// Writes the report and returns whether every check agreed with its expectation.
pub fn cmd_verify(cfg: &RunConfig) -> Result<bool> {
    if cfg.output.format == Some(Format::Csv) {
        return Err(Error::InvalidSpec("verification report is JSON only".into()));
    }
    let report = verify_config(cfg)?;
    write_output(&cfg.output, &(report.to_json()? + "\n"))?;
    Ok(report.all_ok())
}

pub fn cmd_heatmap(cfg: &RunConfig, label: &str) -> Result<()> {
    write_output(&cfg.output, &render_heatmap(cfg, label)?)
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<()> {
    write_output(&cfg.output, &render_sweep(cfg)?)
}

#[derive(Debug, Parser)]
#[command(name = "isochain", version, about = "Isospectral metric chains of non-Hermitian Hamiltonians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues as "n,re,im".
    Spectrum,
    /// The grown chain tree as JSON.
    Chain,
    /// The verification report as JSON.
    Verify {
        /// Verify a saved chain instead of growing one.
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// One node matrix as "row,col,re,im".
    Heatmap {
        #[arg(long)]
        node: String,
    },
    /// Reality counts per seed of a random-potential chain.
    Sweep,
}

#[derive(Debug, Default, clap::Args)]
pub struct Overrides {
    /// JSON config file; the flags below override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Model as JSON, e.g. '{"family":"hn_open","parameters":{"L":11,"g":0.1}}'.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Model parameter override KEY=VALUE (value parsed as JSON); repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Tolerance override NAME=VALUE; repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    #[arg(long, global = true, value_parser = ["unit_phi", "closed_form"])]
    pub normalization: Option<String>,
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Seed range a..b (exclusive) or a..=b.
    #[arg(long, global = true)]
    pub seeds: Option<SeedRange>,
}

fn split_assignment(s: &str) -> Result<(&str, Value)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidSpec(format!("expected KEY=VALUE, got {s:?}")))?;
    let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
    Ok((k.trim(), value))
}

fn object<'a>(v: &'a mut Value, key: &str) -> &'a mut serde_json::Map<String, Value> {
    let map = v.as_object_mut().expect("config is an object");
    let entry = map.entry(key).or_insert_with(|| Value::Object(Default::default()));
    if !entry.is_object() {
        *entry = Value::Object(Default::default());
    }
    entry.as_object_mut().expect("just made an object")
}

impl Overrides {
    /// Reads the config file (if any) and applies the flag overrides.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut v = match &self.config {
            Some(p) => {
                let text = read(p)?;
                serde_json::from_str::<Value>(&text).map_err(|e| Error::InvalidSpec(format!("{}: {e}", p.display())))?
            }
            None => Value::Object(Default::default()),
        };
        if !v.is_object() {
            return Err(Error::InvalidSpec("config must be a JSON object".into()));
        }
        let obj = v.as_object_mut().expect("checked");
        if let Some(m) = &self.model {
            let model: Value = serde_json::from_str(m).map_err(|e| Error::InvalidSpec(format!("--model: {e}")))?;
            obj.insert("model".into(), model);
        }
        if let Some(d) = self.depth {
            obj.insert("depth".into(), d.into());
        }
        if let Some(n) = &self.normalization {
            obj.insert("normalization".into(), n.clone().into());
        }
        if let Some(s) = self.seeds {
            obj.insert("seeds".into(), serde_json::to_value(s)?);
        }
        for a in &self.set {
            let (k, val) = split_assignment(a)?;
            let model = v.get_mut("model").ok_or_else(|| Error::InvalidSpec("--set needs a model".into()))?;
            object(model, "parameters").insert(k.to_string(), val);
        }
        for a in &self.tol {
            let (k, val) = split_assignment(a)?;
            object(&mut v, "tolerances").insert(k.to_string(), val);
        }
        if let Some(p) = &self.output {
            object(&mut v, "output").insert("path".into(), p.to_string_lossy().into_owned().into());
        }
        if let Some(f) = self.format {
            object(&mut v, "output").insert("format".into(), serde_json::to_value(f)?);
        }
        let cfg: RunConfig =
            serde_json::from_value(v).map_err(|e| Error::InvalidSpec(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read(p: &Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("isochain: verification failed");
            1
        }
        Err(e) => {
            eprintln!("isochain: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool> {
    if let Command::Verify { tree: Some(path), .. } = &cli.command {
        let tree = ChainTree::from_json(&read(path)?)?;
        let cfg_tols = match cli.overrides.config.is_some() || cli.overrides.model.is_some() {
            true => cli.overrides.resolve()?.tolerances,
            false => tolerance_overrides(&cli.overrides.tol)?,
        };
        let report = full_suite(&tree, &cfg_tols);
        let out = OutputSpec { path: cli.overrides.output.clone(), format: Some(Format::Json) };
        write_output(&out, &(report.to_json()? + "\n"))?;
        return Ok(report.all_ok());
    }
    let cfg = cli.overrides.resolve()?;
    match &cli.command {
        Command::Spectrum => cmd_spectrum(&cfg).map(|_| true),
        Command::Chain => cmd_chain(&cfg).map(|_| true),
        Command::Verify { .. } => cmd_verify(&cfg),
        Command::Heatmap { node } => cmd_heatmap(&cfg, node).map(|_| true),
        Command::Sweep => cmd_sweep(&cfg).map(|_| true),
    }
}

fn tolerance_overrides(assignments: &[String]) -> Result<Tolerances> {
    let mut map = serde_json::Map::new();
    for a in assignments {
        let (k, v) = split_assignment(a)?;
        map.insert(k.to_string(), v);
    }
    serde_json::from_value(Value::Object(map)).map_err(|e| Error::InvalidSpec(format!("tolerances: {e}")))
}
