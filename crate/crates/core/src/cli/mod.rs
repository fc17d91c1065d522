//! Command-line front end: flag and config resolution, experiment dispatch,
//! CSV/JSON/SVG report emission.
//!
//! Exit codes: 0 on success, 1 when an experiment check fails, 2 on usage or
//! configuration errors.

pub mod config;
mod report;
mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use report::{parse_report_json, ReportJson, RunManifest, REPORT_SCHEMA};
pub use svg::{emit_svg_loglog, loglog_line, render_loglog};

use crate::error::{Error, Result};
use crate::experiments::{
    self, Check, ExperimentConfig, ExperimentReport, GridSpec, J1Rule, RatioReport,
};
use crate::variation::{qvariation, RadiusSet};
use crate::witnesses::{self, LacunaryParams};
use config::{parse_list, parse_values, ConfigFile, CACHE_ENV, DEFAULT_J0};

#[derive(Debug, Parser)]
#[command(name = "varlat", version, about = "Lower-bound certificates for variation, maximal and Hilbert operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quadrature of ∫|h'(t)| t dt for the heat profile (exactly 1/2).
    ReductionConstant(Opts),
    /// Tabulate D_j for the lacunary witness and certify its minimum.
    KeyEstimate(Opts),
    /// L^p(L^∞) ratios of the q-variation for growing radius sets.
    LinfBlowup(Opts),
    /// L^p(L^r) ratios of the q-variation as r grows.
    LrGrowth(Opts),
    /// L^p(L^r) ratios of the Hilbert transform as r grows.
    HilbertGrowth(Opts),
    /// Check the L^r / ℓ^r transfer identities on random simple functions.
    NormTransfer(Opts),
    /// Maximal-function ratios next to the variation ratios on the same grids.
    MaximalContrast(Opts),
    /// q-variation of the numbers in a file, with its witness subsequence.
    Variation(Opts),
}

impl Command {
    fn split(self) -> (&'static str, Opts) {
        match self {
            Command::ReductionConstant(o) => ("reduction-constant", o),
            Command::KeyEstimate(o) => ("key-estimate", o),
            Command::LinfBlowup(o) => ("linf-blowup", o),
            Command::LrGrowth(o) => ("lr-growth", o),
            Command::HilbertGrowth(o) => ("hilbert-growth", o),
            Command::NormTransfer(o) => ("norm-transfer", o),
            Command::MaximalContrast(o) => ("maximal-contrast", o),
            Command::Variation(o) => ("variation", o),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
struct Opts {
    /// Outer exponent p > 1.
    #[arg(long)]
    p: Option<f64>,
    /// Variation exponent q > 2 (any q >= 1 for `variation`).
    #[arg(long)]
    q: Option<f64>,
    /// Comma-separated inner exponents r.
    #[arg(long = "r-list")]
    r_list: Option<String>,
    /// First scale of the radius sets.
    #[arg(long)]
    j0: Option<i32>,
    /// Comma-separated last scales.
    #[arg(long = "j1-list")]
    j1_list: Option<String>,
    /// Lacunary base; searched (and cached) when absent.
    #[arg(long)]
    a: Option<f64>,
    /// Truncation depth of the witness; shallowest admissible when absent.
    #[arg(long, allow_hyphen_values = true)]
    kmin: Option<i32>,
    /// Equispaced points on the inner window.
    #[arg(long = "grid-points")]
    grid_points: Option<usize>,
    /// Seed for randomized experiments.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for CSV, JSON and SVG reports.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Quadrature nodes.
    #[arg(long)]
    nodes: Option<usize>,
    /// `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// File of numbers for `variation`.
    #[arg(long)]
    values: Option<PathBuf>,
    /// Write zero timings so repeated runs are byte-identical.
    #[arg(long = "no-timing")]
    no_timing: bool,
    /// Random trials for `norm-transfer`.
    #[arg(long)]
    trials: Option<usize>,
    /// Inner blocks E_k for `norm-transfer`.
    #[arg(long)]
    m: Option<usize>,
    /// Outer blocks F_j for `norm-transfer`.
    #[arg(long)]
    n: Option<usize>,
    /// Last scale of the key-estimate table.
    #[arg(long = "j-max")]
    j_max: Option<i32>,
}

/// Flags, then the config file, then built-in defaults.
#[derive(Debug, Clone)]
struct Settings {
    p: f64,
    q: Option<f64>,
    r_list: Option<Vec<f64>>,
    j0: Option<i32>,
    j1_list: Option<Vec<i32>>,
    a: Option<f64>,
    kmin: Option<i32>,
    grid_points: Option<usize>,
    seed: u64,
    workers: Option<usize>,
    nodes: usize,
    trials: usize,
    m: usize,
    n: usize,
    j_max: i32,
}

impl Settings {
    fn resolve(o: &Opts, f: &ConfigFile) -> Result<Self> {
        let list_f64 = |flag: &Option<String>, key| -> Result<Option<Vec<f64>>> {
            match flag {
                Some(s) => parse_list(s).map(Some),
                None => f.get_list(key),
            }
        };
        let j1_list = match &o.j1_list {
            Some(s) => Some(parse_list(s)?),
            None => f.get_list("j1-list")?,
        };
        Ok(Self {
            p: o.p.or(f.get("p")?).unwrap_or(2.0),
            q: o.q.or(f.get("q")?),
            r_list: list_f64(&o.r_list, "r-list")?,
            j0: o.j0.or(f.get("j0")?),
            j1_list,
            a: o.a.or(f.get("a")?),
            kmin: o.kmin.or(f.get("kmin")?),
            grid_points: o.grid_points.or(f.get("grid-points")?),
            seed: o.seed.or(f.get("seed")?).unwrap_or(0),
            workers: o.workers.or(f.get("workers")?),
            nodes: o.nodes.or(f.get("nodes")?).unwrap_or(2048),
            trials: o.trials.or(f.get("trials")?).unwrap_or(100),
            m: o.m.or(f.get("m")?).unwrap_or(3),
            n: o.n.or(f.get("n")?).unwrap_or(4),
            j_max: o.j_max.or(f.get("j-max")?).unwrap_or(witnesses::DEFAULT_WINDOW.1),
        })
    }

    fn params(&self) -> Result<LacunaryParams> {
        match self.a {
            Some(a) => config::params_for_base(a, self.j0.unwrap_or(DEFAULT_J0)),
            None => {
                let cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
                let p = config::searched_params(cache.as_deref())?;
                match self.j0 {
                    Some(j0) if j0 != p.j0 => config::params_for_base(p.a, j0),
                    _ => Ok(p),
                }
            }
        }
    }

    /// Experiment config whose truncation covers scales up to `max_scale`.
    fn experiment(&self, max_scale: i32, default_r: &[f64]) -> Result<ExperimentConfig> {
        let mut lacunary = self.params()?;
        lacunary.k_min = match self.kmin {
            Some(k) => k,
            None => lacunary.k_min.min(witnesses::admissible_k_min(lacunary.a, max_scale)?),
        };
        let mut grid = GridSpec::default();
        if let Some(n) = self.grid_points {
            grid.uniform_points = n;
        }
        let cfg = ExperimentConfig {
            p: self.p,
            q: self.q.unwrap_or(3.0),
            lacunary,
            grid,
            r_list: self.r_list.clone().unwrap_or_else(|| default_r.to_vec()),
            j1_rule: match self.j1_list.as_deref() {
                Some([j1]) => J1Rule::Explicit { j1: *j1 },
                _ => J1Rule::FloorRTimesJ0,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn j0(&self) -> Result<i32> {
        Ok(match (self.j0, self.a) {
            (Some(j0), _) => j0,
            (None, Some(_)) => DEFAULT_J0,
            (None, None) => self.params()?.j0,
        })
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

struct Run {
    report: ExperimentReport,
    config: Option<ExperimentConfig>,
    extra: Vec<ExperimentReport>,
    summary: Option<String>,
}

impl Run {
    fn new(report: ExperimentReport, config: Option<ExperimentConfig>) -> Self {
        Self { report, config, extra: Vec::new(), summary: None }
    }
}

fn execute(cli: Cli) -> Result<bool> {
    let start = Instant::now();
    let (name, opts) = cli.command.split();
    let file = match &opts.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let s = Settings::resolve(&opts, &file)?;
    if let Some(w) = s.workers {
        if w == 0 {
            return Err(Error::Config("--workers must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }

    let mut run = match name {
        "reduction-constant" => reduction_constant(&s)?,
        "key-estimate" => key_estimate(&s)?,
        "linf-blowup" => linf_blowup(&s)?,
        "lr-growth" => lr_growth(&s)?,
        "hilbert-growth" => hilbert_growth(&s)?,
        "norm-transfer" => norm_transfer(&s)?,
        "maximal-contrast" => maximal_contrast(&s)?,
        "variation" => return variation(&s, opts.values.as_deref()),
        _ => unreachable!("clap rejects unknown subcommands"),
    };

    if opts.no_timing {
        run.report.clear_timing();
        run.extra.iter_mut().for_each(ExperimentReport::clear_timing);
    }
    let wall = if opts.no_timing { 0.0 } else { start.elapsed().as_secs_f64() };
    if let Some(dir) = &opts.out {
        std::fs::create_dir_all(dir)?;
        let manifest = RunManifest {
            subcommand: name.to_string(),
            config: run.config.clone(),
            seed: s.seed,
            output_dir: dir.display().to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_seconds: wall,
        };
        write_outputs(dir, name, &run, manifest)?;
    }

    let rep = &run.report;
    println!("{}", run.summary.clone().unwrap_or_else(|| summary_line(rep)));
    for c in &rep.checks {
        eprintln!("  {} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(rep.pass)
}

fn summary_line(rep: &ExperimentReport) -> String {
    let mut line = format!("{}: {}", rep.experiment, if rep.pass { "PASS" } else { "FAIL" });
    if let Some(c) = rep.certified_c {
        line.push_str(&format!(" C={c:.6}"));
    }
    if let Some(fit) = rep.fit {
        line.push_str(&format!(" slope={:.3} r2={:.3}", fit.slope, fit.r_squared));
    }
    let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if !failed.is_empty() {
        line.push_str(&format!(" failed=[{}]", failed.join(",")));
    }
    line
}

fn write_outputs(dir: &Path, name: &str, run: &Run, manifest: RunManifest) -> Result<()> {
    let rep = &run.report;
    rep.write_csv(std::fs::File::create(dir.join(format!("{name}.csv")))?)?;
    for extra in &run.extra {
        extra.write_csv(std::fs::File::create(dir.join(format!("{name}-{}.csv", extra.experiment)))?)?;
    }
    let certified_c = rep.certified_c.or(run.config.as_ref().map(|c| c.lacunary.key_constant));
    let json = ReportJson {
        config: run.config.clone(),
        certified_c,
        fit: rep.fit,
        pass: rep.pass,
        checks: rep.checks.clone(),
        rows: rep.rows.clone(),
        manifest,
    };
    std::fs::write(dir.join(format!("{name}.json")), serde_json::to_string_pretty(&json)? + "\n")?;
    let plottable = rep.rows.len() >= 2
        && rep.rows.iter().all(|r| r.param > 0.0 && r.ratio > 0.0)
        && rep.rows.windows(2).any(|w| w[0].param != w[1].param);
    if plottable {
        emit_svg_loglog(rep, &dir.join(format!("{name}.svg")))?;
    }
    Ok(())
}

/// Shortest decimal within 1e-12 of `v`.
fn short(v: f64) -> String {
    let s = format!("{v:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn reduction_constant(s: &Settings) -> Result<Run> {
    if s.nodes < 64 {
        return Err(Error::Config(format!("--nodes must be at least 64, got {}", s.nodes)));
    }
    let t = Instant::now();
    let v = experiments::exp_reduction_constant(s.nodes)?;
    let mut rep = ExperimentReport::new(
        "reduction-constant",
        vec![RatioReport::new(s.nodes as f64, v, 0.5, t.elapsed().as_secs_f64())],
    );
    rep.check(Check::new("value", (v - 0.5).abs() <= 1e-6, format!("{v:e} against 0.5 ± 1e-6")));
    let mut run = Run::new(rep, None);
    run.summary = Some(short(v));
    Ok(run)
}

fn key_estimate(s: &Settings) -> Result<Run> {
    let j0 = s.j0()?;
    let (a, k_default) = match s.a {
        Some(a) => (a, None),
        None => {
            let p = s.params()?;
            (p.a, Some(p.k_min))
        }
    };
    let k_min = match s.kmin {
        Some(k) => k,
        None => {
            let k = witnesses::admissible_k_min(a, s.j_max + 1)?;
            k_default.map_or(k, |d| d.min(k))
        }
    };
    let out = experiments::exp_key_estimate(a, k_min, j0, s.j_max)?;
    let mut rep = out.to_report();
    if s.j_max >= experiments::STABILIZATION_FROM as i32 + 2 {
        rep.check(Check::new(
            "period_two",
            out.period_two_drift < 1e-6,
            format!("max |D_j+2 - D_j| for j >= 20: {:e}", out.period_two_drift),
        ));
    }
    // echoes the parameters; only the lacunary block is used
    let config = ExperimentConfig {
        p: s.p,
        q: s.q.unwrap_or(3.0),
        lacunary: LacunaryParams { a, k_min, j0, key_constant: out.certified_c },
        grid: GridSpec::default(),
        r_list: vec![],
        j1_rule: J1Rule::FloorRTimesJ0,
    };
    Ok(Run::new(rep, Some(config)))
}

fn j1_list(s: &Settings) -> Result<Vec<i32>> {
    let j0 = s.j0()?;
    Ok(s.j1_list.clone().unwrap_or_else(|| [4, 8, 16, 32, 64].iter().map(|d| j0 + d).collect()))
}

fn linf_blowup(s: &Settings) -> Result<Run> {
    let js = j1_list(s)?;
    let cfg = s.experiment(js.iter().copied().max().unwrap_or(0), &[])?;
    let out = experiments::exp_linf_blowup(&cfg, &js)?;
    Ok(Run::new(out.report, Some(cfg)))
}

fn maximal_contrast(s: &Settings) -> Result<Run> {
    let js = j1_list(s)?;
    let cfg = s.experiment(js.iter().copied().max().unwrap_or(0), &[])?;
    let out = experiments::exp_maximal_contrast(&cfg, &js)?;
    let mut run = Run::new(out.maximal, Some(cfg));
    let mut variation = out.variation;
    variation.experiment = "variation".into();
    run.extra.push(variation);
    Ok(run)
}

fn lr_growth(s: &Settings) -> Result<Run> {
    const DEFAULT_R: [f64; 4] = [4.0, 8.0, 16.0, 32.0];
    let j0 = s.j0()?;
    let r_list = s.r_list.clone().unwrap_or_else(|| DEFAULT_R.to_vec());
    let max_scale = match s.j1_list.as_deref() {
        Some([j1]) => *j1,
        _ => r_list.iter().map(|&r| J1Rule::FloorRTimesJ0.j1_for(r, j0)).max().unwrap_or(j0),
    };
    let cfg = s.experiment(max_scale, &DEFAULT_R)?;
    let out = experiments::exp_lr_growth(&cfg)?;
    Ok(Run::new(out.report, Some(cfg)))
}

fn hilbert_growth(s: &Settings) -> Result<Run> {
    let cfg = s.experiment(0, &[8.0, 16.0, 32.0, 64.0])?;
    let out = experiments::exp_hilbert_growth(&cfg)?;
    Ok(Run::new(out.report, Some(cfg)))
}

fn norm_transfer(s: &Settings) -> Result<Run> {
    let q = s.q.unwrap_or(3.0);
    let r_list = s.r_list.clone().unwrap_or_else(|| vec![2.0, 4.0, 8.0]);
    let radii = RadiusSet::new((0..8).map(|i| 2f64.powi(-i)).collect())?;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for trial in 0..s.trials as u64 {
        let seed = s.seed + trial;
        for &r in &r_list {
            let t = Instant::now();
            let out = experiments::exp_norm_transfer(seed, s.m, s.n, s.p, q, r, &radii)?;
            worst = worst.max(out.max_rel_discrepancy());
            rows.push(RatioReport::new(seed as f64, out.var_ellr, out.var_lr, t.elapsed().as_secs_f64()));
        }
    }
    let mut rep = ExperimentReport::new("norm-transfer", rows);
    rep.check(Check::new(
        "identities",
        worst <= 1e-10,
        format!("max relative discrepancy {worst:e} over {} trials", s.trials),
    ));
    Ok(Run::new(rep, None))
}

fn variation(s: &Settings, values: Option<&Path>) -> Result<bool> {
    let path = values.ok_or_else(|| Error::Config("variation needs --values FILE".into()))?;
    let vals = parse_values(&std::fs::read_to_string(path)?)?;
    let cert = qvariation(&vals, s.q.unwrap_or(2.0))?;
    println!("{}", short(cert.value));
    let idx: Vec<String> = cert.subsequence.iter().map(|i| i.to_string()).collect();
    println!("{}", idx.join(" "));
    Ok(true)
}
