//! Command-line front end: `sweep`, `evt-check` and `oracle`.
//!
//! Configuration is layered: built-in defaults (`--preset paper`), then an optional TOML
//! file, then command-line overrides. Every command writes its outputs plus a
//! manifest that echoes the fully resolved configuration; passing the
//! manifest back through `--config` reproduces the outputs byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{draw_gain_matrix, Fading, Layout, NetworkConfig, Placement};
use crate::error::{Error, Result};
use crate::evt::{
    breiman_tail, empirical_survival, estimate_moment, exponential_moment, frechet_limit_cdf,
    gnedenko_normalizer, ks_distance, ks_distance_sorted, sample_fading, sample_normalized_sinr, sample_product_maxima,
    sample_products, tail_check, NormalizedSinr, TailModel,
};
use crate::montecarlo::{
    default_fits, run_sweep, Abscissa, Bound, Estimators, FitSpec, SweepConfig, SweepResult,
};
use crate::rates::{capacity_lower_bound, capacity_upper_bound};
use crate::rng;
use crate::schedulers::{off_fraction, schedule_oracle, OracleConfig, DEFAULT_BUDGET};

pub const THREADS_ENV: &str = "CELLCAP_THREADS";

/// Relative slack for comparing capacities computed along different
/// floating-point paths.
const SANDWICH_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Symmetric,
    Disk,
    Exclusion,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Symmetric => "symmetric",
            Scenario::Disk => "disk",
            Scenario::Exclusion => "exclusion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Paper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub n_cells: usize,
    pub cell_radius: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub p_max: f64,
    pub noise_power: f64,
    pub scenario: Scenario,
    pub circle_radius: f64,
    pub exclusion_radius: f64,
}

impl Default for NetworkSection {
    fn default() -> Self {
        NetworkSection {
            n_cells: 4,
            cell_radius: 1.0,
            beta: 1.0 / 16.0,
            epsilon: 4.0,
            p_max: 1.0,
            noise_power: 0.02,
            scenario: Scenario::Symmetric,
            circle_radius: 0.5,
            exclusion_radius: 0.1,
        }
    }
}

impl NetworkSection {
    pub fn placement(&self) -> Placement {
        match self.scenario {
            Scenario::Symmetric => Placement::SymmetricCircle { radius: self.circle_radius },
            Scenario::Disk => Placement::UniformDisk,
            Scenario::Exclusion => Placement::UniformDiskWithExclusion { r_excl: self.exclusion_radius },
        }
    }

    pub fn network(&self) -> Result<NetworkConfig> {
        let cfg = NetworkConfig {
            n_cells: self.n_cells,
            cell_radius: self.cell_radius,
            beta: self.beta,
            epsilon: self.epsilon,
            p_max: self.p_max,
            noise_power: self.noise_power,
            placement: self.placement(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorName {
    Ub,
    Lb,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub u_grid: Vec<usize>,
    pub trials: usize,
    pub estimators: Vec<EstimatorName>,
    pub oracle_levels: Vec<f64>,
    pub oracle_budget: u64,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            u_grid: crate::montecarlo::dyadic_grid(),
            trials: 2000,
            estimators: vec![EstimatorName::Ub, EstimatorName::Lb],
            oracle_levels: vec![0.0, 0.5, 1.0],
            oracle_budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvtSection {
    /// Users per maximum in the Fréchet check.
    pub users: usize,
    pub trials: usize,
    pub tail_samples: usize,
    pub omega_samples: usize,
    pub fading: Fading,
    pub gnedenko_users: Vec<usize>,
}

impl Default for EvtSection {
    fn default() -> Self {
        EvtSection {
            users: 1000,
            trials: 10_000,
            tail_samples: 10_000_000,
            omega_samples: 1_000_000,
            fading: Fading::Rayleigh,
            gnedenko_users: vec![100, 1000, 10_000],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSection {
    pub n_cells: usize,
    pub u_grid: Vec<usize>,
    pub trials: usize,
    pub levels: Vec<f64>,
    pub budget: u64,
}

impl Default for OracleSection {
    fn default() -> Self {
        OracleSection {
            n_cells: 2,
            u_grid: vec![1, 2, 4, 8],
            trials: 1000,
            levels: vec![0.0, 0.5, 1.0],
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Provenance written next to every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub master_seed: u64,
    pub duration_secs: f64,
    pub outputs: Vec<String>,
}

/// Resolved configuration. Its TOML form is also the manifest format, with
/// the `[run]` table filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub network: NetworkSection,
    pub sweep: SweepSection,
    pub evt: EvtSection,
    pub oracle: OracleSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<RunManifest>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            network: NetworkSection::default(),
            sweep: SweepSection::default(),
            evt: EvtSection::default(),
            oracle: OracleSection::default(),
            run: None,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let field = e.span().map(|s| text[s].trim().to_string()).unwrap_or_default();
            Error::config(field, e.message().trim().to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config("--config", format!("cannot read {}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn sweep_config(&self) -> Result<SweepConfig> {
        let network = self.network.network()?;
        let s = &self.sweep;
        let has = |e| s.estimators.contains(&e);
        let oracle = if has(EstimatorName::Oracle) {
            let oc = OracleConfig::new(s.oracle_levels.clone(), network.p_max)?.with_budget(s.oracle_budget);
            Some(oc)
        } else {
            None
        };
        let mut fits = default_fits();
        let grid = &s.u_grid;
        if grid.len() >= 4 {
            let top = (grid[grid.len() / 2], grid[grid.len() - 1]);
            for bound in [Bound::Upper, Bound::Lower] {
                fits.push(FitSpec::new(bound, Abscissa::LnU).window(top.0, top.1));
            }
            if self.network.scenario == Scenario::Exclusion {
                let third = grid.len() / 3;
                let low = (grid[0], grid[third - 1]);
                let high = (grid[grid.len() - third], grid[grid.len() - 1]);
                for bound in [Bound::Upper, Bound::Lower] {
                    fits.push(FitSpec::new(bound, Abscissa::LnU).window(low.0, low.1));
                    fits.push(FitSpec::new(bound, Abscissa::LnU).window(high.0, high.1));
                }
            }
        }
        let sc = SweepConfig {
            u_grid: s.u_grid.clone(),
            trials: s.trials,
            master_seed: self.seed,
            network,
            estimators: Estimators { upper: has(EstimatorName::Ub), lower: has(EstimatorName::Lb), oracle },
            fits,
        };
        sc.validate()?;
        Ok(sc)
    }
}

#[derive(Debug, Parser)]
#[command(name = "cellcap", version, about = "Multicell capacity scaling experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean capacity bounds over a grid of user counts, with scaling fits.
    Sweep(CommonArgs),
    /// Fréchet-limit, Breiman-tail and normalized-SINR distribution checks.
    EvtCheck(CommonArgs),
    /// Per-trial lower bound / exhaustive optimum / upper bound on small networks.
    Oracle(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, value_enum)]
    pub scenario: Option<Scenario>,
    /// Comma-separated user counts.
    #[arg(long, value_delimiter = ',')]
    pub u_grid: Option<Vec<usize>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

impl CommonArgs {
    fn resolve(&self, command: &str) -> Result<RunConfig> {
        // the preset is the built-in default; a config file layers on top of it
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        cfg.run = None;
        if let Some(s) = self.scenario {
            cfg.network.scenario = s;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if cfg.seed > i64::MAX as u64 {
            return Err(Error::config("seed", "must be at most 2^63 - 1"));
        }
        match command {
            "sweep" => {
                if let Some(g) = &self.u_grid {
                    cfg.sweep.u_grid = g.clone();
                }
                if let Some(t) = self.trials {
                    cfg.sweep.trials = t;
                }
            }
            "evt-check" => {
                if let Some(t) = self.trials {
                    cfg.evt.trials = t;
                }
                if let Some(g) = &self.u_grid {
                    match g.as_slice() {
                        [u] => cfg.evt.users = *u,
                        _ => return Err(Error::config("--u-grid", "evt-check takes a single user count")),
                    }
                }
            }
            _ => {
                if let Some(g) = &self.u_grid {
                    cfg.oracle.u_grid = g.clone();
                }
                if let Some(t) = self.trials {
                    cfg.oracle.trials = t;
                }
            }
        }
        Ok(cfg)
    }
}

/// Fixed 17-significant-digit formatting so reruns are byte-identical.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(ext) => format!("{}.tmp", ext.to_string_lossy()),
        None => "tmp".to_string(),
    });
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn write_manifest(out: &Path, stem: &str, command: &str, cfg: &RunConfig, started: Instant, outputs: &[PathBuf]) -> Result<PathBuf> {
    let mut echo = cfg.clone();
    echo.run = Some(RunManifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        master_seed: cfg.seed,
        duration_secs: started.elapsed().as_secs_f64(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    });
    let path = out.join(format!("{stem}.manifest.toml"));
    write_atomic(&path, &echo.to_toml()?)?;
    Ok(path)
}

/// Renders a sweep as CSV followed by `# fit,<target>,<slope>,<intercept>,<r2>` lines.
pub fn sweep_csv(result: &SweepResult, with_oracle: bool) -> String {
    let mut s = String::from("U,mean_C_ub,ci_ub,mean_C_lb,ci_lb,relative_gap");
    if with_oracle {
        s.push_str(",mean_C_oracle,ci_oracle,mean_off_fraction");
    }
    s.push('\n');
    for row in &result.rows {
        let _ = write!(
            s,
            "{},{},{},{},{},{}",
            row.users,
            fmt_opt(row.upper.map(|e| e.mean)),
            fmt_opt(row.upper.map(|e| e.ci_halfwidth)),
            fmt_opt(row.lower.map(|e| e.mean)),
            fmt_opt(row.lower.map(|e| e.ci_halfwidth)),
            fmt_opt(row.relative_gap.map(|e| e.mean)),
        );
        if with_oracle {
            let _ = write!(
                s,
                ",{},{},{}",
                fmt_opt(row.oracle.map(|e| e.mean)),
                fmt_opt(row.oracle.map(|e| e.ci_halfwidth)),
                fmt_opt(row.off_fraction),
            );
        }
        s.push('\n');
    }
    for f in &result.fits {
        let _ = writeln!(s, "# fit,{},{},{},{}", f.spec, fmt_num(f.fit.slope), fmt_num(f.fit.intercept), fmt_num(f.fit.r2));
    }
    s
}

pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let sc = cfg.sweep_config()?;
    let result = run_sweep(&sc)?;
    for row in &result.rows {
        if let (Some(ub), Some(lb)) = (row.upper, row.lower) {
            if lb.mean > ub.mean * (1.0 + SANDWICH_RTOL) {
                return Err(Error::Invariant(format!("mean C_lb > mean C_ub at U={}", row.users)));
            }
        }
    }
    fs::create_dir_all(out)?;
    let stem = format!("sweep_{}", cfg.network.scenario.name());
    let csv = out.join(format!("{stem}.csv"));
    write_atomic(&csv, &sweep_csv(&result, sc.estimators.oracle.is_some()))?;
    let manifest = write_manifest(out, &stem, "sweep", cfg, started, std::slice::from_ref(&csv))?;
    Ok(vec![csv, manifest])
}

/// One line of the EVT report.
#[derive(Debug, Clone, PartialEq)]
pub struct EvtCheck {
    pub check: String,
    pub statistic: String,
    pub value: f64,
    /// Acceptance band; `None` for informational rows.
    pub band: Option<(f64, f64)>,
}

impl EvtCheck {
    pub fn pass(&self) -> Option<bool> {
        self.band.map(|(lo, hi)| self.value >= lo && self.value <= hi)
    }
}

/// Runs every EVT check on the configured network.
///
/// The Fréchet, Breiman and Gnedenko checks use uniform-disk placement, the
/// setting in which the path loss is heavy tailed.
pub fn evt_checks(cfg: &RunConfig) -> Result<Vec<EvtCheck>> {
    let e = &cfg.evt;
    if e.users < 1 || e.trials < 1 || e.tail_samples < 1000 || e.omega_samples < 1 {
        return Err(Error::config("evt", "users, trials and sample counts must be positive (tail_samples ≥ 1000)"));
    }
    let mut network = cfg.network.network()?;
    network.placement = Placement::UniformDisk;
    let a = 2.0 / network.epsilon;
    let moment = match e.fading {
        Fading::Rayleigh => exponential_moment(a),
        Fading::Unit => 1.0,
    };
    let base = TailModel::path_loss(network.beta, network.epsilon);
    let tail = breiman_tail(&base, moment)?;
    let mut checks = Vec::new();

    let a_u = gnedenko_normalizer(&tail, e.users);
    let maxima: Vec<f64> = sample_product_maxima(&network, e.fading, e.users, e.trials, cfg.seed)
        .into_iter()
        .map(|m| m / a_u)
        .collect();
    let ks = ks_distance(&maxima, |t| if t > 0.0 { frechet_limit_cdf(t, a).unwrap_or(0.0) } else { 0.0 });
    checks.push(EvtCheck { check: "frechet_limit".into(), statistic: format!("ks_U{}", e.users), value: ks, band: Some((0.0, 0.05)) });

    let mut products = sample_products(&network, e.fading, e.tail_samples, cfg.seed);
    products.sort_unstable_by(f64::total_cmp);
    for q in [0.99, 0.999] {
        let c = tail_check(&products, q, |z| tail.survival(z));
        checks.push(EvtCheck { check: "breiman_tail".into(), statistic: format!("ratio_q{q}"), value: c.ratio(), band: Some((0.9, 1.1)) });
    }
    let n = products.len() as f64;
    for &u in &e.gnedenko_users {
        let p = 1.0 / u as f64;
        let emp = empirical_survival(&products, gnedenko_normalizer(&tail, u));
        let sigma = (p * (1.0 - p) / n).sqrt();
        checks.push(EvtCheck {
            check: "gnedenko_normalizer".into(),
            statistic: format!("survival_at_aU_U{u}"),
            value: emp,
            band: Some((p - 4.0 * sigma, p + 4.0 * sigma)),
        });
    }

    let fading_samples = sample_fading(e.omega_samples, rng::derive(cfg.seed, &[4]));
    let mc = estimate_moment(&fading_samples, a);
    checks.push(EvtCheck { check: "fading_moment".into(), statistic: "monte_carlo".into(), value: mc.value, band: Some((exponential_moment(a) - 4.0 * mc.std_error, exponential_moment(a) + 4.0 * mc.std_error)) });
    checks.push(EvtCheck { check: "fading_moment".into(), statistic: "closed_form".into(), value: exponential_moment(a), band: None });

    if network.n_cells >= 2 {
        let params = NormalizedSinr::from_config(&network);
        let mut omega = sample_normalized_sinr(&params, e.omega_samples, cfg.seed);
        omega.sort_unstable_by(f64::total_cmp);
        let derived = ks_distance_sorted(&omega, |w| params.cdf(w));
        let scaled = ks_distance_sorted(&omega, |w| params.cdf_scaled_interference(w));
        checks.push(EvtCheck { check: "normalized_sinr_cdf".into(), statistic: "sup_norm_derived".into(), value: derived, band: Some((0.0, 0.01)) });
        checks.push(EvtCheck { check: "normalized_sinr_cdf".into(), statistic: "sup_norm_scaled_interference".into(), value: scaled, band: None });
        let m = estimate_moment(&omega, a);
        checks.push(EvtCheck { check: "omega_moment".into(), statistic: "monte_carlo".into(), value: m.value, band: None });
        checks.push(EvtCheck { check: "omega_moment".into(), statistic: "half_width".into(), value: m.std_error, band: None });
    }
    Ok(checks)
}

pub fn cmd_evt_check(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let checks = evt_checks(cfg)?;
    let mut csv = String::from("check,statistic,value,lower,upper,pass\n");
    let mut report = String::new();
    for c in &checks {
        let (lo, hi) = c.band.map_or((None, None), |(l, h)| (Some(l), Some(h)));
        let verdict = match c.pass() {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "info",
        };
        let _ = writeln!(csv, "{},{},{},{},{},{}", c.check, c.statistic, fmt_num(c.value), fmt_opt(lo), fmt_opt(hi), verdict);
        let band = c.band.map(|(l, h)| format!(" in [{l:.6}, {h:.6}]")).unwrap_or_default();
        let _ = writeln!(report, "[{verdict:>4}] {:<22} {:<30} {:.6}{band}", c.check, c.statistic, c.value);
    }
    print!("{report}");
    fs::create_dir_all(out)?;
    let csv_path = out.join("evt_check.csv");
    let txt_path = out.join("evt_check.txt");
    write_atomic(&csv_path, &csv)?;
    write_atomic(&txt_path, &report)?;
    let outputs = vec![csv_path, txt_path];
    let manifest = write_manifest(out, "evt_check", "evt-check", cfg, started, &outputs)?;
    let mut all = outputs;
    all.push(manifest);
    Ok(all)
}

/// Per-trial `(C_lb, C_oracle, C_ub, off_fraction)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub users: usize,
    pub trial: usize,
    pub c_lb: f64,
    pub c_oracle: f64,
    pub c_ub: f64,
    pub off_fraction: f64,
}

impl OracleRow {
    pub fn sandwiched(&self) -> bool {
        let slack = SANDWICH_RTOL * self.c_ub.abs().max(f64::MIN_POSITIVE);
        self.c_lb <= self.c_oracle + slack && self.c_oracle <= self.c_ub + slack
    }
}

pub fn oracle_rows(cfg: &RunConfig) -> Result<Vec<OracleRow>> {
    let o = &cfg.oracle;
    let mut network = cfg.network.network()?;
    network.n_cells = o.n_cells;
    network.validate()?;
    if o.trials < 1 || o.u_grid.is_empty() || o.u_grid.contains(&0) {
        return Err(Error::config("oracle", "needs trials ≥ 1 and a non-empty grid of positive user counts"));
    }
    let oc = OracleConfig::new(o.levels.clone(), network.p_max)?.with_budget(o.budget);
    for &u in &o.u_grid {
        oc.check_budget(network.n_cells, u)?;
    }
    let layout = Layout::for_config(&network);
    let mut rows = Vec::new();
    for &users in &o.u_grid {
        let batch: Vec<Result<OracleRow>> = (0..o.trials)
            .into_par_iter()
            .map(|trial| {
                let g = draw_gain_matrix(&network, &layout, users, rng::trial_seed(cfg.seed, users, trial as u64));
                let best = schedule_oracle(&g, &network, &oc)?;
                Ok(OracleRow {
                    users,
                    trial,
                    c_lb: capacity_lower_bound(&g, &network),
                    c_oracle: best.capacity,
                    c_ub: capacity_upper_bound(&g, &network),
                    off_fraction: off_fraction(&best.allocation),
                })
            })
            .collect();
        for r in batch {
            rows.push(r?);
        }
    }
    Ok(rows)
}

pub fn cmd_oracle(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let rows = oracle_rows(cfg)?;
    let mut csv = String::from("U,trial,C_lb,C_oracle,C_ub,off_fraction\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},{},{},{}", r.users, r.trial, fmt_num(r.c_lb), fmt_num(r.c_oracle), fmt_num(r.c_ub), fmt_num(r.off_fraction));
    }
    let mut violations = 0;
    for &u in &cfg.oracle.u_grid {
        let at_u: Vec<&OracleRow> = rows.iter().filter(|r| r.users == u).collect();
        let held = at_u.iter().filter(|r| r.sandwiched()).count();
        violations += at_u.len() - held;
        let mean_off = at_u.iter().map(|r| r.off_fraction).sum::<f64>() / at_u.len() as f64;
        let _ = writeln!(csv, "# summary,{u},{},{held}/{}", fmt_num(mean_off), at_u.len());
        println!("U={u:<6} mean off fraction {mean_off:.4}  sandwich {held}/{}", at_u.len());
    }
    fs::create_dir_all(out)?;
    let csv_path = out.join("oracle.csv");
    write_atomic(&csv_path, &csv)?;
    let manifest = write_manifest(out, "oracle", "oracle", cfg, started, std::slice::from_ref(&csv_path))?;
    if violations > 0 {
        return Err(Error::Invariant(format!("sandwich violated in {violations} trials")));
    }
    Ok(vec![csv_path, manifest])
}

/// Worker count from `CELLCAP_THREADS`; `None` leaves rayon's default.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::config(THREADS_ENV, format!("must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

pub fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    let (name, args) = match &cli.command {
        Command::Sweep(a) => ("sweep", a),
        Command::EvtCheck(a) => ("evt-check", a),
        Command::Oracle(a) => ("oracle", a),
    };
    let cfg = args.resolve(name)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads_from_env()? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Error::config(THREADS_ENV, e.to_string()))?;
    pool.install(|| match name {
        "sweep" => cmd_sweep(&cfg, &args.out),
        "evt-check" => cmd_evt_check(&cfg, &args.out),
        _ => cmd_oracle(&cfg, &args.out),
    })
}

/// Process exit code for an error: 2 configuration, 3 budget refusal,
/// 4 invariant violation, 1 I/O.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig { .. } | Error::Domain(_) | Error::TooFewPoints(_) => 2,
        Error::BudgetExceeded { .. } => 3,
        Error::Invariant(_) => 4,
        Error::Io(_) => 1,
    }
}
