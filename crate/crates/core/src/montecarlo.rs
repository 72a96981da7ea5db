//! Seeded capacity sweeps over the number of users per cell, and the
//! regressions that turn them into scaling-law slopes.
//!
//! Trial `t` at user count `U` draws its gains from
//! `trial_seed(master_seed, U, t)`. Trials run on the ambient rayon pool and
//! are reduced in trial order, so results are bit-identical for any number of
//! worker threads.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{path_loss, Fading, GainMatrix, Layout, NetworkConfig, Placement};
use crate::error::{Error, Result};
use crate::rates::Bounds;
use crate::rng;
use crate::schedulers::{off_fraction, schedule_oracle, OracleConfig};

/// Which capacity estimators a sweep evaluates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimators {
    pub upper: bool,
    pub lower: bool,
    pub oracle: Option<OracleConfig>,
}

impl Default for Estimators {
    fn default() -> Self {
        Estimators { upper: true, lower: true, oracle: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bound {
    Upper,
    Lower,
}

impl Bound {
    fn tag(self) -> &'static str {
        match self {
            Bound::Upper => "ub",
            Bound::Lower => "lb",
        }
    }
}

/// Transformation applied to `U` before regressing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Abscissa {
    LnU,
    LnLnU,
}

impl Abscissa {
    pub fn apply(self, users: usize) -> Option<f64> {
        let ln = (users as f64).ln();
        match self {
            Abscissa::LnU => Some(ln),
            Abscissa::LnLnU if users >= 2 => Some(ln.ln()),
            Abscissa::LnLnU => None,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Abscissa::LnU => "lnU",
            Abscissa::LnLnU => "lnlnU",
        }
    }
}

/// A regression of one bound's mean capacity over a window of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitSpec {
    pub bound: Bound,
    pub abscissa: Abscissa,
    /// Inclusive `[U_min, U_max]`; `None` uses the whole grid.
    pub window: Option<(usize, usize)>,
}

impl FitSpec {
    pub fn new(bound: Bound, abscissa: Abscissa) -> Self {
        FitSpec { bound, abscissa, window: None }
    }

    pub fn window(mut self, lo: usize, hi: usize) -> Self {
        self.window = Some((lo, hi));
        self
    }
}

impl fmt::Display for FitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}~{}", self.bound.tag(), self.abscissa.tag())?;
        if let Some((lo, hi)) = self.window {
            write!(f, "[{lo}..{hi}]")?;
        }
        Ok(())
    }
}

/// Full-grid fits of both bounds against `ln U` and `ln ln U`.
pub fn default_fits() -> Vec<FitSpec> {
    let mut fits = Vec::new();
    for bound in [Bound::Upper, Bound::Lower] {
        for abscissa in [Abscissa::LnU, Abscissa::LnLnU] {
            fits.push(FitSpec::new(bound, abscissa));
        }
    }
    fits
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub u_grid: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub network: NetworkConfig,
    pub estimators: Estimators,
    pub fits: Vec<FitSpec>,
}

/// Dyadic grid `{8, 16, …, 16384}`.
pub fn dyadic_grid() -> Vec<usize> {
    (3..=14).map(|k| 1usize << k).collect()
}

impl SweepConfig {
    pub fn new(network: NetworkConfig) -> Self {
        SweepConfig {
            u_grid: dyadic_grid(),
            trials: 2000,
            master_seed: 1,
            network,
            estimators: Estimators::default(),
            fits: default_fits(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.network.validate()?;
        if self.u_grid.is_empty() {
            return Err(Error::config("u_grid", "must not be empty"));
        }
        if self.u_grid[0] < 1 {
            return Err(Error::config("u_grid", "user counts must be at least 1"));
        }
        if self.u_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("u_grid", "must be strictly increasing"));
        }
        if self.trials < 1 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if let Some(oc) = &self.estimators.oracle {
            oc.validate(self.network.p_max)?;
            for &u in &self.u_grid {
                oc.check_budget(self.network.n_cells, u)?;
            }
        }
        Ok(())
    }
}

/// Sample mean with a 95% normal-approximation half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    /// NaN when there is a single sample.
    pub ci_halfwidth: f64,
}

impl Estimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let ci_halfwidth = if samples.len() > 1 {
            let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
            1.96 * (var / n).sqrt()
        } else {
            f64::NAN
        };
        Estimate { mean, ci_halfwidth }
    }

    pub fn contains(&self, value: f64) -> bool {
        (value - self.mean).abs() <= self.ci_halfwidth
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub users: usize,
    pub upper: Option<Estimate>,
    pub lower: Option<Estimate>,
    /// `(mean_ub - mean_lb) / mean_ub`, with the half-width of the mean
    /// per-trial difference scaled by the same denominator.
    pub relative_gap: Option<Estimate>,
    pub oracle: Option<Estimate>,
    pub off_fraction: Option<f64>,
    /// Symmetric placement only: `Γ^ub / ((P_max·γ/σ²)·ln U)` averaged over cells.
    pub snr_ratio: Option<Estimate>,
}

impl SweepRow {
    pub fn bound(&self, bound: Bound) -> Option<Estimate> {
        match bound {
            Bound::Upper => self.upper,
            Bound::Lower => self.lower,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub spec: FitSpec,
    pub fit: LinearFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub fits: Vec<ScalingFit>,
}

impl SweepResult {
    pub fn row(&self, users: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.users == users)
    }

    /// `(U, mean)` pairs for `bound`, restricted to an inclusive window.
    pub fn series(&self, bound: Bound, window: Option<(usize, usize)>) -> Vec<(usize, f64)> {
        self.rows
            .iter()
            .filter(|r| window.is_none_or(|(lo, hi)| (lo..=hi).contains(&r.users)))
            .filter_map(|r| r.bound(bound).map(|e| (r.users, e.mean)))
            .collect()
    }

    pub fn fit(&self, spec: &FitSpec) -> Result<LinearFit> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .series(spec.bound, spec.window)
            .into_iter()
            .filter_map(|(u, y)| spec.abscissa.apply(u).map(|x| (x, y)))
            .unzip();
        fit_scaling(&xs, &ys)
    }
}

/// Ordinary least squares `y = slope·x + intercept`.
///
/// `R²` is 1 when the residuals vanish, including for constant `ys`.
pub fn fit_scaling(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::Domain(format!("{} abscissae for {} ordinates", xs.len(), ys.len())));
    }
    if xs.len() < 2 {
        return Err(Error::TooFewPoints(xs.len()));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("abscissae must be strictly increasing".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (sxx, sxy) = xs.iter().zip(ys).fold((0.0, 0.0), |(sxx, sxy), (x, y)| {
        (sxx + (x - mx) * (x - mx), sxy + (x - mx) * (y - my))
    });
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r2 = if ss_res <= f64::EPSILON * ss_tot.max(f64::MIN_POSITIVE) || ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(LinearFit { slope, intercept, r2 })
}

/// Slopes against `ln U` over `U ≤ split` and `U ≥ split`.
pub fn two_regime_report(result: &SweepResult, split: usize, bound: Bound) -> Result<(f64, f64)> {
    let (first, last) = match (result.rows.first(), result.rows.last()) {
        (Some(f), Some(l)) => (f.users, l.users),
        _ => return Err(Error::TooFewPoints(0)),
    };
    if !(first < split && split < last) {
        return Err(Error::Domain(format!("split U={split} must lie strictly inside ({first}, {last})")));
    }
    two_regime_windows(result, bound, (first, split), (split, last))
}

/// Slopes against `ln U` over two explicit inclusive windows.
pub fn two_regime_windows(
    result: &SweepResult,
    bound: Bound,
    low: (usize, usize),
    high: (usize, usize),
) -> Result<(f64, f64)> {
    let slope = |w: (usize, usize)| {
        result
            .fit(&FitSpec::new(bound, Abscissa::LnU).window(w.0, w.1))
            .map(|f| f.slope)
    };
    Ok((slope(low)?, slope(high)?))
}

#[derive(Debug, Clone, Copy)]
struct TrialOutcome {
    c_ub: f64,
    c_lb: f64,
    c_oracle: f64,
    off: f64,
    snr_ratio: f64,
}

fn run_trial(
    sc: &SweepConfig,
    layout: &Layout,
    g: &mut GainMatrix,
    users: usize,
    trial: usize,
    direct_gamma: Option<f64>,
) -> TrialOutcome {
    let cfg = &sc.network;
    let seed = rng::trial_seed(sc.master_seed, users, trial as u64);
    g.redraw(cfg, layout, users, seed, Fading::Rayleigh);
    let g = &*g;
    let mut out = TrialOutcome { c_ub: f64::NAN, c_lb: f64::NAN, c_oracle: f64::NAN, off: f64::NAN, snr_ratio: f64::NAN };
    let est = &sc.estimators;
    if est.upper || est.lower {
        let b = Bounds::evaluate(g, cfg);
        out.c_ub = b.capacity_ub();
        out.c_lb = b.capacity_lb();
        if let (Some(gamma), true) = (direct_gamma, users >= 2) {
            let scale = cfg.snr_scale() * gamma * (users as f64).ln();
            out.snr_ratio = b.snr_ub.iter().map(|s| s / scale).sum::<f64>() / b.snr_ub.len() as f64;
        }
    }
    if let Some(oc) = &est.oracle {
        let o = schedule_oracle(g, cfg, oc).expect("budget checked during validation");
        out.c_oracle = o.capacity;
        out.off = off_fraction(&o.allocation);
    }
    out
}

pub fn run_sweep(sc: &SweepConfig) -> Result<SweepResult> {
    sc.validate()?;
    let layout = Layout::for_config(&sc.network);
    let direct_gamma = match sc.network.placement {
        Placement::SymmetricCircle { radius } => Some(path_loss(radius, &sc.network)?),
        _ => None,
    };
    let est = &sc.estimators;
    let mut rows = Vec::with_capacity(sc.u_grid.len());
    for &users in &sc.u_grid {
        let outcomes: Vec<TrialOutcome> = (0..sc.trials)
            .into_par_iter()
            .map_init(GainMatrix::default, |g, t| run_trial(sc, &layout, g, users, t, direct_gamma))
            .collect();
        let column = |f: fn(&TrialOutcome) -> f64| outcomes.iter().map(f).collect::<Vec<f64>>();
        let upper = est.upper.then(|| Estimate::from_samples(&column(|o| o.c_ub)));
        let lower = est.lower.then(|| Estimate::from_samples(&column(|o| o.c_lb)));
        let relative_gap = match (upper, lower) {
            (Some(ub), Some(lb)) => {
                let diff = Estimate::from_samples(&column(|o| o.c_ub - o.c_lb));
                Some(Estimate { mean: (ub.mean - lb.mean) / ub.mean, ci_halfwidth: diff.ci_halfwidth / ub.mean })
            }
            _ => None,
        };
        let oracle = est.oracle.as_ref().map(|_| Estimate::from_samples(&column(|o| o.c_oracle)));
        let off_fraction = est
            .oracle
            .as_ref()
            .map(|_| column(|o| o.off).iter().sum::<f64>() / sc.trials as f64);
        let snr_ratio = (est.upper || est.lower)
            .then_some(())
            .and(direct_gamma)
            .filter(|_| users >= 2)
            .map(|_| Estimate::from_samples(&column(|o| o.snr_ratio)));
        rows.push(SweepRow { users, upper, lower, relative_gap, oracle, off_fraction, snr_ratio });
    }
    let mut result = SweepResult { rows, fits: Vec::new() };
    result.fits = sc
        .fits
        .iter()
        .filter_map(|spec| result.fit(spec).ok().map(|fit| ScalingFit { spec: *spec, fit }))
        .collect();
    Ok(result)
}
