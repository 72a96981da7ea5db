//! Network geometry, user placement, path loss and Rayleigh fading.
//!
//! Everything downstream consumes a [`GainMatrix`]: the power gains
//! `G[u][n][i] = gamma[u][n][i] * h_power[u][n][i]` from user `u` of cell `n`
//! to the AP of cell `i`, for one Monte Carlo trial.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Where users of a cell are dropped relative to their serving AP.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Placement {
    /// All users on a circle of the given radius (equal average SNR).
    SymmetricCircle { radius: f64 },
    /// Uniform over the disk of radius R, distance density `2d/R²`.
    UniformDisk,
    /// Uniform over the annulus `[r_excl, R]`.
    UniformDiskWithExclusion { r_excl: f64 },
}

impl Placement {
    /// Maps `u ∈ (0, 1]` to a distance through the inverse distance CDF.
    ///
    /// `SymmetricCircle` ignores `u`.
    pub fn distance_from_uniform(&self, cell_radius: f64, u: f64) -> f64 {
        match *self {
            Placement::SymmetricCircle { radius } => radius,
            Placement::UniformDisk => cell_radius * u.sqrt(),
            Placement::UniformDiskWithExclusion { r_excl } => {
                let inner = r_excl * r_excl;
                (inner + u * (cell_radius * cell_radius - inner)).sqrt()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub n_cells: usize,
    pub cell_radius: f64,
    /// Path-loss scale β.
    pub beta: f64,
    /// Path-loss exponent ε.
    pub epsilon: f64,
    pub p_max: f64,
    /// Receiver noise power σ².
    pub noise_power: f64,
    pub placement: Placement,
}

impl NetworkConfig {
    /// N=4, R=1, β=1/16, ε=4, P_max=1, σ²=0.02.
    pub fn standard(placement: Placement) -> Self {
        NetworkConfig {
            n_cells: 4,
            cell_radius: 1.0,
            beta: 1.0 / 16.0,
            epsilon: 4.0,
            p_max: 1.0,
            noise_power: 0.02,
            placement,
        }
    }

    pub fn with_cells(mut self, n_cells: usize) -> Self {
        self.n_cells = n_cells;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |field: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(field, format!("must be positive and finite, got {v}")))
            }
        };
        if self.n_cells < 1 {
            return Err(Error::config("n_cells", "must be at least 1"));
        }
        positive("cell_radius", self.cell_radius)?;
        positive("beta", self.beta)?;
        positive("epsilon", self.epsilon)?;
        positive("p_max", self.p_max)?;
        positive("noise_power", self.noise_power)?;
        match self.placement {
            Placement::SymmetricCircle { radius } => {
                if !(radius > 0.0 && radius <= self.cell_radius) {
                    return Err(Error::config(
                        "circle_radius",
                        format!("must lie in (0, R={}], got {radius}", self.cell_radius),
                    ));
                }
            }
            Placement::UniformDisk => {}
            Placement::UniformDiskWithExclusion { r_excl } => {
                if !(r_excl >= 0.0 && r_excl < self.cell_radius) {
                    return Err(Error::config(
                        "exclusion_radius",
                        format!("must lie in [0, R={}), got {r_excl}", self.cell_radius),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Path loss at the cell edge, `β·R^{-ε}`. Upper bound on every cross-link path loss.
    pub fn edge_gain(&self) -> f64 {
        self.beta * self.cell_radius.powf(-self.epsilon)
    }

    /// Full-power SNR scale `P_max/σ²`.
    pub fn snr_scale(&self) -> f64 {
        self.p_max / self.noise_power
    }

    /// Path loss from a squared distance. Integer `ε/2` (the common case)
    /// avoids `powf`.
    #[inline]
    pub(crate) fn gain_at_sq(&self, d2: f64) -> f64 {
        let half = 0.5 * self.epsilon;
        if half.fract() == 0.0 && half <= 32.0 {
            self.beta / d2.powi(half as i32)
        } else {
            self.beta * d2.powf(-half)
        }
    }
}

/// `γ = β·d^{-ε}`.
pub fn path_loss(d: f64, cfg: &NetworkConfig) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!("path loss undefined at distance {d}")));
    }
    Ok(cfg.gain_at_sq(d * d))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// AP positions, one per cell, pairwise at least `2R` apart.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    ap_positions: Vec<Point>,
}

impl Layout {
    pub fn new(ap_positions: Vec<Point>, cell_radius: f64) -> Result<Self> {
        if ap_positions.is_empty() {
            return Err(Error::config("layout", "needs at least one AP"));
        }
        for (a, p) in ap_positions.iter().enumerate() {
            for q in &ap_positions[a + 1..] {
                // relative slack for grid points computed in floating point
                if p.distance(q) < 2.0 * cell_radius * (1.0 - 1e-12) {
                    return Err(Error::config(
                        "layout",
                        format!("APs closer than 2R: {p:?} and {q:?}"),
                    ));
                }
            }
        }
        Ok(Layout { ap_positions })
    }

    /// Row-major square grid with spacing exactly `2R`; N=4 gives a 2×2 block.
    pub fn square_grid(n_cells: usize, cell_radius: f64) -> Self {
        let cols = (n_cells as f64).sqrt().ceil().max(1.0) as usize;
        let spacing = 2.0 * cell_radius;
        let ap_positions = (0..n_cells)
            .map(|k| Point {
                x: (k % cols) as f64 * spacing,
                y: (k / cols) as f64 * spacing,
            })
            .collect();
        Layout { ap_positions }
    }

    pub fn for_config(cfg: &NetworkConfig) -> Self {
        Layout::square_grid(cfg.n_cells, cfg.cell_radius)
    }

    pub fn ap_positions(&self) -> &[Point] {
        &self.ap_positions
    }

    pub fn n_cells(&self) -> usize {
        self.ap_positions.len()
    }
}

/// Draws a user's distance to its serving AP.
pub fn sample_user_distance<R: Rng + ?Sized>(placement: &Placement, cell_radius: f64, rng: &mut R) -> f64 {
    // (0, 1]: a distance of exactly zero is never produced
    let u = 1.0 - rng.random::<f64>();
    placement.distance_from_uniform(cell_radius, u)
}

/// Squared magnitude `|h|²` of a unit-variance circular complex Gaussian
/// coefficient, i.e. an exponential variate with mean 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingDraw {
    pub h_power: f64,
}

impl FadingDraw {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let h_power: f64 = Exp1.sample(rng);
        FadingDraw { h_power }
    }
}

/// Small-scale fading applied on top of path loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fading {
    #[default]
    Rayleigh,
    /// `|h|² ≡ 1`; isolates the path-loss contribution.
    Unit,
}

impl Fading {
    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Fading::Rayleigh => FadingDraw::sample(rng).h_power,
            Fading::Unit => 1.0,
        }
    }
}

/// Power gains for one trial, indexed `[user][serving cell][AP]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GainMatrix {
    users: usize,
    n_cells: usize,
    gamma: Vec<f64>,
    h_power: Vec<f64>,
    g: Vec<f64>,
}

impl GainMatrix {
    /// Builds a matrix from its path-loss and fading factors, both laid out
    /// `[user][serving cell][AP]` in row-major order.
    pub fn from_parts(users: usize, n_cells: usize, gamma: Vec<f64>, h_power: Vec<f64>) -> Result<Self> {
        let len = users * n_cells * n_cells;
        if users == 0 || n_cells == 0 {
            return Err(Error::config("gain_matrix", "needs at least one user and one cell"));
        }
        if gamma.len() != len || h_power.len() != len {
            return Err(Error::config(
                "gain_matrix",
                format!("expected {len} entries, got gamma={} h_power={}", gamma.len(), h_power.len()),
            ));
        }
        if gamma.iter().chain(&h_power).any(|v| !(*v >= 0.0)) {
            return Err(Error::config("gain_matrix", "entries must be nonnegative"));
        }
        let g = gamma.iter().zip(&h_power).map(|(a, b)| a * b).collect();
        Ok(GainMatrix { users, n_cells, gamma, h_power, g })
    }

    /// Fixture constructor: the given gains are taken as path loss with unit fading.
    pub fn from_gains(users: usize, n_cells: usize, g: Vec<f64>) -> Result<Self> {
        let ones = vec![1.0; g.len()];
        GainMatrix::from_parts(users, n_cells, g, ones)
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    #[inline]
    fn idx(&self, user: usize, cell: usize, ap: usize) -> usize {
        (user * self.n_cells + cell) * self.n_cells + ap
    }

    #[inline]
    pub fn g(&self, user: usize, cell: usize, ap: usize) -> f64 {
        self.g[self.idx(user, cell, ap)]
    }

    #[inline]
    pub fn gamma(&self, user: usize, cell: usize, ap: usize) -> f64 {
        self.gamma[self.idx(user, cell, ap)]
    }

    #[inline]
    pub fn h_power(&self, user: usize, cell: usize, ap: usize) -> f64 {
        self.h_power[self.idx(user, cell, ap)]
    }

    /// Direct gain `G[u][n][n]`.
    #[inline]
    pub fn direct(&self, user: usize, cell: usize) -> f64 {
        self.g(user, cell, cell)
    }

    /// Gains from user `user` of cell `cell` to every AP.
    #[inline]
    pub fn links(&self, user: usize, cell: usize) -> &[f64] {
        let start = self.idx(user, cell, 0);
        &self.g[start..start + self.n_cells]
    }

    /// Fading factors from user `user` of cell `cell` to every AP.
    #[inline]
    pub fn fading_links(&self, user: usize, cell: usize) -> &[f64] {
        let start = self.idx(user, cell, 0);
        &self.h_power[start..start + self.n_cells]
    }
}

/// Draws one trial's gain matrix with Rayleigh fading.
pub fn draw_gain_matrix(cfg: &NetworkConfig, layout: &Layout, users_per_cell: usize, trial_seed: u64) -> GainMatrix {
    draw_gain_matrix_with(cfg, layout, users_per_cell, trial_seed, Fading::Rayleigh)
}

/// Draws one trial's gain matrix.
///
/// Each user gets its own stream derived from `(trial_seed, cell, user)`; the
/// result does not depend on evaluation order.
pub fn draw_gain_matrix_with(
    cfg: &NetworkConfig,
    layout: &Layout,
    users_per_cell: usize,
    trial_seed: u64,
    fading: Fading,
) -> GainMatrix {
    let mut g = GainMatrix::default();
    g.redraw(cfg, layout, users_per_cell, trial_seed, fading);
    g
}

impl GainMatrix {
    /// Overwrites `self` with a fresh draw, reusing its allocations.
    pub fn redraw(&mut self, cfg: &NetworkConfig, layout: &Layout, users_per_cell: usize, trial_seed: u64, fading: Fading) {
        let n = layout.n_cells();
        assert!(users_per_cell >= 1, "at least one user per cell");
        assert_eq!(n, cfg.n_cells, "layout and config disagree on the cell count");
        let len = users_per_cell * n * n;
        self.users = users_per_cell;
        self.n_cells = n;
        for v in [&mut self.gamma, &mut self.h_power, &mut self.g] {
            v.resize(len, 0.0);
        }
        let aps = layout.ap_positions();
        for (cell, ap) in aps.iter().enumerate() {
            for user in 0..users_per_cell {
                let mut stream = rng::user_stream(trial_seed, cell, user);
                let d = sample_user_distance(&cfg.placement, cfg.cell_radius, &mut stream);
                let theta = TAU * stream.random::<f64>();
                let (sin, cos) = theta.sin_cos();
                let (x, y) = (ap.x + d * cos, ap.y + d * sin);
                let base = (user * n + cell) * n;
                for (i, other) in aps.iter().enumerate() {
                    let d2 = if i == cell { d * d } else { (x - other.x).powi(2) + (y - other.y).powi(2) };
                    let gamma = cfg.gain_at_sq(d2);
                    let h = fading.draw(&mut stream);
                    self.gamma[base + i] = gamma;
                    self.h_power[base + i] = h;
                    self.g[base + i] = gamma * h;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evt::{ks_distance, pathloss_cdf};
    use approx::assert_relative_eq;

    fn standard_disk() -> NetworkConfig {
        NetworkConfig::standard(Placement::UniformDisk)
    }

    #[test]
    fn path_loss_values() {
        let cfg = standard_disk();
        assert_relative_eq!(path_loss(1.0, &cfg).unwrap(), 0.0625);
        assert_relative_eq!(path_loss(0.5, &cfg).unwrap(), 1.0);
        assert_relative_eq!(path_loss(2.0, &cfg).unwrap(), 0.00390625);
    }

    #[test]
    fn path_loss_rejects_nonpositive_distance() {
        let cfg = standard_disk();
        assert!(matches!(path_loss(0.0, &cfg), Err(Error::Domain(_))));
        assert!(path_loss(-1.0, &cfg).is_err());
    }

    #[test]
    fn distance_inverse_cdf() {
        assert_relative_eq!(Placement::UniformDisk.distance_from_uniform(1.0, 0.25), 0.5);
        assert_relative_eq!(Placement::UniformDisk.distance_from_uniform(1.0, 1.0), 1.0);
        let circle = Placement::SymmetricCircle { radius: 0.5 };
        let mut r = rng::keyed_stream(3, &[]);
        for _ in 0..10 {
            assert_eq!(sample_user_distance(&circle, 1.0, &mut r), 0.5);
        }
        let excl = Placement::UniformDiskWithExclusion { r_excl: 0.1 };
        assert_relative_eq!(excl.distance_from_uniform(1.0, 1.0), 1.0);
        assert!(excl.distance_from_uniform(1.0, 1e-300) >= 0.1);
    }

    #[test]
    fn uniform_disk_distance_matches_area_cdf() {
        let mut r = rng::keyed_stream(11, &[]);
        let samples: Vec<f64> = (0..100_000)
            .map(|_| sample_user_distance(&Placement::UniformDisk, 1.0, &mut r))
            .collect();
        assert!(samples.iter().all(|&d| d > 0.0 && d <= 1.0));
        let ks = ks_distance(&samples, |d| (d * d).clamp(0.0, 1.0));
        assert!(ks <= 0.01, "ks = {ks}");
    }

    #[test]
    fn direct_path_loss_matches_its_distribution() {
        let cfg = standard_disk();
        let mut r = rng::keyed_stream(12, &[]);
        let samples: Vec<f64> = (0..100_000)
            .map(|_| {
                let d = sample_user_distance(&cfg.placement, 1.0, &mut r);
                path_loss(d, &cfg).unwrap()
            })
            .collect();
        let ks = ks_distance(&samples, |g| pathloss_cdf(g, cfg.beta, cfg.epsilon));
        assert!(ks <= 0.01, "ks = {ks}");
    }

    #[test]
    fn fading_has_unit_mean() {
        let mut r = rng::keyed_stream(5, &[]);
        let n = 1_000_000;
        let mean = (0..n).map(|_| FadingDraw::sample(&mut r).h_power).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean = {mean}");
    }

    #[test]
    fn single_cell_on_circle_without_fading() {
        let cfg = NetworkConfig::standard(Placement::SymmetricCircle { radius: 0.5 }).with_cells(1);
        let layout = Layout::for_config(&cfg);
        let g = draw_gain_matrix_with(&cfg, &layout, 1, 9, Fading::Unit);
        assert_relative_eq!(g.g(0, 0, 0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn cross_path_loss_below_edge_gain() {
        for placement in [
            Placement::UniformDisk,
            Placement::SymmetricCircle { radius: 1.0 },
            Placement::UniformDiskWithExclusion { r_excl: 0.1 },
        ] {
            for n_cells in [2, 3, 4] {
                let cfg = NetworkConfig::standard(placement).with_cells(n_cells);
                let layout = Layout::for_config(&cfg);
                let bound = cfg.edge_gain() * (1.0 + 1e-12);
                for trial in 0..20 {
                    let g = draw_gain_matrix(&cfg, &layout, 50, trial);
                    for u in 0..50 {
                        for n in 0..n_cells {
                            for i in (0..n_cells).filter(|&i| i != n) {
                                assert!(g.gamma(u, n, i) <= bound);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gain_is_product_of_factors() {
        let cfg = standard_disk();
        let layout = Layout::for_config(&cfg);
        let g = draw_gain_matrix(&cfg, &layout, 8, 77);
        for u in 0..8 {
            for n in 0..4 {
                for i in 0..4 {
                    assert_eq!(g.g(u, n, i), g.gamma(u, n, i) * g.h_power(u, n, i));
                    assert!(g.g(u, n, i) >= 0.0);
                }
            }
        }
    }

    #[test]
    fn draws_are_bit_identical_for_a_seed() {
        let cfg = standard_disk();
        let layout = Layout::for_config(&cfg);
        assert_eq!(draw_gain_matrix(&cfg, &layout, 16, 1), draw_gain_matrix(&cfg, &layout, 16, 1));
        assert_ne!(draw_gain_matrix(&cfg, &layout, 16, 1), draw_gain_matrix(&cfg, &layout, 16, 2));
    }

    #[test]
    fn user_draws_do_not_depend_on_user_count() {
        // stream per (trial, cell, user): the first users coincide whatever U is
        let cfg = standard_disk();
        let layout = Layout::for_config(&cfg);
        let small = draw_gain_matrix(&cfg, &layout, 4, 5);
        let large = draw_gain_matrix(&cfg, &layout, 32, 5);
        for u in 0..4 {
            for n in 0..4 {
                assert_eq!(small.links(u, n), large.links(u, n));
            }
        }
    }

    #[test]
    fn square_grid_respects_disk_packing() {
        let layout = Layout::square_grid(4, 1.0);
        assert_eq!(
            layout.ap_positions(),
            &[
                Point { x: 0.0, y: 0.0 },
                Point { x: 2.0, y: 0.0 },
                Point { x: 0.0, y: 2.0 },
                Point { x: 2.0, y: 2.0 }
            ]
        );
        for n in 1..10 {
            let l = Layout::square_grid(n, 1.5);
            assert!(Layout::new(l.ap_positions().to_vec(), 1.5).is_ok());
        }
        let crowded = vec![Point { x: 0.0, y: 0.0 }, Point { x: 1.0, y: 0.0 }];
        assert!(Layout::new(crowded, 1.0).is_err());
    }

    #[test]
    fn config_validation_names_the_field() {
        let mut cfg = standard_disk();
        cfg.noise_power = 0.0;
        match cfg.validate() {
            Err(Error::InvalidConfig { field, .. }) => assert_eq!(field, "noise_power"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = NetworkConfig::standard(Placement::UniformDiskWithExclusion { r_excl: 1.0 });
        assert!(bad.validate().is_err());
        assert!(NetworkConfig::standard(Placement::SymmetricCircle { radius: 0.5 }).validate().is_ok());
    }
}
