//! SINR, network capacity and the interference-free / full-power bounds.
//!
//! Capacities are in nats per channel use and averaged over cells.

use crate::channel::{GainMatrix, NetworkConfig};
use crate::error::{Error, Result};

/// One scheduled user and one transmit power per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub schedule: Vec<usize>,
    pub powers: Vec<f64>,
}

impl Allocation {
    /// Checks the allocation against the gain matrix dimensions and `[0, P_max]`.
    pub fn new(schedule: Vec<usize>, powers: Vec<f64>, g: &GainMatrix, cfg: &NetworkConfig) -> Result<Self> {
        let alloc = Allocation { schedule, powers };
        alloc.validate(g, cfg)?;
        Ok(alloc)
    }

    /// Every cell transmits at `P_max`.
    pub fn full_power(schedule: Vec<usize>, cfg: &NetworkConfig) -> Self {
        let powers = vec![cfg.p_max; schedule.len()];
        Allocation { schedule, powers }
    }

    pub fn validate(&self, g: &GainMatrix, cfg: &NetworkConfig) -> Result<()> {
        let n = g.n_cells();
        if self.schedule.len() != n || self.powers.len() != n {
            return Err(Error::config("allocation", format!("expected {n} cells")));
        }
        if let Some(u) = self.schedule.iter().find(|&&u| u >= g.users()) {
            return Err(Error::config("schedule", format!("user {u} out of range 0..{}", g.users())));
        }
        if let Some(p) = self.powers.iter().find(|&&p| !(0.0..=cfg.p_max).contains(&p)) {
            return Err(Error::config("powers", format!("{p} outside [0, {}]", cfg.p_max)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub sinr: Vec<f64>,
    pub capacity: f64,
}

/// `(1/N)·Σ ln(1 + Γ_n)`.
pub fn capacity_from_sinr(sinr: &[f64]) -> f64 {
    sinr.iter().map(|s| s.ln_1p()).sum::<f64>() / sinr.len() as f64
}

#[inline]
pub(crate) fn sinr_raw(g: &GainMatrix, schedule: &[usize], powers: &[f64], noise: f64, cell: usize) -> f64 {
    let links = g.links(schedule[cell], cell);
    let interference: f64 = links
        .iter()
        .zip(powers)
        .enumerate()
        .filter(|(i, _)| *i != cell)
        .map(|(_, (gain, p))| gain * p)
        .sum();
    links[cell] * powers[cell] / (noise + interference)
}

/// SINR of the user scheduled in `cell`.
pub fn sinr(g: &GainMatrix, alloc: &Allocation, cfg: &NetworkConfig, cell: usize) -> f64 {
    sinr_raw(g, &alloc.schedule, &alloc.powers, cfg.noise_power, cell)
}

pub fn network_capacity(g: &GainMatrix, alloc: &Allocation, cfg: &NetworkConfig) -> RateReport {
    let sinr: Vec<f64> = (0..g.n_cells()).map(|n| sinr(g, alloc, cfg, n)).collect();
    let capacity = capacity_from_sinr(&sinr);
    RateReport { sinr, capacity }
}

/// Best interference-free SNR in `cell`: `max_u G[u][n][n]·P_max/σ²`.
pub fn snr_upper_bound(g: &GainMatrix, cfg: &NetworkConfig, cell: usize) -> f64 {
    let best = (0..g.users()).map(|u| g.direct(u, cell)).fold(0.0, f64::max);
    best * cfg.snr_scale()
}

pub fn capacity_upper_bound(g: &GainMatrix, cfg: &NetworkConfig) -> f64 {
    let sinr: Vec<f64> = (0..g.n_cells()).map(|n| snr_upper_bound(g, cfg, n)).collect();
    capacity_from_sinr(&sinr)
}

/// SINR of user `user` in `cell` with every AP at full power.
pub fn worst_case_sinr(g: &GainMatrix, cfg: &NetworkConfig, cell: usize, user: usize) -> f64 {
    let links = g.links(user, cell);
    let cross: f64 = links.iter().enumerate().filter(|(i, _)| *i != cell).map(|(_, v)| v).sum();
    links[cell] * cfg.p_max / (cfg.noise_power + cross * cfg.p_max)
}

/// `max_u worst_case_sinr(cell, u)`.
pub fn sinr_lower_bound(g: &GainMatrix, cfg: &NetworkConfig, cell: usize) -> f64 {
    (0..g.users()).map(|u| worst_case_sinr(g, cfg, cell, u)).fold(0.0, f64::max)
}

pub fn capacity_lower_bound(g: &GainMatrix, cfg: &NetworkConfig) -> f64 {
    let sinr: Vec<f64> = (0..g.n_cells()).map(|n| sinr_lower_bound(g, cfg, n)).collect();
    capacity_from_sinr(&sinr)
}

/// Full-power SINR bound with every interfering path loss replaced by the
/// cell-edge value `β·R^{-ε}`:
/// `max_u G[u][n][n]·P_max / (σ² + P_max·β·R^{-ε}·Σ_{i≠n} |h[u][n][i]|²)`.
///
/// Never exceeds [`sinr_lower_bound`] since every cross path loss is at most
/// the edge value.
pub fn edge_sinr_lower_bound(g: &GainMatrix, cfg: &NetworkConfig, cell: usize) -> f64 {
    let edge = cfg.edge_gain();
    (0..g.users())
        .map(|u| {
            let fading: f64 = g
                .fading_links(u, cell)
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != cell)
                .map(|(_, h)| h)
                .sum();
            g.direct(u, cell) * cfg.p_max / (cfg.noise_power + cfg.p_max * edge * fading)
        })
        .fold(0.0, f64::max)
}

/// Per-cell `Γ^ub` and `Γ^lb` in one pass over the users.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub snr_ub: Vec<f64>,
    pub sinr_lb: Vec<f64>,
}

impl Bounds {
    pub fn evaluate(g: &GainMatrix, cfg: &NetworkConfig) -> Self {
        let n = g.n_cells();
        let mut snr_ub = vec![0.0; n];
        let mut sinr_lb = vec![0.0; n];
        for cell in 0..n {
            let (mut best_direct, mut best_wc) = (0.0f64, 0.0f64);
            for u in 0..g.users() {
                best_direct = best_direct.max(g.direct(u, cell));
                best_wc = best_wc.max(worst_case_sinr(g, cfg, cell, u));
            }
            snr_ub[cell] = best_direct * cfg.snr_scale();
            sinr_lb[cell] = best_wc;
        }
        Bounds { snr_ub, sinr_lb }
    }

    pub fn capacity_ub(&self) -> f64 {
        capacity_from_sinr(&self.snr_ub)
    }

    pub fn capacity_lb(&self) -> f64 {
        capacity_from_sinr(&self.sinr_lb)
    }
}
