//! Allocation policies.
//!
//! [`schedule_ub`] and [`schedule_lb`] are distributed: each cell decides from
//! its own users' measurements. [`schedule_oracle`] searches the joint space
//! of schedules and discretized power vectors and serves as the reference
//! optimum on small instances.

use serde::{Deserialize, Serialize};

use crate::channel::{GainMatrix, NetworkConfig};
use crate::error::{Error, Result};
use crate::rates::{capacity_from_sinr, sinr_raw, worst_case_sinr, Allocation};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Index of the largest value; the lowest index wins ties.
fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Max-rate scheduler: per cell, the user with the largest direct gain, at full power.
pub fn schedule_ub(g: &GainMatrix, cfg: &NetworkConfig) -> Allocation {
    let schedule = (0..g.n_cells())
        .map(|n| argmax((0..g.users()).map(|u| g.direct(u, n))))
        .collect();
    Allocation::full_power(schedule, cfg)
}

/// Worst-case-SINR scheduler: per cell, the user whose SINR with all APs at
/// full power is largest. In a deployment each user feeds back that one
/// scalar, measured during a common full-power preamble.
pub fn schedule_lb(g: &GainMatrix, cfg: &NetworkConfig) -> Allocation {
    let schedule = (0..g.n_cells())
        .map(|n| argmax((0..g.users()).map(|u| worst_case_sinr(g, cfg, n, u))))
        .collect();
    Allocation::full_power(schedule, cfg)
}

/// Discrete per-AP power levels searched by the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub power_levels: Vec<f64>,
    /// Maximum number of (power vector, schedule) evaluations.
    pub budget: u64,
}

impl OracleConfig {
    pub fn new(power_levels: Vec<f64>, p_max: f64) -> Result<Self> {
        let oc = OracleConfig { power_levels, budget: DEFAULT_BUDGET };
        oc.validate(p_max)?;
        Ok(oc)
    }

    /// `{0, P_max/2, P_max}`.
    pub fn three_level(p_max: f64) -> Self {
        OracleConfig { power_levels: vec![0.0, p_max / 2.0, p_max], budget: DEFAULT_BUDGET }
    }

    /// `{0, P_max}`.
    pub fn on_off(p_max: f64) -> Self {
        OracleConfig { power_levels: vec![0.0, p_max], budget: DEFAULT_BUDGET }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn validate(&self, p_max: f64) -> Result<()> {
        let levels = &self.power_levels;
        if levels.is_empty() {
            return Err(Error::config("power_levels", "must not be empty"));
        }
        if levels.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::config("power_levels", "must be strictly ascending"));
        }
        if levels.iter().any(|p| !(0.0..=p_max).contains(p)) {
            return Err(Error::config("power_levels", format!("values must lie in [0, {p_max}]")));
        }
        if !levels.contains(&p_max) {
            return Err(Error::config("power_levels", format!("must contain P_max={p_max}")));
        }
        Ok(())
    }

    /// `|levels|^N · U^N`, saturating.
    pub fn evaluations(&self, n_cells: usize, users: usize) -> u128 {
        let per_cell = (self.power_levels.len() as u128).saturating_mul(users as u128);
        (0..n_cells).fold(1u128, |acc, _| acc.saturating_mul(per_cell))
    }

    /// Refuses instances whose enumeration exceeds the budget.
    pub fn check_budget(&self, n_cells: usize, users: usize) -> Result<()> {
        let required = self.evaluations(n_cells, users);
        if required > self.budget as u128 {
            return Err(Error::BudgetExceeded {
                n_cells,
                users,
                levels: self.power_levels.len(),
                required,
                budget: self.budget,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub allocation: Allocation,
    pub capacity: f64,
}

/// Advances a little-endian odometer; returns false after the last state.
/// Digit 0 is the most significant so states come out in lexicographic order.
fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Exhaustive joint search over all schedules and all power vectors on the grid.
///
/// Candidates are visited in lexicographic order of (power-level indices,
/// schedule) and only a strict improvement replaces the incumbent, so ties
/// resolve to the lexicographically smallest pair.
pub fn schedule_oracle(g: &GainMatrix, cfg: &NetworkConfig, oc: &OracleConfig) -> Result<OracleOutcome> {
    let n = g.n_cells();
    let users = g.users();
    oc.check_budget(n, users)?;
    let levels = &oc.power_levels;

    let mut level_idx = vec![0usize; n];
    let mut powers = vec![0.0; n];
    let mut schedule = vec![0usize; n];
    let mut sinr = vec![0.0; n];
    let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;

    loop {
        for (p, &k) in powers.iter_mut().zip(&level_idx) {
            *p = levels[k];
        }
        schedule.iter_mut().for_each(|u| *u = 0);
        loop {
            for (cell, s) in sinr.iter_mut().enumerate() {
                *s = sinr_raw(g, &schedule, &powers, cfg.noise_power, cell);
            }
            let capacity = capacity_from_sinr(&sinr);
            if best.as_ref().is_none_or(|(c, _, _)| capacity > *c) {
                best = Some((capacity, schedule.clone(), powers.clone()));
            }
            if !advance(&mut schedule, users) {
                break;
            }
        }
        if !advance(&mut level_idx, levels.len()) {
            break;
        }
    }

    let (capacity, schedule, powers) = best.expect("search space is non-empty");
    Ok(OracleOutcome { allocation: Allocation { schedule, powers }, capacity })
}

/// Fraction of cells whose AP is switched off.
pub fn off_fraction(alloc: &Allocation) -> f64 {
    let off = alloc.powers.iter().filter(|&&p| p == 0.0).count();
    off as f64 / alloc.powers.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{draw_gain_matrix, Layout, Placement};
    use crate::rates::{capacity_upper_bound, network_capacity};
    use approx::assert_relative_eq;

    fn cfg(n_cells: usize, noise: f64) -> NetworkConfig {
        let mut c = NetworkConfig::standard(Placement::UniformDisk).with_cells(n_cells);
        c.noise_power = noise;
        c
    }

    #[test]
    fn max_rate_picks_largest_direct_gain() {
        let c = cfg(1, 1.0);
        let g = GainMatrix::from_gains(3, 1, vec![0.1, 0.5, 0.3]).unwrap();
        let a = schedule_ub(&g, &c);
        assert_eq!(a.schedule, vec![1]);
        assert_eq!(a.powers, vec![c.p_max]);

        let tie = GainMatrix::from_gains(2, 1, vec![0.5, 0.5]).unwrap();
        assert_eq!(schedule_ub(&tie, &c).schedule, vec![0]);

        let one = GainMatrix::from_gains(1, 1, vec![0.2]).unwrap();
        assert_eq!(schedule_ub(&one, &c), Allocation { schedule: vec![0], powers: vec![c.p_max] });
    }

    #[test]
    fn worst_case_scheduler_prefers_isolated_user() {
        let c = cfg(2, 1.0);
        // [u][n][i]: user 0 of cell 0 is strong but heavily interfered
        let g = GainMatrix::from_gains(
            2,
            2,
            vec![
                10.0, 100.0, /* u0 cell1 */ 0.0, 1.0, //
                5.0, 0.0, /* u1 cell1 */ 0.0, 1.0,
            ],
        )
        .unwrap();
        assert_relative_eq!(worst_case_sinr(&g, &c, 0, 0), 10.0 / 101.0);
        assert_relative_eq!(worst_case_sinr(&g, &c, 0, 1), 5.0);
        assert_eq!(schedule_lb(&g, &c).schedule[0], 1);
        assert_eq!(schedule_ub(&g, &c).schedule[0], 0);
    }

    #[test]
    fn worst_case_scheduler_on_sinr_values() {
        let c = cfg(1, 1.0);
        // single cell: worst-case SINR is the SNR, here {0.8, 1.2}
        let g = GainMatrix::from_gains(2, 1, vec![0.8, 1.2]).unwrap();
        assert_eq!(schedule_lb(&g, &c).schedule, vec![1]);
    }

    #[test]
    fn single_cell_schedulers_agree() {
        let c = NetworkConfig::standard(Placement::UniformDisk).with_cells(1);
        let layout = Layout::for_config(&c);
        for trial in 0..100 {
            let g = draw_gain_matrix(&c, &layout, 20, trial);
            assert_eq!(schedule_lb(&g, &c), schedule_ub(&g, &c));
        }
    }

    #[test]
    fn oracle_two_strongly_coupled_links() {
        let c = cfg(2, 1.0);
        let g = GainMatrix::from_gains(1, 2, vec![1.0, 10.0, 10.0, 1.0]).unwrap();
        let oc = OracleConfig::new(vec![0.0, 1.0], 1.0).unwrap();
        let out = schedule_oracle(&g, &c, &oc).unwrap();

        // hand enumeration of the four power vectors
        let off_on = (2f64).ln() / 2.0;
        let both = (1.0 + 1.0 / 11.0f64).ln();
        assert_relative_eq!(out.capacity, off_on, epsilon = 1e-15);
        assert_relative_eq!(out.capacity, 0.34657359027997264, epsilon = 1e-15);
        assert!(both < out.capacity);
        assert_relative_eq!(both, 0.08701137698962981, epsilon = 1e-15);
        // lexicographically first optimum
        assert_eq!(out.allocation.powers, vec![0.0, 1.0]);
        assert_eq!(off_fraction(&out.allocation), 0.5);
    }

    #[test]
    fn oracle_single_cell_reaches_upper_bound() {
        let c = NetworkConfig::standard(Placement::UniformDisk).with_cells(1);
        let layout = Layout::for_config(&c);
        for trial in 0..20 {
            let g = draw_gain_matrix(&c, &layout, 5, trial);
            let out = schedule_oracle(&g, &c, &OracleConfig::three_level(c.p_max)).unwrap();
            assert_relative_eq!(out.capacity, capacity_upper_bound(&g, &c), epsilon = 1e-14);
        }
    }

    #[test]
    fn oracle_without_coupling_runs_everything_at_full_power() {
        let c = cfg(2, 0.1);
        let g = GainMatrix::from_gains(2, 2, vec![0.3, 0.0, 0.0, 0.7, 0.9, 0.0, 0.0, 0.2]).unwrap();
        let out = schedule_oracle(&g, &c, &OracleConfig::three_level(c.p_max)).unwrap();
        assert_eq!(out.allocation.powers, vec![c.p_max, c.p_max]);
        assert_eq!(out.allocation.schedule, vec![1, 0]);
        assert_relative_eq!(out.capacity, capacity_upper_bound(&g, &c), epsilon = 1e-14);
    }

    #[test]
    fn oracle_capacity_matches_its_allocation() {
        let c = NetworkConfig::standard(Placement::UniformDisk).with_cells(3);
        let layout = Layout::for_config(&c);
        let g = draw_gain_matrix(&c, &layout, 3, 4);
        let out = schedule_oracle(&g, &c, &OracleConfig::three_level(c.p_max)).unwrap();
        assert_eq!(network_capacity(&g, &out.allocation, &c).capacity, out.capacity);
    }

    #[test]
    fn oracle_budget_refusal_reports_count() {
        let c = NetworkConfig::standard(Placement::UniformDisk);
        let layout = Layout::for_config(&c);
        let g = draw_gain_matrix(&c, &layout, 64, 0);
        let oc = OracleConfig::three_level(1.0);
        match schedule_oracle(&g, &c, &oc) {
            Err(Error::BudgetExceeded { required, n_cells, users, .. }) => {
                assert_eq!(required, 192u128.pow(4));
                assert_eq!((n_cells, users), (4, 64));
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn oracle_config_validation() {
        assert!(OracleConfig::new(vec![], 1.0).is_err());
        assert!(OracleConfig::new(vec![0.0, 0.5], 1.0).is_err());
        assert!(OracleConfig::new(vec![0.0, 1.5], 1.0).is_err());
        assert!(OracleConfig::new(vec![1.0, 0.0], 1.0).is_err());
        assert!(OracleConfig::new(vec![1.0], 1.0).is_ok());
    }

    #[test]
    fn off_fraction_counts_silent_cells() {
        let a = Allocation { schedule: vec![0; 4], powers: vec![1.0; 4] };
        assert_eq!(off_fraction(&a), 0.0);
        let b = Allocation { schedule: vec![0; 4], powers: vec![1.0, 0.0, 0.5, 1.0] };
        assert_eq!(off_fraction(&b), 0.25);
    }
}
