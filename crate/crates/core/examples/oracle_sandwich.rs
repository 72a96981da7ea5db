//! Exhaustive search over schedules and a discrete power grid, checked
//! against the two bounds on a small network.

use cellcap::channel::{draw_gain_matrix, Layout, NetworkConfig, Placement};
use cellcap::rates::{capacity_lower_bound, capacity_upper_bound};
use cellcap::rng;
use cellcap::schedulers::{off_fraction, schedule_oracle, OracleConfig};

fn main() -> cellcap::Result<()> {
    let cfg = NetworkConfig::standard(Placement::UniformDisk).with_cells(3);
    let layout = Layout::for_config(&cfg);
    let oc = OracleConfig::three_level(cfg.p_max);
    println!("{} evaluations per trial at U=4", oc.evaluations(cfg.n_cells, 4));

    for trial in 0..5 {
        let g = draw_gain_matrix(&cfg, &layout, 4, rng::trial_seed(11, 4, trial));
        let best = schedule_oracle(&g, &cfg, &oc)?;
        println!(
            "trial {trial}: {:.4} <= {:.4} <= {:.4}  powers={:?}  off={:.2}",
            capacity_lower_bound(&g, &cfg),
            best.capacity,
            capacity_upper_bound(&g, &cfg),
            best.allocation.powers,
            off_fraction(&best.allocation),
        );
    }

    // a four-cell network with 32 users is refused, not attempted
    let big = NetworkConfig::standard(Placement::UniformDisk);
    if let Err(e) = oc.check_budget(big.n_cells, 32) {
        println!("\n{e}");
    }
    Ok(())
}
