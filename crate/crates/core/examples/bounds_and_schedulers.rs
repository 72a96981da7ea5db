//! Upper and lower capacity bounds with the schedules that achieve them.

use cellcap::channel::{draw_gain_matrix, Layout, NetworkConfig, Placement};
use cellcap::rates::{capacity_lower_bound, capacity_upper_bound, network_capacity};
use cellcap::rng;
use cellcap::schedulers::{schedule_lb, schedule_ub};

fn main() {
    let cfg = NetworkConfig::standard(Placement::SymmetricCircle { radius: 0.5 });
    let layout = Layout::for_config(&cfg);
    for users in [1, 16, 256, 4096] {
        let g = draw_gain_matrix(&cfg, &layout, users, rng::trial_seed(3, users, 0));
        let ub = schedule_ub(&g, &cfg);
        let lb = schedule_lb(&g, &cfg);
        // the max-rate schedule evaluated *with* interference
        let real = network_capacity(&g, &ub, &cfg).capacity;
        println!(
            "U={users:5}  C_ub={:.3}  C(max-rate, with interference)={real:.3}  C_lb={:.3}  picks ub={:?} lb={:?}",
            capacity_upper_bound(&g, &cfg),
            capacity_lower_bound(&g, &cfg),
            ub.schedule,
            lb.schedule,
        );
    }
}
