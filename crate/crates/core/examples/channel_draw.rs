//! Draw one trial of the standard four-cell network and look at what each AP sees.

use cellcap::channel::{draw_gain_matrix, Layout, NetworkConfig, Placement};
use cellcap::rng;

fn main() {
    let cfg = NetworkConfig::standard(Placement::UniformDisk);
    let layout = Layout::for_config(&cfg);
    for (n, ap) in layout.ap_positions().iter().enumerate() {
        println!("AP {n} at ({:.1}, {:.1})", ap.x, ap.y);
    }

    let users = 4;
    let g = draw_gain_matrix(&cfg, &layout, users, rng::trial_seed(7, users, 0));
    println!("\ncell 0, gains to every AP (γ·|h|²):");
    for u in 0..users {
        let row: Vec<String> = g.links(u, 0).iter().map(|x| format!("{x:9.3e}")).collect();
        println!("  user {u}: {}", row.join("  "));
    }
    println!("\nedge gain βR^-ε = {}", cfg.edge_gain());
}
