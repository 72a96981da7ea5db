//! A reduced sweep of both bounds over U, with log and log-log fits.
//!
//!     cargo run --release --example scaling_sweep -- disk

use cellcap::channel::{NetworkConfig, Placement};
use cellcap::montecarlo::{run_sweep, SweepConfig};

fn main() -> cellcap::Result<()> {
    let placement = match std::env::args().nth(1).as_deref() {
        Some("disk") => Placement::UniformDisk,
        _ => Placement::SymmetricCircle { radius: 0.5 },
    };
    let mut sc = SweepConfig::new(NetworkConfig::standard(placement));
    sc.u_grid = vec![8, 32, 128, 512, 2048];
    sc.trials = 300;
    let res = run_sweep(&sc)?;

    println!("{:>6} {:>8} {:>8} {:>8}", "U", "C_ub", "C_lb", "gap");
    for r in &res.rows {
        let (ub, lb) = (r.upper.unwrap(), r.lower.unwrap());
        println!("{:6} {:8.4} {:8.4} {:8.4}", r.users, ub.mean, lb.mean, r.relative_gap.unwrap().mean);
    }
    for f in &res.fits {
        println!("{:<14} slope {:7.4}  R² {:.4}", f.spec.to_string(), f.fit.slope, f.fit.r2);
    }
    Ok(())
}
