//! With an exclusion disk around each AP, capacity first grows like
//! (ε/2)·ln U and then flattens once the nearest users saturate.

use cellcap::channel::{NetworkConfig, Placement};
use cellcap::montecarlo::{run_sweep, two_regime_report, Bound, SweepConfig};

fn main() -> cellcap::Result<()> {
    let mut sc = SweepConfig::new(NetworkConfig::standard(Placement::UniformDiskWithExclusion { r_excl: 0.1 }));
    sc.u_grid = vec![8, 16, 32, 64, 512, 2048, 8192];
    sc.trials = 200;
    sc.fits.clear();
    let res = run_sweep(&sc)?;
    for r in &res.rows {
        println!("U={:5}  C_ub={:.3}", r.users, r.upper.unwrap().mean);
    }
    let (low, high) = two_regime_report(&res, 64, Bound::Upper)?;
    println!("slope below U=64: {low:.3}, above: {high:.3}");
    Ok(())
}
