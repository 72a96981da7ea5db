//! The product of a power-law gain and exponential fading keeps the power
//! law, with the scale multiplied by E(h^a).

use cellcap::channel::{Fading, NetworkConfig, Placement};
use cellcap::evt::{breiman_tail, estimate_moment, exponential_moment, sample_fading, sample_products, tail_check, TailModel};

fn main() -> cellcap::Result<()> {
    let cfg = NetworkConfig::standard(Placement::UniformDisk);
    let a = 2.0 / cfg.epsilon;

    let mc = estimate_moment(&sample_fading(1_000_000, 2), a);
    println!("E(h^{a}) = {:.5} (Monte Carlo {:.5} ± {:.5})", exponential_moment(a), mc.value, mc.std_error);

    let tail = breiman_tail(&TailModel::path_loss(cfg.beta, cfg.epsilon), exponential_moment(a))?;
    let mut z = sample_products(&cfg, Fading::Rayleigh, 2_000_000, 2);
    z.sort_unstable_by(f64::total_cmp);
    for q in [0.9, 0.99, 0.999] {
        let c = tail_check(&z, q, |x| tail.survival(x));
        println!("q={q}: z={:9.3}  empirical {:.2e}  predicted {:.2e}  ratio {:.3}", c.z, c.empirical, c.predicted, c.ratio());
    }
    Ok(())
}
