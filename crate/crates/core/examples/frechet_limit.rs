//! Maxima of path-loss × fading products, rescaled by the Gnedenko
//! normalizer, against the Fréchet limit.

use cellcap::channel::{Fading, NetworkConfig, Placement};
use cellcap::evt::{breiman_tail, exponential_moment, frechet_limit_cdf, gnedenko_normalizer, ks_distance, sample_product_maxima, TailModel};

fn main() -> cellcap::Result<()> {
    let cfg = NetworkConfig::standard(Placement::UniformDisk);
    let a = 2.0 / cfg.epsilon;
    let tail = breiman_tail(&TailModel::path_loss(cfg.beta, cfg.epsilon), exponential_moment(a))?;

    for users in [10, 100, 1000] {
        let a_u = gnedenko_normalizer(&tail, users);
        let scaled: Vec<f64> = sample_product_maxima(&cfg, Fading::Rayleigh, users, 5000, 1)
            .into_iter()
            .map(|m| m / a_u)
            .collect();
        let ks = ks_distance(&scaled, |t| if t > 0.0 { frechet_limit_cdf(t, a).unwrap() } else { 0.0 });
        println!("U={users:5}  a_U={a_u:10.2}  KS to exp(-t^-{a}) = {ks:.4}");
    }
    Ok(())
}
