//! Distribution of the interference-normalized SINR W, sampled and in
//! closed form.

use cellcap::channel::{NetworkConfig, Placement};
use cellcap::evt::{ks_distance_sorted, sample_normalized_sinr, NormalizedSinr};

fn main() {
    let cfg = NetworkConfig::standard(Placement::UniformDisk);
    let params = NormalizedSinr::from_config(&cfg);
    let mut w = sample_normalized_sinr(&params, 200_000, 3);
    w.sort_unstable_by(f64::total_cmp);

    for x in [1.0, 10.0, 50.0, 200.0] {
        let emp = w.partition_point(|&s| s <= x) as f64 / w.len() as f64;
        println!("F_W({x:5}) empirical {emp:.4}  closed form {:.4}", params.cdf(x));
    }
    println!("sup-norm: {:.4}", ks_distance_sorted(&w, |x| params.cdf(x)));
    println!("with (N-1)-scaled interference term: {:.4}", ks_distance_sorted(&w, |x| params.cdf_scaled_interference(x)));
}
