//! Heavy-tailed path-loss distributions and extreme-value machinery.
//!
//! The direct path loss `γ = β·d^{-ε}` of a user dropped uniformly in a unit
//! disk has survival function `(x/β)^{-2/ε}`: it is regularly varying with
//! exponent `-2/ε`. Multiplying by an independent fading variable `Y` keeps
//! the exponent and rescales the tail by `E(Y^{2/ε})`, so the maximum over
//! `U` users, normalized by `a_U`, converges to a Fréchet law.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::channel::{path_loss, sample_user_distance, Fading, NetworkConfig};
use crate::error::{Error, Result};
use crate::rng;

/// `F_X(x) = 1 - (x/β)^{-2/ε}` for `x ≥ β`, zero below.
pub fn pathloss_cdf(x: f64, beta: f64, epsilon: f64) -> f64 {
    if x < beta {
        0.0
    } else {
        1.0 - (x / beta).powf(-2.0 / epsilon)
    }
}

/// Density of the direct path loss over a unit disk:
/// `(2/ε)·(g/β)^{-2/ε}/g` on `[β, ∞)`.
pub fn pathloss_density(g: f64, beta: f64, epsilon: f64) -> f64 {
    if g < beta {
        0.0
    } else {
        2.0 / epsilon * (g / beta).powf(-2.0 / epsilon) / g
    }
}

/// `(1 - F(x)) / (1 - F(t·x))`; tends to `t^a` for a tail regularly varying with exponent `-a`.
pub fn survival_ratio(cdf: impl Fn(f64) -> f64, x: f64, t: f64) -> f64 {
    (1.0 - cdf(x)) / (1.0 - cdf(t * x))
}

/// Power-law tail `1 - F(z) ~ scale·z^{-exponent}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    pub exponent: f64,
    pub scale: f64,
}

impl TailModel {
    pub fn new(exponent: f64, scale: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::Domain(format!("tail exponent must be positive, got {exponent}")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Domain(format!("tail scale must be positive, got {scale}")));
        }
        Ok(TailModel { exponent, scale })
    }

    /// Tail of the direct path loss: exponent `2/ε`, scale `β^{2/ε}`.
    pub fn path_loss(beta: f64, epsilon: f64) -> Self {
        let exponent = 2.0 / epsilon;
        TailModel { exponent, scale: beta.powf(exponent) }
    }

    /// Asymptotic survival `scale·z^{-exponent}`.
    pub fn survival(&self, z: f64) -> f64 {
        self.scale * z.powf(-self.exponent)
    }
}

/// Monte Carlo estimate of a moment `E(Y^a)` with its 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// `E(Y^a) = Γ(1 + a)` for `Y` unit exponential.
pub fn exponential_moment(a: f64) -> f64 {
    statrs::function::gamma::gamma(1.0 + a)
}

/// Sample mean of `y^a` and its normal-approximation half-width.
pub fn estimate_moment(samples: &[f64], a: f64) -> MomentEstimate {
    let n = samples.len() as f64;
    let (sum, sum_sq) = samples.iter().fold((0.0, 0.0), |(s, q), y| {
        let v = y.powf(a);
        (s + v, q + v * v)
    });
    let value = sum / n;
    let var = if samples.len() > 1 { (sum_sq - n * value * value) / (n - 1.0) } else { f64::NAN };
    MomentEstimate { value, std_error: 1.96 * (var.max(0.0) / n).sqrt() }
}

/// Tail of `Z = X·Y` for `X` with tail `base` and `moment = E(Y^{base.exponent})`.
pub fn breiman_tail(base: &TailModel, moment: f64) -> Result<TailModel> {
    if !(moment > 0.0 && moment.is_finite()) {
        return Err(Error::Domain(format!("moment must be finite and positive, got {moment}")));
    }
    TailModel::new(base.exponent, moment * base.scale)
}

/// `a_U` solving `scale·a_U^{-exponent} = 1/U`.
pub fn gnedenko_normalizer(tail: &TailModel, users: usize) -> f64 {
    (tail.scale * users as f64).powf(1.0 / tail.exponent)
}

/// Fréchet CDF `exp(-t^{-a})`.
pub fn frechet_limit_cdf(t: f64, a: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("Fréchet CDF needs t > 0, got {t}")));
    }
    Ok((-t.powf(-a)).exp())
}

/// Parameters of the normalized SINR
/// `ω = |h_n|² / (σ²/P_max + β·R^{-ε}·Σ_{i≠n} |h_i|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedSinr {
    /// `σ²/P_max`.
    pub noise_to_power: f64,
    /// `β·R^{-ε}`.
    pub edge_gain: f64,
    /// `N - 1`.
    pub interferers: usize,
}

impl NormalizedSinr {
    pub fn from_config(cfg: &NetworkConfig) -> Self {
        NormalizedSinr {
            noise_to_power: cfg.noise_power / cfg.p_max,
            edge_gain: cfg.edge_gain(),
            interferers: cfg.n_cells - 1,
        }
    }

    /// `1 - e^{-ω·σ²/P_max} / (1 + ω·β·R^{-ε})^{N-1}`.
    ///
    /// Conditioning on the interference sum `S ~ Gamma(N-1, 1)`,
    /// `P(ω > w) = E[exp(-w(σ²/P + βR^{-ε}S))]`, and the Laplace transform of
    /// `S` at `wβR^{-ε}` gives the power term.
    pub fn cdf(&self, w: f64) -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        let k = self.interferers as i32;
        1.0 - (-w * self.noise_to_power).exp() / (1.0 + w * self.edge_gain).powi(k)
    }

    /// Variant carrying an extra `(N-1)` factor inside the power term:
    /// `1 - e^{-ω·σ²/P_max} / (1 + ω·β·(N-1)·R^{-ε})^{N-1}`.
    pub fn cdf_scaled_interference(&self, w: f64) -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        let k = self.interferers as i32;
        1.0 - (-w * self.noise_to_power).exp() / (1.0 + w * self.edge_gain * k as f64).powi(k)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let direct: f64 = Exp1.sample(rng);
        let interference: f64 = (0..self.interferers).map(|_| -> f64 { Exp1.sample(rng) }).sum();
        direct / (self.noise_to_power + self.edge_gain * interference)
    }
}

pub fn normalized_sinr_cdf(w: f64, cfg: &NetworkConfig) -> f64 {
    NormalizedSinr::from_config(cfg).cdf(w)
}

/// Kolmogorov–Smirnov statistic `sup_x |F̂(x) - F(x)|`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    ks_distance_sorted(&sorted, cdf)
}

/// As [`ks_distance`] for samples already in ascending order.
pub fn ks_distance_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!sorted.is_empty(), "KS distance needs at least one sample");
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d.max(above).max(below)
    })
}

/// Empirical versus predicted survival at an empirical quantile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCheck {
    pub quantile: f64,
    pub z: f64,
    pub empirical: f64,
    pub predicted: f64,
}

impl TailCheck {
    pub fn ratio(&self) -> f64 {
        self.empirical / self.predicted
    }
}

/// Compares `P(Z > z_q)` measured on `sorted` against `predicted(z_q)`.
pub fn tail_check(sorted: &[f64], quantile: f64, predicted: impl Fn(f64) -> f64) -> TailCheck {
    let n = sorted.len();
    let k = ((quantile * n as f64).ceil() as usize).clamp(1, n) - 1;
    let z = sorted[k];
    let above = n - sorted.partition_point(|&v| v <= z);
    TailCheck { quantile, z, empirical: above as f64 / n as f64, predicted: predicted(z) }
}

/// Fraction of samples strictly above `threshold`.
pub fn empirical_survival(samples: &[f64], threshold: f64) -> f64 {
    samples.iter().filter(|&&v| v > threshold).count() as f64 / samples.len() as f64
}

const CHUNK: usize = 1 << 14;

/// Deterministic parallel generation: chunk `c` always uses stream `(seed, tag, c)`.
fn generate(count: usize, seed: u64, tag: u64, f: impl Fn(&mut rng::StreamRng) -> f64 + Sync) -> Vec<f64> {
    let chunks = count.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut stream = rng::keyed_stream(seed, &[tag, c as u64]);
            let len = CHUNK.min(count - c * CHUNK);
            let f = &f;
            (0..len).map(move |_| f(&mut stream)).collect::<Vec<_>>()
        })
        .collect()
}

/// `count` draws of `Z = γ·Y` for the direct link: `γ` from the configured
/// placement and `Y` from `fading`.
pub fn sample_products(cfg: &NetworkConfig, fading: Fading, count: usize, seed: u64) -> Vec<f64> {
    generate(count, seed, 1, |r| {
        let d = sample_user_distance(&cfg.placement, cfg.cell_radius, r);
        let gamma = path_loss(d, cfg).expect("sampled distances are positive");
        gamma * fading.draw(r)
    })
}

/// `count` unit-mean exponential fading powers.
pub fn sample_fading(count: usize, seed: u64) -> Vec<f64> {
    generate(count, seed, 4, |r| -> f64 { Exp1.sample(r) })
}

pub fn sample_normalized_sinr(params: &NormalizedSinr, count: usize, seed: u64) -> Vec<f64> {
    generate(count, seed, 2, |r| params.sample(r))
}

/// For each trial, `max_u γ_u·Y_u` over `users` independent users.
pub fn sample_product_maxima(cfg: &NetworkConfig, fading: Fading, users: usize, trials: usize, seed: u64) -> Vec<f64> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut stream = rng::keyed_stream(seed, &[3, users as u64, t as u64]);
            (0..users)
                .map(|_| {
                    let d = sample_user_distance(&cfg.placement, cfg.cell_radius, &mut stream);
                    cfg.gain_at_sq(d * d) * fading.draw(&mut stream)
                })
                .fold(0.0, f64::max)
        })
        .collect()
}
