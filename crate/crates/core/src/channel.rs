//! Per-user transmission and computing rates.
//!
//! The base station serves `K` single-antenna users with zero-forcing
//! beamforming from `N_t` antennas. Transmit power compensates path loss so
//! every user sees the same received power `β`, which makes the ensemble
//! average rate the same for all users. Small-scale fading is i.i.d.
//! `CN(0, 1)` per draw.
//!
//! Monte-Carlo draws are split into fixed-size chunks, each with its own
//! ChaCha stream derived from the seed, so estimates do not depend on how
//! many threads evaluate them.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_positive, Error, Result};
use crate::model::VideoParams;

/// Draws per independent random stream.
pub const CHUNK_DRAWS: u64 = 4096;

const MAX_REDRAWS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelParams {
    num_users: usize,
    num_antennas: usize,
    bandwidth: f64,
    total_power: f64,
    noise_power: f64,
    pathloss_exponent: f64,
    distances: Vec<f64>,
    mc_samples: u64,
    rng_seed: u64,
}

impl ChannelParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        num_users: usize,
        num_antennas: usize,
        bandwidth: f64,
        total_power: f64,
        noise_power: f64,
        pathloss_exponent: f64,
        distances: Vec<f64>,
        mc_samples: u64,
        rng_seed: u64,
    ) -> Result<Self> {
        if num_users == 0 {
            return Err(Error::InvalidParameter {
                name: "num_users",
                reason: "must be >= 1".into(),
            });
        }
        if num_antennas < num_users {
            return Err(Error::ZfInfeasible {
                antennas: num_antennas,
                users: num_users,
            });
        }
        check_positive("bandwidth", bandwidth)?;
        check_positive("total_power", total_power)?;
        check_positive("noise_power", noise_power)?;
        check_positive("pathloss_exponent", pathloss_exponent)?;
        if distances.len() != num_users {
            return Err(Error::InvalidParameter {
                name: "distances",
                reason: format!("expected {num_users} entries, got {}", distances.len()),
            });
        }
        for &d in &distances {
            check_positive("distances", d)?;
        }
        if mc_samples == 0 {
            return Err(Error::InvalidParameter {
                name: "mc_samples",
                reason: "must be >= 1".into(),
            });
        }
        Ok(Self {
            num_users,
            num_antennas,
            bandwidth,
            total_power,
            noise_power,
            pathloss_exponent,
            distances,
            mc_samples,
            rng_seed,
        })
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn num_antennas(&self) -> usize {
        self.num_antennas
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn total_power(&self) -> f64 {
        self.total_power
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    pub fn pathloss_exponent(&self) -> f64 {
        self.pathloss_exponent
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn mc_samples(&self) -> u64 {
        self.mc_samples
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn with_mc_samples(mut self, mc_samples: u64) -> Result<Self> {
        if mc_samples == 0 {
            return Err(Error::InvalidParameter {
                name: "mc_samples",
                reason: "must be >= 1".into(),
            });
        }
        self.mc_samples = mc_samples;
        Ok(self)
    }

    pub fn with_total_power(mut self, total_power: f64) -> Result<Self> {
        check_positive("total_power", total_power)?;
        self.total_power = total_power;
        Ok(self)
    }

    pub fn with_bandwidth(mut self, bandwidth: f64) -> Result<Self> {
        check_positive("bandwidth", bandwidth)?;
        self.bandwidth = bandwidth;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComputeParams {
    total_flops: f64,
    num_users: usize,
    render_intensity: f64,
}

impl ComputeParams {
    /// `total_flops` in FLOP/s shared equally by `num_users`;
    /// `render_intensity` in FLOP per rendered bit.
    pub fn new(total_flops: f64, num_users: usize, render_intensity: f64) -> Result<Self> {
        check_positive("total_flops", total_flops)?;
        if num_users == 0 {
            return Err(Error::InvalidParameter {
                name: "num_users",
                reason: "must be >= 1".into(),
            });
        }
        check_positive("render_intensity", render_intensity)?;
        Ok(Self {
            total_flops,
            num_users,
            render_intensity,
        })
    }
}

/// Rendered bits per second available to one user.
pub fn computing_rate(p: &ComputeParams) -> f64 {
    p.total_flops / (p.num_users as f64 * p.render_intensity)
}

/// Physical rate scaled by the compression ratio.
pub fn equivalent_rate(c_com: f64, video: &VideoParams) -> f64 {
    c_com * video.compression_ratio()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerAllocation {
    /// Received power common to all users.
    pub beta: f64,
    pub per_user: Vec<f64>,
}

/// Path-loss compensating split: `p_k = β·d_k^α` with `Σ p_k = P`.
pub fn power_allocation(p: &ChannelParams) -> PowerAllocation {
    let losses: Vec<f64> = p.distances.iter().map(|d| d.powf(p.pathloss_exponent)).collect();
    let beta = p.total_power / losses.iter().sum::<f64>();
    PowerAllocation {
        beta,
        per_user: losses.iter().map(|l| beta * l).collect(),
    }
}

/// One small-scale fading realisation with its zero-forcing beamformers.
#[derive(Debug, Clone)]
pub struct ZfDraw {
    /// `K x N_t`; row `k` is `h_k^H`.
    pub channel: DMatrix<Complex64>,
    /// `N_t x K`; unit-norm column `k` is `w_k`.
    pub beamformers: DMatrix<Complex64>,
    /// `|h_k^H w_k|^2` per user.
    pub gains: Vec<f64>,
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws one channel and its normalised pseudo-inverse beamformers.
pub fn zf_draw<R: Rng>(rng: &mut R, num_antennas: usize, num_users: usize) -> Result<ZfDraw> {
    for _ in 0..MAX_REDRAWS {
        let channel = DMatrix::from_fn(num_users, num_antennas, |_, _| complex_gaussian(rng));
        let gram = &channel * channel.adjoint();
        let Some(chol) = gram.cholesky() else {
            continue;
        };
        let pinv = channel.adjoint() * chol.inverse();
        let mut beamformers = pinv;
        let mut gains = Vec::with_capacity(num_users);
        let mut singular = false;
        for k in 0..num_users {
            let norm = beamformers.column(k).norm();
            if !(norm.is_finite() && norm > 0.0) {
                singular = true;
                break;
            }
            beamformers.column_mut(k).unscale_mut(norm);
            gains.push((channel.row(k) * beamformers.column(k))[(0, 0)].norm_sqr());
        }
        if !singular {
            return Ok(ZfDraw {
                channel,
                beamformers,
                gains,
            });
        }
    }
    Err(Error::SingularDraw { retries: MAX_REDRAWS })
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn chunk_count(samples: u64) -> u64 {
    samples.div_ceil(CHUNK_DRAWS)
}

fn draws_in_chunk(samples: u64, chunk: u64) -> u64 {
    (samples - chunk * CHUNK_DRAWS).min(CHUNK_DRAWS)
}

/// Reproducible stream of per-draw gain vectors (one entry per user).
pub struct ZfGains {
    seed: u64,
    num_antennas: usize,
    num_users: usize,
    samples: u64,
    produced: u64,
    rng: ChaCha8Rng,
}

impl Iterator for ZfGains {
    type Item = Result<Vec<f64>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.produced >= self.samples {
            return None;
        }
        if self.produced > 0 && self.produced.is_multiple_of(CHUNK_DRAWS) {
            self.rng = chunk_rng(self.seed, self.produced / CHUNK_DRAWS);
        }
        self.produced += 1;
        Some(zf_draw(&mut self.rng, self.num_antennas, self.num_users).map(|d| d.gains))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.samples - self.produced) as usize;
        (left, Some(left))
    }
}

/// `mc_samples` draws of the zero-forcing equivalent channel gains.
pub fn zf_equivalent_gains(p: &ChannelParams) -> ZfGains {
    ZfGains {
        seed: p.rng_seed,
        num_antennas: p.num_antennas,
        num_users: p.num_users,
        samples: p.mc_samples,
        produced: 0,
        rng: chunk_rng(p.rng_seed, 0),
    }
}

fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

/// Mean of `B·log2(1 + snr_scale·g)` over the given gains.
pub fn average_rate<I: IntoIterator<Item = f64>>(bandwidth: f64, snr_scale: f64, gains: I) -> f64 {
    let (sum, n) = gains
        .into_iter()
        .fold((0.0, 0u64), |(s, n), g| (s + log2_1p(snr_scale * g), n + 1));
    if n == 0 {
        return 0.0;
    }
    bandwidth * sum / n as f64
}

fn chunk_log_sum(p: &ChannelParams, snr_scale: f64, chunk: u64) -> Result<f64> {
    let mut rng = chunk_rng(p.rng_seed, chunk);
    let mut sum = 0.0;
    for _ in 0..draws_in_chunk(p.mc_samples, chunk) {
        let draw = zf_draw(&mut rng, p.num_antennas, p.num_users)?;
        sum += draw.gains.iter().map(|g| log2_1p(snr_scale * g)).sum::<f64>();
    }
    Ok(sum)
}

/// Monte-Carlo estimate of `E[B·log2(1 + β·g/σ²)]`, averaged over draws and
/// users. Bit-identical for a given seed regardless of thread count.
pub fn ensemble_average_rate(p: &ChannelParams) -> Result<f64> {
    let snr_scale = power_allocation(p).beta / p.noise_power;
    let chunks: Vec<u64> = (0..chunk_count(p.mc_samples)).collect();
    #[cfg(feature = "parallel")]
    let iter = chunks.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = chunks.iter();
    let partial: Vec<f64> = iter
        .map(|&c| chunk_log_sum(p, snr_scale, c))
        .collect::<Result<_>>()?;
    let total: f64 = partial.iter().sum();
    let values = p.mc_samples as f64 * p.num_users as f64;
    Ok(p.bandwidth * total / values)
}

/// Everything derived from channel and compute parameters for one user.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub rng_seed: u64,
    pub mc_samples: u64,
    pub beta: f64,
    pub per_user_power: Vec<f64>,
    pub c_com: f64,
    pub c_com_equiv: f64,
    pub c_cpt: f64,
}

pub fn derive_rates(
    channel: &ChannelParams,
    compute: &ComputeParams,
    video: &VideoParams,
) -> Result<RateReport> {
    let power = power_allocation(channel);
    let c_com = ensemble_average_rate(channel)?;
    Ok(RateReport {
        rng_seed: channel.rng_seed,
        mc_samples: channel.mc_samples,
        beta: power.beta,
        per_user_power: power.per_user,
        c_com,
        c_com_equiv: equivalent_rate(c_com, video),
        c_cpt: computing_rate(compute),
    })
}
