//! BPSK modulation, AWGN channel, and LLR computation.
//!
//! Noise is always sampled as `f64` standard normals from a ChaCha12 stream
//! and converted into the working scalar type, so the seed-to-noise mapping
//! is identical for `f32` and `f64` runs. Trial `i` of a sweep uses the
//! stream id `i` of the generator seeded from the configured seed, which
//! makes independent trials reproducible and parallelizable.

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::scalar::FloatT;
use crate::{Error, Result};

/// Converts E_b/N_0 in dB to the noise standard deviation σ_n for unit
/// symbol energy: σ_n = sqrt(1 / (2 · rate · 10^(ebn0/10))).
pub fn ebn0_to_sigma<F: FloatT>(ebn0_db: F, rate: F) -> Result<F> {
    if rate <= F::zero() || rate > F::one() {
        return Err(Error::config(format!("rate {rate} outside (0, 1]")));
    }
    let ten = F::from_f64(10.0).unwrap();
    let snr_lin = ten.powf(ebn0_db / ten);
    let two = F::from_f64(2.0).unwrap();
    Ok((F::one() / (two * rate * snr_lin)).sqrt())
}

/// BPSK mapping x_i = 1 - 2 c_i.
pub fn modulate<F: FloatT>(bits: &[u8]) -> Vec<F> {
    bits.iter()
        .map(|&b| F::from_i32(1 - 2 * i32::from(b & 1)).unwrap())
        .collect()
}

/// Deterministic per-trial noise stream: generator seeded from `seed` with
/// stream id `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial.into());
    rng
}

/// y = x + w with w ~ N(0, σ_n²) per component.
pub fn transmit<F: FloatT>(x: &[F], sigma_n: F, rng: &mut ChaCha12Rng) -> Vec<F> {
    x.iter()
        .map(|&xi| {
            let w: f64 = rng.sample(StandardNormal);
            xi + sigma_n * F::from_f64(w).unwrap()
        })
        .collect()
}

/// Channel LLRs L(c_i) = 2 y_i / σ_n².
pub fn llr<F: FloatT>(y: &[F], sigma_n: F) -> Result<Vec<F>> {
    if sigma_n <= F::zero() {
        return Err(Error::config(format!("sigma_n {sigma_n} must be positive")));
    }
    let scale = F::from_f64(2.0).unwrap() / (sigma_n * sigma_n);
    Ok(y.iter().map(|&yi| scale * yi).collect())
}

/// Elementwise hard decision: y_i >= 0 maps to bit 0.
pub fn hard_decision<F: FloatT>(y: &[F]) -> Vec<u8> {
    y.iter().map(|&yi| u8::from(yi < F::zero())).collect()
}
