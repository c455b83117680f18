//! Monte-Carlo experiment driver, genie-aided soft-weight calibration, and
//! closed-form complexity accounting.

use std::io::Write;
use std::path::Path;

use rand::prelude::*;
use rayon::prelude::*;

use crate::channel;
use crate::decoder::{self, DecoderConfig, GenieMode};
use crate::galois::{Field, Symbol};
use crate::product::ProductCode;
use crate::reed_solomon::RsCode;
use crate::scalar::FloatT;
use crate::{Error, Result};

/// Trials per parallel batch between stopping-rule checks.
const BATCH: u64 = 256;

/// Full sweep configuration.
#[derive(Debug, Clone)]
pub struct SimConfig<F> {
    pub p: u32,
    pub k: usize,
    pub w: usize,
    pub l: usize,
    /// Optional primitive-polynomial override for cross-checks.
    pub primitive_poly: Option<u32>,
    pub sparsify_passes: usize,
    pub ebn0_db: Vec<F>,
    pub decoder: DecoderConfig<F>,
    /// Stop an SNR point once this many frame errors are collected...
    pub min_frame_errors: u64,
    /// ...or once this many frames have been simulated, whichever is first.
    pub max_frames: u64,
    pub seed: u64,
    /// Count freezes that disagree with the transmitted frame.
    pub genie_audit: bool,
}

impl<F: FloatT> SimConfig<F> {
    pub fn build_code(&self) -> Result<ProductCode> {
        let field = match self.primitive_poly {
            Some(poly) => Field::with_polynomial(self.p, poly)?,
            None => Field::new(self.p)?,
        };
        let rs = RsCode::new(field, self.k)?;
        ProductCode::with_sparsify_passes(rs, self.w, self.l, self.sparsify_passes)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ebn0_db.is_empty() {
            return Err(Error::config("E_b/N_0 list is empty"));
        }
        if self.min_frame_errors == 0 {
            return Err(Error::config("min_frame_errors must be at least 1"));
        }
        Ok(())
    }
}

/// Accumulated counters for one SNR point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrResult {
    pub ebn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ld_bit_errors: u64,
    pub ld_frame_errors: u64,
    pub iterations: u64,
    pub bm_invocations: u64,
    pub cn_ops: u64,
    pub vn_ops: u64,
    pub undetected_freezes: u64,
    /// Bits per frame, for BER normalization.
    pub n_p: usize,
}

impl SnrResult {
    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / (self.frames as f64 * self.n_p as f64)
    }

    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.frames as f64
    }

    pub fn ld_ber(&self) -> f64 {
        self.ld_bit_errors as f64 / (self.frames as f64 * self.n_p as f64)
    }

    pub fn ld_fer(&self) -> f64 {
        self.ld_frame_errors as f64 / self.frames as f64
    }

    pub fn avg_iterations(&self) -> f64 {
        self.iterations as f64 / self.frames as f64
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct TrialOut {
    bit_errors: u64,
    frame_error: u64,
    ld_bit_errors: u64,
    ld_frame_error: u64,
    iterations: u64,
    bm_invocations: u64,
    cn_ops: u64,
    vn_ops: u64,
    undetected_freezes: u64,
}

fn run_trial<F: FloatT>(
    pc: &ProductCode,
    cfg: &SimConfig<F>,
    sigma: F,
    snr_idx: usize,
    trial: u64,
) -> TrialOut {
    let stream = ((snr_idx as u64) << 40) | trial;
    let mut rng = channel::trial_rng(cfg.seed, stream);
    let q = pc.rs().field().q() as u16;
    let messages: Vec<Vec<Symbol>> = (0..pc.l())
        .map(|_| (0..pc.rs().k()).map(|_| rng.random_range(0..q)).collect())
        .collect();
    let frame = pc.encode(&messages);
    let x: Vec<F> = channel::modulate(&frame);
    let y = channel::transmit(&x, sigma, &mut rng);
    let genie = if cfg.genie_audit {
        GenieMode::Audit { transmitted: frame.clone() }
    } else {
        GenieMode::Off
    };
    let res = decoder::decode_frame(pc, &y, sigma, &cfg.decoder, &genie);

    let bit_errors = res
        .bits
        .iter()
        .zip(&frame)
        .filter(|(a, b)| a != b)
        .count() as u64;
    let ld_bit_errors = res
        .ld_bits
        .iter()
        .zip(&frame)
        .filter(|(a, b)| a != b)
        .count() as u64;
    TrialOut {
        bit_errors,
        frame_error: u64::from(bit_errors > 0),
        ld_bit_errors,
        ld_frame_error: u64::from(ld_bit_errors > 0),
        iterations: res.stats.iterations,
        bm_invocations: res.stats.bm_invocations,
        cn_ops: res.stats.cn_ops,
        vn_ops: res.stats.vn_ops,
        undetected_freezes: res.stats.undetected_freezes,
    }
}

/// Runs the Monte-Carlo sweep. LD-only and full-decoding error counts come
/// from the same noise realizations, so the comparison is paired. Results
/// are bit-reproducible for a fixed seed regardless of thread scheduling:
/// trial `i` always uses stream `i` and all accumulators are integers.
pub fn run_sweep<F: FloatT>(cfg: &SimConfig<F>) -> Result<Vec<SnrResult>> {
    cfg.validate()?;
    let pc = cfg.build_code()?;
    let rate = F::from_f64(pc.rate()).unwrap();
    let mut out = Vec::with_capacity(cfg.ebn0_db.len());
    for (snr_idx, &ebn0) in cfg.ebn0_db.iter().enumerate() {
        let sigma = channel::ebn0_to_sigma(ebn0, rate)?;
        let mut acc = SnrResult {
            ebn0_db: ebn0.as_f64(),
            frames: 0,
            bit_errors: 0,
            frame_errors: 0,
            ld_bit_errors: 0,
            ld_frame_errors: 0,
            iterations: 0,
            bm_invocations: 0,
            cn_ops: 0,
            vn_ops: 0,
            undetected_freezes: 0,
            n_p: pc.n_p(),
        };
        while acc.frame_errors < cfg.min_frame_errors && acc.frames < cfg.max_frames {
            let batch = BATCH.min(cfg.max_frames - acc.frames);
            let outs: Vec<TrialOut> = (acc.frames..acc.frames + batch)
                .into_par_iter()
                .map(|trial| run_trial(&pc, cfg, sigma, snr_idx, trial))
                .collect();
            for t in outs {
                acc.frames += 1;
                acc.bit_errors += t.bit_errors;
                acc.frame_errors += t.frame_error;
                acc.ld_bit_errors += t.ld_bit_errors;
                acc.ld_frame_errors += t.ld_frame_error;
                acc.iterations += t.iterations;
                acc.bm_invocations += t.bm_invocations;
                acc.cn_ops += t.cn_ops;
                acc.vn_ops += t.vn_ops;
                acc.undetected_freezes += t.undetected_freezes;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// One point of the genie-aided soft-weight calibration.
#[derive(Debug, Clone, Copy)]
pub struct GeniePoint {
    pub ebn0_db: f64,
    pub avg_soft_weight: f64,
    pub max_soft_weight: f64,
    /// Number of correct freezes observed.
    pub samples: u64,
}

/// Genie-aided calibration sweep: decodes `max_frames` frames per SNR point
/// with the freeze gate replaced by exact knowledge of the transmitted frame
/// and reports the average and maximum soft weight over genuinely correct
/// BM outputs. A threshold slightly below the reported maximum keeps correct
/// freezes while rejecting miscorrections.
pub fn genie_sweep<F: FloatT>(cfg: &SimConfig<F>) -> Result<Vec<GeniePoint>> {
    cfg.validate()?;
    let pc = cfg.build_code()?;
    let rate = F::from_f64(pc.rate()).unwrap();
    let mut out = Vec::with_capacity(cfg.ebn0_db.len());
    for (snr_idx, &ebn0) in cfg.ebn0_db.iter().enumerate() {
        let sigma = channel::ebn0_to_sigma(ebn0, rate)?;
        let partials: Vec<(f64, f64, u64)> = (0..cfg.max_frames)
            .into_par_iter()
            .map(|trial| {
                let stream = ((snr_idx as u64) << 40) | trial;
                let mut rng = channel::trial_rng(cfg.seed, stream);
                let q = pc.rs().field().q() as u16;
                let messages: Vec<Vec<Symbol>> = (0..pc.l())
                    .map(|_| (0..pc.rs().k()).map(|_| rng.random_range(0..q)).collect())
                    .collect();
                let frame = pc.encode(&messages);
                let x: Vec<F> = channel::modulate(&frame);
                let y = channel::transmit(&x, sigma, &mut rng);
                let genie = GenieMode::Calibrate { transmitted: frame };
                let res = decoder::decode_frame(&pc, &y, sigma, &cfg.decoder, &genie);
                let mut sum = 0.0;
                let mut max = 0.0f64;
                for &w in &res.stats.correct_soft_weights {
                    sum += w;
                    max = max.max(w);
                }
                (sum, max, res.stats.correct_soft_weights.len() as u64)
            })
            .collect();
        let (sum, max, samples) = partials
            .into_iter()
            .fold((0.0, 0.0f64, 0u64), |(s, m, n), (ps, pm, pn)| {
                (s + ps, m.max(pm), n + pn)
            });
        out.push(GeniePoint {
            ebn0_db: ebn0.as_f64(),
            avg_soft_weight: if samples > 0 { sum / samples as f64 } else { 0.0 },
            max_soft_weight: max,
            samples,
        });
    }
    Ok(out)
}

/// Upper bound on the probability of an undetected error after correcting
/// `lambda` or fewer symbol errors:
/// q^(-2t) Σ_{h=0..λ} C(q-1, h) (q-1)^h, evaluated in the log domain.
pub fn undetected_bound(q: u64, t: u64, lambda: u64) -> Result<f64> {
    if q < 2 || t == 0 || lambda > t {
        return Err(Error::config(format!(
            "invalid parameters q={q}, t={t}, lambda={lambda} (need q >= 2, t >= 1, lambda <= t)"
        )));
    }
    let qm1 = (q - 1) as f64;
    let ln_qm1 = qm1.ln();
    let mut ln_sum = f64::NEG_INFINITY;
    let mut ln_choose = 0.0; // ln C(q-1, 0)
    for h in 0..=lambda {
        if h > 0 {
            ln_choose += ((q - h) as f64 / h as f64).ln();
        }
        let term = ln_choose + h as f64 * ln_qm1;
        // log-sum-exp accumulation
        let (a, b) = if ln_sum > term { (ln_sum, term) } else { (term, ln_sum) };
        ln_sum = a + (b - a).exp().ln_1p();
    }
    Ok((ln_sum - 2.0 * t as f64 * (q as f64).ln()).exp())
}

/// Parameters of the complexity model.
#[derive(Debug, Clone, Copy)]
pub struct ComplexityModel {
    /// Density ρ of H̃_b.
    pub rho: f64,
    pub m_b: usize,
    pub n_b: usize,
    pub w: usize,
    pub l: usize,
    pub p: usize,
    pub n: usize,
    pub k: usize,
}

impl ComplexityModel {
    pub fn of(pc: &ProductCode) -> ComplexityModel {
        ComplexityModel {
            rho: pc.h_tilde().density(),
            m_b: pc.rs().m_bits(),
            n_b: pc.rs().n_bits(),
            w: pc.w(),
            l: pc.l(),
            p: pc.rs().field().p() as usize,
            n: pc.rs().n(),
            k: pc.rs().k(),
        }
    }
}

/// Exact and approximate per-iteration operation counts for the CN and VN
/// updates.
#[derive(Debug, Clone, Copy)]
pub struct OpCounts {
    pub cn_exact: f64,
    pub vn_exact: f64,
    /// Shared approximation (ρ m_b + 1) n_b L for both counts.
    pub approx: f64,
}

/// N_CN = m_b L (ρ n_b + ceil(log2 ρ n_b) - 2) + (n_b/w)(wL+1 + ceil(log2(wL+1)) - 2)
/// and N_VN = n_b L (ρ m_b + 1) + n_b/w, with the common approximation
/// (ρ m_b + 1) n_b L.
pub fn predicted_cn_vn_ops(m: &ComplexityModel) -> OpCounts {
    let upper_deg = m.rho * m.n_b as f64;
    let lower_deg = (m.w * m.l + 1) as f64;
    let spc_rows = (m.n_b / m.w) as f64;
    let cn_exact = (m.m_b * m.l) as f64 * (upper_deg + upper_deg.log2().ceil() - 2.0)
        + spc_rows * (lower_deg + lower_deg.log2().ceil() - 2.0);
    let vn_exact = (m.n_b * m.l) as f64 * (m.rho * m.m_b as f64 + 1.0) + spc_rows;
    let approx = (m.rho * m.m_b as f64 + 1.0) * (m.n_b * m.l) as f64;
    OpCounts { cn_exact, vn_exact, approx }
}

/// One row of the normalized-complexity comparison: real-number operations
/// per bit, BM-HDD invocations per bit, and parity-check GF multiplications
/// per bit.
#[derive(Debug, Clone, Copy)]
pub struct NormalizedRow {
    pub real_ops_per_bit: f64,
    pub bm_per_bit: f64,
    pub parity_mults_per_bit: f64,
}

/// Upper bounds for the proposed scheme:
/// N̄_1,C <= 2(ρ m_b + 1) I_avg, N̄_1,H <= I_avg / n_b, plus (n-k)/p · I_avg
/// parity-check multiplications per bit.
pub fn proposed_complexity(m: &ComplexityModel, i_avg: f64) -> NormalizedRow {
    NormalizedRow {
        real_ops_per_bit: 2.0 * (m.rho * m.m_b as f64 + 1.0) * i_avg,
        bm_per_bit: i_avg / m.n_b as f64,
        parity_mults_per_bit: (m.n - m.k) as f64 / m.p as f64 * i_avg,
    }
}

/// The Chase-Pyndiah comparison row for a TPC with (n,k) RS component codes
/// over GF(2^p) and 2^η test patterns:
/// N̄_2,C ≈ 3·2^η I_avg, N̄_2,H ≈ 2^η I_avg / n_b, plus 2^η (n-k)/p · I_avg
/// parity-check multiplications per bit.
pub fn pyndiah_complexity(eta: u32, n: usize, k: usize, p: usize, i_avg: f64) -> NormalizedRow {
    let patterns = (1u64 << eta) as f64;
    let n_b = (n * p) as f64;
    NormalizedRow {
        real_ops_per_bit: 3.0 * patterns * i_avg,
        bm_per_bit: patterns * i_avg / n_b,
        parity_mults_per_bit: patterns * (n - k) as f64 / p as f64 * i_avg,
    }
}

/// Upper bound on GF(2^p) multiplications in one BM-HDD run:
/// 7(n-k)² + (n-k)(3n+1)/2.
pub fn bm_mult_bound(n: u64, k: u64) -> Result<u64> {
    if n <= k {
        return Err(Error::config(format!("need n > k, got n={n}, k={k}")));
    }
    let d = n - k;
    Ok(7 * d * d + d * (3 * n + 1) / 2)
}

/// CSV rendering of sweep results: a fixed 12-column header and one line per
/// SNR point, numbers in Rust's shortest round-trip float format.
pub fn results_to_csv(results: &[SnrResult]) -> String {
    let mut out = String::from(
        "ebn0_db,frames,bit_errors,frame_errors,ber,fer,ld_ber,avg_iterations,\
         bm_invocations,cn_ops,vn_ops,undetected_freezes\n",
    );
    for r in results {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.ebn0_db,
            r.frames,
            r.bit_errors,
            r.frame_errors,
            r.ber(),
            r.fer(),
            r.ld_ber(),
            r.avg_iterations(),
            r.bm_invocations,
            r.cn_ops,
            r.vn_ops,
            r.undetected_freezes
        ));
    }
    out
}

pub fn write_csv(results: &[SnrResult], path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(results_to_csv(results).as_bytes())?;
    Ok(())
}
