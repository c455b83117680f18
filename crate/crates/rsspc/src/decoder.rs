//! Two-phase decoder for RS-SPC product codes.
//!
//! Local decoding (LD) runs BM-HDD on every RS row of the frame and freezes
//! rows that decode to a codeword with a soft weight below the threshold.
//! Global decoding (GD) then iterates an APP-based min-sum schedule over the
//! composite parity-check matrix: stage-1 check updates over the L diagonal
//! copies of H̃_b on cyclically shifted row sub-vectors, stage-2 updates over
//! the SPC checks, a damped variable-node update restricted to the active
//! set, and a further round of BM-HDD freeze attempts per iteration.

use crate::binary_image;
use crate::channel;
use crate::product::ProductCode;
use crate::reed_solomon::DecodeOutcome;
use crate::scalar::FloatT;

/// Decoder parameters.
///
/// `n2 = 1` is the low-complexity scheme (LCS); `n2 = n` the high-complexity
/// scheme (HCS). Other values are accepted.
#[derive(Debug, Clone)]
pub struct DecoderConfig<F> {
    /// Maximum inner iterations N1 per outer round.
    pub n1: usize,
    /// Maximum outer iterations N2.
    pub n2: usize,
    /// Stage-1 damping factor α1.
    pub alpha1: F,
    /// Stage-2 damping factor α2.
    pub alpha2: F,
    /// Soft-weight freeze threshold W_θ in [0, 1].
    pub w_theta: F,
    /// Magnitude pinned onto frozen bits; must dominate any damped LLR sum.
    pub llr_clamp: F,
}

impl<F: FloatT> DecoderConfig<F> {
    /// LCS with the damping factors used throughout the experiments.
    pub fn lcs(n1: usize, w_theta: F) -> Self {
        DecoderConfig {
            n1,
            n2: 1,
            alpha1: F::from_f64(0.32).unwrap(),
            alpha2: F::from_f64(0.8).unwrap(),
            w_theta,
            llr_clamp: F::from_f64(128.0).unwrap(),
        }
    }

    /// HCS: one outer round per cyclic shift of the component code.
    pub fn hcs(n1: usize, w_theta: F, n: usize) -> Self {
        DecoderConfig { n2: n, ..Self::lcs(n1, w_theta) }
    }
}

/// How the freeze gate interacts with knowledge of the transmitted frame.
#[derive(Debug, Clone)]
pub enum GenieMode {
    /// Normal operation: freeze on (codeword ∧ W < W_θ).
    Off,
    /// Normal gate, but count freezes that disagree with the transmitted
    /// frame (undetected errors).
    Audit { transmitted: Vec<u8> },
    /// Calibration: freeze only rows that decoded to the transmitted row,
    /// recording their soft weights (the quantities a threshold sweep plots).
    Calibrate { transmitted: Vec<u8> },
}

impl GenieMode {
    fn transmitted(&self) -> Option<&[u8]> {
        match self {
            GenieMode::Off => None,
            GenieMode::Audit { transmitted } | GenieMode::Calibrate { transmitted } => {
                Some(transmitted)
            }
        }
    }
}

/// Per-frame operation counters and convergence bookkeeping.
#[derive(Debug, Clone, Default)]
pub struct FrameStats {
    /// Inner iterations actually executed.
    pub iterations: u64,
    /// BM-HDD invocations (LD and GD combined).
    pub bm_invocations: u64,
    /// Check-node comparison count, d_c + ceil(log2 d_c) - 2 per processed row.
    pub cn_ops: u64,
    /// Variable-node addition count, one per check neighbor of each updated bit.
    pub vn_ops: u64,
    /// Components frozen with a wrong codeword (genie audit mode only).
    pub undetected_freezes: u64,
    /// Unfrozen components after LD.
    pub ld_n_err: usize,
    /// Unfrozen components at exit.
    pub final_n_err: usize,
    /// Soft weights of genuinely correct freezes (calibration mode only).
    pub correct_soft_weights: Vec<f64>,
}

/// Mutable per-frame decoder state.
#[derive(Debug, Clone)]
pub struct DecoderState<F> {
    /// Channel observations, retained for soft weights.
    pub y: Vec<F>,
    /// Hard decision of `y`, retained for soft weights.
    pub hard0: Vec<u8>,
    /// Channel LLRs 2y/σ².
    pub channel_llr: Vec<F>,
    /// Current LLR vector L^κ1.
    pub llr: Vec<F>,
    /// Initialization vector L^0 of the current outer round.
    pub llr0: Vec<F>,
    /// Per-component activity; the active set A_c is the union of the ranges
    /// of active components plus the full parity range.
    pub active: Vec<bool>,
    /// Recorded decoded bits of frozen components.
    pub frozen: Vec<Option<Vec<u8>>>,
    /// Number of active (unfrozen) components.
    pub n_err: usize,
}

impl<F: FloatT> DecoderState<F> {
    /// Fresh state: everything active, LLRs from the channel.
    pub fn new(pc: &ProductCode, y: &[F], sigma_n: F) -> Self {
        assert_eq!(y.len(), pc.n_p());
        let channel_llr = channel::llr(y, sigma_n).expect("sigma_n > 0");
        DecoderState {
            y: y.to_vec(),
            hard0: channel::hard_decision(y),
            llr: channel_llr.clone(),
            llr0: channel_llr.clone(),
            channel_llr,
            active: vec![true; pc.l()],
            frozen: vec![None; pc.l()],
            n_err: pc.l(),
        }
    }

    /// Current hard decision, with frozen components taken from their
    /// recorded sequences. Once every component is frozen the parity bits
    /// are recomputed from the decoded rows, so a successful decode always
    /// yields a consistent product codeword.
    pub fn decision(&self, pc: &ProductCode) -> Vec<u8> {
        let mut bits: Vec<u8> = self.llr.iter().map(|&l| u8::from(l < F::zero())).collect();
        for (l, frozen) in self.frozen.iter().enumerate() {
            if let Some(cw) = frozen {
                bits[pc.component_range(l)].copy_from_slice(cw);
            }
        }
        if self.n_err == 0 {
            let n_b = pc.n_b();
            let w = pc.w();
            for j in 0..pc.num_parity_bits() {
                let mut parity = 0u8;
                for l in 0..pc.l() {
                    let base = l * n_b + j * w;
                    for o in 0..w {
                        parity ^= bits[base + o] & 1;
                    }
                }
                bits[pc.l() * n_b + j] = parity;
            }
        }
        bits
    }
}

/// Normalized ML metric of a decoded component sequence: reliability-weighted
/// disagreement with the channel hard decision,
/// W = Σ |y_i| (y_i^H ⊕ ĉ_i) / Σ |y_i|, in [0, 1]. The all-erasure
/// degenerate case Σ|y_i| = 0 is defined as W = 0.
pub fn soft_weight<F: FloatT>(y_sub: &[F], hard_sub: &[u8], decoded_sub: &[u8]) -> F {
    debug_assert_eq!(y_sub.len(), hard_sub.len());
    debug_assert_eq!(y_sub.len(), decoded_sub.len());
    let mut num = F::zero();
    let mut den = F::zero();
    for ((&y, &h), &c) in y_sub.iter().zip(hard_sub).zip(decoded_sub) {
        let mag = y.abs();
        den += mag;
        if (h ^ c) & 1 == 1 {
            num += mag;
        }
    }
    if den == F::zero() {
        F::zero()
    } else {
        num / den
    }
}

/// Pins component `l` to `decoded`: records the sequence, removes the
/// component from the active set, sets its LLRs to ±clamp, and decrements
/// the unfrozen-component count.
pub fn freeze<F: FloatT>(
    state: &mut DecoderState<F>,
    pc: &ProductCode,
    l: usize,
    decoded: &[u8],
    cfg: &DecoderConfig<F>,
) {
    assert!(state.active[l], "component {l} already frozen");
    debug_assert_eq!(decoded.len(), pc.n_b());
    state.active[l] = false;
    state.frozen[l] = Some(decoded.to_vec());
    state.n_err -= 1;
    for (offset, j) in pc.component_range(l).enumerate() {
        state.llr[j] = if decoded[offset] & 1 == 1 {
            -cfg.llr_clamp
        } else {
            cfg.llr_clamp
        };
    }
}

/// Cyclically rotates each of the L component sub-vectors by `mu` bits,
/// leaving the parity sub-vector untouched. Forward rotation moves the last
/// `mu` entries of each sub-vector to its front.
pub fn shift_subvectors<F: FloatT>(v: &mut [F], n_b: usize, l: usize, mu: usize, inverse: bool) {
    let mu = mu % n_b;
    if mu == 0 {
        return;
    }
    for comp in 0..l {
        let block = &mut v[comp * n_b..(comp + 1) * n_b];
        if inverse {
            block.rotate_left(mu);
        } else {
            block.rotate_right(mu);
        }
    }
}

#[inline]
fn sign_bit<F: FloatT>(x: F) -> bool {
    x < F::zero()
}

/// One APP-based min-sum row: for every bit on the row, adds into `ext` the
/// product of the signs of the other bits times the minimum magnitude over
/// the other bits. Returns the comparison count d + ceil(log2 d) - 2.
fn min_sum_row<F: FloatT>(support: impl Iterator<Item = usize> + Clone, llr: &[F], ext: &mut [F]) -> u64 {
    let mut min1 = F::infinity();
    let mut min2 = F::infinity();
    let mut argmin = usize::MAX;
    let mut neg_parity = false;
    let mut degree = 0u64;
    for j in support.clone() {
        let v = llr[j];
        neg_parity ^= sign_bit(v);
        let mag = v.abs();
        if mag < min1 {
            min2 = min1;
            min1 = mag;
            argmin = j;
        } else if mag < min2 {
            min2 = mag;
        }
        degree += 1;
    }
    if degree < 2 {
        return 0;
    }
    for j in support {
        let others_negative = neg_parity ^ sign_bit(llr[j]);
        let mag = if j == argmin { min2 } else { min1 };
        ext[j] += if others_negative { -mag } else { mag };
    }
    degree + (64 - (degree - 1).leading_zeros() as u64).max(1) - 2
}

/// Stage-1 extrinsic sums: min-sum over every row of the L diagonal copies of
/// H̃_b. The parity block of the output is structurally zero. Returns the
/// extrinsic vector and the comparison count.
pub fn cn_update_upper<F: FloatT>(pc: &ProductCode, llr: &[F]) -> (Vec<F>, u64) {
    let mut ext = vec![F::zero(); pc.n_p()];
    let mut ops = 0u64;
    for comp in 0..pc.l() {
        let base = comp * pc.n_b();
        for support in pc.upper_row_support() {
            ops += min_sum_row(support.iter().map(|&c| base + c as usize), llr, &mut ext);
        }
    }
    (ext, ops)
}

/// Stage-2 extrinsic sums: min-sum over the SPC rows tying tuple j of every
/// component to parity bit j.
pub fn cn_update_lower<F: FloatT>(pc: &ProductCode, llr: &[F]) -> (Vec<F>, u64) {
    let mut ext = vec![F::zero(); pc.n_p()];
    let mut ops = 0u64;
    for j in 0..pc.num_parity_bits() {
        let support = pc.lower_check_support(j);
        ops += min_sum_row(support.iter().copied(), llr, &mut ext);
    }
    (ext, ops)
}

/// BM-HDD pass over the active components of the current hard decision,
/// applying the freeze gate. Shared by LD and step GD-7.
fn bm_freeze_pass<F: FloatT>(
    pc: &ProductCode,
    state: &mut DecoderState<F>,
    cfg: &DecoderConfig<F>,
    genie: &GenieMode,
    stats: &mut FrameStats,
) {
    let hard = state.decision(pc);
    for l in 0..pc.l() {
        if !state.active[l] {
            continue;
        }
        let range = pc.component_range(l);
        let symbols = binary_image::bits_to_word(pc.rs(), &hard[range.clone()]);
        stats.bm_invocations += 1;
        let DecodeOutcome::Corrected { codeword, .. } = pc.rs().bm_decode(&symbols) else {
            continue;
        };
        let decoded_bits = binary_image::word_to_bits(pc.rs(), &codeword);
        let w = soft_weight(&state.y[range.clone()], &state.hard0[range.clone()], &decoded_bits);
        let is_correct = genie
            .transmitted()
            .map(|tx| tx[range.clone()] == decoded_bits[..]);
        let accept = match genie {
            GenieMode::Calibrate { .. } => is_correct == Some(true),
            _ => w < cfg.w_theta,
        };
        if !accept {
            continue;
        }
        freeze(state, pc, l, &decoded_bits, cfg);
        match genie {
            GenieMode::Audit { .. } if is_correct == Some(false) => {
                stats.undetected_freezes += 1;
            }
            GenieMode::Calibrate { .. } => {
                stats.correct_soft_weights.push(w.as_f64());
            }
            _ => {}
        }
    }
}

/// Local decoding: BM-HDD on every component of the channel hard decision
/// with the soft-weight freeze gate. Global decoding is skipped entirely when
/// this leaves no active component.
pub fn local_decode<F: FloatT>(
    pc: &ProductCode,
    state: &mut DecoderState<F>,
    cfg: &DecoderConfig<F>,
    genie: &GenieMode,
    stats: &mut FrameStats,
) {
    bm_freeze_pass(pc, state, cfg, genie, stats);
    stats.ld_n_err = state.n_err;
}

/// Global decoding: the two-stage shifted min-sum iteration with damped
/// variable-node updates and per-iteration freeze attempts. Exhausting
/// N1·N2 iterations returns with the best-effort decision; failure is
/// observable through `final_n_err` in the stats.
pub fn global_decode<F: FloatT>(
    pc: &ProductCode,
    state: &mut DecoderState<F>,
    cfg: &DecoderConfig<F>,
    genie: &GenieMode,
    stats: &mut FrameStats,
) {
    let n_b = pc.n_b();
    let p = pc.rs().field().p() as usize;
    let data_len = pc.l() * n_b;

    'outer: for kappa2 in 0..cfg.n2 {
        if state.n_err == 0 {
            break;
        }
        let mu = (p * kappa2) % n_b;

        // GD-2: re-initialize from the channel on the active set, pinned
        // values elsewhere. A_c and frozen results persist across rounds.
        for (l, &active) in state.active.iter().enumerate() {
            for j in pc.component_range(l) {
                state.llr0[j] = if active {
                    state.channel_llr[j]
                } else {
                    state.llr[j] // already ±clamp from the freeze
                };
            }
        }
        for j in data_len..pc.n_p() {
            state.llr0[j] = state.channel_llr[j];
        }
        state.llr.copy_from_slice(&state.llr0);

        for _kappa1 in 0..cfg.n1 {
            // GD-3: shift, stage-1 update, shift back.
            shift_subvectors(&mut state.llr, n_b, pc.l(), mu, false);
            let (mut ext1, ops1) = cn_update_upper(pc, &state.llr);
            shift_subvectors(&mut ext1, n_b, pc.l(), mu, true);
            shift_subvectors(&mut state.llr, n_b, pc.l(), mu, true);

            // GD-4: stage-2 update in natural coordinates.
            let (ext2, ops2) = cn_update_lower(pc, &state.llr);
            stats.cn_ops += ops1 + ops2;

            // GD-5: damped VN update on the active set.
            for (l, &active) in state.active.iter().enumerate() {
                if !active {
                    continue;
                }
                for (offset, j) in pc.component_range(l).enumerate() {
                    state.llr[j] =
                        state.llr0[j] + cfg.alpha1 * ext1[j] + cfg.alpha2 * ext2[j];
                    stats.vn_ops += u64::from(pc.upper_col_degree()[offset]) + 1;
                }
            }
            for j in data_len..pc.n_p() {
                state.llr[j] = state.llr0[j] + cfg.alpha1 * ext1[j] + cfg.alpha2 * ext2[j];
                stats.vn_ops += 1;
            }
            stats.iterations += 1;

            // GD-6/GD-7: hard decision and freeze attempts.
            bm_freeze_pass(pc, state, cfg, genie, stats);
            if state.n_err == 0 {
                break 'outer;
            }
        }
    }
}

/// Frame decode result: the final decision, the LD-only decision from the
/// same channel output, and the counters.
#[derive(Debug, Clone)]
pub struct FrameResult {
    pub bits: Vec<u8>,
    pub ld_bits: Vec<u8>,
    pub stats: FrameStats,
}

/// Runs the full two-phase decode of one received frame.
pub fn decode_frame<F: FloatT>(
    pc: &ProductCode,
    y: &[F],
    sigma_n: F,
    cfg: &DecoderConfig<F>,
    genie: &GenieMode,
) -> FrameResult {
    let mut state = DecoderState::new(pc, y, sigma_n);
    let mut stats = FrameStats::default();
    local_decode(pc, &mut state, cfg, genie, &mut stats);
    let ld_bits = state.decision(pc);
    if state.n_err > 0 {
        global_decode(pc, &mut state, cfg, genie, &mut stats);
    }
    stats.final_n_err = state.n_err;
    FrameResult { bits: state.decision(pc), ld_bits, stats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{Field, Symbol};
    use crate::reed_solomon::RsCode;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn product(p: u32, k: usize, w: usize, l: usize) -> ProductCode {
        let rs = RsCode::new(Field::new(p).unwrap(), k).unwrap();
        ProductCode::new(rs, w, l).unwrap()
    }

    fn random_frame(pc: &ProductCode, rng: &mut ChaCha12Rng) -> Vec<u8> {
        let q = pc.rs().field().q() as u16;
        let messages: Vec<Vec<Symbol>> = (0..pc.l())
            .map(|_| (0..pc.rs().k()).map(|_| rng.random_range(0..q)).collect())
            .collect();
        pc.encode(&messages)
    }

    #[test]
    fn soft_weight_boundaries() {
        let y = [0.5f64, -1.5, 0.25, -0.75];
        let hard = channel::hard_decision(&y);
        assert_eq!(soft_weight(&y, &hard, &hard), 0.0);
        let complement: Vec<u8> = hard.iter().map(|&b| b ^ 1).collect();
        assert_eq!(soft_weight(&y, &hard, &complement), 1.0);
        // one flipped position
        let mut one = hard.clone();
        one[1] ^= 1;
        let expect = 1.5 / (0.5 + 1.5 + 0.25 + 0.75);
        assert!((soft_weight(&y, &hard, &one) - expect).abs() < 1e-12);
        // degenerate all-erasure frame
        assert_eq!(soft_weight(&[0.0f64; 3], &[0; 3], &[1; 3]), 0.0);
    }

    #[test]
    fn shift_identity_and_inverse() {
        let n_b = 6;
        let v0: Vec<f64> = (0..14).map(|i| i as f64).collect(); // 2 comps + 2 parity
        let mut v = v0.clone();
        shift_subvectors(&mut v, n_b, 2, 0, false);
        assert_eq!(v, v0);
        for mu in 1..6 {
            let mut v = v0.clone();
            shift_subvectors(&mut v, n_b, 2, mu, false);
            // parity untouched
            assert_eq!(&v[12..], &v0[12..]);
            // forward moves tail to front
            assert_eq!(v[0], v0[n_b - mu]);
            shift_subvectors(&mut v, n_b, 2, mu, true);
            assert_eq!(v, v0);
        }
    }

    #[test]
    fn shift_by_p_preserves_codeword_syndrome() {
        // RS codes are cyclic: a one-symbol rotation of a codeword image is
        // again a codeword image, so the upper checks stay satisfied.
        let pc = product(3, 3, 1, 2);
        let p = 3;
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..50 {
            let frame = random_frame(&pc, &mut rng);
            let mut soft: Vec<f64> = frame.iter().map(|&b| 1.0 - 2.0 * b as f64).collect();
            for mult in 1..pc.rs().n() {
                shift_subvectors(&mut soft, pc.n_b(), pc.l(), p, false);
                let shifted_bits: Vec<u8> = soft.iter().map(|&v| u8::from(v < 0.0)).collect();
                for comp in 0..pc.l() {
                    let block = &shifted_bits[pc.component_range(comp)];
                    for support in pc.upper_row_support() {
                        let parity =
                            support.iter().fold(0u8, |acc, &c| acc ^ block[c as usize]);
                        assert_eq!(parity, 0, "shift x{mult}");
                    }
                }
            }
        }
    }

    #[test]
    fn min_sum_single_row_example() {
        let llr = [4.0f64, -2.0, 3.0];
        let mut ext = [0.0f64; 3];
        min_sum_row(0..3usize, &llr, &mut ext);
        assert_eq!(ext, [-2.0, 3.0, -2.0]);
    }

    #[test]
    fn min_sum_satisfied_check_reinforces() {
        // even number of negatives: extrinsic sign matches each current sign
        let llr = [1.0f64, -2.0, -3.0, 4.0];
        let mut ext = [0.0f64; 4];
        min_sum_row(0..4usize, &llr, &mut ext);
        for (e, l) in ext.iter().zip(&llr) {
            assert!(e * l > 0.0);
        }
    }

    #[test]
    fn min_sum_magnitude_bounded_by_second_smallest() {
        let mut rng = ChaCha12Rng::seed_from_u64(32);
        for _ in 0..100 {
            let llr: Vec<f64> = (0..8).map(|_| rng.random_range(-5.0..5.0)).collect();
            let mut ext = vec![0.0f64; 8];
            min_sum_row(0..8usize, &llr, &mut ext);
            let mut mags: Vec<f64> = llr.iter().map(|v| v.abs()).collect();
            mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for e in &ext {
                assert!(e.abs() <= mags[1] + 1e-12);
            }
        }
    }

    #[test]
    fn cn_update_op_count_matches_formula() {
        let pc = product(4, 9, 1, 8);
        let llr: Vec<f64> = (0..pc.n_p()).map(|i| (i as f64 * 0.37).sin() + 1.5).collect();
        let (_, ops_lower) = cn_update_lower(&pc, &llr);
        let d = pc.spc_row_weight() as u64;
        let per_row = d + (d as f64).log2().ceil() as u64 - 2;
        assert_eq!(ops_lower, pc.num_parity_bits() as u64 * per_row);
        let (ext1, _) = cn_update_upper(&pc, &llr);
        // parity block of stage-1 extrinsics is structurally zero
        assert!(ext1[pc.l() * pc.n_b()..].iter().all(|&e| e == 0.0));
    }

    #[test]
    fn freeze_semantics() {
        let pc = product(3, 3, 1, 2);
        let cfg = DecoderConfig::lcs(5, 0.1);
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        let frame = random_frame(&pc, &mut rng);
        let y: Vec<f64> = channel::modulate(&frame);
        let mut state = DecoderState::new(&pc, &y, 0.8);
        let decoded: Vec<u8> = frame[pc.component_range(0)].to_vec();
        let before = state.n_err;
        freeze(&mut state, &pc, 0, &decoded, &cfg);
        assert_eq!(state.n_err, before - 1);
        for (offset, j) in pc.component_range(0).enumerate() {
            let expect = if decoded[offset] == 1 { -cfg.llr_clamp } else { cfg.llr_clamp };
            assert_eq!(state.llr[j], expect);
        }
        assert!(!state.active[0]);
    }

    #[test]
    #[should_panic(expected = "already frozen")]
    fn double_freeze_panics() {
        let pc = product(3, 3, 1, 2);
        let cfg = DecoderConfig::lcs(5, 0.1);
        let frame = vec![0u8; pc.n_p()];
        let y: Vec<f64> = channel::modulate(&frame);
        let mut state = DecoderState::new(&pc, &y, 0.8);
        let decoded = vec![0u8; pc.n_b()];
        freeze(&mut state, &pc, 0, &decoded, &cfg);
        freeze(&mut state, &pc, 0, &decoded, &cfg);
    }

    #[test]
    fn noiseless_frame_converges_in_ld() {
        let pc = product(4, 9, 1, 4);
        let cfg = DecoderConfig::lcs(10, 0.05);
        let mut rng = ChaCha12Rng::seed_from_u64(34);
        for _ in 0..20 {
            let frame = random_frame(&pc, &mut rng);
            let y: Vec<f64> = channel::modulate(&frame);
            let res = decode_frame(&pc, &y, 0.5, &cfg, &GenieMode::Off);
            assert_eq!(res.bits, frame);
            assert_eq!(res.stats.iterations, 0);
            assert_eq!(res.stats.ld_n_err, 0);
        }
    }

    #[test]
    fn uncorrectable_component_stays_active_after_ld() {
        // t+1 symbol errors in one component, rest clean.
        let pc = product(4, 9, 1, 4);
        let cfg = DecoderConfig::lcs(0, 0.5);
        let mut rng = ChaCha12Rng::seed_from_u64(35);
        let mut tries = 0;
        let mut observed = 0;
        while observed < 10 && tries < 200 {
            tries += 1;
            let frame = random_frame(&pc, &mut rng);
            let mut corrupted = frame.clone();
            // flip t+1 = 4 whole symbols of component 1
            let base = pc.component_range(1).start;
            let mut syms: Vec<usize> = (0..pc.rs().n()).collect();
            syms.shuffle(&mut rng);
            for &s in &syms[..pc.rs().t() + 1] {
                let val = rng.random_range(1..16u16);
                for b in 0..4 {
                    if (val >> b) & 1 == 1 {
                        corrupted[base + s * 4 + b] ^= 1;
                    }
                }
            }
            let y: Vec<f64> = channel::modulate(&corrupted);
            let mut state = DecoderState::new(&pc, &y, 0.5);
            let mut stats = FrameStats::default();
            local_decode(&pc, &mut state, &cfg, &GenieMode::Off, &mut stats);
            // t+1 errors either fail BM (component stays active) or
            // miscorrect; with W_θ = 0.5 and noiseless LLRs a miscorrection
            // has W > 0, so check the common failure path only when BM failed
            if state.active[1] {
                observed += 1;
            }
            // clean components always freeze
            assert!(!state.active[0] && !state.active[2] && !state.active[3]);
        }
        assert!(observed > 0, "no BM failure observed in {tries} tries");
    }

    #[test]
    fn w_theta_boundaries() {
        let pc = product(4, 9, 1, 4);
        let mut rng = ChaCha12Rng::seed_from_u64(36);
        let frame = random_frame(&pc, &mut rng);
        let x: Vec<f64> = channel::modulate(&frame);
        let y = channel::transmit(&x, 0.4, &mut channel::trial_rng(1, 0));

        // W_θ = 0: freeze only on exact hard-decision agreement.
        let cfg0 = DecoderConfig::lcs(0, 0.0);
        let mut state = DecoderState::new(&pc, &y, 0.4);
        let mut stats = FrameStats::default();
        local_decode(&pc, &mut state, &cfg0, &GenieMode::Off, &mut stats);
        for l in 0..pc.l() {
            if !state.active[l] {
                let range = pc.component_range(l);
                assert_eq!(state.frozen[l].as_deref().unwrap(), &state.hard0[range]);
            }
        }

        // W_θ = 1: every BM success freezes.
        let cfg1 = DecoderConfig::lcs(0, 1.0);
        let mut state = DecoderState::new(&pc, &y, 0.4);
        let mut stats = FrameStats::default();
        local_decode(&pc, &mut state, &cfg1, &GenieMode::Off, &mut stats);
        let hard = channel::hard_decision(&y);
        for l in 0..pc.l() {
            let range = pc.component_range(l);
            let symbols = binary_image::bits_to_word(pc.rs(), &hard[range]);
            let bm_ok = pc.rs().bm_decode(&symbols).is_corrected();
            assert_eq!(!state.active[l], bm_ok, "component {l}");
        }
    }

    #[test]
    fn frozen_llrs_stable_through_gd() {
        let pc = product(4, 9, 1, 4);
        let cfg = DecoderConfig::lcs(8, 0.08);
        let mut rng = ChaCha12Rng::seed_from_u64(37);
        for trial in 0..30 {
            let frame = random_frame(&pc, &mut rng);
            let x: Vec<f64> = channel::modulate(&frame);
            let sigma = 0.55;
            let y = channel::transmit(&x, sigma, &mut channel::trial_rng(5, trial));
            let mut state = DecoderState::new(&pc, &y, sigma);
            let mut stats = FrameStats::default();
            local_decode(&pc, &mut state, &cfg, &GenieMode::Off, &mut stats);
            if state.n_err == 0 || state.n_err == pc.l() {
                continue;
            }
            global_decode(&pc, &mut state, &cfg, &GenieMode::Off, &mut stats);
            for (l, frozen) in state.frozen.iter().enumerate() {
                if let Some(cw) = frozen {
                    for (offset, j) in pc.component_range(l).enumerate() {
                        let expect =
                            if cw[offset] == 1 { -cfg.llr_clamp } else { cfg.llr_clamp };
                        assert_eq!(state.llr[j], expect);
                    }
                }
            }
        }
    }

    #[test]
    fn lcs_mode_uses_zero_shift() {
        // N2 = 1 means a single outer round with μ = 0; a GD run on an
        // unshifted noiseless-but-active frame must reproduce the frame.
        let pc = product(3, 3, 1, 2);
        let cfg = DecoderConfig::lcs(3, 0.0); // W_θ=0 keeps LD from freezing noisy rows
        assert_eq!(cfg.n2, 1);
        let mut rng = ChaCha12Rng::seed_from_u64(38);
        let frame = random_frame(&pc, &mut rng);
        let x: Vec<f64> = channel::modulate(&frame);
        let y = channel::transmit(&x, 0.3, &mut channel::trial_rng(6, 0));
        let res = decode_frame(&pc, &y, 0.3, &cfg, &GenieMode::Off);
        assert!(res.stats.iterations <= cfg.n1 as u64);
    }

    #[test]
    fn genie_audit_flags_wrong_freezes() {
        // Force W_θ = 1 so every BM success freezes, then audit against the
        // transmitted frame at high noise: some freezes must be wrong
        // eventually, and each is counted.
        let pc = product(3, 3, 1, 2);
        let cfg = DecoderConfig::lcs(4, 1.0);
        let mut rng = ChaCha12Rng::seed_from_u64(39);
        let mut total_undetected = 0;
        for trial in 0..400 {
            let frame = random_frame(&pc, &mut rng);
            let x: Vec<f64> = channel::modulate(&frame);
            let sigma = 1.2;
            let y = channel::transmit(&x, sigma, &mut channel::trial_rng(7, trial));
            let genie = GenieMode::Audit { transmitted: frame.clone() };
            let res = decode_frame(&pc, &y, sigma, &cfg, &genie);
            total_undetected += res.stats.undetected_freezes;
        }
        assert!(total_undetected > 0);
    }

    #[test]
    fn genie_calibrate_only_freezes_correct_rows() {
        let pc = product(4, 9, 1, 4);
        let cfg = DecoderConfig::lcs(6, 0.5);
        let mut rng = ChaCha12Rng::seed_from_u64(40);
        let mut weights_seen = 0;
        for trial in 0..100 {
            let frame = random_frame(&pc, &mut rng);
            let x: Vec<f64> = channel::modulate(&frame);
            let sigma = 0.6;
            let y = channel::transmit(&x, sigma, &mut channel::trial_rng(8, trial));
            let genie = GenieMode::Calibrate { transmitted: frame.clone() };
            let mut state = DecoderState::new(&pc, &y, sigma);
            let mut stats = FrameStats::default();
            local_decode(&pc, &mut state, &cfg, &genie, &mut stats);
            if state.n_err > 0 {
                global_decode(&pc, &mut state, &cfg, &genie, &mut stats);
            }
            for (l, frozen) in state.frozen.iter().enumerate() {
                if let Some(cw) = frozen {
                    assert_eq!(cw[..], frame[pc.component_range(l)], "wrong freeze in calibrate");
                }
            }
            for &w in &stats.correct_soft_weights {
                assert!((0.0..=1.0).contains(&w));
                weights_seen += 1;
            }
        }
        assert!(weights_seen > 0);
    }
}
