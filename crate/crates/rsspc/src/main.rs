//! Command-line front end: Monte-Carlo sweeps, genie-aided calibration,
//! closed-form analysis, and matrix dumps.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rsspc::decoder::DecoderConfig;
use rsspc::harness::{self, ComplexityModel, SimConfig};
use rsspc::Error;

#[derive(Parser)]
#[command(name = "rsspc", version, about = "RS-SPC product code simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct CodeArgs {
    /// Extension degree p of GF(2^p); the RS blocklength is n = 2^p - 1.
    #[arg(long, default_value_t = 4)]
    p: u32,

    /// RS dimension k (n - k must be even).
    #[arg(long, default_value_t = 9)]
    k: usize,

    /// Tuple width w in bits; must divide p.
    #[arg(long, default_value_t = 1)]
    w: usize,

    /// Number of RS component codewords L.
    #[arg(long, default_value_t = 8)]
    l: usize,

    /// Primitive polynomial override as an integer bit pattern
    /// (e.g. 285 = x^8+x^4+x^3+x^2+1).
    #[arg(long)]
    primitive_poly: Option<u32>,

    /// Pass limit for the sparsifier's pairwise-reduction sweeps.
    #[arg(long, default_value_t = 64)]
    sparsify_passes: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// First E_b/N_0 point in dB.
    #[arg(long, default_value_t = 3.0)]
    ebn0_start: f64,

    /// Last E_b/N_0 point in dB (inclusive).
    #[arg(long, default_value_t = 5.0)]
    ebn0_stop: f64,

    /// E_b/N_0 step in dB.
    #[arg(long, default_value_t = 0.5)]
    ebn0_step: f64,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Stop an SNR point after this many frame errors...
    #[arg(long, default_value_t = 100)]
    min_frame_errors: u64,

    /// ...or after this many frames, whichever comes first.
    #[arg(long, default_value_t = 10_000)]
    max_frames: u64,
}

#[derive(Args)]
struct DecoderArgs {
    /// Inner iteration limit N1.
    #[arg(long, default_value_t = 10)]
    n1: usize,

    /// Schedule: "lcs" (N2 = 1), "hcs" (N2 = n), or "n2=<count>".
    #[arg(long, default_value = "lcs")]
    mode: String,

    /// Stage-1 damping factor.
    #[arg(long, default_value_t = 0.32)]
    alpha1: f64,

    /// Stage-2 damping factor.
    #[arg(long, default_value_t = 0.8)]
    alpha2: f64,

    /// Soft-weight freeze threshold.
    #[arg(long, default_value_t = 0.02)]
    w_theta: f64,

    /// LLR magnitude pinned onto frozen bits.
    #[arg(long, default_value_t = 128.0)]
    llr_clamp: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo BER/FER sweep over an E_b/N_0 range, CSV output.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        dec: DecoderArgs,
        /// Audit freezes against the transmitted frame and count
        /// miscorrections in the undetected_freezes column.
        #[arg(long)]
        genie: bool,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Genie-aided calibration: soft-weight statistics of genuinely correct
    /// component decodings, for choosing the freeze threshold.
    GenieSweep {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        dec: DecoderArgs,
    },
    /// Closed-form accounting: construction summary, undetected-error bound,
    /// per-iteration operation counts, and normalized per-bit complexity.
    Analyze {
        #[command(flatten)]
        code: CodeArgs,
        /// Average iteration count assumed for the per-bit normalization.
        #[arg(long, default_value_t = 2.0)]
        i_avg: f64,
        /// Error-count cap λ in the undetected-error bound; defaults to t.
        #[arg(long)]
        lambda: Option<u64>,
        /// Chase test-pattern exponent of the turbo-product comparison row.
        #[arg(long, default_value_t = 4)]
        eta: u32,
        /// Component blocklength of the turbo-product comparison row.
        #[arg(long, default_value_t = 63)]
        tpc_n: usize,
        /// Component dimension of the turbo-product comparison row.
        #[arg(long, default_value_t = 61)]
        tpc_k: usize,
        /// Symbol size of the turbo-product comparison row.
        #[arg(long, default_value_t = 6)]
        tpc_p: usize,
    },
    /// Dump the component parity-check matrices in alist-style text.
    Matrix {
        #[command(flatten)]
        code: CodeArgs,
        /// Which matrix to dump: "hb" (raw binary image), "htilde"
        /// (sparsified), or "summary" (composite matrix structure only).
        #[arg(long, default_value = "htilde")]
        which: String,
    },
}

fn ebn0_list(s: &SweepArgs) -> Result<Vec<f64>, Error> {
    if s.ebn0_step <= 0.0 {
        return Err(Error::config(format!("ebn0-step {} must be positive", s.ebn0_step)));
    }
    if s.ebn0_stop < s.ebn0_start {
        return Err(Error::config(format!(
            "ebn0-stop {} below ebn0-start {}",
            s.ebn0_stop, s.ebn0_start
        )));
    }
    let mut out = Vec::new();
    let mut v = s.ebn0_start;
    while v <= s.ebn0_stop + 1e-9 {
        out.push(v);
        v += s.ebn0_step;
    }
    Ok(out)
}

fn decoder_config(dec: &DecoderArgs, n: usize) -> Result<DecoderConfig<f64>, Error> {
    let n2 = match dec.mode.as_str() {
        "lcs" => 1,
        "hcs" => n,
        other => match other.strip_prefix("n2=") {
            Some(v) => v
                .parse::<usize>()
                .ok()
                .filter(|&v| v >= 1)
                .ok_or_else(|| Error::usage(format!("bad N2 count in mode '{other}'")))?,
            None => {
                return Err(Error::usage(format!(
                    "mode '{other}' is not lcs, hcs, or n2=<count>"
                )))
            }
        },
    };
    Ok(DecoderConfig {
        n1: dec.n1,
        n2,
        alpha1: dec.alpha1,
        alpha2: dec.alpha2,
        w_theta: dec.w_theta,
        llr_clamp: dec.llr_clamp,
    })
}

fn sim_config(
    code: &CodeArgs,
    sweep: &SweepArgs,
    dec: &DecoderArgs,
    genie: bool,
) -> Result<SimConfig<f64>, Error> {
    let n = (1usize << code.p) - 1;
    Ok(SimConfig {
        p: code.p,
        k: code.k,
        w: code.w,
        l: code.l,
        primitive_poly: code.primitive_poly,
        sparsify_passes: code.sparsify_passes,
        ebn0_db: ebn0_list(sweep)?,
        decoder: decoder_config(dec, n)?,
        min_frame_errors: sweep.min_frame_errors,
        max_frames: sweep.max_frames,
        seed: sweep.seed,
        genie_audit: genie,
    })
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Command::Simulate { code, sweep, dec, genie, output } => {
            let cfg = sim_config(&code, &sweep, &dec, genie)?;
            let results = harness::run_sweep(&cfg)?;
            match output {
                Some(path) => harness::write_csv(&results, &path)?,
                None => print!("{}", harness::results_to_csv(&results)),
            }
        }
        Command::GenieSweep { code, sweep, dec } => {
            let cfg = sim_config(&code, &sweep, &dec, false)?;
            let points = harness::genie_sweep(&cfg)?;
            println!("ebn0_db,avg_soft_weight,max_soft_weight,samples");
            for pt in points {
                println!(
                    "{},{},{},{}",
                    pt.ebn0_db, pt.avg_soft_weight, pt.max_soft_weight, pt.samples
                );
            }
        }
        Command::Analyze { code, i_avg, lambda, eta, tpc_n, tpc_k, tpc_p } => {
            let cfg = sim_config(
                &code,
                &SweepArgs {
                    ebn0_start: 0.0,
                    ebn0_stop: 0.0,
                    ebn0_step: 1.0,
                    seed: 0,
                    min_frame_errors: 1,
                    max_frames: 1,
                },
                &DecoderArgs {
                    n1: 1,
                    mode: "lcs".into(),
                    alpha1: 0.32,
                    alpha2: 0.8,
                    w_theta: 0.02,
                    llr_clamp: 128.0,
                },
                false,
            )?;
            let pc = cfg.build_code()?;
            let rs = pc.rs();
            println!(
                "P({},{},{},{}): N_P = {} bits, rate = {:.4}",
                rs.n(),
                rs.k(),
                pc.w(),
                pc.l(),
                pc.n_p(),
                pc.rate()
            );
            println!(
                "H_b density = {:.4}, sparsified density = {:.4}",
                pc.h_b().density(),
                pc.h_tilde().density()
            );
            let t = rs.t() as u64;
            let lam = lambda.unwrap_or(t);
            let bound = harness::undetected_bound(rs.field().q() as u64, t, lam)?;
            println!("undetected-error bound (lambda = {lam}): {bound:.3e}");
            let model = ComplexityModel::of(&pc);
            let ops = harness::predicted_cn_vn_ops(&model);
            println!(
                "per-iteration ops: CN = {:.1}, VN = {:.1}, approx = {:.1}",
                ops.cn_exact, ops.vn_exact, ops.approx
            );
            let row = harness::proposed_complexity(&model, i_avg);
            println!(
                "normalized (I_avg = {i_avg}): ops/bit <= {:.1}, BM/bit <= {:.2e}, \
                 parity mults/bit <= {:.2}",
                row.real_ops_per_bit, row.bm_per_bit, row.parity_mults_per_bit
            );
            let tpc = harness::pyndiah_complexity(eta, tpc_n, tpc_k, tpc_p, i_avg);
            println!(
                "turbo-product row ({tpc_n},{tpc_k}) with 2^{eta} patterns: \
                 ops/bit ~ {:.1}, BM/bit ~ {:.2e}, parity mults/bit ~ {:.2}",
                tpc.real_ops_per_bit, tpc.bm_per_bit, tpc.parity_mults_per_bit
            );
            println!(
                "BM-HDD multiplication bounds: ({},{}) -> {}, ({tpc_n},{tpc_k}) -> {}",
                rs.n(),
                rs.k(),
                harness::bm_mult_bound(rs.n() as u64, rs.k() as u64)?,
                harness::bm_mult_bound(tpc_n as u64, tpc_k as u64)?
            );
        }
        Command::Matrix { code, which } => {
            let cfg = sim_config(
                &code,
                &SweepArgs {
                    ebn0_start: 0.0,
                    ebn0_stop: 0.0,
                    ebn0_step: 1.0,
                    seed: 0,
                    min_frame_errors: 1,
                    max_frames: 1,
                },
                &DecoderArgs {
                    n1: 1,
                    mode: "lcs".into(),
                    alpha1: 0.32,
                    alpha2: 0.8,
                    w_theta: 0.02,
                    llr_clamp: 128.0,
                },
                false,
            )?;
            let pc = cfg.build_code()?;
            match which.as_str() {
                "hb" => print!("{}", pc.h_b().to_alist()),
                "htilde" => print!("{}", pc.h_tilde().to_alist()),
                "summary" => {
                    let upper_rows = pc.rs().m_bits() * pc.l();
                    let lower_rows = pc.num_parity_bits();
                    println!(
                        "composite H: {} x {} ({} upper + {} lower rows)",
                        upper_rows + lower_rows,
                        pc.n_p(),
                        upper_rows,
                        lower_rows
                    );
                    println!(
                        "upper block density = {:.4} ({} copies of a {} x {} image)",
                        pc.h_tilde().density(),
                        pc.l(),
                        pc.rs().m_bits(),
                        pc.rs().n_bits()
                    );
                    println!(
                        "lower rows: weight {} each, parity columns weight 1",
                        pc.spc_row_weight()
                    );
                }
                other => {
                    return Err(Error::usage(format!(
                        "unknown matrix '{other}' (expected hb, htilde, or summary)"
                    )))
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ebn0_list_inclusive() {
        let s = SweepArgs {
            ebn0_start: 3.0,
            ebn0_stop: 5.0,
            ebn0_step: 0.5,
            seed: 0,
            min_frame_errors: 1,
            max_frames: 1,
        };
        assert_eq!(ebn0_list(&s).unwrap(), vec![3.0, 3.5, 4.0, 4.5, 5.0]);
    }

    #[test]
    fn ebn0_list_rejects_bad_ranges() {
        let mut s = SweepArgs {
            ebn0_start: 3.0,
            ebn0_stop: 2.0,
            ebn0_step: 0.5,
            seed: 0,
            min_frame_errors: 1,
            max_frames: 1,
        };
        assert!(ebn0_list(&s).is_err());
        s.ebn0_stop = 4.0;
        s.ebn0_step = 0.0;
        assert!(ebn0_list(&s).is_err());
    }

    #[test]
    fn mode_parsing() {
        let mut dec = DecoderArgs {
            n1: 10,
            mode: "lcs".into(),
            alpha1: 0.32,
            alpha2: 0.8,
            w_theta: 0.02,
            llr_clamp: 128.0,
        };
        assert_eq!(decoder_config(&dec, 15).unwrap().n2, 1);
        dec.mode = "hcs".into();
        assert_eq!(decoder_config(&dec, 15).unwrap().n2, 15);
        dec.mode = "n2=7".into();
        assert_eq!(decoder_config(&dec, 15).unwrap().n2, 7);
        dec.mode = "n2=0".into();
        assert!(decoder_config(&dec, 15).is_err());
        dec.mode = "turbo".into();
        assert!(decoder_config(&dec, 15).is_err());
    }
}
