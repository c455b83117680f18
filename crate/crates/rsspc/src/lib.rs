//! RS-SPC product codes with a two-phase soft-decision decoding scheme.
//!
//! An RS-SPC product code stacks `L` Reed-Solomon codewords over GF(2^p) as
//! rows and appends one single-parity-check bit per column of `w`-bit tuples.
//! Decoding runs in two phases:
//!
//! - **Local decoding (LD)**: Berlekamp-Massey hard-decision decoding of each
//!   RS row, with a reliability-weighted soft-weight gate that freezes rows
//!   judged correct.
//! - **Global decoding (GD)**: APP-based min-sum belief propagation over the
//!   binary expansion of the composite parity-check matrix, with per-outer-
//!   iteration cyclic shifts of the row sub-vectors, damped variable-node
//!   updates, and further BM-HDD freeze attempts each iteration.
//!
//! The crate also ships a Monte-Carlo BER/FER simulation harness, a
//! genie-aided soft-weight calibration sweep, and closed-form complexity
//! accounting, all reachable through the `rsspc` CLI.
//!
//! All soft-valued arithmetic (LLRs, channel samples, soft weights) is generic
//! over the scalar type through [`FloatT`]; `f64` aliases are exported at the
//! crate root.

pub mod binary_image;
pub mod channel;
pub mod decoder;
pub mod error;
pub mod galois;
pub mod harness;
pub mod product;
pub mod reed_solomon;
pub mod scalar;

pub use binary_image::BinaryMatrix;
pub use error::Error;
pub use galois::{Field, Symbol};
pub use product::ProductCode;
pub use reed_solomon::{DecodeOutcome, RsCode};
pub use scalar::FloatT;

/// Default-precision decoder configuration.
pub type DecoderConfig = decoder::DecoderConfig<f64>;
/// Default-precision per-frame decoder state.
pub type DecoderState = decoder::DecoderState<f64>;
/// Default-precision simulation configuration.
pub type SimConfig = harness::SimConfig<f64>;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
