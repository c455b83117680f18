//! RS-SPC product code P(n,k,w,L): L RS codewords stacked as rows plus one
//! single-parity-check bit per column of w-bit tuples, with the composite
//! binary parity-check matrix
//!
//! ```text
//!   [ Δ(H̃_b, L) | 0 ]
//!   [ Γ(R, L)   | I ]
//! ```
//!
//! The upper part repeats the (sparsified) binary image H̃_b once per RS row;
//! the lower part ties tuple j of every row to parity bit j. The lower part
//! is stored implicitly since all its columns have weight 1.

use crate::binary_image::{self, BinaryMatrix};
use crate::galois::Symbol;
use crate::reed_solomon::RsCode;
use crate::{Error, Result};

/// Default pass limit for the greedy sparsifier.
pub const DEFAULT_SPARSIFY_PASSES: usize = 64;

#[derive(Debug, Clone)]
pub struct ProductCode {
    rs: RsCode,
    w: usize,
    l: usize,
    n_b: usize,
    n_p: usize,
    h_b: BinaryMatrix,
    h_tilde: BinaryMatrix,
    /// Column supports of each H̃_b row, reused for every diagonal block.
    upper_row_support: Vec<Vec<u32>>,
    /// Per-column degree of H̃_b.
    upper_col_degree: Vec<u32>,
}

impl ProductCode {
    pub fn new(rs: RsCode, w: usize, l: usize) -> Result<ProductCode> {
        Self::with_sparsify_passes(rs, w, l, DEFAULT_SPARSIFY_PASSES)
    }

    pub fn with_sparsify_passes(
        rs: RsCode,
        w: usize,
        l: usize,
        sparsify_passes: usize,
    ) -> Result<ProductCode> {
        let p = rs.field().p() as usize;
        if w == 0 || p % w != 0 {
            return Err(Error::config(format!("tuple width w={w} must divide p={p}")));
        }
        if l == 0 {
            return Err(Error::config("L must be at least 1"));
        }
        let n_b = rs.n_bits();
        let n_p = n_b * l + n_b / w;
        let h_b = binary_image::expand(&rs);
        let h_tilde = binary_image::sparsify(&h_b, &rs, sparsify_passes);
        let upper_row_support = (0..h_tilde.rows())
            .map(|r| h_tilde.row_support(r).into_iter().map(|c| c as u32).collect())
            .collect();
        let mut upper_col_degree = vec![0u32; n_b];
        for r in 0..h_tilde.rows() {
            for c in h_tilde.row_support(r) {
                upper_col_degree[c] += 1;
            }
        }
        Ok(ProductCode { rs, w, l, n_b, n_p, h_b, h_tilde, upper_row_support, upper_col_degree })
    }

    pub fn rs(&self) -> &RsCode {
        &self.rs
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Component bit-length n_b = n p.
    pub fn n_b(&self) -> usize {
        self.n_b
    }

    /// Total bit-length N_P = n_b L + n_b / w.
    pub fn n_p(&self) -> usize {
        self.n_p
    }

    /// Number of SPC parity bits, n_b / w.
    pub fn num_parity_bits(&self) -> usize {
        self.n_b / self.w
    }

    /// Weight of every lower check row, wL + 1.
    pub fn spc_row_weight(&self) -> usize {
        self.w * self.l + 1
    }

    /// Code rate wLk / ((wL+1) n).
    pub fn rate(&self) -> f64 {
        (self.w * self.l * self.rs.k()) as f64
            / ((self.w * self.l + 1) * self.rs.n()) as f64
    }

    /// Unsparsified binary image H_b of the RS component code.
    pub fn h_b(&self) -> &BinaryMatrix {
        &self.h_b
    }

    /// Sparsified binary image H̃_b used by the global decoder.
    pub fn h_tilde(&self) -> &BinaryMatrix {
        &self.h_tilde
    }

    /// Column supports of the H̃_b rows (block-local indices 0..n_b).
    pub fn upper_row_support(&self) -> &[Vec<u32>] {
        &self.upper_row_support
    }

    /// H̃_b column degrees (block-local).
    pub fn upper_col_degree(&self) -> &[u32] {
        &self.upper_col_degree
    }

    /// Bit range of RS component `l` inside a product-code word.
    pub fn component_range(&self, l: usize) -> std::ops::Range<usize> {
        l * self.n_b..(l + 1) * self.n_b
    }

    /// Bit positions covered by lower check `j`: tuple j of every RS row plus
    /// parity bit j.
    pub fn lower_check_support(&self, j: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.spc_row_weight());
        for l in 0..self.l {
            let base = l * self.n_b + j * self.w;
            out.extend(base..base + self.w);
        }
        out.push(self.l * self.n_b + j);
        out
    }

    /// Encodes L messages of k symbols each into the N_P-bit product
    /// codeword: the L RS codewords' binary images in row order followed by
    /// the SPC parity bits.
    pub fn encode(&self, messages: &[Vec<Symbol>]) -> Vec<u8> {
        assert_eq!(messages.len(), self.l, "need L messages");
        let mut bits = Vec::with_capacity(self.n_p);
        for msg in messages {
            let cw = self.rs.encode(msg);
            bits.extend(binary_image::word_to_bits(&self.rs, &cw));
        }
        for j in 0..self.num_parity_bits() {
            let mut parity = 0u8;
            for l in 0..self.l {
                let base = l * self.n_b + j * self.w;
                for o in 0..self.w {
                    parity ^= bits[base + o] & 1;
                }
            }
            bits.push(parity);
        }
        bits
    }

    /// True iff both the upper (RS image) and lower (SPC) syndromes vanish.
    pub fn check(&self, word: &[u8]) -> Result<bool> {
        if word.len() != self.n_p {
            return Err(Error::usage(format!(
                "word length {} != N_P = {}",
                word.len(),
                self.n_p
            )));
        }
        for l in 0..self.l {
            let block = &word[self.component_range(l)];
            for support in &self.upper_row_support {
                let parity = support.iter().fold(0u8, |acc, &c| acc ^ (block[c as usize] & 1));
                if parity != 0 {
                    return Ok(false);
                }
            }
        }
        for j in 0..self.num_parity_bits() {
            let parity = self
                .lower_check_support(j)
                .iter()
                .fold(0u8, |acc, &c| acc ^ (word[c] & 1));
            if parity != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
