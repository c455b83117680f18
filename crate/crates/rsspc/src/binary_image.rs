//! Bit-packed GF(2) matrices, the binary image expansion of the RS
//! parity-check matrix, and density reduction of that image.

use crate::galois::{Field, Symbol};
use crate::reed_solomon::RsCode;

const WORD_BITS: usize = 64;

/// Dense bit-packed binary matrix with word-wise row XOR.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> BinaryMatrix {
        let words_per_row = cols.div_ceil(WORD_BITS);
        BinaryMatrix { rows, cols, words_per_row, data: vec![0; rows * words_per_row] }
    }

    pub fn identity(n: usize) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let w = self.data[r * self.words_per_row + c / WORD_BITS];
        (w >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words_per_row + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// dst <- dst XOR src.
    pub fn xor_rows(&mut self, dst: usize, src: usize) {
        assert_ne!(dst, src);
        let wpr = self.words_per_row;
        for w in 0..wpr {
            let v = self.data[src * wpr + w];
            self.data[dst * wpr + w] ^= v;
        }
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn weight(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Fraction of ones.
    pub fn density(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        self.weight() as f64 / (self.rows * self.cols) as f64
    }

    /// Column indices of the ones in row `r`, ascending.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.row_weight(r));
        for (wi, &w) in self.row(r).iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * WORD_BITS + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Syndrome bit of `bits` against row `r`: parity of the AND.
    pub fn row_parity(&self, r: usize, bits: &[u8]) -> u8 {
        self.row_support(r).iter().fold(0, |acc, &c| acc ^ (bits[c] & 1))
    }

    /// GF(2) rank by Gaussian elimination on a working copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            if pivot != rank {
                // swap rows
                for w in 0..m.words_per_row {
                    m.data.swap(pivot * m.words_per_row + w, rank * m.words_per_row + w);
                }
            }
            for r in 0..m.rows {
                if r != rank && m.get(r, col) {
                    m.xor_rows(r, rank);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn stack(&self, other: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.cols, other.cols);
        let mut m = BinaryMatrix::zeros(self.rows + other.rows, self.cols);
        m.data[..self.data.len()].copy_from_slice(&self.data);
        m.data[self.data.len()..].copy_from_slice(&other.data);
        m
    }

    /// True when the two matrices span the same GF(2) row space.
    pub fn same_row_space(&self, other: &BinaryMatrix) -> bool {
        let ra = self.rank();
        let rb = other.rank();
        ra == rb && self.stack(other).rank() == ra
    }

    /// Alist-style text dump: `rows cols` then one line of ascending column
    /// indices per row.
    pub fn to_alist(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let cols: Vec<String> =
                self.row_support(r).iter().map(|c| c.to_string()).collect();
            out.push_str(&cols.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Binary image expansion H_b of the symbol-level parity-check matrix:
/// each symbol entry h becomes the p x p block whose column j holds the
/// basis coefficients of h·β^j. H_b annihilates the binary image of every
/// codeword.
pub fn expand(code: &RsCode) -> BinaryMatrix {
    let f = code.field();
    let p = f.p() as usize;
    let mut m = BinaryMatrix::zeros(code.m_bits(), code.n_bits());
    for (r, row) in code.h_s().iter().enumerate() {
        for (c, &h) in row.iter().enumerate() {
            for j in 0..p {
                let prod = f.mul(h, f.beta_pow(j as i64));
                for (i, bit) in f.symbol_to_bits(prod).into_iter().enumerate() {
                    if bit != 0 {
                        m.set(r * p + i, c * p + j, true);
                    }
                }
            }
        }
    }
    m
}

/// Binary image of a symbol vector: symbol-major, basis-coefficient-minor.
pub fn word_to_bits(code: &RsCode, word: &[Symbol]) -> Vec<u8> {
    let f = code.field();
    word.iter().flat_map(|&s| f.symbol_to_bits(s)).collect()
}

/// Reassembles symbols from a bit vector produced by [`word_to_bits`].
pub fn bits_to_word(code: &RsCode, bits: &[u8]) -> Vec<Symbol> {
    let f = code.field();
    let p = f.p() as usize;
    bits.chunks(p).map(|chunk| f.bits_to_symbol(chunk)).collect()
}

/// Greedy pairwise row combination: repeatedly replace row i by row i XOR
/// row j when that strictly reduces its weight, sweeping until a full pass
/// makes no improvement or `max_passes` is reached. Elementary row
/// operations only, so row space and rank are preserved.
fn reduce_rows(m: &mut BinaryMatrix, max_passes: usize) {
    let rows = m.rows();
    for _ in 0..max_passes {
        let mut improved = false;
        for i in 0..rows {
            let wi = m.row_weight(i);
            let mut best_j = None;
            let mut best_w = wi;
            for j in 0..rows {
                if j == i {
                    continue;
                }
                let combined: usize = m
                    .row(i)
                    .iter()
                    .zip(m.row(j))
                    .map(|(a, b)| (a ^ b).count_ones() as usize)
                    .sum();
                if combined < best_w && combined > 0 {
                    best_w = combined;
                    best_j = Some(j);
                }
            }
            if let Some(j) = best_j {
                m.xor_rows(i, j);
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
}

fn trace(f: &Field, z: Symbol) -> u8 {
    let mut acc = 0u16;
    let mut t = z;
    for _ in 0..f.p() {
        acc ^= t;
        t = f.mul(t, t);
    }
    (acc & 1) as u8
}

/// One nonzero nullspace vector of an under-determined matrix over GF(2^p),
/// or `None` when the matrix has full column rank.
fn nullspace_vector(f: &Field, mat: &mut [Vec<Symbol>], cols: usize) -> Option<Vec<Symbol>> {
    let rows = mat.len();
    let mut pivots: Vec<usize> = Vec::with_capacity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = f.inv(mat[r][c]).expect("pivot is nonzero");
        for x in mat[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && mat[i][c] != 0 {
                let factor = mat[i][c];
                for j in 0..cols {
                    let t = f.mul(factor, mat[r][j]);
                    mat[i][j] = f.add(mat[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![0; cols];
    v[free] = 1;
    for (ri, &pc) in pivots.iter().enumerate() {
        v[pc] = mat[ri][free];
    }
    Some(v)
}

/// Candidate parity-check rows built from single cyclotomic-coset exponent
/// families of the dual code. A family is the set of exponents
/// e0·2^i mod (2^p − 1) that fall inside 1..=n−k; a word uses coefficients
/// a_i on y^(e0·2^i) chosen so that the adjoint linearized polynomial
/// Σ a_i^(2^(p−i)) u^(2^(p−i)) vanishes on a size-(s−1) subset of the basis
/// {β^0,…,β^(p−1)}, which zeroes the corresponding bit planes of the row.
/// Each solution is enumerated over nonzero scalar multiples of its
/// coefficient vector.
fn structured_candidates(code: &RsCode, masks: &[u32]) -> Vec<(usize, Vec<u64>)> {
    let f = code.field();
    let p = f.p() as usize;
    let q = f.q() as usize;
    let n = code.n();
    let nk = n - code.k();
    let words_per_row = (n * p).div_ceil(WORD_BITS);

    let mut out = Vec::new();
    let mut seen = vec![false; q];
    for e0 in 1..=nk {
        if seen[e0] {
            continue;
        }
        let mut coset = Vec::new();
        let mut e = e0;
        loop {
            seen[e] = true;
            coset.push(e);
            e = (e * 2) % (q - 1);
            if e == e0 {
                break;
            }
        }
        // Frobenius index and exponent of the in-range family members.
        let family: Vec<(usize, usize)> = coset
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e <= nk)
            .map(|(i, &e)| (i, e))
            .collect();
        let s = family.len();
        if s < 2 {
            continue;
        }
        for subset in 0u32..(1 << p) {
            if subset.count_ones() as usize != s - 1 {
                continue;
            }
            let mut mat: Vec<Vec<Symbol>> = (0..p)
                .filter(|h| subset >> h & 1 == 1)
                .map(|h| {
                    family
                        .iter()
                        .map(|&(i, _)| {
                            let frob = (p - (i % p)) % p;
                            f.pow(f.beta_pow(h as i64), 1u64 << frob)
                        })
                        .collect()
                })
                .collect();
            let Some(coeffs) = nullspace_vector(f, &mut mat, s) else {
                continue;
            };
            for lam_exp in 0..(q - 1).min(256) {
                let lam = f.beta_pow(lam_exp as i64);
                let a: Vec<Symbol> = family
                    .iter()
                    .zip(&coeffs)
                    .map(|(&(i, _), &c)| {
                        let mut ai = f.mul(lam, c);
                        for _ in 0..i {
                            ai = f.mul(ai, ai);
                        }
                        ai
                    })
                    .collect();
                let mut bits = vec![0u64; words_per_row];
                let mut weight = 0usize;
                let mut nonzero = false;
                for c in 0..n {
                    let y = f.beta_pow(c as i64);
                    let mut dc: Symbol = 0;
                    for (&(_, e), &ai) in family.iter().zip(&a) {
                        dc = f.add(dc, f.mul(ai, f.pow(y, e as u64)));
                    }
                    if dc != 0 {
                        nonzero = true;
                        let mask = masks[dc as usize] as u64;
                        weight += mask.count_ones() as usize;
                        let base = c * p;
                        bits[base / WORD_BITS] |= mask << (base % WORD_BITS);
                        if base % WORD_BITS + p > WORD_BITS {
                            bits[base / WORD_BITS + 1] |=
                                mask >> (WORD_BITS - base % WORD_BITS);
                        }
                    }
                }
                if nonzero {
                    out.push((weight, bits));
                }
            }
        }
    }
    out
}

/// Density reduction of the binary image, preserving its GF(2) row space
/// and rank. Candidate rows come from two sources: the algebraic family of
/// [`structured_candidates`], and the input rows reduced by greedy pairwise
/// combination. The lowest-weight linearly independent candidates are
/// selected until the original rank is reached, then reduced pairwise again
/// for up to `max_passes` sweeps. Falls back to plain pairwise reduction if
/// that ever comes out denser.
pub fn sparsify(h_b: &BinaryMatrix, code: &RsCode, max_passes: usize) -> BinaryMatrix {
    let f = code.field();
    let p = f.p() as usize;
    let q = f.q() as usize;

    // Bit mask of the trace form h -> tr(u β^h) for every symbol u; mask bit
    // h is bit h of the binary row at the symbol's p-column block.
    let masks: Vec<u32> = (0..q as Symbol)
        .map(|u| {
            (0..p).fold(0u32, |acc, h| {
                acc | u32::from(trace(f, f.mul(u, f.beta_pow(h as i64)))) << h
            })
        })
        .collect();

    let mut reduced = h_b.clone();
    reduce_rows(&mut reduced, max_passes);

    let mut pool = structured_candidates(code, &masks);
    for r in 0..reduced.rows() {
        pool.push((reduced.row_weight(r), reduced.row(r).to_vec()));
    }
    pool.sort_by(|a, b| a.0.cmp(&b.0));

    // Greedy independent-set selection by ascending weight.
    let target = h_b.rank();
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::with_capacity(target); // (pivot, reduced row)
    let mut selected: Vec<&Vec<u64>> = Vec::with_capacity(target);
    for (_, bits) in &pool {
        let mut v = bits.clone();
        for (pivot, row) in &basis {
            if v[pivot / WORD_BITS] >> (pivot % WORD_BITS) & 1 == 1 {
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi ^= ri;
                }
            }
        }
        let Some(w) = v.iter().position(|&x| x != 0) else {
            continue;
        };
        let pivot = w * WORD_BITS + v[w].trailing_zeros() as usize;
        basis.push((pivot, v));
        selected.push(bits);
        if selected.len() == target {
            break;
        }
    }

    let mut m = BinaryMatrix::zeros(selected.len(), h_b.cols());
    for (r, bits) in selected.iter().enumerate() {
        let wpr = m.words_per_row;
        m.data[r * wpr..(r + 1) * wpr].copy_from_slice(bits);
    }
    reduce_rows(&mut m, max_passes);
    if m.rows() == reduced.rows() && m.density() <= reduced.density() {
        m
    } else {
        reduced
    }
}
