//! Narrow-sense Reed-Solomon codes: construction, systematic encoding, and
//! Berlekamp-Massey hard-decision decoding (BM-HDD).

use crate::galois::{Field, Symbol};
use crate::{Error, Result};

/// Result of a bounded-distance hard-decision decode.
///
/// `Failure` is an ordinary outcome, not an error: the syndrome structure was
/// inconsistent with any error pattern of weight <= t. `Corrected` may still
/// be a miscorrection when more than t symbols were in error; the returned
/// word is always a valid codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Corrected {
        codeword: Vec<Symbol>,
        errors_corrected: usize,
    },
    Failure,
}

impl DecodeOutcome {
    pub fn is_corrected(&self) -> bool {
        matches!(self, DecodeOutcome::Corrected { .. })
    }

    pub fn codeword(&self) -> Option<&[Symbol]> {
        match self {
            DecodeOutcome::Corrected { codeword, .. } => Some(codeword),
            DecodeOutcome::Failure => None,
        }
    }
}

/// A narrow-sense t-error-correcting (n, k, δ) RS code over GF(2^p) with
/// n = 2^p - 1 and δ = n - k + 1 = 2t + 1.
///
/// Codewords are stored with index j holding the coefficient of x^j; the
/// symbol-level parity-check matrix has entry `h_s[r][c] = β^((r+1)c)`.
/// Systematic encoding places the message in the leading (highest-degree)
/// positions n-k..n-1 and the division remainder in positions 0..n-k.
#[derive(Debug, Clone)]
pub struct RsCode {
    field: Field,
    n: usize,
    k: usize,
    t: usize,
    /// g(x) = Π_{i=1..2t} (x - β^i), ascending coefficients, degree n-k.
    generator: Vec<Symbol>,
    /// (n-k) x n symbol parity-check matrix.
    h_s: Vec<Vec<Symbol>>,
}

impl RsCode {
    pub fn new(field: Field, k: usize) -> Result<RsCode> {
        let n = field.q() - 1;
        if k == 0 || k >= n {
            return Err(Error::config(format!("dimension k={k} outside 1..{n}")));
        }
        if (n - k) % 2 != 0 {
            return Err(Error::config(format!(
                "n-k = {} must be even for a narrow-sense t-error-correcting code",
                n - k
            )));
        }
        let t = (n - k) / 2;

        let mut generator = vec![0 as Symbol; 1];
        generator[0] = 1;
        for i in 1..=(n - k) as i64 {
            let root = field.beta_pow(i);
            // multiply by (x + root)
            let mut next = vec![0 as Symbol; generator.len() + 1];
            for (d, &g) in generator.iter().enumerate() {
                next[d + 1] ^= g;
                next[d] ^= field.mul(g, root);
            }
            generator = next;
        }

        let h_s = (0..n - k)
            .map(|r| {
                (0..n)
                    .map(|c| field.beta_pow((r as i64 + 1) * c as i64))
                    .collect()
            })
            .collect();

        Ok(RsCode { field, n, k, t, generator, h_s })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Minimum distance δ = n - k + 1.
    pub fn delta(&self) -> usize {
        self.n - self.k + 1
    }

    /// Blocklength in bits, n_b = n p.
    pub fn n_bits(&self) -> usize {
        self.n * self.field.p() as usize
    }

    /// Dimension in bits, k_b = k p.
    pub fn k_bits(&self) -> usize {
        self.k * self.field.p() as usize
    }

    /// Redundancy in bits, m_b = n_b - k_b.
    pub fn m_bits(&self) -> usize {
        self.n_bits() - self.k_bits()
    }

    pub fn generator(&self) -> &[Symbol] {
        &self.generator
    }

    pub fn h_s(&self) -> &[Vec<Symbol>] {
        &self.h_s
    }

    /// Systematic encoding: c(x) = x^(n-k) m(x) + (x^(n-k) m(x) mod g(x)).
    pub fn encode(&self, message: &[Symbol]) -> Vec<Symbol> {
        assert_eq!(message.len(), self.k, "message length");
        let nk = self.n - self.k;
        let mut codeword = vec![0 as Symbol; self.n];
        codeword[nk..].copy_from_slice(message);

        // Long division of x^(n-k) m(x) by g(x); remainder fills 0..n-k.
        let mut rem = codeword.clone();
        for d in (nk..self.n).rev() {
            let coef = rem[d];
            if coef == 0 {
                continue;
            }
            for (i, &g) in self.generator.iter().enumerate() {
                rem[d - nk + i] ^= self.field.mul(coef, g);
            }
        }
        codeword[..nk].copy_from_slice(&rem[..nk]);
        codeword
    }

    /// Evaluates the word polynomial at β^(r+1) for r in 0..n-k.
    pub fn syndromes(&self, word: &[Symbol]) -> Vec<Symbol> {
        assert_eq!(word.len(), self.n, "word length");
        (0..self.n - self.k)
            .map(|r| {
                let x = self.field.beta_pow(r as i64 + 1);
                // Horner, highest coefficient first
                word.iter()
                    .rev()
                    .fold(0, |acc, &c| self.field.add(self.field.mul(acc, x), c))
            })
            .collect()
    }

    pub fn is_codeword(&self, word: &[Symbol]) -> bool {
        self.syndromes(word).iter().all(|&s| s == 0)
    }

    /// Bounded-distance decoding: syndromes, Berlekamp-Massey LFSR synthesis,
    /// Chien search, Forney error values. Returns `Failure` when the error
    /// locator is inconsistent (degree > t, root count mismatch, or the
    /// patched word is not a codeword).
    pub fn bm_decode(&self, word: &[Symbol]) -> DecodeOutcome {
        let synd = self.syndromes(word);
        if synd.iter().all(|&s| s == 0) {
            return DecodeOutcome::Corrected {
                codeword: word.to_vec(),
                errors_corrected: 0,
            };
        }
        let f = &self.field;
        let two_t = self.n - self.k;

        // Berlekamp-Massey: synthesize the shortest LFSR generating synd.
        let mut lambda: Vec<Symbol> = vec![1];
        let mut prev: Vec<Symbol> = vec![1];
        let mut l = 0usize;
        let mut m = 1usize;
        let mut b: Symbol = 1;
        for i in 0..two_t {
            let mut discrepancy = synd[i];
            for j in 1..lambda.len().min(i + 1) {
                discrepancy ^= f.mul(lambda[j], synd[i - j]);
            }
            if discrepancy == 0 {
                m += 1;
            } else if 2 * l <= i {
                let old = lambda.clone();
                let scale = f.div(discrepancy, b).expect("b nonzero");
                if lambda.len() < prev.len() + m {
                    lambda.resize(prev.len() + m, 0);
                }
                for (j, &c) in prev.iter().enumerate() {
                    lambda[j + m] ^= f.mul(scale, c);
                }
                l = i + 1 - l;
                prev = old;
                b = discrepancy;
                m = 1;
            } else {
                let scale = f.div(discrepancy, b).expect("b nonzero");
                if lambda.len() < prev.len() + m {
                    lambda.resize(prev.len() + m, 0);
                }
                for (j, &c) in prev.iter().enumerate() {
                    lambda[j + m] ^= f.mul(scale, c);
                }
                m += 1;
            }
        }
        while lambda.last() == Some(&0) {
            lambda.pop();
        }
        if l > self.t || lambda.len() - 1 != l {
            return DecodeOutcome::Failure;
        }

        // Chien search: Λ has root β^(-j) exactly when position j is in error.
        let mut positions = Vec::with_capacity(l);
        for j in 0..self.n {
            let x = self.field.beta_pow(-(j as i64));
            let val = lambda
                .iter()
                .rev()
                .fold(0, |acc, &c| f.add(f.mul(acc, x), c));
            if val == 0 {
                positions.push(j);
            }
        }
        if positions.len() != l {
            return DecodeOutcome::Failure;
        }

        // Ω(x) = S(x) Λ(x) mod x^(2t)
        let mut omega = vec![0 as Symbol; two_t];
        for (i, &s) in synd.iter().enumerate() {
            if s == 0 {
                continue;
            }
            for (j, &c) in lambda.iter().enumerate() {
                if i + j < two_t {
                    omega[i + j] ^= f.mul(s, c);
                }
            }
        }

        // Forney with b = 1: e_j = Ω(X_j^-1) / Λ'(X_j^-1).
        let mut corrected = word.to_vec();
        for &j in &positions {
            let x_inv = f.beta_pow(-(j as i64));
            let om = omega
                .iter()
                .rev()
                .fold(0, |acc, &c| f.add(f.mul(acc, x_inv), c));
            // Formal derivative in characteristic 2: odd-degree terms only.
            let mut dl: Symbol = 0;
            let mut xp: Symbol = 1;
            for d in (1..lambda.len()).step_by(2) {
                dl ^= f.mul(lambda[d], xp);
                xp = f.mul(xp, f.mul(x_inv, x_inv));
            }
            if dl == 0 {
                return DecodeOutcome::Failure;
            }
            let e = f.div(om, dl).expect("dl nonzero");
            corrected[j] ^= e;
        }
        if !self.is_codeword(&corrected) {
            return DecodeOutcome::Failure;
        }
        DecodeOutcome::Corrected {
            codeword: corrected,
            errors_corrected: positions.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn rs73() -> RsCode {
        RsCode::new(Field::new(3).unwrap(), 3).unwrap()
    }

    /// All 512 codewords of the (7,3) code over GF(8), by encoding every
    /// message. Used as the brute-force oracle.
    fn all_codewords_73() -> Vec<Vec<Symbol>> {
        let code = rs73();
        let mut out = Vec::with_capacity(512);
        for m in 0..512u16 {
            let msg = [(m & 7) as Symbol, ((m >> 3) & 7) as Symbol, ((m >> 6) & 7) as Symbol];
            out.push(code.encode(&msg));
        }
        out
    }

    #[test]
    fn parameters() {
        let code = RsCode::new(Field::new(5).unwrap(), 15).unwrap();
        assert_eq!((code.n(), code.k(), code.delta(), code.t()), (31, 15, 17, 8));
        let code = RsCode::new(Field::new(8).unwrap(), 239).unwrap();
        assert_eq!((code.n(), code.delta(), code.t()), (255, 17, 8));
        let code = rs73();
        assert_eq!((code.n(), code.t(), code.delta()), (7, 2, 5));
    }

    #[test]
    fn odd_redundancy_rejected() {
        assert!(RsCode::new(Field::new(3).unwrap(), 4).is_err());
    }

    #[test]
    fn generator_has_roots_at_beta_powers() {
        let code = RsCode::new(Field::new(4).unwrap(), 9).unwrap();
        let f = code.field();
        for i in 1..=6i64 {
            let x = f.beta_pow(i);
            let val = code
                .generator()
                .iter()
                .rev()
                .fold(0, |acc, &c| f.add(f.mul(acc, x), c));
            assert_eq!(val, 0);
        }
    }

    #[test]
    fn encode_zero_and_syndromes() {
        let code = rs73();
        assert_eq!(code.encode(&[0, 0, 0]), vec![0; 7]);
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..200 {
            let msg: Vec<Symbol> = (0..3).map(|_| rng.random_range(0..8)).collect();
            let cw = code.encode(&msg);
            assert!(code.is_codeword(&cw));
            assert!(code.syndromes(&cw).iter().all(|&s| s == 0));
        }
    }

    #[test]
    fn encode_closure_matches_enumeration() {
        // Linear-code closure: sum of any two encoded words is again in the
        // 512-codeword set.
        let cws = all_codewords_73();
        let set: std::collections::HashSet<Vec<Symbol>> = cws.iter().cloned().collect();
        assert_eq!(set.len(), 512);
        let f = Field::new(3).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for _ in 0..100 {
            let a = &cws[rng.random_range(0..512)];
            let b = &cws[rng.random_range(0..512)];
            let sum: Vec<Symbol> = a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect();
            assert!(set.contains(&sum));
        }
    }

    #[test]
    fn syndrome_matches_matrix_product() {
        let code = rs73();
        let f = code.field();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..100 {
            let word: Vec<Symbol> = (0..7).map(|_| rng.random_range(0..8)).collect();
            let expect: Vec<Symbol> = code
                .h_s()
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&word)
                        .fold(0, |acc, (&h, &w)| f.add(acc, f.mul(h, w)))
                })
                .collect();
            assert_eq!(code.syndromes(&word), expect);
        }
    }

    #[test]
    fn single_error_syndrome_form() {
        let code = rs73();
        let f = code.field();
        let cw = code.encode(&[1, 5, 2]);
        let j = 4usize;
        let e: Symbol = 6;
        let mut word = cw.clone();
        word[j] ^= e;
        let synd = code.syndromes(&word);
        for (r, &s) in synd.iter().enumerate() {
            assert_eq!(s, f.mul(e, f.beta_pow((r as i64 + 1) * j as i64)));
        }
    }

    #[test]
    fn decode_clean_codeword() {
        let code = rs73();
        let cw = code.encode(&[7, 0, 3]);
        assert_eq!(
            code.bm_decode(&cw),
            DecodeOutcome::Corrected { codeword: cw, errors_corrected: 0 }
        );
    }

    #[test]
    fn bounded_distance_exhaustive_weight_le_2() {
        let code = rs73();
        let cws = all_codewords_73();
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        for cw in cws.iter().step_by(7) {
            // all single-symbol errors
            for j in 0..7 {
                for e in 1..8u16 {
                    let mut word = cw.clone();
                    word[j] ^= e;
                    assert_eq!(code.bm_decode(&word).codeword(), Some(cw.as_slice()));
                }
            }
            // sampled double errors
            for _ in 0..50 {
                let j1 = rng.random_range(0..7);
                let mut j2 = rng.random_range(0..7);
                while j2 == j1 {
                    j2 = rng.random_range(0..7);
                }
                let mut word = cw.clone();
                word[j1] ^= rng.random_range(1..8) as Symbol;
                word[j2] ^= rng.random_range(1..8) as Symbol;
                assert_eq!(code.bm_decode(&word).codeword(), Some(cw.as_slice()));
            }
        }
    }

    #[test]
    fn beyond_capability_output_is_still_codeword() {
        // (15,9) t=3: weight-4 patterns must yield failure or a valid (wrong)
        // codeword, never an invalid word labeled corrected.
        let code = RsCode::new(Field::new(4).unwrap(), 9).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..500 {
            let msg: Vec<Symbol> = (0..9).map(|_| rng.random_range(0..16)).collect();
            let cw = code.encode(&msg);
            let mut word = cw.clone();
            let mut positions: Vec<usize> = (0..15).collect();
            positions.shuffle(&mut rng);
            for &j in &positions[..4] {
                word[j] ^= rng.random_range(1..16) as Symbol;
            }
            if let DecodeOutcome::Corrected { codeword, errors_corrected } = code.bm_decode(&word)
            {
                assert!(code.is_codeword(&codeword));
                assert!(errors_corrected <= code.t());
            }
        }
    }

    #[test]
    fn random_correctable_errors_all_weights() {
        let code = RsCode::new(Field::new(5).unwrap(), 15).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        for weight in 0..=code.t() {
            for _ in 0..20 {
                let msg: Vec<Symbol> = (0..15).map(|_| rng.random_range(0..32)).collect();
                let cw = code.encode(&msg);
                let mut word = cw.clone();
                let mut positions: Vec<usize> = (0..31).collect();
                positions.shuffle(&mut rng);
                for &j in &positions[..weight] {
                    word[j] ^= rng.random_range(1..32) as Symbol;
                }
                assert_eq!(code.bm_decode(&word).codeword(), Some(cw.as_slice()), "w={weight}");
            }
        }
    }

    #[test]
    fn nearest_codeword_oracle_agreement() {
        // Wherever the nearest codeword is unique and within distance t,
        // BM-HDD must return it.
        let code = rs73();
        let cws = all_codewords_73();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..300 {
            let word: Vec<Symbol> = (0..7).map(|_| rng.random_range(0..8)).collect();
            let mut best = usize::MAX;
            let mut best_cw = None;
            let mut unique = true;
            for cw in &cws {
                let d = cw.iter().zip(&word).filter(|(a, b)| a != b).count();
                if d < best {
                    best = d;
                    best_cw = Some(cw);
                    unique = true;
                } else if d == best {
                    unique = false;
                }
            }
            if best <= code.t() && unique {
                assert_eq!(code.bm_decode(&word).codeword(), best_cw.map(|c| c.as_slice()));
            }
        }
    }
}
