//! GF(2^p) arithmetic with log/antilog tables and the polynomial-basis bit
//! representation used for binary image expansion.

use crate::{Error, Result};

/// A field element, stored as a p-bit integer in the polynomial basis
/// {β^0, β, ..., β^(p-1)}: bit `h` is the coefficient of β^h.
pub type Symbol = u16;

/// Conventional primitive polynomials for GF(2^p), p = 2..=12, given as bit
/// masks with bit `i` the coefficient of x^i.
const PRIMITIVE_POLYS: [(u32, u32); 11] = [
    (2, 0b111),              // x^2 + x + 1
    (3, 0b1011),             // x^3 + x + 1
    (4, 0b1_0011),           // x^4 + x + 1
    (5, 0b10_0101),          // x^5 + x^2 + 1
    (6, 0b100_0011),         // x^6 + x + 1
    (7, 0b1000_1001),        // x^7 + x^3 + 1
    (8, 0b1_0001_1101),      // x^8 + x^4 + x^3 + x^2 + 1
    (9, 0b10_0001_0001),     // x^9 + x^4 + 1
    (10, 0b100_0000_1001),   // x^10 + x^3 + 1
    (11, 0b1000_0000_0101),  // x^11 + x^2 + 1
    (12, 0b1_0000_0101_0011),// x^12 + x^6 + x^4 + x + 1
];

/// GF(2^p) arithmetic context.
///
/// Multiplication and inversion go through discrete-log tables; addition is
/// bitwise XOR. Immutable after construction and safe to share across
/// concurrent decoding trials.
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    q: usize,
    primitive_poly: u32,
    /// log[a] = i such that β^i = a, for a in 1..q.
    log: Vec<u16>,
    /// antilog[i] = β^i, for i in 0..q-1.
    antilog: Vec<u16>,
}

impl Field {
    /// Builds GF(2^p) with the conventional primitive polynomial for `p`.
    pub fn new(p: u32) -> Result<Field> {
        let poly = PRIMITIVE_POLYS
            .iter()
            .find(|&&(deg, _)| deg == p)
            .map(|&(_, poly)| poly)
            .ok_or_else(|| Error::config(format!("unsupported extension degree p={p}")))?;
        Field::with_polynomial(p, poly)
    }

    /// Builds GF(2^p) from an explicit degree-p polynomial; rejects
    /// non-primitive polynomials.
    pub fn with_polynomial(p: u32, primitive_poly: u32) -> Result<Field> {
        if !(2..=12).contains(&p) {
            return Err(Error::config(format!("extension degree p={p} outside 2..=12")));
        }
        if primitive_poly >> p != 1 {
            return Err(Error::config(format!(
                "polynomial {primitive_poly:#b} does not have degree {p}"
            )));
        }
        let q = 1usize << p;
        let mut log = vec![0u16; q];
        let mut antilog = vec![0u16; q - 1];
        let mut seen = vec![false; q];
        let mut el: u32 = 1;
        for (i, slot) in antilog.iter_mut().enumerate() {
            if seen[el as usize] {
                return Err(Error::config(format!(
                    "polynomial {primitive_poly:#b} is not primitive over GF(2)"
                )));
            }
            seen[el as usize] = true;
            *slot = el as u16;
            log[el as usize] = i as u16;
            el <<= 1;
            if el & (q as u32) != 0 {
                el ^= primitive_poly;
            }
        }
        if el != 1 {
            return Err(Error::config(format!(
                "polynomial {primitive_poly:#b} is not primitive over GF(2)"
            )));
        }
        Ok(Field { p, q, primitive_poly, log, antilog })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Field size q = 2^p.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// The primitive element β, represented by the polynomial x.
    pub fn beta(&self) -> Symbol {
        2
    }

    /// β^i for any integer exponent i (taken mod q-1).
    pub fn beta_pow(&self, i: i64) -> Symbol {
        let m = (self.q - 1) as i64;
        self.antilog[i.rem_euclid(m) as usize]
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, a: Symbol) -> Result<u16> {
        if a == 0 || (a as usize) >= self.q {
            return Err(Error::domain(format!("log of invalid element {a}")));
        }
        Ok(self.log[a as usize])
    }

    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        a ^ b
    }

    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.antilog[i % (self.q - 1)]
    }

    pub fn inv(&self, a: Symbol) -> Result<Symbol> {
        if a == 0 {
            return Err(Error::domain("inverse of zero"));
        }
        let i = (self.q - 1 - self.log[a as usize] as usize) % (self.q - 1);
        Ok(self.antilog[i])
    }

    pub fn div(&self, a: Symbol, b: Symbol) -> Result<Symbol> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e with a^0 = 1 (including 0^0 = 1) and 0^e = 0 for e > 0.
    pub fn pow(&self, a: Symbol, e: u64) -> Symbol {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let i = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.antilog[i as usize]
    }

    /// Coefficients of `s` over the polynomial basis: element `h` of the
    /// output is the coefficient of β^h.
    pub fn symbol_to_bits(&self, s: Symbol) -> Vec<u8> {
        (0..self.p).map(|h| ((s >> h) & 1) as u8).collect()
    }

    /// Inverse of [`Field::symbol_to_bits`].
    pub fn bits_to_symbol(&self, bits: &[u8]) -> Symbol {
        debug_assert_eq!(bits.len(), self.p as usize);
        bits.iter()
            .enumerate()
            .fold(0, |acc, (h, &b)| acc | (Symbol::from(b & 1) << h))
    }
}

/// Multiplies two GF(2)[x] polynomials given as bit masks and reduces the
/// product modulo `poly`. Table-free reference path used by tests to check
/// the log/antilog tables.
pub fn polymul_mod(a: u32, b: u32, poly: u32, p: u32) -> Symbol {
    let mut prod: u64 = 0;
    let mut aa = a as u64;
    let mut bb = b;
    while bb != 0 {
        if bb & 1 != 0 {
            prod ^= aa;
        }
        aa <<= 1;
        bb >>= 1;
    }
    while prod >= 1u64 << p {
        let deg = 63 - prod.leading_zeros();
        prod ^= (poly as u64) << (deg - p);
    }
    prod as Symbol
}
