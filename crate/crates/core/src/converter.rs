//! Residue-to-binary converter for `{2^n, 2^2n - 1, 2^2n + 1}`.
//!
//! With `Y = floor(X / 2^n)` the CRT collapses to
//!
//! ```text
//! Y = | S1 + S2 + S3 |_(2^4n - 1)
//! S1 = -2^3n * R1
//! S2 = (2^(3n-1) + 2^(n-1)) * R2
//! S3 = (2^(3n-1) - 2^(n-1)) * R3
//! ```
//!
//! and `X = Y * 2^n + R1`. Every multiplication by a power of two modulo
//! `2^4n - 1` is a rotation and every negation a complement, so all summands
//! are pure rewirings of the residue bits. `S3` splits into `S3,1` and `S3,2`;
//! `S1` and `S3,2` have complementary constant regions (the low `3n` bits of
//! `S1` and the high `n` bits of `S3,2` are all ones), so swapping those
//! regions produces `S1'` and an all-ones word that is zero modulo `2^4n - 1`.
//! Three operands remain, which one carry-save row with end-around carry
//! reduces to two, and a single modular adder finishes the sum.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bitword::BitWord;
use crate::error::{Result, RnsError};
use crate::moduli::{ModuliSet, ResidueVector};

/// The four summands before the constant-region merge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawOperands {
    /// `-2^3n R1`: complemented `R1` over `3n` ones.
    pub s1: BitWord,
    pub s2: BitWord,
    /// Positive half of `S3`.
    pub s31: BitWord,
    /// Negative half of `S3`: `n` ones, complemented `R3`, `n - 1` ones.
    pub s32: BitWord,
}

/// The three `4n`-bit words fed to the carry-save row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperandSet {
    pub s1_prime: BitWord,
    pub s2: BitWord,
    pub s31: BitWord,
}

impl OperandSet {
    pub fn width(&self) -> u32 {
        self.s1_prime.width()
    }
}

/// Builds the unmerged summands `S1`, `S2`, `S3,1`, `S3,2`.
pub fn raw_operands(set: &ModuliSet, rv: &ResidueVector) -> Result<RawOperands> {
    set.check(rv)?;
    let n = set.n();
    let r1 = BitWord::field(&rv.r1, 0, n);
    let r3 = BitWord::field(&rv.r3, 0, 2 * n + 1);

    let s1 = BitWord::concat(&[r1.complement(), BitWord::ones(3 * n)]);

    // (2^(3n-1) R2 rotated) + (2^(n-1) R2 rotated): the non-zero fields are
    // disjoint, so the sum is a concatenation.
    let s2 = BitWord::concat(&[
        BitWord::field(&rv.r2, 0, n + 1),
        BitWord::field(&rv.r2, 0, 2 * n),
        BitWord::field(&rv.r2, n + 1, n - 1),
    ]);

    let s31 = BitWord::concat(&[
        BitWord::field(&rv.r3, 0, n + 1),
        BitWord::zeros(2 * n - 1),
        BitWord::field(&rv.r3, n + 1, n),
    ]);

    let s32 = BitWord::concat(&[BitWord::ones(n), r3.complement(), BitWord::ones(n - 1)]);

    Ok(RawOperands { s1, s2, s31, s32 })
}

/// Swaps the constant regions of `S1` and `S3,2`.
///
/// Returns `S1'` and the residual word, which is always all ones.
pub fn merge_constant_regions(s1: &BitWord, s32: &BitWord, n: u32) -> (BitWord, BitWord) {
    let low = 3 * n;
    let s1_prime = BitWord::concat(&[
        BitWord::field(s1.value(), low, n),
        BitWord::field(s32.value(), 0, low),
    ]);
    let residual = BitWord::concat(&[
        BitWord::field(s32.value(), low, n),
        BitWord::field(s1.value(), 0, low),
    ]);
    (s1_prime, residual)
}

/// Operand preparation: the inverter-and-wiring stage ahead of the adder.
pub fn prepare_operands(set: &ModuliSet, rv: &ResidueVector) -> Result<OperandSet> {
    let raw = raw_operands(set, rv)?;
    let (s1_prime, residual) = merge_constant_regions(&raw.s1, &raw.s32, set.n());
    debug_assert!(residual.is_all_ones());
    Ok(OperandSet {
        s1_prime,
        s2: raw.s2,
        s31: raw.s31,
    })
}

/// One row of full adders with the carry out of the top bit wired back to bit 0.
///
/// Returns `(sum, carry)` with `a + b + c ≡ sum + carry (mod 2^w - 1)`.
pub fn csa_eac(a: &BitWord, b: &BitWord, c: &BitWord) -> Result<(BitWord, BitWord)> {
    let sum = a.xor(b)?.xor(c)?;
    let carry = BitWord::majority(a, b, c)?.rotate_left(1);
    Ok((sum, carry))
}

/// `(a + b) mod (2^w - 1)` with end-around carry, canonicalised to `[0, 2^w - 1)`.
pub fn mod_add_end_around(a: &BitWord, b: &BitWord) -> Result<BigUint> {
    if a.width() != b.width() {
        return Err(RnsError::InvalidParameter(format!(
            "word width mismatch: {} vs {}",
            a.width(),
            b.width()
        )));
    }
    let w = a.width();
    let raw = a.value() + b.value();
    let carry_out = raw.bit(u64::from(w));
    let mut folded = BitWord::field(&raw, 0, w).into_value();
    if carry_out {
        // Both inputs are < 2^w, so re-adding the carry cannot overflow again.
        folded += 1u32;
    }
    let out = BitWord::new(folded, w).expect("end-around sum fits the word");
    Ok(if out.is_all_ones() {
        BigUint::zero()
    } else {
        out.into_value()
    })
}

/// Every intermediate of one conversion, for tracing and inspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionTrace {
    pub operands: OperandSet,
    pub sum: BitWord,
    pub carry: BitWord,
    /// `floor(X / 2^n)`.
    pub y: BigUint,
    pub x: BigUint,
}

pub fn reverse_convert_traced(set: &ModuliSet, rv: &ResidueVector) -> Result<ConversionTrace> {
    let operands = prepare_operands(set, rv)?;
    let (sum, carry) = csa_eac(&operands.s1_prime, &operands.s2, &operands.s31)?;
    let y = mod_add_end_around(&sum, &carry)?;
    let n = set.n();
    let x = BitWord::concat(&[BitWord::field(&y, 0, 4 * n), BitWord::field(&rv.r1, 0, n)]).into_value();
    Ok(ConversionTrace {
        operands,
        sum,
        carry,
        y,
        x,
    })
}

/// Decodes a residue vector through the operand-preparation / CSA / adder datapath.
pub fn reverse_convert(set: &ModuliSet, rv: &ResidueVector) -> Result<BigUint> {
    reverse_convert_traced(set, rv).map(|t| t.x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn w(v: u64, width: u32) -> BitWord {
        BitWord::new(v, width).unwrap()
    }

    #[test]
    fn operands_n2() {
        let s = ModuliSet::new(2).unwrap();
        let ops = prepare_operands(&s, &ResidueVector::new(0u32, 10u32, 15u32)).unwrap();
        assert_eq!(ops.s1_prime, w(225, 8));
        assert_eq!(ops.s2, w(85, 8));
        assert_eq!(ops.s31, w(225, 8));
        assert_eq!(ops.s2.to_binary(), "01010101");
    }

    #[test]
    fn operands_n1_with_empty_segments() {
        let s = ModuliSet::new(1).unwrap();
        let ops = prepare_operands(&s, &ResidueVector::new(1u32, 2u32, 3u32)).unwrap();
        assert_eq!(ops.s1_prime, w(4, 4));
        assert_eq!(ops.s2, w(10, 4));
        assert_eq!(ops.s31, w(12, 4));
    }

    #[test]
    fn operands_zero_residues() {
        let s = ModuliSet::new(2).unwrap();
        let ops = prepare_operands(&s, &ResidueVector::zero()).unwrap();
        assert_eq!(ops.s1_prime, BitWord::ones(8));
        assert_eq!(ops.s2, BitWord::zeros(8));
        assert_eq!(ops.s31, BitWord::zeros(8));
    }

    #[test]
    fn merge_leaves_all_ones() {
        let s = ModuliSet::new(3).unwrap();
        let raw = raw_operands(&s, &ResidueVector::new(5u32, 40u32, 64u32)).unwrap();
        let (_, residual) = merge_constant_regions(&raw.s1, &raw.s32, 3);
        assert!(residual.is_all_ones());
    }

    #[test]
    fn csa_examples() {
        let (sum, carry) = csa_eac(&w(225, 8), &w(85, 8), &w(225, 8)).unwrap();
        assert_eq!((sum, carry), (w(85, 8), w(195, 8)));
        let z = BitWord::zeros(8);
        assert_eq!(csa_eac(&z, &z, &z).unwrap(), (z.clone(), z));
        let o = BitWord::ones(8);
        assert_eq!(csa_eac(&o, &o, &o).unwrap(), (o.clone(), o));
        assert!(csa_eac(&w(1, 8), &w(1, 8), &w(1, 7)).is_err());
    }

    #[test]
    fn modular_adder_examples() {
        assert_eq!(mod_add_end_around(&w(85, 8), &w(195, 8)).unwrap(), big(25));
        assert_eq!(mod_add_end_around(&w(255, 8), &w(0, 8)).unwrap(), big(0));
        assert_eq!(mod_add_end_around(&w(200, 8), &w(100, 8)).unwrap(), big(45));
        assert_eq!(mod_add_end_around(&w(255, 8), &w(255, 8)).unwrap(), big(0));
        assert!(mod_add_end_around(&w(1, 8), &w(1, 4)).is_err());
    }

    #[test]
    fn worked_examples() {
        let s = ModuliSet::new(2).unwrap();
        let t = reverse_convert_traced(&s, &ResidueVector::new(0u32, 10u32, 15u32)).unwrap();
        assert_eq!(t.y, big(25));
        assert_eq!(t.x, big(100));

        let s1 = ModuliSet::new(1).unwrap();
        let t = reverse_convert_traced(&s1, &ResidueVector::new(1u32, 2u32, 3u32)).unwrap();
        assert_eq!(t.y, big(11));
        assert_eq!(t.x, big(23));

        for n in 1..=6 {
            let s = ModuliSet::new(n).unwrap();
            assert_eq!(reverse_convert(&s, &ResidueVector::zero()).unwrap(), big(0));
        }
    }

    #[test]
    fn out_of_range_residue() {
        let s = ModuliSet::new(2).unwrap();
        assert!(matches!(
            reverse_convert(&s, &ResidueVector::new(0u32, 15u32, 15u32)),
            Err(RnsError::InvalidResidue { .. })
        ));
    }
}
