//! Per-channel modular arithmetic for moduli of the form `2^k`, `2^k - 1` and
//! `2^k + 1`.
//!
//! Reductions use the periodicity of powers of two rather than division:
//! `2^k ≡ 1 (mod 2^k - 1)` and `2^k ≡ -1 (mod 2^k + 1)`, so a number can be
//! folded by summing its `k`-bit chunks (with alternating signs for `2^k + 1`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Result, RnsError};
use crate::moduli::{ModuliSet, ResidueVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Pow2,
    Pow2Minus1,
    Pow2Plus1,
}

/// A channel modulus `2^k`, `2^k - 1` or `2^k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelId {
    kind: ChannelKind,
    k: u32,
}

impl ChannelId {
    pub fn new(kind: ChannelKind, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(RnsError::InvalidParameter(
                "channel width must be at least 1".into(),
            ));
        }
        Ok(ChannelId { kind, k })
    }

    pub(crate) fn pow2(k: u32) -> Self {
        ChannelId {
            kind: ChannelKind::Pow2,
            k,
        }
    }

    pub(crate) fn pow2_minus1(k: u32) -> Self {
        ChannelId {
            kind: ChannelKind::Pow2Minus1,
            k,
        }
    }

    pub(crate) fn pow2_plus1(k: u32) -> Self {
        ChannelId {
            kind: ChannelKind::Pow2Plus1,
            k,
        }
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn width(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> BigUint {
        let p = BigUint::one() << self.k;
        match self.kind {
            ChannelKind::Pow2 => p,
            ChannelKind::Pow2Minus1 => p - 1u32,
            ChannelKind::Pow2Plus1 => p + 1u32,
        }
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ChannelKind::Pow2 => write!(f, "2^{}", self.k),
            ChannelKind::Pow2Minus1 => write!(f, "2^{}-1", self.k),
            ChannelKind::Pow2Plus1 => write!(f, "2^{}+1", self.k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
}

impl FromStr for Op {
    type Err = RnsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add" | "+" => Ok(Op::Add),
            "sub" | "-" => Ok(Op::Sub),
            "mul" | "*" => Ok(Op::Mul),
            other => Err(RnsError::InvalidParameter(format!("unknown operation '{other}'"))),
        }
    }
}

fn low_mask(k: u32) -> BigUint {
    (BigUint::one() << k) - 1u32
}

/// Splits `x` into `k`-bit chunks, least significant first.
fn chunks(x: &BigUint, k: u32) -> impl Iterator<Item = BigUint> + '_ {
    let mask = low_mask(k);
    let count = x.bits().div_ceil(u64::from(k));
    (0..count).map(move |i| (x >> (i * u64::from(k))) & &mask)
}

fn fold_pow2_minus1(x: &BigUint, k: u32) -> BigUint {
    let modulus = low_mask(k);
    let mut acc = x.clone();
    while acc.bits() > u64::from(k) {
        acc = chunks(&acc, k).sum();
    }
    // acc < 2^k; the all-ones word is the second encoding of zero.
    if acc == modulus {
        BigUint::zero()
    } else {
        acc
    }
}

fn fold_pow2_plus1(x: &BigUint, k: u32, modulus: &BigUint) -> BigUint {
    if x < modulus {
        return x.clone();
    }
    let (mut pos, mut neg) = (BigUint::zero(), BigUint::zero());
    for (i, c) in chunks(x, k).enumerate() {
        if i % 2 == 0 {
            pos += c;
        } else {
            neg += c;
        }
    }
    let pos = fold_pow2_plus1(&pos, k, modulus);
    let neg = fold_pow2_plus1(&neg, k, modulus);
    let r = pos + modulus - neg;
    if &r >= modulus {
        r - modulus
    } else {
        r
    }
}

/// `x mod modulus(kind)` by masking or chunk folding.
pub fn reduce_mod(kind: ChannelId, x: &BigUint) -> BigUint {
    let k = kind.width();
    match kind.kind() {
        ChannelKind::Pow2 => x & low_mask(k),
        ChannelKind::Pow2Minus1 => fold_pow2_minus1(x, k),
        ChannelKind::Pow2Plus1 => fold_pow2_plus1(x, k, &kind.modulus()),
    }
}

fn check_operand(kind: ChannelId, modulus: &BigUint, v: &BigUint) -> Result<()> {
    if v >= modulus {
        return Err(RnsError::InvalidResidue {
            channel: kind.to_string(),
            value: v.clone(),
            modulus: modulus.clone(),
        });
    }
    Ok(())
}

/// `(a op b) mod modulus(kind)` for canonical operands.
pub fn channel_op(kind: ChannelId, op: Op, a: &BigUint, b: &BigUint) -> Result<BigUint> {
    let m = kind.modulus();
    check_operand(kind, &m, a)?;
    check_operand(kind, &m, b)?;
    let raw = match op {
        Op::Add => a + b,
        Op::Sub => a + &m - b,
        Op::Mul => a * b,
    };
    Ok(reduce_mod(kind, &raw))
}

/// Channel-wise operation on two residue vectors of the same moduli set.
pub fn rns_op(set: &ModuliSet, op: Op, a: &ResidueVector, b: &ResidueVector) -> Result<ResidueVector> {
    let [c1, c2, c3] = set.channels();
    Ok(ResidueVector {
        r1: channel_op(c1, op, &a.r1, &b.r1)?,
        r2: channel_op(c2, op, &a.r2, &b.r2)?,
        r3: channel_op(c3, op, &a.r3, &b.r3)?,
    })
}

fn check_pow2_minus1(v: &BigUint, k: u32) -> Result<BigUint> {
    let kind = ChannelId::new(ChannelKind::Pow2Minus1, k)?;
    let m = kind.modulus();
    check_operand(kind, &m, v)?;
    Ok(m)
}

/// `(v * 2^p) mod (2^k - 1)` as a circular left rotation of the `k`-bit word.
pub fn rotl_mod_pow2_minus1(v: &BigUint, k: u32, p: u64) -> Result<BigUint> {
    let mask = check_pow2_minus1(v, k)?;
    let s = (p % u64::from(k)) as u32;
    if s == 0 {
        return Ok(v.clone());
    }
    Ok(((v << s) | (v >> (k - s))) & mask)
}

/// `(-v) mod (2^k - 1)` as the one's complement of the `k`-bit word.
pub fn neg_mod_pow2_minus1(v: &BigUint, k: u32) -> Result<BigUint> {
    let mask = check_pow2_minus1(v, k)?;
    let r = v ^ &mask;
    Ok(if r == mask { BigUint::zero() } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn ch(kind: ChannelKind, k: u32) -> ChannelId {
        ChannelId::new(kind, k).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_mod(ch(ChannelKind::Pow2Minus1, 4), &big(300)), big(0));
        assert_eq!(reduce_mod(ch(ChannelKind::Pow2Plus1, 4), &big(300)), big(11));
        assert_eq!(reduce_mod(ch(ChannelKind::Pow2, 2), &big(300)), big(0));
        assert_eq!(reduce_mod(ch(ChannelKind::Pow2Minus1, 4), &big(15)), big(0));
        assert_eq!(reduce_mod(ch(ChannelKind::Pow2Plus1, 4), &big(16)), big(16));
        assert_eq!(reduce_mod(ch(ChannelKind::Pow2Plus1, 1), &big(2)), big(2));
        assert_eq!(reduce_mod(ch(ChannelKind::Pow2Minus1, 1), &big(7)), big(0));
    }

    #[test]
    fn reduce_matches_remainder_small() {
        for k in 1..=6 {
            for kind in [ChannelKind::Pow2, ChannelKind::Pow2Minus1, ChannelKind::Pow2Plus1] {
                let c = ch(kind, k);
                let m = c.modulus();
                for x in 0..5000u64 {
                    assert_eq!(reduce_mod(c, &big(x)), big(x) % &m, "{c} x={x}");
                }
            }
        }
    }

    #[test]
    fn zero_width_rejected() {
        assert!(ChannelId::new(ChannelKind::Pow2, 0).is_err());
    }

    #[test]
    fn channel_op_examples() {
        let c15 = ch(ChannelKind::Pow2Minus1, 4);
        let c17 = ch(ChannelKind::Pow2Plus1, 4);
        let c4 = ch(ChannelKind::Pow2, 2);
        assert_eq!(channel_op(c15, Op::Add, &big(10), &big(12)).unwrap(), big(7));
        assert_eq!(channel_op(c17, Op::Mul, &big(15), &big(6)).unwrap(), big(5));
        for a in 0..4 {
            assert_eq!(channel_op(c4, Op::Sub, &big(a), &big(a)).unwrap(), big(0));
        }
        assert_eq!(channel_op(c17, Op::Sub, &big(3), &big(16)).unwrap(), big(4));
        assert!(matches!(
            channel_op(c15, Op::Add, &big(15), &big(0)),
            Err(RnsError::InvalidResidue { .. })
        ));
    }

    #[test]
    fn rns_op_examples() {
        let s = ModuliSet::new(2).unwrap();
        let a = ResidueVector::new(0u32, 10u32, 15u32);
        let b = ResidueVector::new(1u32, 12u32, 6u32);
        assert_eq!(
            rns_op(&s, Op::Add, &a, &b).unwrap(),
            ResidueVector::new(1u32, 7u32, 4u32)
        );
        assert_eq!(
            rns_op(&s, Op::Mul, &a, &b).unwrap(),
            ResidueVector::new(0u32, 0u32, 5u32)
        );
        assert_eq!(rns_op(&s, Op::Add, &a, &ResidueVector::zero()).unwrap(), a);
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotl_mod_pow2_minus1(&big(6), 4, 2).unwrap(), big(9));
        assert_eq!(rotl_mod_pow2_minus1(&big(8), 4, 1).unwrap(), big(1));
        assert_eq!(rotl_mod_pow2_minus1(&big(13), 4, 0).unwrap(), big(13));
        assert!(rotl_mod_pow2_minus1(&big(15), 4, 1).is_err());
    }

    #[test]
    fn negation_examples() {
        assert_eq!(neg_mod_pow2_minus1(&big(6), 4).unwrap(), big(9));
        assert_eq!(neg_mod_pow2_minus1(&big(0), 4).unwrap(), big(0));
        assert_eq!(neg_mod_pow2_minus1(&big(14), 4).unwrap(), big(1));
        assert!(neg_mod_pow2_minus1(&big(15), 4).is_err());
    }

    #[test]
    fn op_parse() {
        assert_eq!("mul".parse::<Op>().unwrap(), Op::Mul);
        assert!("div".parse::<Op>().is_err());
    }
}
