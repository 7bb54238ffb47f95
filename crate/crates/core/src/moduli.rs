//! The moduli set `{2^n, 2^2n - 1, 2^2n + 1}` and its forward/CRT conversions.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::channel::{reduce_mod, ChannelId};
use crate::error::{Result, RnsError};

/// A moduli set `{2^n, 2^2n - 1, 2^2n + 1}` together with its CRT constants.
///
/// All derived quantities are computed once at construction. The weights
/// `mhat_i = M / m_i` and their inverses `|mhat_i^-1|_{m_i}` are stored so the
/// reconstruction routines never have to recompute a modular inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliSet {
    n: u32,
    moduli: [BigUint; 3],
    range: BigUint,
    weights: [BigUint; 3],
    inverses: [BigUint; 3],
}

impl ModuliSet {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(RnsError::InvalidParameter("n must be at least 1".into()));
        }
        let one = BigUint::one();
        let m1 = &one << n;
        let p2n = &one << (2 * n);
        let m2 = &p2n - &one;
        let m3 = &p2n + &one;
        let moduli = [m1, m2, m3];

        if !pairwise_coprime(&moduli)? {
            // gcd(2^2n - 1, 2^2n + 1) divides 2^(2n+1) and both are odd.
            unreachable!("moduli set for n = {n} is not pairwise coprime");
        }

        let range: BigUint = moduli.iter().product();
        let weights = [
            &moduli[1] * &moduli[2],
            &moduli[0] * &moduli[2],
            &moduli[0] * &moduli[1],
        ];
        let half = &one << (n - 1);
        let inverses = [&moduli[0] - &one, half.clone(), half];

        let set = ModuliSet {
            n,
            moduli,
            range,
            weights,
            inverses,
        };
        for i in 0..3 {
            assert!(
                ((&set.weights[i] * &set.inverses[i]) % &set.moduli[i]).is_one(),
                "closed-form inverse for channel {} is wrong at n = {n}",
                i + 1
            );
        }
        Ok(set)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `[2^n, 2^2n - 1, 2^2n + 1]`.
    pub fn moduli(&self) -> &[BigUint; 3] {
        &self.moduli
    }

    pub fn modulus(&self, channel: usize) -> &BigUint {
        &self.moduli[channel - 1]
    }

    /// Dynamic range `M = m1 * m2 * m3 = 2^n (2^4n - 1)`.
    pub fn range(&self) -> &BigUint {
        &self.range
    }

    /// CRT weights `M / m_i`.
    pub fn weights(&self) -> &[BigUint; 3] {
        &self.weights
    }

    pub fn inverses(&self) -> &[BigUint; 3] {
        &self.inverses
    }

    /// Channel descriptors in the order `(2^n, 2^2n - 1, 2^2n + 1)`.
    pub fn channels(&self) -> [ChannelId; 3] {
        [
            ChannelId::pow2(self.n),
            ChannelId::pow2_minus1(2 * self.n),
            ChannelId::pow2_plus1(2 * self.n),
        ]
    }

    /// Bit width of each residue field: `n`, `2n`, `2n + 1`.
    pub fn residue_widths(&self) -> [u32; 3] {
        [self.n, 2 * self.n, 2 * self.n + 1]
    }

    /// Checks that every component of `rv` lies in its channel range.
    pub fn check(&self, rv: &ResidueVector) -> Result<()> {
        for (i, (r, m)) in rv.as_array().iter().zip(self.moduli.iter()).enumerate() {
            if *r >= m {
                return Err(RnsError::InvalidResidue {
                    channel: format!("R{}", i + 1),
                    value: (*r).clone(),
                    modulus: m.clone(),
                });
            }
        }
        Ok(())
    }

    /// Builds a residue vector after range-checking it against this set.
    pub fn residues(
        &self,
        r1: impl Into<BigUint>,
        r2: impl Into<BigUint>,
        r3: impl Into<BigUint>,
    ) -> Result<ResidueVector> {
        let rv = ResidueVector::new(r1, r2, r3);
        self.check(&rv)?;
        Ok(rv)
    }
}

/// Residue triple `(R1, R2, R3)` in canonical least non-negative form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueVector {
    pub r1: BigUint,
    pub r2: BigUint,
    pub r3: BigUint,
}

impl ResidueVector {
    pub fn new(r1: impl Into<BigUint>, r2: impl Into<BigUint>, r3: impl Into<BigUint>) -> Self {
        ResidueVector {
            r1: r1.into(),
            r2: r2.into(),
            r3: r3.into(),
        }
    }

    pub fn zero() -> Self {
        ResidueVector::new(0u32, 0u32, 0u32)
    }

    pub fn as_array(&self) -> [&BigUint; 3] {
        [&self.r1, &self.r2, &self.r3]
    }

    /// Residue of channel `i` (1-based).
    pub fn get(&self, i: usize) -> &BigUint {
        match i {
            1 => &self.r1,
            2 => &self.r2,
            3 => &self.r3,
            _ => panic!("channel index {i} out of range 1..=3"),
        }
    }

    /// `r_{i,j}`: bit `j` of residue `R_i`, where bit 0 is the least significant.
    pub fn bit(&self, i: usize, j: u64) -> bool {
        self.get(i).bit(j)
    }
}

impl fmt::Display for ResidueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R1={} R2={} R3={}", self.r1, self.r2, self.r3)
    }
}

/// True iff every pair of `values` is coprime.
pub fn pairwise_coprime(values: &[BigUint]) -> Result<bool> {
    if values.is_empty() {
        return Err(RnsError::InvalidParameter("empty moduli list".into()));
    }
    if values.iter().any(Zero::is_zero) {
        return Err(RnsError::InvalidParameter("moduli must be at least 1".into()));
    }
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            if !a.gcd(b).is_one() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Encodes `x` into its three residues using the per-channel fold reductions.
pub fn forward_convert(set: &ModuliSet, x: &BigUint) -> Result<ResidueVector> {
    if x >= set.range() {
        return Err(RnsError::OutOfRange {
            value: x.clone(),
            modulus: set.range().clone(),
        });
    }
    let [c1, c2, c3] = set.channels();
    Ok(ResidueVector {
        r1: reduce_mod(c1, x),
        r2: reduce_mod(c2, x),
        r3: reduce_mod(c3, x),
    })
}

/// Reference CRT reconstruction with generic big-integer arithmetic.
///
/// Each term `mhat_i * |inv_i * R_i|_{m_i}` is reduced modulo `M` before it is
/// accumulated; the final reduction absorbs the `M * K` correction.
pub fn crt_reconstruct(set: &ModuliSet, rv: &ResidueVector) -> Result<BigUint> {
    set.check(rv)?;
    let m = set.range();
    let mut acc = BigUint::zero();
    for i in 0..3 {
        let inner = (&set.inverses[i] * rv.as_array()[i]) % &set.moduli[i];
        acc += (&set.weights[i] * inner) % m;
    }
    Ok(acc % m)
}

/// The closed-form inverses `(2^n - 1, 2^(n-1), 2^(n-1))`.
pub fn inverse_constants(set: &ModuliSet) -> (BigUint, BigUint, BigUint) {
    let [a, b, c] = set.inverses().clone();
    for i in 0..3 {
        debug_assert!(((&set.weights()[i] * &set.inverses()[i]) % &set.moduli()[i]).is_one());
    }
    (a, b, c)
}
