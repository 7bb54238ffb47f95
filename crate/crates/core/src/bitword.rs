use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Result, RnsError};

/// Unsigned word of a fixed bit width.
///
/// Words are assembled from MSB-first segment lists, the same way the operand
/// layouts are drawn. Zero-width segments are legal and contribute nothing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitWord {
    width: u32,
    value: BigUint,
}

fn mask(width: u32) -> BigUint {
    (BigUint::one() << width) - 1u32
}

impl BitWord {
    pub fn new(value: impl Into<BigUint>, width: u32) -> Result<Self> {
        let value = value.into();
        if value.bits() > u64::from(width) {
            return Err(RnsError::InvalidParameter(format!(
                "value {value} does not fit in {width} bits"
            )));
        }
        Ok(BitWord { width, value })
    }

    pub fn zeros(width: u32) -> Self {
        BitWord {
            width,
            value: BigUint::zero(),
        }
    }

    pub fn ones(width: u32) -> Self {
        BitWord {
            width,
            value: mask(width),
        }
    }

    /// Bits `lo .. lo + width` of `source` as a `width`-bit word.
    pub fn field(source: &BigUint, lo: u32, width: u32) -> Self {
        BitWord {
            width,
            value: (source >> lo) & mask(width),
        }
    }

    /// Concatenates segments, the first segment landing in the most significant bits.
    pub fn concat<'a>(segments: impl IntoIterator<Item = &'a BitWord>) -> Self {
        let mut width = 0;
        let mut value = BigUint::zero();
        for seg in segments {
            value = (value << seg.width) | &seg.value;
            width += seg.width;
        }
        BitWord { width, value }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }

    pub fn is_all_ones(&self) -> bool {
        self.value == mask(self.width)
    }

    pub fn bit(&self, j: u32) -> bool {
        self.value.bit(u64::from(j))
    }

    pub fn complement(&self) -> Self {
        BitWord {
            width: self.width,
            value: &self.value ^ mask(self.width),
        }
    }

    /// Circular left rotation by `p` positions within the word.
    pub fn rotate_left(&self, p: u32) -> Self {
        if self.width == 0 {
            return self.clone();
        }
        let s = p % self.width;
        if s == 0 {
            return self.clone();
        }
        let value = ((&self.value << s) | (&self.value >> (self.width - s))) & mask(self.width);
        BitWord {
            width: self.width,
            value,
        }
    }

    fn same_width(&self, other: &BitWord) -> Result<()> {
        if self.width != other.width {
            return Err(RnsError::InvalidParameter(format!(
                "word width mismatch: {} vs {}",
                self.width, other.width
            )));
        }
        Ok(())
    }

    pub fn xor(&self, other: &BitWord) -> Result<Self> {
        self.same_width(other)?;
        Ok(BitWord {
            width: self.width,
            value: &self.value ^ &other.value,
        })
    }

    /// Bitwise majority, i.e. the carry bits of a row of full adders.
    pub fn majority(a: &BitWord, b: &BitWord, c: &BitWord) -> Result<Self> {
        a.same_width(b)?;
        a.same_width(c)?;
        let value = (&a.value & &b.value) | (&a.value & &c.value) | (&b.value & &c.value);
        Ok(BitWord {
            width: a.width,
            value,
        })
    }

    /// MSB-first binary string, exactly `width` characters.
    pub fn to_binary(&self) -> String {
        (0..self.width)
            .rev()
            .map(|j| if self.bit(j) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary())
    }
}
