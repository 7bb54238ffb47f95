use num_bigint::BigUint;
use num_traits::Num;

use crate::error::{Result, RnsError};

/// Parses a decimal or `0x`-prefixed hexadecimal unsigned integer.
pub fn parse_uint(s: &str) -> Result<BigUint> {
    let s = s.trim().replace('_', "");
    let (digits, radix) = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => (hex, 16),
        None => (s.as_str(), 10),
    };
    if digits.is_empty() {
        return Err(RnsError::InvalidParameter(format!("'{s}' is not a number")));
    }
    BigUint::from_str_radix(digits, radix)
        .map_err(|_| RnsError::InvalidParameter(format!("'{s}' is not a number")))
}
