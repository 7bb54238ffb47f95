use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RnsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input to forward conversion lies outside the dynamic range.
    #[error("X must be < {modulus}")]
    OutOfRange { value: BigUint, modulus: BigUint },

    #[error("residue {value} is not in [0, {modulus}) for channel {channel}")]
    InvalidResidue {
        channel: String,
        value: BigUint,
        modulus: BigUint,
    },
}

pub type Result<T> = std::result::Result<T, RnsError>;
