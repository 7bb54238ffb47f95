//! Residue number system codec for the three-moduli set `{2^n, 2^2n - 1, 2^2n + 1}`.
//!
//! The crate is organised bottom-up:
//!
//! * [`moduli`]: the moduli set, forward conversion and the big-integer CRT
//!   reconstruction that serves as the correctness reference.
//! * [`channel`]: per-channel modular arithmetic, fold reductions and the
//!   one's-complement / circular-shift primitives for `2^k - 1` moduli.
//! * [`bitword`]: fixed-width words built from MSB-first bit segments.
//! * [`converter`]: the residue-to-binary datapath (operand preparation, one
//!   carry-save adder with end-around carry, one modulo `2^4n - 1` adder).
//! * [`cost`]: the unit-gate area/delay model used to compare converters.
//! * [`cli`]: the `rns3` command-line front end.

pub mod bitword;
pub mod channel;
pub mod cli;
pub mod converter;
pub mod cost;
pub mod error;
pub mod moduli;
pub mod numfmt;
pub mod verify;

pub use bitword::BitWord;
pub use channel::{
    channel_op, neg_mod_pow2_minus1, reduce_mod, rns_op, rotl_mod_pow2_minus1, ChannelId, ChannelKind, Op,
};
pub use converter::{
    csa_eac, merge_constant_regions, mod_add_end_around, prepare_operands, raw_operands, reverse_convert,
    reverse_convert_traced, ConversionTrace, OperandSet, RawOperands,
};
pub use error::{Result, RnsError};
pub use moduli::{
    crt_reconstruct, forward_convert, inverse_constants, pairwise_coprime, ModuliSet, ResidueVector,
};
