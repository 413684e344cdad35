//! GF(2⁸) random linear coding over fixed-size generations.
//!
//! The encoder emits random linear combinations of the `K` packets in a
//! generation; the decoder runs progressive Gaussian elimination and reports
//! per-packet innovation, recovering the original payloads once its matrix
//! reaches full rank. Field arithmetic is stateless; each [`DecoderState`]
//! is single-owner mutable.

mod decoder;
mod gf256;

pub use decoder::{encode, random_coefficients, AbsorbOutcome, CodedPacket, DecoderState};
pub use gf256::{Gf256, FIELD_SIZE, REDUCTION_POLY};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCountMismatch { expected: usize, got: usize },

    #[error("payload length {got} differs from the generation's {expected}")]
    PayloadLengthMismatch { expected: usize, got: usize },

    #[error("generation holds no packets")]
    EmptyGeneration,

    #[error("decoder already holds a full-rank system")]
    DecoderComplete,
}
