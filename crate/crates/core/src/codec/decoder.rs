//! Generation encoder and progressive Gaussian-elimination decoder.

use rand::Rng;

use super::gf256::Gf256;
use super::CodecError;

/// One coded transmission: the combination coefficients plus the combined
/// payload bytes. Coefficient count always equals the generation size; the
/// payload length is constant within a generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedPacket {
    pub coefficients: Vec<Gf256>,
    pub payload: Vec<u8>,
}

/// Draws one uniformly random coefficient vector of length `window`.
///
/// Every transmission uses fresh coefficients; the all-zero vector is
/// possible and simply carries no information.
pub fn random_coefficients<R: Rng + ?Sized>(window: usize, rng: &mut R) -> Vec<Gf256> {
    let mut bytes = vec![0u8; window];
    rng.fill_bytes(&mut bytes);
    bytes.into_iter().map(Gf256).collect()
}

/// Combines a generation of equal-length payloads under the given
/// coefficients: `out[j] = sum_i coeff[i] * payload_i[j]`.
pub fn encode(generation: &[Vec<u8>], coefficients: &[Gf256]) -> Result<CodedPacket, CodecError> {
    if generation.is_empty() {
        return Err(CodecError::EmptyGeneration);
    }
    if coefficients.len() != generation.len() {
        return Err(CodecError::CoefficientCountMismatch {
            expected: generation.len(),
            got: coefficients.len(),
        });
    }
    let payload_len = generation[0].len();
    for packet in &generation[1..] {
        if packet.len() != payload_len {
            return Err(CodecError::PayloadLengthMismatch {
                expected: payload_len,
                got: packet.len(),
            });
        }
    }
    let mut payload = vec![0u8; payload_len];
    for (coeff, source) in coefficients.iter().zip(generation) {
        if coeff.is_zero() {
            continue;
        }
        for (out, byte) in payload.iter_mut().zip(source) {
            *out ^= (*coeff * Gf256(*byte)).0;
        }
    }
    Ok(CodedPacket {
        coefficients: coefficients.to_vec(),
        payload,
    })
}

/// Result of absorbing one packet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorbOutcome {
    /// Whether the packet increased the decoder rank.
    pub innovative: bool,
    /// The recovered generation, present exactly when rank reached the
    /// window size on this absorption.
    pub decoded: Option<Vec<Vec<u8>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Row {
    coefficients: Vec<Gf256>,
    payload: Vec<u8>,
}

/// Progressive eliminator for one generation.
///
/// Rows are stored normalized with a unit pivot, indexed by pivot column;
/// rank equals the number of stored rows and never decreases.
#[derive(Debug, Clone)]
pub struct DecoderState {
    window: usize,
    payload_len: Option<usize>,
    rows: Vec<Option<Row>>,
    rank: usize,
    complete: bool,
}

impl DecoderState {
    pub fn new(window: usize) -> Self {
        assert!(window >= 1, "generation size must be positive");
        Self {
            window,
            payload_len: None,
            rows: vec![None; window],
            rank: 0,
            complete: false,
        }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Runs one elimination step. Innovative packets raise the rank by one;
    /// the final packet triggers back-substitution and yields the original
    /// payloads in generation order.
    pub fn absorb(&mut self, packet: &CodedPacket) -> Result<AbsorbOutcome, CodecError> {
        if self.complete {
            return Err(CodecError::DecoderComplete);
        }
        if packet.coefficients.len() != self.window {
            return Err(CodecError::CoefficientCountMismatch {
                expected: self.window,
                got: packet.coefficients.len(),
            });
        }
        match self.payload_len {
            Some(len) if len != packet.payload.len() => {
                return Err(CodecError::PayloadLengthMismatch {
                    expected: len,
                    got: packet.payload.len(),
                });
            }
            None => self.payload_len = Some(packet.payload.len()),
            _ => {}
        }

        let mut coefficients = packet.coefficients.clone();
        let mut payload = packet.payload.clone();
        for col in 0..self.window {
            let lead = coefficients[col];
            if lead.is_zero() {
                continue;
            }
            match &self.rows[col] {
                Some(pivot) => {
                    // Pivot rows are normalized, so the factor is the lead
                    // coefficient itself.
                    eliminate(&mut coefficients, &mut payload, pivot, lead, col);
                }
                None => {
                    let inv = lead.inv();
                    for c in coefficients[col..].iter_mut() {
                        *c *= inv;
                    }
                    for byte in payload.iter_mut() {
                        *byte = (inv * Gf256(*byte)).0;
                    }
                    self.rows[col] = Some(Row {
                        coefficients,
                        payload,
                    });
                    self.rank += 1;
                    let decoded = if self.rank == self.window {
                        self.complete = true;
                        Some(self.back_substitute())
                    } else {
                        None
                    };
                    return Ok(AbsorbOutcome {
                        innovative: true,
                        decoded,
                    });
                }
            }
        }
        Ok(AbsorbOutcome {
            innovative: false,
            decoded: None,
        })
    }

    fn back_substitute(&mut self) -> Vec<Vec<u8>> {
        debug_assert_eq!(self.rank, self.window);
        for col in (0..self.window).rev() {
            let pivot = self.rows[col].take().expect("full-rank state");
            for row in self.rows[..col].iter_mut().flatten() {
                let factor = row.coefficients[col];
                if !factor.is_zero() {
                    eliminate(&mut row.coefficients, &mut row.payload, &pivot, factor, col);
                }
            }
            self.rows[col] = Some(pivot);
        }
        self.rows
            .iter()
            .map(|row| row.as_ref().expect("full-rank state").payload.clone())
            .collect()
    }
}

/// `dst -= factor * pivot`, touching coefficients from `from_col` on (earlier
/// columns of the pivot row are zero by construction).
fn eliminate(
    dst_coeffs: &mut [Gf256],
    dst_payload: &mut [u8],
    pivot: &Row,
    factor: Gf256,
    from_col: usize,
) {
    for (dst, src) in dst_coeffs[from_col..]
        .iter_mut()
        .zip(&pivot.coefficients[from_col..])
    {
        *dst -= factor * *src;
    }
    for (dst, src) in dst_payload.iter_mut().zip(&pivot.payload) {
        *dst ^= (factor * Gf256(*src)).0;
    }
}
