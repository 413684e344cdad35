//! Per-receiver reception state.

use crate::codec::{CodedPacket, DecoderState};

use super::config::InnovationMode;

#[derive(Debug, Clone)]
enum BatchProgress {
    /// Ideal mode: a plain count of receptions in the current block.
    Count(u64),
    /// Finite-field mode: rank tracking through the actual decoder.
    Decoder(DecoderState),
}

/// One receiver's position in the file transfer.
///
/// `batch_id` walks 1..=b+1, where `b + 1` marks a finished receiver. The
/// running identity `cumulative_received == (batch_id - 1) * K +
/// received_in_batch` holds at every slot.
#[derive(Debug, Clone)]
pub struct ReceiverState {
    window: u64,
    block_count: u64,
    batch_id: u64,
    progress: BatchProgress,
    cumulative_received: u64,
    discarded: u64,
}

impl ReceiverState {
    pub fn new(window: u64, block_count: u64, mode: InnovationMode) -> Self {
        let progress = match mode {
            InnovationMode::Ideal => BatchProgress::Count(0),
            InnovationMode::FiniteField => {
                BatchProgress::Decoder(DecoderState::new(window as usize))
            }
        };
        Self {
            window,
            block_count,
            batch_id: 1,
            progress,
            cumulative_received: 0,
            discarded: 0,
        }
    }

    /// Ideal-mode state at an arbitrary position; handy for driving the
    /// scheduling policies directly.
    pub fn at_progress(window: u64, block_count: u64, batch_id: u64, received: u64) -> Self {
        assert!(batch_id >= 1 && batch_id <= block_count + 1);
        assert!(received < window, "a full block advances the batch id");
        assert!(batch_id <= block_count || received == 0);
        Self {
            window,
            block_count,
            batch_id,
            progress: BatchProgress::Count(received),
            cumulative_received: (batch_id - 1) * window + received,
            discarded: 0,
        }
    }

    /// Block this receiver is currently waiting on (`b + 1` once finished).
    pub fn batch_id(&self) -> u64 {
        self.batch_id
    }

    /// Innovative receptions inside the current block.
    pub fn received_in_batch(&self) -> u64 {
        match &self.progress {
            BatchProgress::Count(c) => *c,
            BatchProgress::Decoder(d) => d.rank() as u64,
        }
    }

    /// Innovative receptions across the whole transfer.
    pub fn cumulative_received(&self) -> u64 {
        self.cumulative_received
    }

    /// Out-of-order packets this receiver has dropped.
    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    pub fn is_finished(&self) -> bool {
        self.batch_id == self.block_count + 1
    }

    /// Delivers the slot's packet to this receiver; `packet` is present in
    /// finite-field mode. Returns whether the reception was innovative.
    pub(super) fn receive(&mut self, packet: Option<&CodedPacket>) -> bool {
        debug_assert!(!self.is_finished());
        let innovative = match &mut self.progress {
            BatchProgress::Count(c) => {
                *c += 1;
                true
            }
            BatchProgress::Decoder(decoder) => {
                let packet = packet.expect("finite-field mode requires a coded packet");
                decoder
                    .absorb(packet)
                    .expect("packet shape matches the decoder")
                    .innovative
            }
        };
        if innovative {
            self.cumulative_received += 1;
            if self.received_in_batch() == self.window {
                self.advance_batch();
            }
        }
        innovative
    }

    pub(super) fn discard(&mut self) {
        self.discarded += 1;
    }

    fn advance_batch(&mut self) {
        self.batch_id += 1;
        self.progress = match (&self.progress, self.is_finished()) {
            (BatchProgress::Count(_), _) | (_, true) => BatchProgress::Count(0),
            (BatchProgress::Decoder(_), false) => {
                BatchProgress::Decoder(DecoderState::new(self.window as usize))
            }
        };
    }

    /// Structural invariants, checked per slot in debug builds.
    pub fn check_invariants(&self) {
        assert!(self.batch_id >= 1 && self.batch_id <= self.block_count + 1);
        let in_batch = self.received_in_batch();
        assert!(in_batch <= self.window);
        assert!(
            !(self.is_finished()) || in_batch == 0,
            "finished receiver must hold an empty block"
        );
        assert_eq!(
            self.cumulative_received,
            (self.batch_id - 1) * self.window + in_batch,
            "cumulative count out of sync"
        );
    }
}
