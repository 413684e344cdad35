//! The slot loop and the two scheduling heuristics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{random_coefficients, CodedPacket};

use super::config::{InnovationMode, Policy, SystemConfig};
use super::receiver::ReceiverState;

/// Outcome of one simulated transfer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimResult {
    /// Slot at which the last receiver finished.
    pub completion_slot: u64,
    /// For each block `i`, the slot at which every receiver had passed it.
    pub per_batch_finish: Vec<u64>,
    /// Out-of-order packets dropped across all receivers.
    pub total_discarded: u64,
    /// Slots in which no connected receiver was still transferring.
    pub total_idle_slots: u64,
}

/// Least-Received heuristic: the block of the connected, unfinished receiver
/// holding the fewest packets overall. Ties prefer the smaller block id,
/// then the smaller receiver index.
pub fn select_batch_lr(states: &[ReceiverState], connected: &[bool]) -> Option<u64> {
    let mut best: Option<(u64, u64)> = None;
    for (state, on) in states.iter().zip(connected) {
        if !on || state.is_finished() {
            continue;
        }
        let key = (state.cumulative_received(), state.batch_id());
        if best.is_none_or(|b| key < b) {
            best = Some(key);
        }
    }
    best.map(|(_, batch)| batch)
}

/// Random-Selection heuristic: block `i` with probability `N_i / N_c` over
/// the connected, unfinished receivers. Drawing a uniformly random eligible
/// receiver and using its block realizes those odds exactly.
pub fn select_batch_rs<R: Rng + ?Sized>(
    states: &[ReceiverState],
    connected: &[bool],
    rng: &mut R,
) -> Option<u64> {
    let eligible: Vec<u64> = states
        .iter()
        .zip(connected)
        .filter(|(state, on)| **on && !state.is_finished())
        .map(|(state, _)| state.batch_id())
        .collect();
    if eligible.is_empty() {
        return None;
    }
    Some(eligible[rng.random_range(0..eligible.len())])
}

/// Runs one transfer to completion. Deterministic in
/// `(config.master_seed, trial_index)`.
pub fn run_trial(config: &SystemConfig, trial_index: u64) -> SimResult {
    run_trial_observed(config, trial_index, |_, _| {})
}

/// [`run_trial`] with a per-slot observer over the receiver states, invoked
/// after each slot's deliveries have been applied.
pub fn run_trial_observed(
    config: &SystemConfig,
    trial_index: u64,
    mut observer: impl FnMut(u64, &[ReceiverState]),
) -> SimResult {
    debug_assert!(config.validate().is_ok());
    let mut rng = ChaCha8Rng::seed_from_u64(config.master_seed);
    rng.set_stream(trial_index);

    let n = config.receivers as usize;
    let block_count = config.block_count();
    let mut states: Vec<ReceiverState> = (0..n)
        .map(|_| ReceiverState::new(config.window, block_count, config.mode))
        .collect();
    let mut connected = vec![false; n];
    let mut per_batch_finish = vec![0u64; block_count as usize];
    let mut batches_done = 0u64;
    let mut idle_slots = 0u64;
    let mut unfinished = n;
    let mut slot = 0u64;

    while unfinished > 0 {
        slot += 1;
        // Connectivity draws consume the stream in receiver order.
        for (i, on) in connected.iter_mut().enumerate() {
            *on = rng.random::<f64>() < config.connectivity.prob(i);
        }

        let selected = match config.policy {
            Policy::LeastReceived => select_batch_lr(&states, &connected),
            Policy::RandomSelection => select_batch_rs(&states, &connected, &mut rng),
        };
        let Some(batch) = selected else {
            idle_slots += 1;
            observer(slot, &states);
            continue;
        };

        // One broadcast packet per slot; fresh coefficients every time.
        let packet = match config.mode {
            InnovationMode::Ideal => None,
            InnovationMode::FiniteField => Some(CodedPacket {
                coefficients: random_coefficients(config.window as usize, &mut rng),
                payload: vec![],
            }),
        };

        for (state, on) in states.iter_mut().zip(&connected) {
            if !on || state.is_finished() {
                continue;
            }
            if state.batch_id() == batch {
                state.receive(packet.as_ref());
                if state.is_finished() {
                    unfinished -= 1;
                }
            } else {
                state.discard();
            }
            #[cfg(debug_assertions)]
            state.check_invariants();
        }

        while batches_done < block_count
            && states.iter().all(|s| s.batch_id() > batches_done + 1)
        {
            per_batch_finish[batches_done as usize] = slot;
            batches_done += 1;
        }
        observer(slot, &states);
    }

    SimResult {
        completion_slot: slot,
        per_batch_finish,
        total_discarded: states.iter().map(|s| s.discarded()).sum(),
        total_idle_slots: idle_slots,
    }
}
