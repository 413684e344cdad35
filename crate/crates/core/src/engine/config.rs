//! Experiment description.

use super::EngineError;

/// Block scheduling heuristic used when connected receivers disagree on the
/// block they are waiting for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Pick block `i` with probability `N_i / N_c` over the connected,
    /// unfinished receivers.
    RandomSelection,
    /// Pick the block of the connected receiver holding the fewest packets.
    LeastReceived,
}

impl Policy {
    pub fn label(self) -> &'static str {
        match self {
            Policy::RandomSelection => "rs",
            Policy::LeastReceived => "lr",
        }
    }
}

/// How receptions are counted toward decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InnovationMode {
    /// Every reception of the expected block counts (an infinite-field
    /// idealization).
    Ideal,
    /// Receptions count only when the GF(2⁸) decoder reports a rank
    /// increase.
    FiniteField,
}

/// Per-receiver channel quality: one shared probability or one per receiver.
#[derive(Debug, Clone, PartialEq)]
pub enum Connectivity {
    Uniform(f64),
    PerReceiver(Vec<f64>),
}

impl Connectivity {
    /// ON probability of the given receiver.
    pub fn prob(&self, receiver: usize) -> f64 {
        match self {
            Connectivity::Uniform(p) => *p,
            Connectivity::PerReceiver(ps) => ps[receiver],
        }
    }

    /// The shared probability, when the channel is symmetric.
    pub fn uniform_prob(&self) -> Option<f64> {
        match self {
            Connectivity::Uniform(p) => Some(*p),
            Connectivity::PerReceiver(_) => None,
        }
    }

    fn validate(&self, receivers: usize) -> Result<(), EngineError> {
        let check = |p: f64| {
            if p > 0.0 && p <= 1.0 {
                Ok(())
            } else {
                Err(EngineError::ProbabilityOutOfRange(p))
            }
        };
        match self {
            Connectivity::Uniform(p) => check(*p),
            Connectivity::PerReceiver(ps) => {
                if ps.len() != receivers {
                    return Err(EngineError::ConnectivityLength {
                        got: ps.len(),
                        expected: receivers,
                    });
                }
                ps.iter().try_for_each(|p| check(*p))
            }
        }
    }
}

/// Full description of one simulation experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub receivers: u32,
    /// File size in packets.
    pub file_size: u64,
    /// Coding window (block size) in packets; must divide `file_size`.
    pub window: u64,
    pub connectivity: Connectivity,
    pub policy: Policy,
    pub mode: InnovationMode,
    pub trials: u64,
    pub master_seed: u64,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.receivers == 0 {
            return Err(EngineError::NonPositive { name: "receivers" });
        }
        if self.file_size == 0 {
            return Err(EngineError::NonPositive { name: "file_size" });
        }
        if self.window == 0 {
            return Err(EngineError::NonPositive { name: "window" });
        }
        if self.trials == 0 {
            return Err(EngineError::NonPositive { name: "trials" });
        }
        if self.file_size % self.window != 0 {
            return Err(EngineError::NonDivisorWindow {
                file_size: self.file_size,
                window: self.window,
            });
        }
        self.connectivity.validate(self.receivers as usize)
    }

    /// Number of blocks `b = F / K`.
    pub fn block_count(&self) -> u64 {
        self.file_size / self.window
    }
}
