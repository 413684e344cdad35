//! Completion-time analysis and simulation for broadcasting a blocked file
//! to many receivers over independent ON/OFF erasure channels.
//!
//! A base station holds a file of `F` packets, splits it into `b = F / K`
//! blocks, and in every time slot broadcasts one random linear combination of
//! the `K` packets of a chosen block. Each receiver hears the slot with its
//! own Bernoulli connectivity probability and decodes a block once it has
//! collected `K` innovative combinations. The crate has three pillars:
//!
//! * [`analysis`] — closed forms for the expected completion time (the exact
//!   negative-binomial tail series and a Gaussian order-statistic
//!   approximation) plus a solver for the smallest coding window that keeps
//!   the completion time within a relative delay budget.
//! * [`engine`] — a slotted Monte Carlo simulator with per-receiver Bernoulli
//!   connectivity, the two block-scheduling heuristics, and deterministic
//!   counter-based seeding.
//! * [`codec`] — a GF(2⁸) random linear encoder/decoder used to validate the
//!   idealization that every received combination is innovative.

pub mod analysis;
pub mod codec;
pub mod engine;
