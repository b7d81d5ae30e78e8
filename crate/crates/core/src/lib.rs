//! Simulation of two surface-code patches joined by a noisy interface.
//!
//! The pipeline is: [`layout`] builds an annotated memory-experiment
//! [`circuit`], noise is injected, [`dem`] extracts a detector error model,
//! [`decoder`] matches sampled syndromes from [`pauli::frame`], and
//! [`harness`] turns the counts into thresholds and suppression factors.

pub mod circuit;
pub mod decoder;
pub mod dem;
pub mod harness;
pub mod layout;
pub mod pauli;
