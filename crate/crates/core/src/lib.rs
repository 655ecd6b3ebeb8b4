//! Simulation of controlled bidirectional remote state preparation.
//!
//! * [`qmath`]: dense state vectors, density matrices, partial trace,
//!   measurement and fidelity.
//! * [`channels`]: Bell and GHZ resources and the five- and seven-qubit
//!   controlled channels.
//! * [`protocols`]: probabilistic, deterministic and joint protocols run as
//!   Alice/Bob/Charlie state machines that emit transcripts.
//! * [`noise`]: amplitude- and phase-damping Kraus sets with correlated,
//!   grouped application.
//! * [`analysis`]: the post-selected noisy fidelity pipeline, closed-form
//!   expressions, sweeps and comparison reports.
//! * [`verify`]: named verification suites used by the CLI and the
//!   acceptance tests.

pub mod analysis;
pub mod channels;
pub mod error;
pub mod noise;
pub mod protocols;
pub mod qmath;
pub mod verify;

pub use error::{Error, Result};
