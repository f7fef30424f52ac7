//! Capacity analysis of a noiseless diffusion-based molecular communication
//! link.
//!
//! A transmitter encodes bits by releasing molecules into a 2-D diffusive
//! medium; the receiver thresholds the concentration at symbol boundaries.
//! Because released molecules linger, the channel has memory: the admissible
//! waveform for each bit depends on the previous bit, which yields a
//! two-state symbol chain with four symbols of unequal durations. This crate
//!
//! * evaluates the exponential integral `E1` and the closed-form
//!   concentration responses of the 2-D medium ([`numerics`], [`diffusion`]),
//! * solves the transcendental timing equations for the symbol durations
//!   ([`timing`]),
//! * computes the discrete-noiseless-channel capacity `C = log2(W)` from the
//!   largest real root of the characteristic duration equation, with an
//!   independent block-counting oracle ([`capacity`]),
//! * simulates the link end to end: encode, propagate, threshold-decode
//!   ([`simulator`]).
//!
//! The numeric core is generic over the scalar type via [`Scalar`]
//! (`f32` or `f64`); `f64` aliases for the domain types are exported at the
//! crate root. All operations are pure functions and may be called
//! concurrently without coordination.

pub mod capacity;
pub mod diffusion;
pub mod error;
pub mod numerics;
pub mod scalar;
pub mod simulator;
pub mod timing;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use capacity::{count_blocks, solve_w, solve_w_special};
pub use diffusion::{impulse_response, normalize, pulse_response, schedule_response};
pub use numerics::{e1, find_root, log_e1};
pub use simulator::{
    decode, effective_alpha, encode, markov_boundary_concentrations, trace_full, trace_markov,
};
pub use timing::{solve_alpha, solve_durations, solve_t01, solve_t10, solve_t11};

// Concrete `f64` aliases for the domain types.
pub type Tolerance = numerics::Tolerance<f64>;
pub type PhysicalParams = diffusion::PhysicalParams<f64>;
pub type NormalizedParams = diffusion::NormalizedParams<f64>;
pub type Pulse = diffusion::Pulse<f64>;
pub type EmissionSchedule = diffusion::EmissionSchedule<f64>;
pub type SymbolDurations = timing::SymbolDurations<f64>;
pub type CapacityResult = capacity::CapacityResult<f64>;
pub type BlockCounts = capacity::BlockCounts<f64>;
pub type Symbol = simulator::Symbol<f64>;
pub type TraceSample = simulator::TraceSample<f64>;
