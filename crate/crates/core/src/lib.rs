//! Limited-feedback power and bit allocation for point-to-point OFDM links.
//!
//! The crate draws Rayleigh multipath channels with a uniform power delay
//! profile, models what a receiver sends back over a finite-rate feedback
//! link (clustered on/off flags or quantized node gains), reconstructs the
//! channel at the transmitter by linear or quadratic interpolation, and
//! allocates power (water-filling, clustered on/off, uniform) or bits
//! (greedy QAM loading). Monte Carlo averages of sum capacity and system BER
//! are produced by [`experiment`].

pub mod bits;
pub mod channel;
pub mod config;
pub mod error;
pub mod experiment;
pub mod interpolation;
pub mod metrics;
pub mod output;
pub mod power;
pub mod qfunc;
pub mod quantizer;
pub mod rng;
pub mod selftest;

pub use error::{Error, Result};

/// Floor applied to reconstructed squared gains.
pub const GAIN_FLOOR: f64 = 1e-9;
