//! Desk-scale simulator and benchmark harness for deep binarized photonic
//! reservoir computing.
//!
//! The pipeline mirrors the physical system it stands in for: inputs and
//! stored reservoir states are basket-encoded into binary micromirror
//! patterns, propagated through a fixed complex random transform (the
//! scattering medium), detected as 8-bit intensities (the camera), and fed
//! through time-multiplexed leaky reservoir layers whose concatenated states
//! drive a ridge-regression readout.

pub mod encoding;
pub mod error;
pub mod features;
pub mod harness;
pub mod optics;
pub mod readout;
pub mod reservoir;
pub mod rng;

pub use error::{Error, Result};
