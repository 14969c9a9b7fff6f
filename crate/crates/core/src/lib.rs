//! Simulation and receiver DSP for a pilot-aided, Gaussian-modulated CV-QKD link.
//!
//! The crate models the full desk-scale experiment: transmitter waveform
//! synthesis ([`txgen`]), a fiber channel with time-varying polarization
//! rotation and laser phase noise ([`channel`]), shared receiver DSP
//! ([`dsp`]), two compensation chains — a joint polarization + phase
//! unscented Kalman filter ([`ukf`]) and a one-tap CMA followed by a
//! phase-only UKF ([`cma`]) — and the security analysis that turns aligned
//! symbol frames into excess noise, mutual information, Holevo bound and
//! secret key fraction ([`security`]). [`experiment`] wires everything into
//! reproducible multi-measurement runs.
//!
//! Units: quadrature variances are expressed in shot-noise units (SNU),
//! calibrated so a shot-noise-only detected stream has variance 1 per
//! quadrature.

pub mod channel;
pub mod cma;
pub mod dsp;
pub mod error;
pub mod experiment;
pub mod security;
pub mod seeds;
pub mod txgen;
pub mod ukf;
pub mod waveform;

pub use error::{Error, Result};
pub use waveform::DualPolWaveform;

/// Complex sample type used throughout the crate.
pub type Complex64 = num_complex::Complex<f64>;
