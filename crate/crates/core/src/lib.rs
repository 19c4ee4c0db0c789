//! Quantum speed limit of a damped harmonic oscillator.
//!
//! A single bosonic mode coupled to an Ohmic-family bath at zero temperature,
//! prepared in a coherent state. The crate solves the exact amplitude
//! equation, analyses the single-excitation spectrum for a bound state, and
//! turns the resulting trajectory into speed-limit figures of merit in the
//! Fisher–Rao (Bures) and Wigner (Wasserstein-2) geometries.
//!
//! All routines are generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below fix the scalar to `f64`.

pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod io;
pub mod qsl;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod spectrum;

pub use error::{Error, Result};
pub use num_complex::{Complex, Complex64};
pub use scalar::Real;

pub type SpectralParams64 = spectral::SpectralParams<f64>;
pub type AmplitudeTrajectory64 = dynamics::AmplitudeTrajectory<f64>;
pub type BoundState64 = spectrum::BoundState<f64>;
pub type GaussianState64 = gaussian::GaussianState<f64>;
pub type CoherentTrajectory64<'a> = gaussian::CoherentTrajectory<'a, f64>;
pub type QslReport64 = qsl::QslReport<f64>;

pub type SpectralParams32 = spectral::SpectralParams<f32>;
pub type AmplitudeTrajectory32 = dynamics::AmplitudeTrajectory<f32>;
