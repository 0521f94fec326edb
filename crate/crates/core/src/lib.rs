//! Photon-pair generation by spontaneous four-wave mixing in a SCISSOR:
//! `N` identical ring resonators side-coupled to a single bus waveguide.
//!
//! The crate is organised bottom-up:
//!
//! * [`optics`]: dispersion, single-ring transfer functions, resonances.
//! * [`phase_matching`]: the inter-ring phase `μ`, global phase `χ`, the
//!   single-ring kernel and the `N`-ring phase-matching function `J`.
//! * [`pump`]: normalised pump spectral amplitudes.
//! * [`bwf`]: the biphoton amplitude, pair probability `|β|²` and joint
//!   spectral density grids.
//! * [`limits`]: long-pulse closed forms, the Fermi's-Golden-Rule route and
//!   the Dicke rate factor.
//! * [`analysis`], [`config`], [`experiments`]: feature extraction, scaling
//!   fits and the figure drivers used by the command-line tool.
//!
//! All frequencies are angular (rad/s) and all quantities SI unless a name
//! says otherwise.

pub mod analysis;
pub mod bwf;
pub mod config;
pub mod constants;
mod error;
pub mod experiments;
pub mod limits;
pub mod optics;
pub mod phase_matching;
pub mod pump;
pub mod quadrature;

pub use error::{Error, Result};
