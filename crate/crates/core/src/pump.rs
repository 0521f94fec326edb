//! Pump pulses: normalised spectral amplitudes `φ_P(ω)` with
//! `∫|φ_P|² dω = 1`, flat spectral phase.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PumpShape {
    /// Rectangular in time over `ΔT`, a sinc in frequency.
    TopHatSinc,
    /// Bandwidth-limited Gaussian with temporal intensity FWHM `τ_pump`.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpPulse {
    pub shape: PumpShape,
    /// Carrier `ω_P`, rad/s.
    pub center: f64,
    /// `ΔT` for the top hat, intensity FWHM `τ_pump` for the Gaussian, s.
    pub duration: f64,
    /// Mean photon number per pulse `|α|²`.
    pub photon_number: f64,
}

impl PumpPulse {
    pub fn new(shape: PumpShape, center: f64, duration: f64, photon_number: f64) -> Result<Self> {
        if !(duration > 0.0) || !duration.is_finite() {
            return Err(domain(format!("pump duration must be positive, got {duration}")));
        }
        if !(center > 0.0) || !center.is_finite() {
            return Err(domain(format!("pump centre frequency must be positive, got {center}")));
        }
        if !(photon_number >= 0.0) || !photon_number.is_finite() {
            return Err(domain(format!("photon number must be non-negative, got {photon_number}")));
        }
        Ok(Self {
            shape,
            center,
            duration,
            photon_number,
        })
    }

    pub fn gaussian(center: f64, intensity_fwhm: f64) -> Result<Self> {
        Self::new(PumpShape::Gaussian, center, intensity_fwhm, 1.0)
    }

    pub fn top_hat(center: f64, length: f64) -> Result<Self> {
        Self::new(PumpShape::TopHatSinc, center, length, 1.0)
    }

    pub fn with_photon_number(mut self, photon_number: f64) -> Self {
        self.photon_number = photon_number;
        self
    }

    /// Nominal bandwidth `δ`: `1/τ_pump` for the Gaussian, `Δω = 2/ΔT` for
    /// the top hat.
    pub fn bandwidth_delta(&self) -> f64 {
        match self.shape {
            PumpShape::Gaussian => 1.0 / self.duration,
            PumpShape::TopHatSinc => 2.0 / self.duration,
        }
    }

    /// Spectral intensity standard deviation of the Gaussian,
    /// `σ_ω = √(2 ln 2)/τ_pump`; for the top hat, the sinc scale `Δω`.
    pub fn spectral_scale(&self) -> f64 {
        match self.shape {
            PumpShape::Gaussian => (2.0 * std::f64::consts::LN_2).sqrt() / self.duration,
            PumpShape::TopHatSinc => 2.0 / self.duration,
        }
    }

    /// Default truncation radius of the pump support, `max(10δ, Δ)`.
    pub fn support_half_width(&self, linewidth: f64) -> f64 {
        (10.0 * self.bandwidth_delta()).max(linewidth)
    }

    /// `φ_P(ω)` in s^{1/2}.
    pub fn spectral_amplitude(&self, omega: f64) -> Result<Complex64> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(domain(format!("frequency must be positive, got {omega}")));
        }
        Ok(Complex64::new(self.amplitude_at_detuning(omega - self.center), 0.0))
    }

    /// Real amplitude at detuning `ω − ω_P` (the spectral phase is flat).
    pub fn amplitude_at_detuning(&self, detuning: f64) -> f64 {
        let scale = self.spectral_scale();
        match self.shape {
            PumpShape::Gaussian => {
                let norm = (2.0 * PI * scale * scale).powf(-0.25);
                norm * (-detuning * detuning / (4.0 * scale * scale)).exp()
            }
            PumpShape::TopHatSinc => sinc(detuning / scale) / (PI * scale).sqrt(),
        }
    }
}

/// `sin(x)/x` with the removable point handled by its Taylor series.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}
