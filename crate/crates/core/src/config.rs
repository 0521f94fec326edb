//! Experiment configuration: a JSON document in lab units (μm, ns) whose
//! every field defaults to the silicon-on-insulator reference structure.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bwf::{JsdSpec, QuadratureSettings};
use crate::error::{Error, Result};
use crate::optics::StructureParams;
use crate::phase_matching::Scissor;
use crate::pump::{PumpPulse, PumpShape};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StructureConfig {
    pub ring_radius_um: f64,
    pub ring_spacing_um: f64,
    /// `1 − σ`.
    pub one_minus_sigma: f64,
    pub phase_index: f64,
    pub group_velocity_m_per_s: f64,
    pub gamma_per_w_m: f64,
    /// Resonance order `M₀` of the pump.
    pub pump_order: i64,
    pub first_ring_position_um: f64,
}

impl Default for StructureConfig {
    fn default() -> Self {
        Self {
            ring_radius_um: 5.0,
            ring_spacing_um: 15.0,
            one_minus_sigma: 0.0126,
            phase_index: 2.5,
            group_velocity_m_per_s: 0.75e8,
            gamma_per_w_m: 200.0,
            pump_order: 50,
            first_ring_position_um: 0.0,
        }
    }
}

impl StructureConfig {
    pub fn params(&self) -> StructureParams {
        StructureParams {
            ring_radius: self.ring_radius_um / 1e6,
            ring_spacing: self.ring_spacing_um / 1e6,
            num_rings: 1,
            self_coupling: 1.0 - self.one_minus_sigma,
            phase_index: self.phase_index,
            group_velocity: self.group_velocity_m_per_s,
            nonlinear_gamma: self.gamma_per_w_m,
            first_ring_position: self.first_ring_position_um / 1e6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PumpConfig {
    pub shape: PumpShape,
    /// Intensity FWHM (Gaussian) or length (top hat) of each pulse, ns.
    pub durations_ns: Vec<f64>,
    /// Mean pump photon number `|α|²`.
    pub photon_number: f64,
}

impl Default for PumpConfig {
    fn default() -> Self {
        Self {
            shape: PumpShape::Gaussian,
            durations_ns: vec![1.0, 0.1, 0.01],
            photon_number: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EfficiencyConfig {
    pub rings: Vec<usize>,
    /// Inclusive `[N_min, N_max]` windows for the power-law fits.
    pub fit_windows: Vec<[usize; 2]>,
}

impl Default for EfficiencyConfig {
    fn default() -> Self {
        Self {
            rings: (1..=50).collect(),
            fit_windows: vec![[1, 5], [1, 20], [10, 40], [20, 40]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JsdConfig {
    pub rings: Vec<usize>,
    pub half_width_linewidths: f64,
    pub grid_points: usize,
}

impl Default for JsdConfig {
    fn default() -> Self {
        let spec = JsdSpec::default();
        Self {
            rings: vec![1, 3, 5],
            half_width_linewidths: spec.half_width_linewidths,
            grid_points: spec.n_points,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FwhmConfig {
    pub rings: Vec<usize>,
}

impl Default for FwhmConfig {
    fn default() -> Self {
        Self {
            rings: (1..=10).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    /// Half-range around the pump in free spectral ranges.
    pub half_range_fsr: f64,
    pub points: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            half_range_fsr: 1.5,
            points: 20001,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub structure: StructureConfig,
    pub pump: PumpConfig,
    pub efficiency: EfficiencyConfig,
    pub jsd: JsdConfig,
    pub fwhm: FwhmConfig,
    pub spectrum: SpectrumConfig,
    pub quadrature: QuadratureSettings,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn check_rings(name: &str, rings: &[usize]) -> Result<()> {
    if rings.is_empty() {
        return Err(invalid(format!("{name}.rings must not be empty")));
    }
    if rings.contains(&0) {
        return Err(invalid(format!("{name}.rings must be positive")));
    }
    if rings.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(format!("{name}.rings must be strictly increasing")));
    }
    Ok(())
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.scissor(1)?;
        let p = &self.pump;
        if p.durations_ns.is_empty() {
            return Err(invalid("pump.durations_ns must not be empty"));
        }
        if p.durations_ns.iter().any(|d| !(*d > 0.0) || !d.is_finite()) {
            return Err(invalid("pump durations must be positive"));
        }
        if !(p.photon_number >= 0.0) || !p.photon_number.is_finite() {
            return Err(invalid("pump.photon_number must be non-negative"));
        }
        check_rings("efficiency", &self.efficiency.rings)?;
        if self.efficiency.fit_windows.iter().any(|w| w[0] > w[1]) {
            return Err(invalid("fit windows must be [min, max] with min <= max"));
        }
        check_rings("jsd", &self.jsd.rings)?;
        check_rings("fwhm", &self.fwhm.rings)?;
        if self.jsd.grid_points < 33 || self.jsd.grid_points % 2 == 0 {
            return Err(invalid("jsd.grid_points must be odd and at least 33"));
        }
        if !(self.jsd.half_width_linewidths > 0.0) {
            return Err(invalid("jsd.half_width_linewidths must be positive"));
        }
        if self.spectrum.points < 3 || !(self.spectrum.half_range_fsr > 0.0) {
            return Err(invalid("spectrum needs at least 3 points over a positive range"));
        }
        self.quadrature.validate().map_err(|e| invalid(e.to_string()))?;
        Ok(())
    }

    pub fn scissor(&self, rings: usize) -> Result<Scissor> {
        let params = self.structure.params().with_rings(rings);
        Scissor::new(params, self.structure.pump_order).map_err(|e| invalid(e.to_string()))
    }

    pub fn pump(&self, scissor: &Scissor, duration_ns: f64) -> Result<PumpPulse> {
        PumpPulse::new(self.pump.shape, scissor.triplet.pump, duration_ns / 1e9, self.pump.photon_number)
    }

    pub fn jsd_spec(&self) -> JsdSpec {
        JsdSpec {
            half_width_linewidths: self.jsd.half_width_linewidths,
            n_points: self.jsd.grid_points,
        }
    }
}
