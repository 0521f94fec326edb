//! Ring geometry, the dispersion model and single-ring transfer functions.
//!
//! A ring of circumference `l` side-coupled to the bus with real self- and
//! cross-coupling `σ`, `κ` (`σ² + κ² = 1`) is an all-pass element. Its
//! transmission phase and intra-ring field enhancement depend on frequency
//! only through the round-trip phase `k(ω)·l`, which we split into an
//! integer resonance order and a small local offset so that phases at the
//! resonances come out exact.

use std::f64::consts::{PI, TAU};

use log::warn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{domain, Result};

/// Geometry, coupling, dispersion and nonlinearity of an `N`-ring SCISSOR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructureParams {
    /// Ring radius `R`, m.
    pub ring_radius: f64,
    /// Centre-to-centre ring spacing `Λ`, m.
    pub ring_spacing: f64,
    pub num_rings: usize,
    /// Self-coupling `σ`, in (0, 1).
    pub self_coupling: f64,
    /// Effective phase index `n̄`.
    pub phase_index: f64,
    /// Group velocity `v_g`, m/s.
    pub group_velocity: f64,
    /// Effective nonlinear coefficient `γ`, 1/(W·m).
    pub nonlinear_gamma: f64,
    /// Position of the first ring along the bus, m.
    pub first_ring_position: f64,
}

impl StructureParams {
    /// The silicon-on-insulator structure used throughout the figures:
    /// `R = 5 μm`, `Λ = 15 μm`, `n̄ = 2.5`, `v_g = 0.75e8 m/s`,
    /// `1 − σ = 0.0126`, `γ = 200 (W·m)⁻¹`, a single ring.
    pub fn silicon_on_insulator() -> Self {
        Self {
            ring_radius: 5e-6,
            ring_spacing: 15e-6,
            num_rings: 1,
            self_coupling: 1.0 - 0.0126,
            phase_index: 2.5,
            group_velocity: 0.75e8,
            nonlinear_gamma: 200.0,
            first_ring_position: 0.0,
        }
    }

    pub fn with_rings(mut self, num_rings: usize) -> Self {
        self.num_rings = num_rings;
        self
    }

    /// Checks the structural invariants. Strong coupling (`1 − σ > 0.1`) is
    /// allowed but logged, since the Lorentzian forms lose accuracy there.
    pub fn validate(&self) -> Result<()> {
        let finite_positive = |v: f64| v.is_finite() && v > 0.0;
        if !finite_positive(self.ring_radius) {
            return Err(domain(format!("ring radius must be positive, got {}", self.ring_radius)));
        }
        if !finite_positive(self.ring_spacing) {
            return Err(domain(format!("ring spacing must be positive, got {}", self.ring_spacing)));
        }
        if self.num_rings == 0 {
            return Err(domain("number of rings must be at least 1"));
        }
        if !(self.self_coupling > 0.0 && self.self_coupling < 1.0) {
            return Err(domain(format!(
                "self-coupling must lie in (0, 1), got {}",
                self.self_coupling
            )));
        }
        if !finite_positive(self.phase_index) {
            return Err(domain(format!("phase index must be positive, got {}", self.phase_index)));
        }
        if !finite_positive(self.group_velocity) {
            return Err(domain(format!(
                "group velocity must be positive, got {}",
                self.group_velocity
            )));
        }
        if !finite_positive(self.nonlinear_gamma) {
            return Err(domain(format!(
                "nonlinear coefficient must be positive, got {}",
                self.nonlinear_gamma
            )));
        }
        if !self.first_ring_position.is_finite() {
            return Err(domain("first ring position must be finite"));
        }
        if 1.0 - self.self_coupling > 0.1 {
            warn!(
                "1 - sigma = {:.4} is outside the weak-coupling regime; Lorentzian approximations degrade",
                1.0 - self.self_coupling
            );
        }
        Ok(())
    }

    /// `κ = √(1 − σ²)`.
    pub fn cross_coupling(&self) -> f64 {
        (1.0 - self.self_coupling * self.self_coupling).sqrt()
    }

    /// Ring circumference `l = 2πR`.
    pub fn circumference(&self) -> f64 {
        TAU * self.ring_radius
    }

    /// Resonance FWHM `Δ = 2(1 − σ)v_g / l` in rad/s.
    pub fn linewidth(&self) -> f64 {
        2.0 * (1.0 - self.self_coupling) * self.group_velocity / self.circumference()
    }

    /// Free spectral range `v_g / l` in Hz.
    pub fn fsr(&self) -> f64 {
        self.group_velocity / self.circumference()
    }

    /// Angular spacing of adjacent resonances, `2π·FSR`.
    pub fn fsr_angular(&self) -> f64 {
        TAU * self.fsr()
    }

    /// Photon dwelling time `1/Δ`, s.
    pub fn dwell_time(&self) -> f64 {
        1.0 / self.linewidth()
    }

    /// Loaded quality factor `ω/Δ` of a resonance at `omega`.
    pub fn quality_factor(&self, omega: f64) -> f64 {
        omega / self.linewidth()
    }
}

/// Round-trip phase `k(ω)·l` split as `2π·order + offset`, with `offset`
/// measured from the nearest resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTripPhase {
    pub order: i64,
    pub offset: f64,
}

impl RoundTripPhase {
    pub fn total(&self) -> f64 {
        TAU * self.order as f64 + self.offset
    }
}

/// Linear (no group-velocity dispersion) wavenumber model anchored on one
/// ring resonance: `k(ω) = k(ω₀) + (ω − ω₀)/v_g` with `k(ω₀)·l = 2πM₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionModel {
    pub reference_order: i64,
    /// Resonance `ω₀` of order `M₀`, rad/s.
    pub reference_frequency: f64,
    pub group_velocity: f64,
    pub circumference: f64,
}

impl DispersionModel {
    /// Anchors the model on resonance `order`, placing it where the phase
    /// index gives `n̄·ω₀·l/c = 2π·order`.
    pub fn from_phase_index(params: &StructureParams, order: i64) -> Result<Self> {
        if order < 1 {
            return Err(domain(format!("resonance order must be positive, got {order}")));
        }
        let l = params.circumference();
        let omega0 = TAU * order as f64 * SPEED_OF_LIGHT / (params.phase_index * l);
        Ok(Self {
            reference_order: order,
            reference_frequency: omega0,
            group_velocity: params.group_velocity,
            circumference: l,
        })
    }

    /// Angular spacing between adjacent resonances.
    pub fn resonance_spacing(&self) -> f64 {
        TAU * self.group_velocity / self.circumference
    }

    /// Resonance frequency of `order`. Every resonance lookup in the crate
    /// goes through this expression so that equal orders give bit-identical
    /// frequencies.
    pub fn resonance(&self, order: i64) -> f64 {
        self.reference_frequency + (order - self.reference_order) as f64 * self.resonance_spacing()
    }

    pub fn round_trip_phase(&self, omega: f64) -> Result<RoundTripPhase> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(domain(format!("frequency must be positive, got {omega}")));
        }
        Ok(self.round_trip_phase_unchecked(omega))
    }

    pub(crate) fn round_trip_phase_unchecked(&self, omega: f64) -> RoundTripPhase {
        let steps = ((omega - self.reference_frequency) / self.resonance_spacing()).round() as i64;
        let order = self.reference_order + steps;
        let offset = (omega - self.resonance(order)) * self.circumference / self.group_velocity;
        RoundTripPhase { order, offset }
    }

    /// Nearest resonance order and the detuning `ω − ω_M` from it.
    pub fn nearest_resonance(&self, omega: f64) -> (i64, f64) {
        let phase = self.round_trip_phase_unchecked(omega);
        (phase.order, omega - self.resonance(phase.order))
    }
}

/// `k(ω)` in rad/m.
pub fn wavenumber(model: &DispersionModel, omega: f64) -> Result<f64> {
    Ok(model.round_trip_phase(omega)?.total() / model.circumference)
}

/// Non-linear part of the ring transmission phase as a function of the
/// local round-trip offset `x`: `2·atan(σ sin x / (1 − σ cos x))`.
///
/// The denominator is positive for `σ < 1`, so this is continuous and
/// `2π`-periodic in `x`.
pub fn excess_phase(sigma: f64, offset: f64) -> f64 {
    let (s, c) = offset.sin_cos();
    2.0 * (sigma * s / (1.0 - sigma * c)).atan()
}

/// Ring transmission phase `θ = π + kl + 2·atan(σ sin kl / (1 − σ cos kl))`,
/// continuous and strictly increasing in `ω`.
pub fn transmission_phase(params: &StructureParams, model: &DispersionModel, omega: f64) -> Result<f64> {
    let phase = model.round_trip_phase(omega)?;
    Ok(transmission_phase_of(params.self_coupling, phase))
}

pub(crate) fn transmission_phase_of(sigma: f64, phase: RoundTripPhase) -> f64 {
    PI + phase.total() + excess_phase(sigma, phase.offset)
}

/// All-pass transmission `T = (σ − e^{ikl}) / (1 − σ e^{ikl})`.
pub fn all_pass_transmission(sigma: f64, round_trip: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, round_trip);
    (sigma - e) / (1.0 - sigma * e)
}

/// Exact intra-ring field enhancement `F(ω) = iκ / (1 − σ e^{ik(ω)l})`.
pub fn field_enhancement(params: &StructureParams, model: &DispersionModel, omega: f64) -> Result<Complex64> {
    let phase = model.round_trip_phase(omega)?;
    Ok(field_enhancement_of(params, phase.offset))
}

pub(crate) fn field_enhancement_of(params: &StructureParams, offset: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, offset);
    Complex64::new(0.0, params.cross_coupling()) / (1.0 - params.self_coupling * e)
}

/// Normalised Lorentzian amplitude `(Δ/2) / (x − iΔ/2)`, unit modulus at
/// `x = 0`.
pub fn lorentzian(detuning: f64, linewidth: f64) -> Complex64 {
    let half = 0.5 * linewidth;
    Complex64::new(half, 0.0) / Complex64::new(detuning, -half)
}

/// Lorentzian approximation to `F` about the nearest resonance,
/// `√(2/(1−σ)) · (Δ/2) / ((ω − ω_M) − iΔ/2)`.
pub fn field_enhancement_lorentzian(params: &StructureParams, model: &DispersionModel, omega: f64) -> Complex64 {
    let (_, detuning) = model.nearest_resonance(omega);
    (2.0 / (1.0 - params.self_coupling)).sqrt() * lorentzian(detuning, params.linewidth())
}

/// Signal, pump and idler resonances used for pair generation.
///
/// The pump sits on resonance `M₀`; signal and idler are the adjacent
/// orders, one free spectral range below and above, so that
/// `2ω_P − ω_S − ω_I = 0` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceTriplet {
    pub signal: f64,
    pub pump: f64,
    pub idler: f64,
    pub signal_order: i64,
    pub pump_order: i64,
    pub idler_order: i64,
}

impl ResonanceTriplet {
    pub fn around(model: &DispersionModel, pump_order: i64) -> Self {
        let signal_order = pump_order - 1;
        let idler_order = pump_order + 1;
        Self {
            signal: model.resonance(signal_order),
            pump: model.resonance(pump_order),
            idler: model.resonance(idler_order),
            signal_order,
            pump_order,
            idler_order,
        }
    }

    /// Pump vacuum wavelength, m.
    pub fn pump_wavelength(&self) -> f64 {
        TAU * SPEED_OF_LIGHT / self.pump
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn setup() -> (StructureParams, DispersionModel, ResonanceTriplet) {
        let params = StructureParams::silicon_on_insulator();
        let model = DispersionModel::from_phase_index(&params, 50).unwrap();
        let triplet = ResonanceTriplet::around(&model, 50);
        (params, model, triplet)
    }

    #[test]
    fn wavenumber_at_reference_is_resonant() {
        let (params, model, _) = setup();
        let k = wavenumber(&model, model.reference_frequency).unwrap();
        assert_relative_eq!(k * params.circumference(), TAU * 50.0, max_relative = 1e-15);
    }

    #[test]
    fn wavenumber_matches_phase_index_at_reference() {
        let (params, model, _) = setup();
        let k = wavenumber(&model, model.reference_frequency).unwrap();
        let k_index = params.phase_index * model.reference_frequency / SPEED_OF_LIGHT;
        assert_relative_eq!(k, k_index, max_relative = 1e-9);
    }

    #[test]
    fn wavenumber_one_fsr_up_adds_one_order() {
        let (params, model, _) = setup();
        let omega = model.reference_frequency + params.fsr_angular();
        let kl = wavenumber(&model, omega).unwrap() * params.circumference();
        assert_relative_eq!(kl, TAU * 51.0, max_relative = 1e-14);
    }

    #[test]
    fn wavenumber_is_affine() {
        let (params, model, _) = setup();
        let w0 = model.reference_frequency;
        for &dw in &[-3.7e12, -1e9, 2.2e11, 9.1e12] {
            let k = wavenumber(&model, w0 + dw).unwrap();
            let expected = TAU * 50.0 / params.circumference() + dw / params.group_velocity;
            assert_relative_eq!(k, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn non_positive_frequency_is_rejected() {
        let (_, model, _) = setup();
        assert!(wavenumber(&model, 0.0).is_err());
        assert!(wavenumber(&model, -1.0).is_err());
        assert!(wavenumber(&model, f64::NAN).is_err());
    }

    #[test]
    fn pump_wavelength_near_1570_nm() {
        let (_, _, triplet) = setup();
        assert_relative_eq!(triplet.pump, 1.2e15, max_relative = 0.01);
        assert_relative_eq!(triplet.pump_wavelength(), 1570e-9, max_relative = 0.01);
    }

    #[test]
    fn transmission_phase_on_and_between_resonances() {
        let (params, model, triplet) = setup();
        let theta = transmission_phase(&params, &model, triplet.pump).unwrap();
        assert_eq!(theta, PI + TAU * 50.0);
        let half = triplet.pump + 0.5 * params.fsr_angular();
        let theta = transmission_phase(&params, &model, half).unwrap();
        assert_relative_eq!(theta, TAU * 51.0, max_relative = 1e-12);
    }

    #[test]
    fn transmission_phase_absolute_and_local_forms_agree() {
        // kl = 2π·50 + 0.01 evaluated with the full round-trip phase versus
        // the order/offset split.
        let sigma = 0.9874;
        let kl: f64 = TAU * 50.0 + 0.01;
        let direct = PI + kl + 2.0 * (sigma * kl.sin() / (1.0 - sigma * kl.cos())).atan();
        let split = transmission_phase_of(sigma, RoundTripPhase { order: 50, offset: 0.01 });
        assert!((direct - split).abs() < 1e-9);

        // The small-angle form x + 2 atan(σx/(1−σ)) differs from the exact
        // form by the dropped O(x²) curvature of cos: check against that bound.
        let x: f64 = 0.01;
        let small = x + 2.0 * (sigma * x / (1.0 - sigma)).atan();
        let local = split - (PI + TAU * 50.0);
        let bound = 2.0 * sigma * x * (sigma * x * x / 2.0) / (1.0 - sigma).powi(2);
        assert!((local - small).abs() < bound, "{} vs bound {}", (local - small).abs(), bound);
    }

    #[test]
    fn transmission_phase_shifts_by_two_pi_per_fsr() {
        let (params, model, triplet) = setup();
        let fsr = params.fsr_angular();
        for i in 0..200 {
            let omega = triplet.signal + fsr * (i as f64 / 200.0);
            let a = transmission_phase(&params, &model, omega).unwrap();
            let b = transmission_phase(&params, &model, omega + fsr).unwrap();
            assert!((b - a - TAU).abs() < 1e-9, "step {i}: {}", b - a);
        }
    }

    #[test]
    fn transmission_phase_is_monotone_across_resonances() {
        let (params, model, triplet) = setup();
        let fsr = params.fsr_angular();
        let n = 20_000;
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=n {
            let omega = triplet.signal - 0.5 * fsr + 3.0 * fsr * i as f64 / n as f64;
            let theta = transmission_phase(&params, &model, omega).unwrap();
            assert!(theta > prev);
            prev = theta;
        }
    }

    #[test]
    fn all_pass_has_unit_modulus() {
        for &sigma in &[0.5, 0.9, 0.9874, 0.999] {
            for i in 0..1000 {
                let kl = -7.0 + 14.0 * i as f64 / 999.0;
                let t = all_pass_transmission(sigma, kl);
                assert!((t.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn all_pass_phase_is_theta() {
        let sigma = 0.9874;
        for i in 0..100 {
            let offset = -3.0 + 6.0 * i as f64 / 99.0;
            let t = all_pass_transmission(sigma, offset);
            let theta = transmission_phase_of(sigma, RoundTripPhase { order: 0, offset });
            let diff = (t.arg() - theta).rem_euclid(TAU);
            assert!(diff < 1e-12 || TAU - diff < 1e-12);
        }
    }

    #[test]
    fn field_enhancement_peak_and_antiresonance() {
        let (params, model, triplet) = setup();
        let peak = field_enhancement(&params, &model, triplet.pump).unwrap().norm_sqr();
        assert_relative_eq!(peak, 1.9874 / 0.0126, max_relative = 1e-12);
        assert!((peak - 157.73).abs() < 0.01);
        let lorentz = field_enhancement_lorentzian(&params, &model, triplet.pump).norm_sqr();
        assert_relative_eq!(lorentz, 2.0 / 0.0126, max_relative = 1e-12);

        let anti = triplet.pump + 0.5 * params.fsr_angular();
        let low = field_enhancement(&params, &model, anti).unwrap().norm_sqr();
        assert_relative_eq!(low, 0.0126 / 1.9874, max_relative = 1e-9);
        assert!((low - 0.00634).abs() < 1e-5);
    }

    #[test]
    fn lorentzian_half_power_at_half_width() {
        let (params, model, triplet) = setup();
        let delta = params.linewidth();
        let peak = field_enhancement_lorentzian(&params, &model, triplet.pump).norm_sqr();
        for sign in [-1.0, 1.0] {
            let v = field_enhancement_lorentzian(&params, &model, triplet.pump + sign * delta / 2.0).norm_sqr();
            assert_relative_eq!(v, peak / 2.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn exact_and_lorentzian_enhancement_agree_near_resonance() {
        let (params, model, triplet) = setup();
        let delta = params.linewidth();
        for centre in [triplet.signal, triplet.pump, triplet.idler] {
            for i in 0..=600 {
                let omega = centre - 3.0 * delta + 6.0 * delta * i as f64 / 600.0;
                let exact = field_enhancement(&params, &model, omega).unwrap().norm_sqr();
                let approx = field_enhancement_lorentzian(&params, &model, omega).norm_sqr();
                assert!((exact - approx).abs() / exact < 0.02);
            }
        }
    }

    #[test]
    fn derived_scales_match_reported_values() {
        let (params, _, triplet) = setup();
        let delta = params.linewidth();
        assert_relative_eq!(delta, 6.0e10, max_relative = 0.01);
        assert_relative_eq!(params.quality_factor(triplet.pump), 20_000.0, max_relative = 0.02);
        assert_relative_eq!(params.dwell_time(), 0.017e-9, max_relative = 0.03);
        assert!(delta / TAU / params.fsr() < 0.05);
    }

    #[test]
    fn triplet_is_energy_matched_and_fsr_spaced() {
        let (params, _, t) = setup();
        assert_eq!(t.signal_order + t.idler_order, 2 * t.pump_order);
        assert!(t.signal < t.pump && t.pump < t.idler);
        assert!((2.0 * t.pump - t.signal - t.idler).abs() <= 0.5);
        assert_relative_eq!(t.pump - t.signal, params.fsr_angular(), max_relative = 1e-12);
        assert_relative_eq!(t.idler - t.pump, params.fsr_angular(), max_relative = 1e-12);
    }

    #[test]
    fn cross_coupling_conserves_energy() {
        let params = StructureParams::silicon_on_insulator();
        let k = params.cross_coupling();
        assert!((k * k + params.self_coupling * params.self_coupling - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validate_rejects_bad_structures() {
        let good = StructureParams::silicon_on_insulator();
        assert!(good.validate().is_ok());
        let mut p = good;
        p.self_coupling = 1.0;
        assert!(p.validate().is_err());
        let mut p = good;
        p.num_rings = 0;
        assert!(p.validate().is_err());
        let mut p = good;
        p.ring_radius = -1.0;
        assert!(p.validate().is_err());
        let mut p = good;
        p.ring_spacing = 0.0;
        assert!(p.validate().is_err());
        // strong coupling only warns
        let mut p = good;
        p.self_coupling = 0.8;
        assert!(p.validate().is_ok());
    }
}
