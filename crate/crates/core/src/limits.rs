//! Analytic cross-checks for the pulsed engine: the long-pulse pair rate,
//! the Fermi's-Golden-Rule rate from per-ring pump loading, and the Dicke
//! rate factor of `N` two-level atoms.

use std::f64::consts::{PI, TAU};

use log::warn;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, VACUUM_PERMITTIVITY};
use crate::error::{domain, Error, Result};
use crate::optics::{all_pass_transmission, field_enhancement, wavenumber, StructureParams};
use crate::phase_matching::{PhaseMatchInputs, Scissor};
use crate::quadrature::{simpson_richardson, Estimate};

/// Simpson panels across the signal resonance.
const WINDOW_INTERVALS: usize = 4096;
const WINDOW_TOLERANCE: f64 = 1e-8;

/// Pulses shorter than this many dwell times are outside the long-pulse
/// regime.
pub const LONG_PULSE_MIN_DWELL_TIMES: f64 = 10.0;

/// Integrates `f(ω)` over the signal resonance, `|ω − ω_S| < FSR/2`, with
/// `ω − ω_S = (Δ/2)·tan t` so that Lorentzian tails are sampled evenly.
fn signal_window_integral(scissor: &Scissor, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let half = 0.5 * scissor.linewidth();
    let t_max = (0.5 * scissor.params.fsr_angular() / half).atan();
    let h = 2.0 * t_max / WINDOW_INTERVALS as f64;
    let samples = (0..=WINDOW_INTERVALS)
        .map(|i| {
            let t = -t_max + h * i as f64;
            let c = t.cos();
            Ok(f(scissor.triplet.signal + half * t.tan())? * half / (c * c))
        })
        .collect::<Result<Vec<f64>>>()?;
    let est: Estimate<f64> = simpson_richardson(&samples, h);
    if est.relative_error() > WINDOW_TOLERANCE {
        return Err(Error::NonConvergence {
            what: "signal-resonance integral".into(),
            relative_change: est.relative_error(),
            tolerance: WINDOW_TOLERANCE,
        });
    }
    Ok(est.value)
}

/// `ω(2ω_P − ω)/v_g²`.
fn density_of_states(scissor: &Scissor, omega: f64) -> f64 {
    let vg = scissor.params.group_velocity;
    omega * (2.0 * scissor.triplet.pump - omega) / (vg * vg)
}

/// `∫dω ω(2ω_P − ω)/v_g² |J(ω, 2ω_P − ω, ω_P, ω_P)|²` over the signal
/// resonance.
pub fn continuous_wave_overlap(scissor: &Scissor, rings: usize) -> Result<f64> {
    if rings == 0 {
        return Err(domain("at least one ring is required"));
    }
    signal_window_integral(scissor, |w| {
        let inputs = PhaseMatchInputs::continuous_wave(&scissor.triplet, w)?;
        Ok(density_of_states(scissor, w) * scissor.phase_matching_function(&inputs, rings).norm_sqr())
    })
}

/// Long-pulse pair probability per pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LongPulseRate {
    /// `|β|²/|α|⁴` by quadrature over the signal resonance.
    pub quadrature: f64,
    /// `|β|²/|α|⁴` from the Lorentzian closed form.
    pub closed_form: f64,
    /// Set when `ΔT` is too short for the long-pulse limit.
    pub warning: Option<String>,
}

/// `|β|²/|α|⁴ ≈ (1/ΔT)(9π³/2ε₀²)(ħω_P/v_g)² ∫dω ω(2ω_P−ω)/v_g² |J|²` for a
/// top-hat pulse of length `ΔT`.
pub fn long_pulse_rate(scissor: &Scissor, rings: usize, duration: f64) -> Result<LongPulseRate> {
    if !(duration > 0.0) || !duration.is_finite() {
        return Err(domain(format!("pulse length must be positive, got {duration}")));
    }
    let dwell = scissor.params.dwell_time();
    let warning = (duration < LONG_PULSE_MIN_DWELL_TIMES * dwell).then(|| {
        let msg = format!(
            "pulse length {duration:.3e} s is below {LONG_PULSE_MIN_DWELL_TIMES} dwell times ({dwell:.3e} s); long-pulse limit is unreliable"
        );
        warn!("{msg}");
        msg
    });
    let overlap = continuous_wave_overlap(scissor, rings)?;
    let vg = scissor.params.group_velocity;
    let prefactor = 9.0 * PI.powi(3) / (2.0 * VACUUM_PERMITTIVITY * VACUUM_PERMITTIVITY)
        * (HBAR * scissor.triplet.pump / vg).powi(2);
    Ok(LongPulseRate {
        quadrature: prefactor * overlap / duration,
        closed_form: long_pulse_closed_form(&scissor.params, scissor.triplet.pump, rings, duration),
        warning,
    })
}

/// `|β|²/|α|⁴ ≈ 4ħ²ω_P²γ²v_g l N² / ((1−σ)³ΔT)`, from integrating the
/// squared Lorentzians exactly and freezing `ω(2ω_P − ω)` at `ω_P²`.
pub fn long_pulse_closed_form(params: &StructureParams, pump_frequency: f64, rings: usize, duration: f64) -> f64 {
    let n = rings as f64;
    let loss = 1.0 - params.self_coupling;
    4.0 * (HBAR * pump_frequency * params.nonlinear_gamma).powi(2) * params.group_velocity * params.circumference() * n * n
        / (loss.powi(3) * duration)
}

/// Energy per unit length of a top-hat pump pulse, `ℰ = ħω_P|α|²/(v_g ΔT)`.
pub fn pump_energy_density(params: &StructureParams, pump_frequency: f64, photon_number: f64, duration: f64) -> f64 {
    HBAR * pump_frequency * photon_number / (params.group_velocity * duration)
}

/// Pair rate `|β|²/ΔT = (9π³/2ε₀²) ℰ² ∫dω ω(2ω_P−ω)/v_g² |J|²` for a pump of
/// energy density `ℰ`.
pub fn pair_rate_from_energy_density(scissor: &Scissor, rings: usize, energy_density: f64) -> Result<f64> {
    let overlap = continuous_wave_overlap(scissor, rings)?;
    Ok(9.0 * PI.powi(3) / (2.0 * VACUUM_PERMITTIVITY * VACUUM_PERMITTIVITY) * energy_density.powi(2) * overlap)
}

/// Coherent pump amplitudes `α_m` loaded into each ring by a long top-hat
/// pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct RingLoading {
    pub amplitudes: Vec<Complex64>,
    /// Pulse length `ΔT`, s.
    pub duration: f64,
}

impl RingLoading {
    /// `α_m = α·√(l/(v_g ΔT))·e^{ik_P z_m}·T(k_P)^{m−1}·F(ω_P)` with
    /// `z_m = z₁ + (m − 1)Λ`.
    pub fn coherent(scissor: &Scissor, rings: usize, alpha: Complex64, duration: f64) -> Result<Self> {
        if rings == 0 {
            return Err(domain("at least one ring is required"));
        }
        if !(duration > 0.0) || !duration.is_finite() {
            return Err(domain(format!("pulse length must be positive, got {duration}")));
        }
        let p = &scissor.params;
        let wp = scissor.triplet.pump;
        let k = wavenumber(&scissor.model, wp)?;
        let t = pump_transmission(scissor)?;
        let f = field_enhancement(p, &scissor.model, wp)?;
        let scale = alpha * (p.circumference() / (p.group_velocity * duration)).sqrt() * f;
        let amplitudes = (0..rings)
            .map(|m| {
                let z = p.first_ring_position + m as f64 * p.ring_spacing;
                scale * Complex64::from_polar(1.0, k * z) * t.powu(m as u32)
            })
            .collect();
        Ok(Self { amplitudes, duration })
    }

    /// The same magnitudes with every phase replaced by a random one.
    pub fn scrambled(&self, seed: u64) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|a| Complex64::from_polar(a.norm(), rng.gen_range(0.0..TAU)))
            .collect();
        Self {
            amplitudes,
            duration: self.duration,
        }
    }

    pub fn rings(&self) -> usize {
        self.amplitudes.len()
    }
}

fn pump_transmission(scissor: &Scissor) -> Result<Complex64> {
    let phase = scissor.model.round_trip_phase(scissor.triplet.pump)?;
    Ok(all_pass_transmission(scissor.params.self_coupling, phase.offset))
}

/// Per-ring pair couplings `F^{(m)}(ω, 2ω_P − ω)`, recovered from the
/// per-ring terms of `J` by removing the pump loading phase and field
/// enhancement: `J_m = e^{2ik_P z_m} T_P^{2(m−1)} F_P² R F^{(m)}`.
pub fn ring_couplings(scissor: &Scissor, rings: usize, omega: f64) -> Result<Vec<Complex64>> {
    let p = &scissor.params;
    let wp = scissor.triplet.pump;
    let k = wavenumber(&scissor.model, wp)?;
    let t = pump_transmission(scissor)?;
    let f = field_enhancement(p, &scissor.model, wp)?;
    let inputs = PhaseMatchInputs::continuous_wave(&scissor.triplet, omega)?;
    let terms = scissor.ring_contributions(&inputs, rings);
    Ok(terms
        .into_iter()
        .enumerate()
        .map(|(m, j)| {
            let z = p.first_ring_position + m as f64 * p.ring_spacing;
            let loading = Complex64::from_polar(1.0, 2.0 * k * z) * t.powu(2 * m as u32) * f * f * p.ring_radius;
            j / loading
        })
        .collect())
}

/// Golden-rule pair rate (pairs/s)
/// `(9πħ²ω_P²/8ε₀²) ∫dω ω(2ω_P−ω)/v_g² |Σ_m α_m² F^{(m)}(ω, 2ω_P−ω)|²`.
pub fn fgr_rate(scissor: &Scissor, loading: &RingLoading) -> Result<f64> {
    let rings = loading.rings();
    if rings == 0 {
        return Err(domain("loading has no rings"));
    }
    let integral = signal_window_integral(scissor, |w| {
        let couplings = ring_couplings(scissor, rings, w)?;
        let sum: Complex64 = loading
            .amplitudes
            .iter()
            .zip(&couplings)
            .map(|(a, f)| a * a * f)
            .sum();
        Ok(density_of_states(scissor, w) * sum.norm_sqr())
    })?;
    let wp = scissor.triplet.pump;
    Ok(9.0 * PI * (HBAR * wp).powi(2) / (8.0 * VACUUM_PERMITTIVITY * VACUUM_PERMITTIVITY) * integral)
}

/// A non-negative or negative half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfInteger {
    pub twice: i64,
}

impl HalfInteger {
    pub fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub fn from_integer(n: i64) -> Self {
        Self { twice: 2 * n }
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }
}

/// Dicke emission factor `(J + M)(J − M + 1)` of the state `|J, M⟩`.
pub fn dicke_rate_factor(j: HalfInteger, m: HalfInteger) -> Result<f64> {
    if j.twice < 0 {
        return Err(domain(format!("J must be non-negative, got {}", j.value())));
    }
    if m.twice.abs() > j.twice {
        return Err(domain(format!("|M| = {} exceeds J = {}", m.value().abs(), j.value())));
    }
    if (j.twice - m.twice) % 2 != 0 {
        return Err(domain(format!("J − M must be an integer, got J = {}, M = {}", j.value(), m.value())));
    }
    Ok((j.value() + m.value()) * (j.value() - m.value() + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_form_reference_value() {
        let s = Scissor::silicon_on_insulator(1);
        let r = long_pulse_rate(&s, 1, 1e-9).unwrap();
        assert!((r.closed_form - 3.0e-15).abs() < 0.05e-15, "{}", r.closed_form);
        assert_relative_eq!(r.quadrature, r.closed_form, max_relative = 0.02);
        assert!(r.warning.is_none());
    }

    #[test]
    fn rate_scaling() {
        let s = Scissor::silicon_on_insulator(1);
        let a = long_pulse_rate(&s, 2, 1e-9).unwrap().quadrature;
        let b = long_pulse_rate(&s, 4, 1e-9).unwrap().quadrature;
        let c = long_pulse_rate(&s, 2, 2e-9).unwrap().quadrature;
        assert_relative_eq!(b / a, 4.0, max_relative = 1e-12);
        assert_relative_eq!(a / c, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn short_pulse_warns() {
        let s = Scissor::silicon_on_insulator(1);
        let r = long_pulse_rate(&s, 1, 5.0 * s.params.dwell_time()).unwrap();
        assert!(r.warning.is_some());
    }

    #[test]
    fn energy_density_form() {
        let s = Scissor::silicon_on_insulator(3);
        let (alpha2, dt) = (1e6, 2e-9);
        let e = pump_energy_density(&s.params, s.triplet.pump, alpha2, dt);
        let rate = pair_rate_from_energy_density(&s, 3, e).unwrap();
        let beta = long_pulse_rate(&s, 3, dt).unwrap().quadrature * alpha2 * alpha2;
        assert_relative_eq!(rate * dt, beta, max_relative = 1e-12);
    }

    #[test]
    fn loading_magnitudes_equal() {
        let s = Scissor::silicon_on_insulator(6);
        let l = RingLoading::coherent(&s, 6, Complex64::new(1.0, 0.0), 1e-9).unwrap();
        let m0 = l.amplitudes[0].norm();
        for a in &l.amplitudes {
            assert_relative_eq!(a.norm(), m0, max_relative = 1e-12);
        }
    }

    #[test]
    fn coherent_loading_is_constructive() {
        // |Σ α_m² F^{(m)}| equals Σ|α_m² F^{(m)}| at every frequency.
        let s = Scissor::silicon_on_insulator(5);
        let l = RingLoading::coherent(&s, 5, Complex64::new(1.0, 0.0), 1e-9).unwrap();
        for x in [-2.0, 0.0, 0.3, 4.0] {
            let w = s.triplet.signal + x * s.linewidth();
            let f = ring_couplings(&s, 5, w).unwrap();
            let terms: Vec<Complex64> = l.amplitudes.iter().zip(&f).map(|(a, f)| a * a * f).collect();
            let coherent = terms.iter().sum::<Complex64>().norm();
            let incoherent: f64 = terms.iter().map(|t| t.norm()).sum();
            assert_relative_eq!(coherent, incoherent, max_relative = 1e-10);
        }
    }

    #[test]
    fn single_ring_scrambling_is_irrelevant() {
        let s = Scissor::silicon_on_insulator(1);
        let l = RingLoading::coherent(&s, 1, Complex64::new(1.0, 0.0), 1e-9).unwrap();
        let a = fgr_rate(&s, &l).unwrap();
        let b = fgr_rate(&s, &l.scrambled(7)).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn dicke_table() {
        let h = HalfInteger::from_twice;
        for n in 1..8i64 {
            assert_eq!(dicke_rate_factor(h(n), h(n)).unwrap(), n as f64);
            assert_eq!(dicke_rate_factor(h(n), h(-n)).unwrap(), 0.0);
            if n % 2 == 0 {
                let j = n as f64 / 2.0;
                assert_eq!(dicke_rate_factor(h(n), h(0)).unwrap(), j * (j + 1.0));
            }
        }
        assert_eq!(dicke_rate_factor(h(3), h(1)).unwrap(), 2.0 * 2.0);
        assert!(dicke_rate_factor(h(2), h(4)).is_err());
        assert!(dicke_rate_factor(h(2), h(1)).is_err());
        assert!(dicke_rate_factor(h(-2), h(0)).is_err());
    }
}
