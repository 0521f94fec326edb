//! Biphoton amplitude, pair probability `|β|²` and joint spectral density
//! grids.
//!
//! Two evaluation routes share one definition of the amplitude,
//!
//! ```text
//! A(ω₁,ω₂) = i C₀ √(ω₁ω₂)/v_g ∫dω₃ √(ω₃ω₄)/v_g φ_P(ω₃) φ_P(ω₄) J(ω₁,ω₂,ω₃,ω₄),
//! ```
//!
//! with `ω₄ = ω₁ + ω₂ − ω₃` and `C₀ = 3π√2ħ/(4ε₀)`, everything per `α²`.
//!
//! * [`bwf_amplitude`] integrates over `ω₃` pointwise with Simpson's rule.
//! * The grid routines use that `J` splits into a sum of per-ring terms,
//!   each a product of one factor in `(ω₁, ω₂)` and one in `(ω₃, ω₄)`. The
//!   pump integral of every ring term is then a self-convolution in the
//!   pump detuning, done once per ring by FFT on a lattice in
//!   `u = ω₁ + ω₂ − 2ω_P`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, VACUUM_PERMITTIVITY};
use crate::error::{domain, Error, Result};
use crate::optics::{excess_phase, lorentzian, StructureParams};
use crate::phase_matching::{PhaseMatchInputs, Scissor};
use crate::pump::{PumpPulse, PumpShape};
use crate::quadrature::{pairwise_sum, simpson_richardson, simpson_samples, simpson_weights};

/// Relative Richardson tolerance of the pointwise pump integral.
const POINTWISE_TOLERANCE: f64 = 1e-4;
/// Minimum Simpson nodes per narrowest feature in the pointwise route.
const POINTWISE_NODES_PER_FEATURE: f64 = 8.0;

/// `3π√2ħ/(4ε₀)`.
fn amplitude_constant() -> f64 {
    3.0 * PI * std::f64::consts::SQRT_2 * HBAR / (4.0 * VACUUM_PERMITTIVITY)
}

/// Uniform grid of frequencies centred on a node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub center: f64,
    pub half_width: f64,
    pub n_points: usize,
}

impl FrequencyGrid {
    pub fn new(center: f64, half_width: f64, n_points: usize) -> Result<Self> {
        if n_points < 33 || n_points % 2 == 0 {
            return Err(domain(format!("grid needs an odd number of points >= 33, got {n_points}")));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(domain(format!("grid half-width must be positive, got {half_width}")));
        }
        Ok(Self {
            center,
            half_width,
            n_points,
        })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_points - 1) as f64
    }

    fn mid(&self) -> i64 {
        (self.n_points / 2) as i64
    }

    /// Offset of node `i` from the centre.
    pub fn detuning(&self, i: usize) -> f64 {
        (i as i64 - self.mid()) as f64 * self.spacing()
    }

    pub fn node(&self, i: usize) -> f64 {
        self.center + self.detuning(i)
    }

    pub fn detunings(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.detuning(i)).collect()
    }
}

/// Resolution controls shared by the grid routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSettings {
    /// Lattice nodes per narrowest feature, `min(δ, Δ/N, Δ)`.
    pub points_per_feature: f64,
    /// Lower bound on the pump support radius, in linewidths. The support
    /// is `max(10δ, this·Δ)`.
    pub pump_support_linewidths: f64,
    /// Half-extent of the `ω₁ − ω₂` integration, in linewidths.
    pub difference_extent_linewidths: f64,
    /// Simpson nodes for the `ω₁ − ω₂` integration (rounded up to `4k+1`).
    pub difference_nodes: usize,
    /// Lower bound on those nodes per ring, so the `μ` oscillation along
    /// `ω₁ − ω₂` stays resolved.
    pub difference_nodes_per_ring: usize,
    /// Repeat `|β|²` at doubled resolution and fail if it moves by more
    /// than `tolerance`.
    pub refine: bool,
    pub tolerance: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            points_per_feature: 4.0,
            pump_support_linewidths: 4.0,
            difference_extent_linewidths: 50.0,
            difference_nodes: 129,
            difference_nodes_per_ring: 8,
            refine: false,
            tolerance: 0.01,
        }
    }
}

impl QuadratureSettings {
    /// Doubled resolution in every direction.
    pub fn refined(&self) -> Self {
        Self {
            points_per_feature: 2.0 * self.points_per_feature,
            difference_nodes: 2 * self.difference_nodes - 1,
            difference_nodes_per_ring: 2 * self.difference_nodes_per_ring,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.points_per_feature >= 2.0
            && self.pump_support_linewidths > 0.0
            && self.difference_extent_linewidths > 0.0
            && self.difference_nodes >= 5
            && self.difference_nodes_per_ring >= 1
            && self.tolerance > 0.0;
        if ok {
            Ok(())
        } else {
            Err(domain(format!("invalid quadrature settings {self:?}")))
        }
    }

    fn pump_support(&self, pump: &PumpPulse, linewidth: f64) -> f64 {
        pump.support_half_width(linewidth).max(self.pump_support_linewidths * linewidth)
    }

    /// Target lattice spacing for `rings` rings.
    fn spacing(&self, pump: &PumpPulse, linewidth: f64, rings: usize) -> f64 {
        let feature = pump
            .spectral_scale()
            .min(pump.bandwidth_delta())
            .min(linewidth / rings as f64);
        feature / self.points_per_feature
    }

    fn difference_nodes(&self, rings: usize) -> usize {
        let n = self.difference_nodes.max(self.difference_nodes_per_ring * rings + 1);
        (n - 1).div_ceil(4) * 4 + 1
    }
}

/// Largest `|ω₁ + ω₂ − 2ω_P|` carrying weight for the given pump.
fn sum_extent(pump: &PumpPulse, linewidth: f64, support: f64) -> f64 {
    let natural = match pump.shape {
        PumpShape::Gaussian => 12.0 * pump.spectral_scale(),
        PumpShape::TopHatSinc => 8.0 * linewidth,
    };
    natural.min(2.0 * support)
}

/// Per-ring pump self-convolutions on a lattice `u = k·h`.
struct PairEngine<'a> {
    scissor: &'a Scissor,
    rings: usize,
    spacing: f64,
    k_max: i64,
    /// `C_m(u_k)` stored as `[(k + k_max)·N + m]`.
    conv: Vec<Complex64>,
    prefactor: f64,
}

impl<'a> PairEngine<'a> {
    fn new(scissor: &'a Scissor, pump: &PumpPulse, rings: usize, spacing: f64, support: f64, u_limit: f64) -> Self {
        let params = &scissor.params;
        let (sigma, delta) = (params.self_coupling, params.linewidth());
        let to_offset = params.circumference() / params.group_velocity;
        let wp = scissor.triplet.pump;

        let n = (support / spacing).ceil() as usize;
        let len = 2 * n + 1;
        let fft_len = (2 * len - 1).next_power_of_two();
        let mut planner = FftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(fft_len);
        let inverse = planner.plan_fft_inverse(fft_len);

        let mut base = Vec::with_capacity(len);
        let mut step = Vec::with_capacity(len);
        for j in 0..len {
            let d = (j as i64 - n as i64) as f64 * spacing;
            base.push((wp + d).sqrt() * pump.amplitude_at_detuning(d) * lorentzian(d, delta));
            step.push(Complex64::from_polar(1.0, excess_phase(sigma, d * to_offset)));
        }

        let k_max = ((u_limit / spacing).floor() as i64).min(2 * n as i64);
        let width = (2 * k_max + 1) as usize;
        let mut conv = vec![Complex64::new(0.0, 0.0); width * rings];
        let scale = spacing / fft_len as f64;
        let mut buf = vec![Complex64::new(0.0, 0.0); fft_len];
        let mut f = base;
        for m in 0..rings {
            buf[..len].copy_from_slice(&f);
            buf[len..].fill(Complex64::new(0.0, 0.0));
            forward.process(&mut buf);
            for v in buf.iter_mut() {
                *v = *v * *v;
            }
            inverse.process(&mut buf);
            for k in -k_max..=k_max {
                conv[(k + k_max) as usize * rings + m] = buf[(k + 2 * n as i64) as usize] * scale;
            }
            for (v, s) in f.iter_mut().zip(&step) {
                *v *= s;
            }
        }

        let vg = params.group_velocity;
        Self {
            scissor,
            rings,
            spacing,
            k_max,
            conv,
            prefactor: amplitude_constant() * scissor.kernel_peak() / (vg * vg),
        }
    }

    /// Ring sum `Σ_m e^{−im(a₁+a₂)} C_m(u_k)` and the generated-photon
    /// excess phase `a₁ + a₂`.
    fn ring_sum(&self, d1: f64, d2: f64, k: i64) -> (Complex64, f64) {
        let params = &self.scissor.params;
        let to_offset = params.circumference() / params.group_velocity;
        let a = excess_phase(params.self_coupling, d1 * to_offset) + excess_phase(params.self_coupling, d2 * to_offset);
        if k.abs() > self.k_max {
            return (Complex64::new(0.0, 0.0), a);
        }
        let row = &self.conv[(k + self.k_max) as usize * self.rings..][..self.rings];
        let z = Complex64::from_polar(1.0, -a);
        let mut s = row[self.rings - 1];
        for c in row[..self.rings - 1].iter().rev() {
            s = s * z + c;
        }
        (s, a)
    }

    fn magnitude_factor(&self, d1: f64, d2: f64) -> f64 {
        let t = &self.scissor.triplet;
        let delta = self.scissor.linewidth();
        let lor = lorentzian(d1, delta) * lorentzian(d2, delta);
        self.prefactor * ((t.signal + d1) * (t.idler + d2)).sqrt() * lor.norm()
    }

    /// `|A/α²|²` at signal and idler detunings `d1`, `d2` with
    /// `d1 + d2 = k·h`.
    fn density(&self, d1: f64, d2: f64, k: i64) -> f64 {
        let (s, _) = self.ring_sum(d1, d2, k);
        (self.magnitude_factor(d1, d2) * s.norm()).powi(2)
    }

    /// `A/α²` including its global phase.
    fn amplitude(&self, d1: f64, d2: f64, k: i64) -> Complex64 {
        let params = &self.scissor.params;
        let t = &self.scissor.triplet;
        let delta = self.scissor.linewidth();
        let (s, a) = self.ring_sum(d1, d2, k);
        let to_offset = params.circumference() / params.group_velocity;
        let phase = self.rings as f64 * ((d1 + d2) * to_offset + a);
        let lor = lorentzian(d1, delta) * lorentzian(d2, delta);
        Complex64::new(0.0, self.prefactor * ((t.signal + d1) * (t.idler + d2)).sqrt())
            * Complex64::from_polar(1.0, phase)
            * lor
            * s
    }
}

/// `A(ω₁, ω₂)/α²` by direct Simpson quadrature over the pump frequency.
///
/// Errors with [`Error::NonConvergence`] when the Richardson estimate of the
/// pump integral exceeds `1e-4` of its absolute mass.
pub fn bwf_amplitude(
    scissor: &Scissor,
    pump: &PumpPulse,
    rings: usize,
    omega1: f64,
    omega2: f64,
    settings: &QuadratureSettings,
) -> Result<Complex64> {
    settings.validate()?;
    if rings == 0 {
        return Err(domain("at least one ring is required"));
    }
    let t = &scissor.triplet;
    let half_fsr = 0.5 * scissor.params.fsr_angular();
    if !((omega1 - t.signal).abs() < half_fsr) || !((omega2 - t.idler).abs() < half_fsr) {
        return Err(domain(format!(
            "({omega1}, {omega2}) lies outside the signal/idler windows"
        )));
    }
    let delta = scissor.linewidth();
    let support = settings.pump_support(pump, delta);
    let u = omega1 + omega2 - 2.0 * t.pump;
    let lo = (-support).max(u - support);
    let hi = support.min(u + support);
    if lo >= hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let step = settings.spacing(pump, delta, rings) * settings.points_per_feature
        / settings.points_per_feature.max(POINTWISE_NODES_PER_FEATURE);
    let intervals = ((((hi - lo) / step).ceil() as usize).max(64)).div_ceil(4) * 4;
    let h = (hi - lo) / intervals as f64;
    let vg = scissor.params.group_velocity;

    let mut samples = Vec::with_capacity(intervals + 1);
    for i in 0..=intervals {
        let d3 = lo + h * i as f64;
        let w3 = t.pump + d3;
        let w4 = omega1 + omega2 - w3;
        let inputs = PhaseMatchInputs::new(omega1, omega2, w3, w4)?;
        let weight = (w3 * w4).sqrt() / vg * pump.amplitude_at_detuning(d3) * pump.amplitude_at_detuning(w4 - t.pump);
        samples.push(scissor.phase_matching_function(&inputs, rings) * weight);
    }
    let est = simpson_richardson(&samples, h);
    let mass = simpson_samples(&samples.iter().map(|s| s.norm()).collect::<Vec<_>>(), h);
    if est.error > POINTWISE_TOLERANCE * mass {
        return Err(Error::NonConvergence {
            what: "pointwise pump integral".into(),
            relative_change: est.error / mass,
            tolerance: POINTWISE_TOLERANCE,
        });
    }
    let prefactor = amplitude_constant() * (omega1 * omega2).sqrt() / vg;
    Ok(Complex64::new(0.0, prefactor) * est.value)
}

/// `|β|²` with its numerical diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaSquared {
    /// `|β|²/|α|⁴`.
    pub per_alpha4: f64,
    /// `|β|²` at the pump's photon number.
    pub value: f64,
    /// Richardson estimate of the relative quadrature error.
    pub error_estimate: f64,
    /// Relative change under doubled resolution, when requested.
    pub refinement_change: Option<f64>,
}

/// Pair probability per pulse, integrated over the full signal and idler
/// resonances (both quadrants).
pub fn beta_squared(scissor: &Scissor, pump: &PumpPulse, rings: usize, settings: &QuadratureSettings) -> Result<BetaSquared> {
    settings.validate()?;
    if rings == 0 {
        return Err(domain("at least one ring is required"));
    }
    let (per_alpha4, error_estimate) = integrate_pair_density(scissor, pump, rings, settings);
    let refinement_change = if settings.refine {
        let (fine, _) = integrate_pair_density(scissor, pump, rings, &settings.refined());
        let change = (fine - per_alpha4).abs() / fine;
        if change > settings.tolerance {
            return Err(Error::NonConvergence {
                what: format!("|beta|^2 for N = {rings}"),
                relative_change: change,
                tolerance: settings.tolerance,
            });
        }
        Some(change)
    } else {
        None
    };
    let n = pump.photon_number;
    Ok(BetaSquared {
        per_alpha4,
        value: per_alpha4 * n * n,
        error_estimate,
        refinement_change,
    })
}

/// `∫∫|A/α²|² dω₁dω₂` over both quadrants, in sum/difference coordinates
/// `u = d₁ + d₂`, `η = d₁ − d₂` (Jacobian ½, cancelling the quadrant
/// factor 2). `η = Δ·tan t` maps the Lorentzian tails onto a finite range.
fn integrate_pair_density(scissor: &Scissor, pump: &PumpPulse, rings: usize, settings: &QuadratureSettings) -> (f64, f64) {
    let delta = scissor.linewidth();
    let support = settings.pump_support(pump, delta);
    let spacing = settings.spacing(pump, delta, rings);
    let engine = PairEngine::new(scissor, pump, rings, spacing, support, sum_extent(pump, delta, support));

    let nt = settings.difference_nodes(rings);
    let t_max = (settings.difference_extent_linewidths).atan();
    let ht = 2.0 * t_max / (nt - 1) as f64;
    let nodes: Vec<(f64, f64)> = (0..nt)
        .map(|i| {
            let t = -t_max + ht * i as f64;
            let c = t.cos();
            (delta * t.tan(), delta / (c * c))
        })
        .collect();
    let fine_w = simpson_weights(nt, ht);
    let coarse_w = simpson_weights(nt.div_ceil(2), 2.0 * ht);

    let rows: Vec<(f64, f64)> = (-engine.k_max..=engine.k_max)
        .into_par_iter()
        .map(|k| {
            let u = k as f64 * engine.spacing;
            let values: Vec<f64> = nodes
                .iter()
                .map(|&(eta, jac)| engine.density(0.5 * (u + eta), 0.5 * (u - eta), k) * jac)
                .collect();
            let fine: Vec<f64> = values.iter().zip(&fine_w).map(|(v, w)| v * w).collect();
            let coarse: Vec<f64> = values.iter().step_by(2).zip(&coarse_w).map(|(v, w)| v * w).collect();
            (pairwise_sum(&fine), pairwise_sum(&coarse))
        })
        .collect();

    let h = engine.spacing;
    let fine: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let total = pairwise_sum(&fine) * h;
    let coarse_eta = pairwise_sum(&rows.iter().map(|r| r.1).collect::<Vec<_>>()) * h;
    // Every other lattice row, offset so that u = 0 is kept.
    let half: Vec<f64> = fine
        .iter()
        .enumerate()
        .filter(|(i, _)| (*i as i64 - engine.k_max) % 2 == 0)
        .map(|(_, v)| *v)
        .collect();
    let coarse_u = pairwise_sum(&half) * 2.0 * h;
    let err = ((total - coarse_eta).abs() / 15.0 + (total - coarse_u).abs() / 3.0) / total;
    (total, err)
}

/// Size of a joint spectral density grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JsdSpec {
    /// Half-width of each axis in linewidths.
    pub half_width_linewidths: f64,
    /// Nodes per axis (odd, ≥ 33).
    pub n_points: usize,
}

impl Default for JsdSpec {
    fn default() -> Self {
        Self {
            half_width_linewidths: 5.0,
            n_points: 257,
        }
    }
}

/// Normalised biphoton wavefunction on the signal/idler quadrant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BwfGrid {
    /// Centred on `ω_S`.
    pub signal_axis: FrequencyGrid,
    /// Centred on `ω_I`.
    pub idler_axis: FrequencyGrid,
    pub linewidth: f64,
    /// `φ(ω₁, ω₂)` in s, row-major with the signal index slowest.
    pub amplitude: Vec<Complex64>,
    /// `|β|²` from the full integration, not from this grid.
    pub beta: BetaSquared,
    /// `|β|²/|α|⁴` as sampled by this grid, `2Σ|A/α²|²h₁h₂`.
    pub grid_per_alpha4: f64,
    pub rings: usize,
    pub pump: PumpPulse,
    pub params: StructureParams,
}

impl BwfGrid {
    pub fn shape(&self) -> (usize, usize) {
        (self.signal_axis.n_points, self.idler_axis.n_points)
    }

    pub fn amplitude_at(&self, i: usize, j: usize) -> Complex64 {
        self.amplitude[i * self.idler_axis.n_points + j]
    }

    /// `|φ|²` at node `(i, j)`.
    pub fn density(&self, i: usize, j: usize) -> f64 {
        self.amplitude_at(i, j).norm_sqr()
    }

    pub fn densities(&self) -> Vec<f64> {
        self.amplitude.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `2Σ|φ|²h₁h₂`, equal to one for a normalised grid.
    pub fn normalization(&self) -> f64 {
        let h = self.signal_axis.spacing() * self.idler_axis.spacing();
        2.0 * pairwise_sum(&self.densities()) * h
    }

    /// Signal axis as `(ω₁ − ω_S)/Δ`.
    pub fn signal_detunings(&self) -> Vec<f64> {
        self.signal_axis.detunings().iter().map(|d| d / self.linewidth).collect()
    }

    /// Idler axis as `(ω₂ − ω_I)/Δ`.
    pub fn idler_detunings(&self) -> Vec<f64> {
        self.idler_axis.detunings().iter().map(|d| d / self.linewidth).collect()
    }
}

/// Evaluates and normalises the BWF on a square grid around the signal and
/// idler resonances.
///
/// The grid is normalised by its own discrete sum, so
/// [`BwfGrid::normalization`] is one to rounding; the physical `|β|²` is
/// computed separately by [`beta_squared`].
pub fn jsd_grid(
    scissor: &Scissor,
    pump: &PumpPulse,
    rings: usize,
    spec: &JsdSpec,
    settings: &QuadratureSettings,
) -> Result<BwfGrid> {
    let beta = beta_squared(scissor, pump, rings, settings)?;
    let delta = scissor.linewidth();
    let half_width = spec.half_width_linewidths * delta;
    let t = &scissor.triplet;
    let signal_axis = FrequencyGrid::new(t.signal, half_width, spec.n_points)?;
    let idler_axis = FrequencyGrid::new(t.idler, half_width, spec.n_points)?;

    let h_axis = signal_axis.spacing();
    let refine = (h_axis / settings.spacing(pump, delta, rings)).ceil().max(1.0) as i64;
    let spacing = h_axis / refine as f64;
    let support = settings.pump_support(pump, delta);
    let engine = PairEngine::new(scissor, pump, rings, spacing, support, 2.0 * half_width + spacing);

    let n = spec.n_points;
    let mid = (n / 2) as i64;
    let raw: Vec<Complex64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let engine = &engine;
            let d1 = signal_axis.detuning(i);
            (0..n).map(move |j| {
                let k = (i as i64 + j as i64 - 2 * mid) * refine;
                engine.amplitude(d1, idler_axis.detuning(j), k)
            })
        })
        .collect();

    let sum = pairwise_sum(&raw.iter().map(|a| a.norm_sqr()).collect::<Vec<_>>());
    let grid_per_alpha4 = 2.0 * sum * h_axis * h_axis;
    if !(grid_per_alpha4 > 0.0) {
        return Err(Error::GridTooSmall("the JSD grid carries no pair amplitude".into()));
    }
    let scale = grid_per_alpha4.sqrt().recip();
    Ok(BwfGrid {
        signal_axis,
        idler_axis,
        linewidth: delta,
        amplitude: raw.into_iter().map(|a| a * scale).collect(),
        beta,
        grid_per_alpha4,
        rings,
        pump: *pump,
        params: scissor.params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fast_amplitude(s: &Scissor, pump: &PumpPulse, rings: usize, d1: f64, d2: f64, h: f64) -> Complex64 {
        let settings = QuadratureSettings::default();
        let support = settings.pump_support(pump, s.linewidth());
        let engine = PairEngine::new(s, pump, rings, h, support, 4.0 * s.linewidth());
        let k = ((d1 + d2) / h).round() as i64;
        engine.amplitude(d1, d2, k)
    }

    #[test]
    fn fast_and_direct_amplitudes_agree() {
        let s = Scissor::silicon_on_insulator(3);
        let delta = s.linewidth();
        let pump = PumpPulse::gaussian(s.triplet.pump, 0.02e-9).unwrap();
        let h = QuadratureSettings::default().spacing(&pump, delta, 3) / 2.0;
        for (a, b) in [(0.0, 0.0), (3.0, -2.0), (-5.0, 1.0), (10.0, 7.0)] {
            let (d1, d2) = (a * h, b * h);
            let fast = fast_amplitude(&s, &pump, 3, d1, d2, h);
            let direct = bwf_amplitude(
                &s,
                &pump,
                3,
                s.triplet.signal + d1,
                s.triplet.idler + d2,
                &QuadratureSettings::default(),
            )
            .unwrap();
            assert!((fast - direct).norm() < 1e-4 * direct.norm(), "{a},{b}: {fast} vs {direct}");
        }
    }

    #[test]
    fn empty_pump_support_gives_zero() {
        let s = Scissor::silicon_on_insulator(1);
        let pump = PumpPulse::gaussian(s.triplet.pump, 1e-9).unwrap();
        let far = 9.0 * s.linewidth();
        let a = bwf_amplitude(&s, &pump, 1, s.triplet.signal + far, s.triplet.idler, &Default::default()).unwrap();
        assert_eq!(a, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn outside_windows_rejected() {
        let s = Scissor::silicon_on_insulator(1);
        let pump = PumpPulse::gaussian(s.triplet.pump, 1e-9).unwrap();
        let r = bwf_amplitude(&s, &pump, 1, s.triplet.pump, s.triplet.idler, &Default::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn grid_axes() {
        let g = FrequencyGrid::new(10.0, 2.0, 33).unwrap();
        assert_eq!(g.node(16), 10.0);
        assert!((g.spacing() - 0.125).abs() < 1e-15);
        assert!((g.detuning(0) + 2.0).abs() < 1e-15);
        assert!(FrequencyGrid::new(0.0, 1.0, 32).is_err());
        assert!(FrequencyGrid::new(0.0, 1.0, 31).is_err());
    }
}
