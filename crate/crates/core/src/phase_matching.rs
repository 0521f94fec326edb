//! The `N`-ring generalised phase-matching function
//!
//! ```text
//! J(ω₁, ω₂, ω₃, ω₄) = e^{iχ} · sin(Nμ/2)/sin(μ/2) · j_ref
//! ```
//!
//! where `j_ref` is the contribution of a single ring, `μ` the phase slip
//! between consecutive rings and `χ` a global phase. `(ω₁, ω₂)` are the
//! generated photons (signal side, idler side) and `(ω₃, ω₄)` the two
//! annihilated pump photons.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::VACUUM_PERMITTIVITY;
use crate::error::{domain, Result};
use crate::optics::{excess_phase, lorentzian, DispersionModel, ResonanceTriplet, RoundTripPhase, StructureParams};

/// Frequency four-tuple `(ω₁, ω₂, ω₃, ω₄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatchInputs {
    pub omega: [f64; 4],
}

impl PhaseMatchInputs {
    pub fn new(omega1: f64, omega2: f64, omega3: f64, omega4: f64) -> Result<Self> {
        let omega = [omega1, omega2, omega3, omega4];
        if omega.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(domain(format!("frequencies must be positive and finite, got {omega:?}")));
        }
        Ok(Self { omega })
    }

    /// Inputs with `ω₄ = ω₁ + ω₂ − ω₃`.
    pub fn energy_conserving(omega1: f64, omega2: f64, omega3: f64) -> Result<Self> {
        Self::new(omega1, omega2, omega3, omega1 + omega2 - omega3)
    }

    /// The continuous-wave line `(ω, 2ω_P − ω, ω_P, ω_P)`.
    pub fn continuous_wave(triplet: &ResonanceTriplet, omega: f64) -> Result<Self> {
        Self::new(omega, 2.0 * triplet.pump - omega, triplet.pump, triplet.pump)
    }

    /// Builds inputs from detunings about the signal, idler and pump
    /// resonances, with the fourth frequency fixed by energy conservation.
    pub fn from_detunings(triplet: &ResonanceTriplet, d1: f64, d2: f64, d3: f64) -> Result<Self> {
        let d4 = d1 + d2 - d3;
        Self::new(triplet.signal + d1, triplet.idler + d2, triplet.pump + d3, triplet.pump + d4)
    }

    /// `u = (ω₁ − ω_S) + (ω₂ − ω_I)`.
    pub fn sum_detuning(&self, triplet: &ResonanceTriplet) -> f64 {
        (self.omega[0] - triplet.signal) + (self.omega[1] - triplet.idler)
    }

    /// `η = (ω₁ − ω_S) − (ω₂ − ω_I)`.
    pub fn difference_detuning(&self, triplet: &ResonanceTriplet) -> f64 {
        (self.omega[0] - triplet.signal) - (self.omega[1] - triplet.idler)
    }
}

/// Nonlinear overlap of a single ring, `∫dr Γ₃ [𝒟𝒟]*𝒟𝒟 / (2π)²`, expressed
/// through the effective nonlinearity as `K = l · 4ε₀v_g²γ / (3ω_P(2π)²)`.
///
/// The mode-profile phase convention is fixed so that `K` is real and
/// positive; only `|β|²` and the joint spectral density are observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingKernelConstant {
    pub overlap: f64,
}

impl RingKernelConstant {
    pub fn from_gamma(params: &StructureParams, pump_frequency: f64) -> Self {
        let vg = params.group_velocity;
        let overlap = params.circumference() * 4.0 * VACUUM_PERMITTIVITY * vg * vg * params.nonlinear_gamma
            / (3.0 * pump_frequency * TAU * TAU);
        Self { overlap }
    }
}

/// A SCISSOR: structure, dispersion model, working resonances and the
/// single-ring kernel constant. Everything downstream is a pure function of
/// this value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scissor {
    pub params: StructureParams,
    pub model: DispersionModel,
    pub triplet: ResonanceTriplet,
    pub kernel: RingKernelConstant,
}

impl Scissor {
    pub fn new(params: StructureParams, pump_order: i64) -> Result<Self> {
        params.validate()?;
        let model = DispersionModel::from_phase_index(&params, pump_order)?;
        let triplet = ResonanceTriplet::around(&model, pump_order);
        let kernel = RingKernelConstant::from_gamma(&params, triplet.pump);
        Ok(Self {
            params,
            model,
            triplet,
            kernel,
        })
    }

    /// The silicon-on-insulator structure pumped on its 50th resonance.
    pub fn silicon_on_insulator(num_rings: usize) -> Self {
        Self::new(StructureParams::silicon_on_insulator().with_rings(num_rings), 50)
            .expect("reference structure is valid")
    }

    pub fn linewidth(&self) -> f64 {
        self.params.linewidth()
    }

    /// `(2/(1−σ))² · K`, the peak magnitude of `j_ref`.
    pub fn kernel_peak(&self) -> f64 {
        let g = 2.0 / (1.0 - self.params.self_coupling);
        g * g * self.kernel.overlap
    }

    fn phases(&self, inputs: &PhaseMatchInputs) -> [RoundTripPhase; 4] {
        inputs.omega.map(|w| self.model.round_trip_phase_unchecked(w))
    }

    /// Pump-minus-generated round-trip phase, `(k₃ + k₄ − k₁ − k₂)·l`, as
    /// (integer orders, offsets).
    fn phase_mismatch(p: &[RoundTripPhase; 4]) -> (i64, f64) {
        let orders = p[2].order + p[3].order - p[0].order - p[1].order;
        let offsets = p[2].offset + p[3].offset - p[0].offset - p[1].offset;
        (orders, offsets)
    }

    fn excess_mismatch(&self, p: &[RoundTripPhase; 4]) -> f64 {
        let s = self.params.self_coupling;
        excess_phase(s, p[2].offset) + excess_phase(s, p[3].offset)
            - excess_phase(s, p[0].offset)
            - excess_phase(s, p[1].offset)
    }

    /// Phase slip between consecutive rings,
    /// `μ = (k₃ + k₄ − k₁ − k₂)Λ + θ(k₃) + θ(k₄) − θ(k₁) − θ(k₂)`.
    ///
    /// Exactly zero at `(ω_S, ω_I, ω_P, ω_P)`.
    pub fn mu(&self, inputs: &PhaseMatchInputs) -> f64 {
        let p = self.phases(inputs);
        let (orders, offsets) = Self::phase_mismatch(&p);
        let spacing_ratio = self.params.ring_spacing / self.params.circumference();
        (TAU * orders as f64 + offsets) * (spacing_ratio + 1.0) + self.excess_mismatch(&p)
    }

    /// `μ` without the inter-ring propagation term, `θ₃ + θ₄ − θ₁ − θ₂`.
    /// Equal to [`Scissor::mu`] whenever energy is conserved in the
    /// dispersion-free model.
    pub fn mu_no_gvd(&self, inputs: &PhaseMatchInputs) -> f64 {
        let p = self.phases(inputs);
        let (orders, offsets) = Self::phase_mismatch(&p);
        TAU * orders as f64 + offsets + self.excess_mismatch(&p)
    }

    /// `θ(k₁) + θ(k₂)`.
    fn generated_phase_sum(&self, p: &[RoundTripPhase; 4]) -> f64 {
        let s = self.params.self_coupling;
        TAU * (1 + p[0].order + p[1].order) as f64
            + p[0].offset
            + p[1].offset
            + excess_phase(s, p[0].offset)
            + excess_phase(s, p[1].offset)
    }

    fn first_ring_phase(&self, p: &[RoundTripPhase; 4]) -> f64 {
        if self.params.first_ring_position == 0.0 {
            return 0.0;
        }
        let (orders, offsets) = Self::phase_mismatch(p);
        (TAU * orders as f64 + offsets) * self.params.first_ring_position / self.params.circumference()
    }

    /// Global phase `χ = (k₃ + k₄ − k₁ − k₂)z₁ + N[θ(k₁) + θ(k₂)] + (N − 1)μ/2`.
    pub fn chi(&self, inputs: &PhaseMatchInputs, rings: usize) -> f64 {
        let p = self.phases(inputs);
        let n = rings as f64;
        self.first_ring_phase(&p) + n * self.generated_phase_sum(&p) + (n - 1.0) * self.mu(inputs) / 2.0
    }

    /// Single-ring kernel in its Lorentzian-factorised form,
    /// `(2/(1−σ))² · L(ω₁−ω_S) L(ω₂−ω_I) L(ω₃−ω_P) L(ω₄−ω_P) · K`.
    pub fn j_ref(&self, inputs: &PhaseMatchInputs) -> Complex64 {
        let t = &self.triplet;
        let delta = self.linewidth();
        let [w1, w2, w3, w4] = inputs.omega;
        lorentzian(w1 - t.signal, delta)
            * lorentzian(w2 - t.idler, delta)
            * lorentzian(w3 - t.pump, delta)
            * lorentzian(w4 - t.pump, delta)
            * self.kernel_peak()
    }

    /// `J = e^{iχ} · sin(Nμ/2)/sin(μ/2) · j_ref`.
    pub fn phase_matching_function(&self, inputs: &PhaseMatchInputs, rings: usize) -> Complex64 {
        let mu = self.mu(inputs);
        Complex64::from_polar(1.0, self.chi(inputs, rings)) * dirichlet_factor(mu, rings) * self.j_ref(inputs)
    }

    /// Per-ring terms `j^{(m)}`, `m = 1..N`, whose sum is `J`:
    /// `e^{iN(θ₁+θ₂)} e^{i(k₃+k₄−k₁−k₂)z₁} e^{iμ(m−1)} j_ref`.
    pub fn ring_contributions(&self, inputs: &PhaseMatchInputs, rings: usize) -> Vec<Complex64> {
        let p = self.phases(inputs);
        let base = Complex64::from_polar(
            1.0,
            rings as f64 * self.generated_phase_sum(&p) + self.first_ring_phase(&p),
        ) * self.j_ref(inputs);
        let mu = self.mu(inputs);
        (0..rings).map(|m| base * Complex64::from_polar(1.0, mu * m as f64)).collect()
    }
}

/// `sin(Nμ/2) / sin(μ/2)`, continuous through the removable singularities
/// at `μ = 2πk` where it equals `±N`.
pub fn dirichlet_factor(mu: f64, rings: usize) -> f64 {
    let n = rings as f64;
    let x = 0.5 * mu;
    // Reduce to y = x − πk; sin(Nx)/sin(x) = (−1)^{k(N−1)} sin(Ny)/sin(y).
    let k = (x / PI).round();
    let y = x - PI * k;
    let odd = (k as i64).rem_euclid(2) == 1 && rings % 2 == 0;
    let sign = if odd { -1.0 } else { 1.0 };
    let s = y.sin();
    if s.abs() < 1e-9 {
        sign * n * (1.0 - (n * n - 1.0) * y * y / 6.0)
    } else {
        sign * (n * y).sin() / s
    }
}

/// Coherence number `N_coh = (π/2)·Δ/δ` for a pump of bandwidth `δ`.
pub fn coherence_number(params: &StructureParams, pump_bandwidth: f64) -> Result<f64> {
    if !(pump_bandwidth > 0.0) || !pump_bandwidth.is_finite() {
        return Err(domain(format!("pump bandwidth must be positive, got {pump_bandwidth}")));
    }
    Ok(FRAC_PI_2 * params.linewidth() / pump_bandwidth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn scissor() -> Scissor {
        Scissor::silicon_on_insulator(1)
    }

    fn on_resonance(s: &Scissor) -> PhaseMatchInputs {
        let t = s.triplet;
        PhaseMatchInputs::new(t.signal, t.idler, t.pump, t.pump).unwrap()
    }

    #[test]
    fn mu_vanishes_exactly_on_resonance() {
        let s = scissor();
        assert_eq!(s.mu(&on_resonance(&s)), 0.0);
        assert_eq!(s.mu_no_gvd(&on_resonance(&s)), 0.0);
    }

    #[test]
    fn mu_vanishes_along_the_continuous_wave_line() {
        let s = scissor();
        let delta = s.linewidth();
        for i in 0..=200 {
            let w = s.triplet.signal - 10.0 * delta + 20.0 * delta * i as f64 / 200.0;
            let inputs = PhaseMatchInputs::continuous_wave(&s.triplet, w).unwrap();
            assert!(s.mu(&inputs).abs() < 1e-12);
        }
    }

    #[test]
    fn mu_drops_propagation_term_under_energy_conservation() {
        let s = scissor();
        let delta = s.linewidth();
        let inputs = PhaseMatchInputs::from_detunings(&s.triplet, 0.3 * delta, -0.2 * delta, 0.04 * delta).unwrap();
        assert!((s.mu(&inputs) - s.mu_no_gvd(&inputs)).abs() < 1e-9);
    }

    #[test]
    fn mu_against_series_expansion() {
        let s = scissor();
        let delta = s.linewidth();
        // u = Δ/10, η = 0 with the pump split symmetrically.
        let u = 0.1 * delta;
        let inputs = PhaseMatchInputs::from_detunings(&s.triplet, u / 2.0, u / 2.0, u / 2.0).unwrap();
        let exact = s.mu(&inputs);
        let series = 4.0 * u / delta - 4.0 * u / delta * delta * delta / (delta * delta - u * u);
        let r = u / delta;
        assert!((exact - series).abs() <= 5.0 * r * r * r, "{exact} vs {series}");
    }

    #[test]
    fn mu_typical_size_is_two_delta_over_linewidth() {
        // |u| ≈ δ with η² ≫ u²: the series reduces to about 2δ/Δ.
        let s = scissor();
        let delta = s.linewidth();
        let pump_width = delta / 50.0;
        let eta = 2.0 * delta;
        let (d1, d2) = ((pump_width + eta) / 2.0, (pump_width - eta) / 2.0);
        let inputs = PhaseMatchInputs::from_detunings(&s.triplet, d1, d2, pump_width / 2.0).unwrap();
        let mu = s.mu(&inputs);
        let expected = 4.0 * pump_width / delta * (1.0 - delta * delta / (delta * delta + eta * eta));
        assert_relative_eq!(mu, expected, max_relative = 0.05);
        assert!(mu > 0.0 && mu < 2.0 * pump_width / delta * 2.0);
    }

    #[test]
    fn chi_single_ring_on_resonance() {
        let s = scissor();
        let t = s.triplet;
        let chi = s.chi(&on_resonance(&s), 1);
        assert_relative_eq!(chi, TAU * (t.signal_order + t.idler_order + 1) as f64, max_relative = 1e-15);
    }

    #[test]
    fn chi_independent_of_spacing_when_mu_vanishes() {
        let a = scissor();
        let mut params = a.params;
        params.ring_spacing = 37e-6;
        let b = Scissor::new(params, 50).unwrap();
        for n in [1, 4, 9] {
            assert_eq!(a.chi(&on_resonance(&a), n), b.chi(&on_resonance(&b), n));
        }
    }

    #[test]
    fn dirichlet_limits_and_spot_values() {
        assert_eq!(dirichlet_factor(0.0, 7), 7.0);
        for n in 2..12 {
            assert!(dirichlet_factor(TAU / n as f64, n).abs() < 1e-12);
        }
        assert_relative_eq!(dirichlet_factor(0.1, 5), 0.25f64.sin() / 0.05f64.sin(), max_relative = 1e-14);
        assert!((dirichlet_factor(0.1, 5) - 4.9501).abs() < 1e-4);
        // removable singularities at 2π multiples: ±N
        assert_relative_eq!(dirichlet_factor(TAU, 4), -4.0, max_relative = 1e-12);
        assert_relative_eq!(dirichlet_factor(TAU, 5), 5.0, max_relative = 1e-12);
        assert_relative_eq!(dirichlet_factor(1e-12, 5), 5.0, max_relative = 1e-12);
    }

    #[test]
    fn dirichlet_is_continuous_through_guard() {
        let n = 6;
        for &mu in &[2e-9, 1.9e-9, 2.1e-9, -2.1e-9] {
            let direct = (n as f64 * mu / 2.0).sin() / (mu / 2.0).sin();
            let guarded = dirichlet_factor(mu, n);
            assert!((direct - guarded).abs() < 1e-6, "{mu}: {direct} {guarded}");
        }
        // Near 2π the naive quotient loses digits; reflect about π exactly.
        for &mu in &[TAU + 2e-9, TAU - 2.1e-9, TAU - 1.9e-9] {
            let y = (mu - TAU) / 2.0;
            let reflected = -(n as f64 * y).sin() / y.sin();
            let guarded = dirichlet_factor(mu, n);
            assert!((reflected - guarded).abs() < 1e-6, "{mu}: {reflected} {guarded}");
        }
    }

    proptest! {
        #[test]
        fn dirichlet_bounded_by_ring_count(mu in -20.0f64..20.0, n in 1usize..60) {
            let d = dirichlet_factor(mu, n);
            prop_assert!(d * d <= (n * n) as f64 * (1.0 + 1e-12));
        }

        #[test]
        fn mu_and_j_symmetric_under_photon_exchange(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -0.3f64..0.3) {
            // Swapping (ω₁, ω_S) ↔ (ω₂, ω_I): same physics, labels exchanged.
            let s = scissor();
            let t = s.triplet;
            let delta = s.linewidth();
            let (d1, d2, d3) = (a * delta, b * delta, c * delta);
            let fwd = PhaseMatchInputs::from_detunings(&t, d1, d2, d3).unwrap();
            let mut swapped = s;
            swapped.triplet.signal = t.idler;
            swapped.triplet.idler = t.signal;
            swapped.triplet.signal_order = t.idler_order;
            swapped.triplet.idler_order = t.signal_order;
            let rev = PhaseMatchInputs::from_detunings(&swapped.triplet, d2, d1, d3).unwrap();
            prop_assert!((s.mu(&fwd) - swapped.mu(&rev)).abs() < 1e-9);
            prop_assert!((s.chi(&fwd, 4) - swapped.chi(&rev, 4)).abs() < 1e-9);
            let jf = s.phase_matching_function(&fwd, 4);
            let jr = swapped.phase_matching_function(&rev, 4);
            prop_assert!((jf - jr).norm() <= 1e-9 * jf.norm().max(1e-300));
        }
    }

    #[test]
    fn j_ref_on_resonance_and_half_width() {
        let s = scissor();
        let on = s.j_ref(&on_resonance(&s));
        assert_relative_eq!(on.norm(), s.kernel_peak(), max_relative = 1e-14);
        let t = s.triplet;
        let off = PhaseMatchInputs::new(t.signal + s.linewidth() / 2.0, t.idler, t.pump, t.pump).unwrap();
        assert_relative_eq!(s.j_ref(&off).norm(), s.kernel_peak() / 2f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn j_ref_against_exact_field_enhancement_product() {
        use crate::optics::field_enhancement;
        let s = scissor();
        let t = s.triplet;
        let delta = s.linewidth();
        let steps = [-1.0, -0.5, 0.0, 0.3, 1.0];
        for &a in &steps {
            for &b in &steps {
                for &c in &steps {
                    let inputs = PhaseMatchInputs::new(
                        t.signal + a * delta,
                        t.idler + b * delta,
                        t.pump + c * delta,
                        t.pump - a * delta,
                    )
                    .unwrap();
                    let exact: f64 = inputs
                        .omega
                        .iter()
                        .map(|&w| field_enhancement(&s.params, &s.model, w).unwrap().norm())
                        .product::<f64>()
                        * s.kernel.overlap;
                    let lorentz = s.j_ref(&inputs).norm();
                    assert!((lorentz - exact).abs() / exact < 0.03);
                }
            }
        }
    }

    #[test]
    fn big_j_single_ring_and_coherent_limit() {
        let s = scissor();
        let inputs = on_resonance(&s);
        let j1 = s.phase_matching_function(&inputs, 1);
        assert_relative_eq!(j1.norm(), s.j_ref(&inputs).norm(), max_relative = 1e-14);
        let t = s.triplet;
        for n in [2, 5, 17] {
            for &x in &[-1.3, 0.0, 0.4] {
                let cw = PhaseMatchInputs::continuous_wave(&t, t.signal + x * s.linewidth()).unwrap();
                let j = s.phase_matching_function(&cw, n).norm_sqr();
                assert_relative_eq!(j, (n * n) as f64 * s.j_ref(&cw).norm_sqr(), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn big_j_matches_continuous_wave_closed_form() {
        let s = scissor();
        let t = s.triplet;
        let delta = s.linewidth();
        let n = 7;
        for i in 0..=40 {
            let x = -4.0 * delta + 8.0 * delta * i as f64 / 40.0;
            let cw = PhaseMatchInputs::continuous_wave(&t, t.signal + x).unwrap();
            let lor = (delta / 2.0).powi(2) / (x * x + (delta / 2.0).powi(2));
            let closed = (n * n) as f64 * s.kernel_peak().powi(2) * lor * lor;
            let j = s.phase_matching_function(&cw, n).norm_sqr();
            assert!((j - closed).abs() / closed < 1e-10);
        }
    }

    #[test]
    fn big_j_dirichlet_zero() {
        // Dirichlet factor vanishes at μ = 2π/N regardless of the inputs.
        assert!(dirichlet_factor(TAU / 5.0, 5).abs() < 1e-15);
        let s = scissor();
        let delta = s.linewidth();
        let t = s.triplet;
        // find a detuning with μ = 2π/5 by bisection along u at η = 8Δ
        let mu_at = |u: f64| {
            let inp = PhaseMatchInputs::from_detunings(&t, (u + 8.0 * delta) / 2.0, (u - 8.0 * delta) / 2.0, u / 2.0)
                .unwrap();
            (s.mu(&inp), inp)
        };
        let target = TAU / 5.0;
        let (mut lo, mut hi) = (0.0, 2.0 * delta);
        assert!(mu_at(hi).0 > target);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mu_at(mid).0 < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (_, inputs) = mu_at(0.5 * (lo + hi));
        let j = s.phase_matching_function(&inputs, 5);
        assert!(j.norm() < 1e-9 * s.j_ref(&inputs).norm());
    }

    #[test]
    fn ring_contributions_sum_to_big_j() {
        let s = scissor();
        let delta = s.linewidth();
        let mut params = s.params;
        params.first_ring_position = 3.3e-6;
        let shifted = Scissor::new(params, 50).unwrap();
        for sc in [s, shifted] {
            let inputs =
                PhaseMatchInputs::from_detunings(&sc.triplet, 0.7 * delta, -0.1 * delta, 0.2 * delta).unwrap();
            for n in [1, 3, 8] {
                let sum: Complex64 = sc.ring_contributions(&inputs, n).into_iter().sum();
                let j = sc.phase_matching_function(&inputs, n);
                assert!((sum - j).norm() < 1e-9 * j.norm());
            }
        }
    }

    #[test]
    fn coherence_numbers() {
        let p = StructureParams::silicon_on_insulator();
        let nc = |tau: f64| coherence_number(&p, 1.0 / tau).unwrap();
        assert!((90.0..=100.0).contains(&nc(1e-9)));
        assert!((9.0..=10.0).contains(&nc(0.1e-9)));
        assert!((0.9..=1.0).contains(&nc(0.01e-9)));
        assert!(coherence_number(&p, 0.0).is_err());
    }

    #[test]
    fn kernel_constant_is_positive_and_scales_with_gamma() {
        let s = scissor();
        assert!(s.kernel.overlap > 0.0);
        let mut p = s.params;
        p.nonlinear_gamma *= 2.0;
        let k2 = RingKernelConstant::from_gamma(&p, s.triplet.pump);
        assert_relative_eq!(k2.overlap, 2.0 * s.kernel.overlap, max_relative = 1e-15);
    }
}
