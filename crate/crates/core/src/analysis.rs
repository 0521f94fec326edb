//! Joint-spectral-density features and power-law fits.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::bwf::{BwfGrid, FrequencyGrid};
use crate::error::{domain, Error, Result};
use crate::pump::PumpPulse;

/// Widths of the JSD through its peak, in linewidths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FwhmReport {
    /// Along `(ω₂ − ω_I) = (ω₁ − ω_S)`.
    pub fwhm1: f64,
    /// Along `(ω₂ − ω_I) = −(ω₁ − ω_S)`.
    pub fwhm2: f64,
}

pub fn extract_fwhm(grid: &BwfGrid) -> Result<FwhmReport> {
    fwhm_of_density(&grid.densities(), &grid.signal_axis, &grid.idler_axis, grid.linewidth)
}

/// FWHMs of a row-major density sampled on `signal × idler`, measured as
/// arc length along the two diagonals through the peak node.
///
/// With equal axis spacings the diagonals pass through grid nodes and the
/// profile is interpolated linearly between those nodes only, so a ridge
/// narrower than the spacing does not leak into the cross-section. Unequal
/// spacings fall back to bilinear interpolation.
pub fn fwhm_of_density(
    density: &[f64],
    signal: &FrequencyGrid,
    idler: &FrequencyGrid,
    linewidth: f64,
) -> Result<FwhmReport> {
    let (n1, n2) = (signal.n_points, idler.n_points);
    if density.len() != n1 * n2 {
        return Err(domain(format!("density has {} values for a {n1}x{n2} grid", density.len())));
    }
    let (peak_index, &peak) = density
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| domain("empty density"))?;
    if !(peak > 0.0) {
        return Err(domain("density has no positive values"));
    }
    let (pi, pj) = (peak_index / n2, peak_index % n2);
    if pi == 0 || pj == 0 || pi == n1 - 1 || pj == n2 - 1 {
        return Err(Error::GridTooSmall("the JSD peak lies on the grid boundary".into()));
    }
    let (h1, h2) = (signal.spacing(), idler.spacing());
    let half = 0.5 * peak;
    let width = |sign: i64| -> Result<f64> {
        let arc = if (h1 - h2).abs() <= 1e-12 * h1 {
            let step = (h1 * h1 + h2 * h2).sqrt();
            let profile = |k: i64| {
                let (i, j) = (pi as i64 + k, pj as i64 + sign * k);
                ((0..n1 as i64).contains(&i) && (0..n2 as i64).contains(&j))
                    .then(|| density[i as usize * n2 + j as usize])
            };
            half_crossing(profile, step, half)? + half_crossing(|k| profile(-k), step, half)?
        } else {
            let sampler = Bilinear {
                density,
                n1,
                n2,
                h1,
                h2,
                origin: (pi as f64, pj as f64),
            };
            let dir = (FRAC_1_SQRT_2, sign as f64 * FRAC_1_SQRT_2);
            let step = 0.25 * h1.min(h2);
            half_crossing(|k| sampler.along(dir, k as f64 * step), step, half)?
                + half_crossing(|k| sampler.along((-dir.0, -dir.1), k as f64 * step), step, half)?
        };
        Ok(arc / linewidth)
    };
    Ok(FwhmReport {
        fwhm1: width(1)?,
        fwhm2: width(-1)?,
    })
}

/// Distance from sample 0 to the first fall to `half` of a profile sampled
/// every `step`, by linear interpolation between the bracketing samples.
fn half_crossing(profile: impl Fn(i64) -> Option<f64>, step: f64, half: f64) -> Result<f64> {
    let mut prev = profile(0).unwrap_or(0.0);
    for k in 1.. {
        let Some(v) = profile(k) else {
            return Err(Error::GridTooSmall("half maximum not reached inside the grid".into()));
        };
        if v <= half {
            return Ok(step * ((k - 1) as f64 + (prev - half) / (prev - v)));
        }
        prev = v;
    }
    unreachable!()
}

struct Bilinear<'a> {
    density: &'a [f64],
    n1: usize,
    n2: usize,
    h1: f64,
    h2: f64,
    origin: (f64, f64),
}

impl Bilinear<'_> {
    /// Value at fractional node `(x, y)`, `None` outside the grid.
    fn at(&self, x: f64, y: f64) -> Option<f64> {
        let (max1, max2) = ((self.n1 - 1) as f64, (self.n2 - 1) as f64);
        if !(0.0..=max1).contains(&x) || !(0.0..=max2).contains(&y) {
            return None;
        }
        let (i, j) = ((x.floor() as usize).min(self.n1 - 2), (y.floor() as usize).min(self.n2 - 2));
        let (fx, fy) = (x - i as f64, y - j as f64);
        let v = |a: usize, b: usize| self.density[a * self.n2 + b];
        Some(
            (1.0 - fx) * (1.0 - fy) * v(i, j)
                + fx * (1.0 - fy) * v(i + 1, j)
                + (1.0 - fx) * fy * v(i, j + 1)
                + fx * fy * v(i + 1, j + 1),
        )
    }

    /// Value at frequency distance `s` from the origin along `dir`.
    fn along(&self, dir: (f64, f64), s: f64) -> Option<f64> {
        self.at(self.origin.0 + s * dir.0 / self.h1, self.origin.1 + s * dir.1 / self.h2)
    }
}

/// Generation efficiency `|β|²/|α|⁴` against ring number for one pump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencySeries {
    pub pump: PumpPulse,
    /// `(N, |β|²/|α|⁴)` with `N` strictly increasing.
    pub points: Vec<(usize, f64)>,
}

impl EfficiencySeries {
    pub fn new(pump: PumpPulse, points: Vec<(usize, f64)>) -> Result<Self> {
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(domain("ring numbers must be strictly increasing"));
        }
        if points.iter().any(|p| p.0 == 0 || !(p.1 > 0.0) || !p.1.is_finite()) {
            return Err(domain("efficiencies must be positive at positive ring numbers"));
        }
        Ok(Self { pump, points })
    }
}

/// Least-squares slope of `ln(efficiency)` against `ln N` over `window`.
pub fn fit_scaling_exponent(series: &EfficiencySeries, window: RangeInclusive<usize>) -> Result<f64> {
    let (x, y): (Vec<f64>, Vec<f64>) = series
        .points
        .iter()
        .filter(|p| window.contains(&p.0))
        .map(|p| ((p.0 as f64).ln(), p.1.ln()))
        .unzip();
    if x.len() < 3 {
        return Err(domain(format!(
            "need at least 3 points in N = {}..={}, found {}",
            window.start(),
            window.end(),
            x.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    Ok(sxy / sxx)
}
