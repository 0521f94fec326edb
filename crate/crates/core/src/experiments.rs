//! Drivers that regenerate the figure data: each experiment writes CSV
//! tables plus a JSON sidecar with the full configuration and numerical
//! diagnostics. Output depends only on the configuration.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::info;
use serde_json::{json, Value};

use crate::analysis::{extract_fwhm, fit_scaling_exponent, EfficiencySeries};
use crate::bwf::{beta_squared, jsd_grid, BwfGrid};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::optics::{field_enhancement, field_enhancement_lorentzian};
use crate::phase_matching::{coherence_number, Scissor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Spectrum,
    EfficiencyVsN,
    Jsd,
    FwhmVsN,
    CoherenceNumber,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Spectrum,
        Experiment::EfficiencyVsN,
        Experiment::Jsd,
        Experiment::FwhmVsN,
        Experiment::CoherenceNumber,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Spectrum => "spectrum",
            Experiment::EfficiencyVsN => "efficiency-vs-n",
            Experiment::Jsd => "jsd",
            Experiment::FwhmVsN => "fwhm-vs-n",
            Experiment::CoherenceNumber => "coherence-number",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|e| e.name()).collect();
            Error::Config(format!("unknown experiment '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

/// Fixed float formatting: 17 significant digits, enough to round-trip.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn duration_label(ns: f64) -> String {
    format!("{ns}ns")
}

struct Output<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Output<'_> {
    fn csv(&mut self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let path = self.dir.join(name);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
        self.files.push(path);
        Ok(())
    }

    fn json(&mut self, name: &str, value: &Value) -> Result<()> {
        let path = self.dir.join(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&path, text)?;
        self.files.push(path);
        Ok(())
    }
}

fn metadata(experiment: Experiment, config: &Config, scissor: &Scissor, extra: Value) -> Result<Value> {
    let p = &scissor.params;
    Ok(json!({
        "tool": "scissor-sfwm",
        "version": env!("CARGO_PKG_VERSION"),
        "experiment": experiment.name(),
        "config": serde_json::to_value(config)?,
        "derived": {
            "linewidth_rad_per_s": p.linewidth(),
            "fsr_hz": p.fsr(),
            "dwell_time_s": p.dwell_time(),
            "quality_factor": p.quality_factor(scissor.triplet.pump),
            "pump_frequency_rad_per_s": scissor.triplet.pump,
            "pump_wavelength_nm": scissor.triplet.pump_wavelength() * 1e9,
        },
        "results": extra,
    }))
}

/// Runs `experiment`, writing into `out_dir` (created if missing), and
/// returns the files written.
pub fn run_experiment(experiment: Experiment, config: &Config, out_dir: &Path) -> Result<Vec<PathBuf>> {
    config.validate()?;
    fs::create_dir_all(out_dir)?;
    let mut out = Output {
        dir: out_dir,
        files: Vec::new(),
    };
    info!("running {experiment} into {}", out_dir.display());
    match experiment {
        Experiment::Spectrum => spectrum(config, &mut out)?,
        Experiment::EfficiencyVsN => efficiency_vs_n(config, &mut out)?,
        Experiment::Jsd => jsd(config, &mut out)?,
        Experiment::FwhmVsN => fwhm_vs_n(config, &mut out)?,
        Experiment::CoherenceNumber => coherence(config, &mut out)?,
    }
    Ok(out.files)
}

fn spectrum(config: &Config, out: &mut Output) -> Result<()> {
    let s = config.scissor(1)?;
    let delta = s.linewidth();
    let range = config.spectrum.half_range_fsr * s.params.fsr_angular();
    let n = config.spectrum.points;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let d = -range + 2.0 * range * i as f64 / (n - 1) as f64;
        let w = s.triplet.pump + d;
        let exact = field_enhancement(&s.params, &s.model, w)?.norm_sqr();
        let lorentz = field_enhancement_lorentzian(&s.params, &s.model, w).norm_sqr();
        rows.push(vec![format_float(d / delta), format_float(exact), format_float(lorentz)]);
    }
    out.csv(
        "spectrum.csv",
        &["detuning_linewidths", "field_enhancement_sq", "lorentzian_sq"],
        rows,
    )?;
    let extra = json!({
        "peak_field_enhancement_sq": 2.0 / (1.0 - s.params.self_coupling),
        "peak_spacing_linewidths": s.params.fsr_angular() / delta,
        "points": n,
    });
    out.json("spectrum.json", &metadata(Experiment::Spectrum, config, &s, extra)?)
}

/// Reads an efficiency table written by the `efficiency-vs-n` experiment.
pub fn read_efficiency_csv(path: &Path) -> Result<Vec<(usize, f64)>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut points = Vec::new();
    for record in r.records() {
        let record = record?;
        let parse_err = || Error::Config(format!("malformed row in {}", path.display()));
        let n = record.get(0).and_then(|v| v.parse().ok()).ok_or_else(parse_err)?;
        let e = record.get(1).and_then(|v| v.parse().ok()).ok_or_else(parse_err)?;
        points.push((n, e));
    }
    Ok(points)
}

fn efficiency_vs_n(config: &Config, out: &mut Output) -> Result<()> {
    let reference = config.scissor(1)?;
    for &ns in &config.pump.durations_ns {
        let mut rows = Vec::new();
        let mut points = Vec::new();
        let mut diagnostics = Vec::new();
        for &n in &config.efficiency.rings {
            let s = config.scissor(n)?;
            let pump = config.pump(&s, ns)?;
            let b = beta_squared(&s, &pump, n, &config.quadrature)?;
            info!("tau = {ns} ns, N = {n}: |beta|^2/|alpha|^4 = {:.6e}", b.per_alpha4);
            let cells = vec![
                n.to_string(),
                format_float(b.per_alpha4),
                format_float(b.value),
                format_float(b.error_estimate),
            ];
            // Fit the values exactly as stored.
            points.push((n, cells[1].parse::<f64>().expect("formatted float parses")));
            rows.push(cells);
            diagnostics.push(json!({
                "rings": n,
                "error_estimate": b.error_estimate,
                "refinement_change": b.refinement_change,
            }));
        }
        let label = duration_label(ns);
        out.csv(
            &format!("efficiency_{label}.csv"),
            &["rings", "beta_squared_per_alpha4", "beta_squared", "error_estimate"],
            rows,
        )?;
        let pump = config.pump(&reference, ns)?;
        let series = EfficiencySeries::new(pump, points)?;
        let fits: Vec<Value> = config
            .efficiency
            .fit_windows
            .iter()
            .map(|w| {
                let exponent = fit_scaling_exponent(&series, w[0]..=w[1]).ok();
                json!({ "window": w, "exponent": exponent })
            })
            .collect();
        let extra = json!({
            "pump": pump,
            "coherence_number": coherence_number(&reference.params, pump.bandwidth_delta())?,
            "fits": fits,
            "diagnostics": diagnostics,
        });
        out.json(
            &format!("efficiency_{label}.json"),
            &metadata(Experiment::EfficiencyVsN, config, &reference, extra)?,
        )?;
    }
    Ok(())
}

fn grid_summary(grid: &BwfGrid) -> Value {
    let fwhm = match extract_fwhm(grid) {
        Ok(r) => {
            // A width under two diagonal steps is set by the grid, not the state.
            let step = std::f64::consts::SQRT_2 * grid.signal_axis.spacing() / grid.linewidth;
            json!({
                "fwhm1_linewidths": r.fwhm1,
                "fwhm2_linewidths": r.fwhm2,
                "fwhm1_resolved": r.fwhm1 >= 2.0 * step,
                "fwhm2_resolved": r.fwhm2 >= 2.0 * step,
            })
        }
        Err(e) => json!({ "error": e.to_string() }),
    };
    json!({
        "rings": grid.rings,
        "pump": grid.pump,
        "beta_squared_per_alpha4": grid.beta.per_alpha4,
        "beta_squared": grid.beta.value,
        "error_estimate": grid.beta.error_estimate,
        "refinement_change": grid.beta.refinement_change,
        "grid_beta_squared_per_alpha4": grid.grid_per_alpha4,
        "normalization": grid.normalization(),
        "signal_axis": grid.signal_axis,
        "idler_axis": grid.idler_axis,
        "fwhm": fwhm,
    })
}

fn jsd(config: &Config, out: &mut Output) -> Result<()> {
    let spec = config.jsd_spec();
    for &ns in &config.pump.durations_ns {
        for &n in &config.jsd.rings {
            let s = config.scissor(n)?;
            let pump = config.pump(&s, ns)?;
            let grid = jsd_grid(&s, &pump, n, &spec, &config.quadrature)?;
            info!("tau = {ns} ns, N = {n}: JSD normalisation {:.12}", grid.normalization());
            let d1 = grid.signal_detunings();
            let d2 = grid.idler_detunings();
            let scale = grid.linewidth * grid.linewidth;
            let mut rows = Vec::with_capacity(d1.len() * d2.len());
            for (i, x) in d1.iter().enumerate() {
                for (j, y) in d2.iter().enumerate() {
                    rows.push(vec![format_float(*x), format_float(*y), format_float(grid.density(i, j) * scale)]);
                }
            }
            let stem = format!("jsd_{}_n{n}", duration_label(ns));
            out.csv(
                &format!("{stem}.csv"),
                &["signal_detuning_linewidths", "idler_detuning_linewidths", "density_linewidth_sq"],
                rows,
            )?;
            out.json(&format!("{stem}.json"), &metadata(Experiment::Jsd, config, &s, grid_summary(&grid))?)?;
        }
    }
    Ok(())
}

fn fwhm_vs_n(config: &Config, out: &mut Output) -> Result<()> {
    let spec = config.jsd_spec();
    let reference = config.scissor(1)?;
    for &ns in &config.pump.durations_ns {
        let mut rows = Vec::new();
        let mut grids = Vec::new();
        for &n in &config.fwhm.rings {
            let s = config.scissor(n)?;
            let pump = config.pump(&s, ns)?;
            let grid = jsd_grid(&s, &pump, n, &spec, &config.quadrature)?;
            let r = extract_fwhm(&grid)?;
            info!("tau = {ns} ns, N = {n}: FWHM1 = {:.4} Delta, FWHM2 = {:.4} Delta", r.fwhm1, r.fwhm2);
            rows.push(vec![n.to_string(), format_float(r.fwhm1), format_float(r.fwhm2)]);
            grids.push(grid_summary(&grid));
        }
        let label = duration_label(ns);
        out.csv(
            &format!("fwhm_{label}.csv"),
            &["rings", "fwhm1_linewidths", "fwhm2_linewidths"],
            rows,
        )?;
        out.json(
            &format!("fwhm_{label}.json"),
            &metadata(Experiment::FwhmVsN, config, &reference, json!({ "grids": grids }))?,
        )?;
    }
    Ok(())
}

fn coherence(config: &Config, out: &mut Output) -> Result<()> {
    let s = config.scissor(1)?;
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for &ns in &config.pump.durations_ns {
        let pump = config.pump(&s, ns)?;
        let delta = pump.bandwidth_delta();
        let n_coh = coherence_number(&s.params, delta)?;
        rows.push(vec![
            format_float(ns),
            format_float(delta),
            format_float(delta / s.linewidth()),
            format_float(n_coh),
        ]);
        values.push(json!({ "duration_ns": ns, "coherence_number": n_coh }));
    }
    out.csv(
        "coherence_number.csv",
        &["duration_ns", "pump_bandwidth_rad_per_s", "bandwidth_over_linewidth", "coherence_number"],
        rows,
    )?;
    out.json(
        "coherence_number.json",
        &metadata(Experiment::CoherenceNumber, config, &s, json!({ "values": values }))?,
    )
}
