//! Quadrature fluctuation spectra, the optimal initial phase and parameter
//! sweeps.
//!
//! All spectra are dimensionless and equal ¼ (the shot-noise level) without
//! nonlinearity. Frequencies are reduced, `Ω = ω·τ_r`.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::nlo_phase::{phases_quasistatic, regime_warnings, InteractionParams, NonlinearPhases, RegimeWarning};
use crate::pulse::PulseSpec;
use crate::quadrature::SHOT_NOISE_WEIGHT;

/// Spectral densities of the two quadratures at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPair {
    pub s_x: f64,
    pub s_y: f64,
}

/// `S_X = ¼{1 − 2φ₁L sin2Φ̃ + 4φ*L² sin²Φ̃}`, `S_Y = ¼{1 + 2φ₁L sin2Φ̃ + 4φ*L² cos²Φ̃}`
/// with the exponential kernel of unit relaxation time.
pub fn spectrum_closed(phases: &NonlinearPhases, omega: f64) -> SpectrumPair {
    spectrum_closed_with(&Kernel::default(), phases, omega)
}

pub fn spectrum_closed_with(kernel: &Kernel, phases: &NonlinearPhases, omega: f64) -> SpectrumPair {
    let l = kernel.spectral_weight(omega);
    let (s, c) = phases.phi_tilde.sin_cos();
    let cross = 2.0 * phases.phi1 * l * (2.0 * s * c);
    let quad = 4.0 * phases.phi_star * l * l;
    SpectrumPair {
        s_x: SHOT_NOISE_WEIGHT * (1.0 - cross + quad * s * s),
        s_y: SHOT_NOISE_WEIGHT * (1.0 + cross + quad * c * c),
    }
}

/// Probe linear phase minimizing `S_X` at the anchor frequency `omega0`:
/// `½·atan(φ₁/(φ*·L₀)) − φ₁ − φ̃₂` (principal branch).
pub fn optimal_phase(phases: &NonlinearPhases, omega0: f64) -> Result<f64> {
    optimal_phase_with(&Kernel::default(), phases, omega0)
}

pub fn optimal_phase_with(kernel: &Kernel, phases: &NonlinearPhases, omega0: f64) -> Result<f64> {
    if phases.is_linear() {
        return Err(Error::DegeneratePhase);
    }
    let l0 = kernel.spectral_weight(omega0);
    // atan of ±∞ is ±π/2, covering φ*·L₀ = 0
    let ratio = phases.phi1 / (phases.phi_star * l0);
    Ok(0.5 * ratio.atan() - phases.phi1 - phases.phi2x)
}

/// Spectra at the anchor frequency when the optimal phase is used:
/// `S0_Y = ¼(1 + 2φ*L₀² + 2L₀D)`, `S0_X = ¼(1 + 2φ*L₀² − 2L₀D)`,
/// `D = √(φ₁² + φ*²L₀²)`.
///
/// `S0_X` is computed as `(1 + 4L₀²φ̃₁φ̃₂)/(16·S0_Y)`, the same quantity
/// without the cancellation between `2φ*L₀²` and `2L₀D`.
pub fn spectrum_optimal(phases: &NonlinearPhases, omega0: f64) -> SpectrumPair {
    spectrum_optimal_with(&Kernel::default(), phases, omega0)
}

pub fn spectrum_optimal_with(kernel: &Kernel, phases: &NonlinearPhases, omega0: f64) -> SpectrumPair {
    let l0 = kernel.spectral_weight(omega0);
    let d = anchor_norm(phases, l0);
    let s_y = SHOT_NOISE_WEIGHT * (1.0 + 2.0 * phases.phi_star * l0 * l0 + 2.0 * l0 * d);
    let s_x = (1.0 + 4.0 * l0 * l0 * phases.cross_product()) / (16.0 * s_y);
    SpectrumPair { s_x, s_y }
}

fn anchor_norm(phases: &NonlinearPhases, l0: f64) -> f64 {
    phases.phi1.hypot(phases.phi_star * l0)
}

/// Spectra at `omega` for the phase optimal at `omega0`:
/// `S(Ω) = S⁰ + ½(L − L₀){φ*(L + L₀) ∓ [φ₁² + φ*²L₀(L + L₀)]/D}`.
pub fn spectrum_at(phases: &NonlinearPhases, omega: f64, omega0: f64) -> SpectrumPair {
    spectrum_at_with(&Kernel::default(), phases, omega, omega0)
}

pub fn spectrum_at_with(kernel: &Kernel, phases: &NonlinearPhases, omega: f64, omega0: f64) -> SpectrumPair {
    let anchor = spectrum_optimal_with(kernel, phases, omega0);
    let l = kernel.spectral_weight(omega);
    let l0 = kernel.spectral_weight(omega0);
    let d = anchor_norm(phases, l0);
    let spread = phases.phi_star * (l + l0);
    // D = 0 only without nonlinearity, where the bracket numerator vanishes too
    let tilt = if d > 0.0 {
        (phases.phi1 * phases.phi1 + phases.phi_star * phases.phi_star * l0 * (l + l0)) / d
    } else {
        0.0
    };
    let step = 0.5 * (l - l0);
    SpectrumPair {
        s_x: anchor.s_x + step * (spread - tilt),
        s_y: anchor.s_y + step * (spread + tilt),
    }
}

/// How the probe linear phase is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMode {
    /// Optimal at `Omega0`. Falls back to 0 when every phase is optimal.
    #[default]
    Optimal,
    /// Fixed ϕ₁ in radians.
    Explicit(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumRequest {
    pub params: InteractionParams,
    pub pulse1: PulseSpec,
    pub pulse2: PulseSpec,
    #[serde(default)]
    pub t: f64,
    #[serde(rename = "Omega_grid")]
    pub omega_grid: Vec<f64>,
    #[serde(rename = "Omega0", default)]
    pub omega0: f64,
    #[serde(default)]
    pub phase_mode: PhaseMode,
    #[serde(default)]
    pub kernel: Kernel,
}

impl SpectrumRequest {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.pulse1.validate()?;
        self.pulse2.validate()?;
        self.kernel.validate()?;
        if !self.t.is_finite() {
            return Err(Error::invalid("t", "must be finite"));
        }
        if !self.omega0.is_finite() {
            return Err(Error::invalid("Omega0", "must be finite"));
        }
        if let PhaseMode::Explicit(p) = self.phase_mode {
            if !p.is_finite() {
                return Err(Error::invalid("phase_mode", "explicit phase must be finite"));
            }
        }
        if self.omega_grid.is_empty() {
            return Err(Error::invalid("Omega_grid", "must not be empty"));
        }
        if self.omega_grid.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("Omega_grid", "must be finite"));
        }
        if self.omega_grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("Omega_grid", "must be sorted ascending"));
        }
        Ok(())
    }

    /// Quasi-static phases at `t` with the probe linear phase resolved.
    /// The flag is set when the optimal phase was degenerate.
    pub fn resolved_phases(&self) -> Result<(NonlinearPhases, bool)> {
        let base = phases_quasistatic(&self.params, &self.pulse1, &self.pulse2, self.t)?;
        Ok(match self.phase_mode {
            PhaseMode::Explicit(p) => (base.with_linear_phase(p), false),
            PhaseMode::Optimal => match optimal_phase_with(&self.kernel, &base, self.omega0) {
                Ok(p) => (base.with_linear_phase(p), false),
                Err(Error::DegeneratePhase) => (base.with_linear_phase(0.0), true),
                Err(e) => return Err(e),
            },
        })
    }

    fn evaluate(&self, phases: &NonlinearPhases, omega: f64) -> SpectrumPair {
        match self.phase_mode {
            PhaseMode::Optimal => spectrum_at_with(&self.kernel, phases, omega, self.omega0),
            PhaseMode::Explicit(_) => spectrum_closed_with(&self.kernel, phases, omega),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    #[serde(rename = "Omega")]
    pub omega: f64,
    #[serde(rename = "S_X")]
    pub s_x: f64,
    #[serde(rename = "S_Y")]
    pub s_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub request: SpectrumRequest,
    pub phases: NonlinearPhases,
    pub degenerate_phase: bool,
    pub points: Vec<SpectrumPoint>,
    pub warnings: Vec<RegimeWarning>,
}

pub fn compute_spectrum(request: &SpectrumRequest) -> Result<SpectrumResult> {
    request.validate()?;
    let (phases, degenerate_phase) = request.resolved_phases()?;
    let points: Vec<SpectrumPoint> = request
        .omega_grid
        .iter()
        .map(|&omega| {
            let s = request.evaluate(&phases, omega);
            SpectrumPoint {
                omega,
                s_x: s.s_x,
                s_y: s.s_y,
            }
        })
        .collect();
    let mut warnings = regime_warnings(&request.kernel, &request.params, &request.pulse1, &request.pulse2);
    for p in &points {
        negative_spectrum_warnings(p.omega, p.s_x, p.s_y, &mut warnings);
    }
    Ok(SpectrumResult {
        request: request.clone(),
        phases,
        degenerate_phase,
        points,
        warnings,
    })
}

fn negative_spectrum_warnings(omega: f64, s_x: f64, s_y: f64, out: &mut Vec<RegimeWarning>) {
    for (q, v) in [("X", s_x), ("Y", s_y)] {
        if v < 0.0 {
            out.push(RegimeWarning::NegativeSpectrum {
                quadrature: q.to_string(),
                omega,
                value: v,
            });
        }
    }
}

/// Request parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    /// Replaces the frequency grid by the single value.
    #[serde(rename = "Omega")]
    Omega,
    #[serde(rename = "Omega0")]
    Omega0,
    /// Peak SPM phase `2γ₁n̄₀₁`; the intensity ratio is held fixed.
    #[serde(rename = "phi01")]
    Phi01,
    /// `n̄₀₂/n̄₀₁`; the probe intensity is held fixed.
    #[serde(rename = "intensity_ratio")]
    IntensityRatio,
    #[serde(rename = "t")]
    T,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Omega => "Omega",
            SweepAxis::Omega0 => "Omega0",
            SweepAxis::Phi01 => "phi01",
            SweepAxis::IntensityRatio => "intensity_ratio",
            SweepAxis::T => "t",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Omega" => SweepAxis::Omega,
            "Omega0" => SweepAxis::Omega0,
            "phi01" => SweepAxis::Phi01,
            "intensity_ratio" => SweepAxis::IntensityRatio,
            "t" => SweepAxis::T,
            other => {
                return Err(Error::Config(format!(
                    "unknown sweep axis `{other}` (expected Omega, Omega0, phi01, intensity_ratio or t)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    #[serde(rename = "S_X")]
    pub s_x: f64,
    #[serde(rename = "S_Y")]
    pub s_y: f64,
    /// Probe linear phase used for the row.
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<RegimeWarning>,
}

/// Applies one sweep value to a copy of the request.
pub fn apply_axis(request: &SpectrumRequest, axis: SweepAxis, value: f64) -> Result<SpectrumRequest> {
    if !value.is_finite() {
        return Err(Error::invalid("sweep value", "must be finite"));
    }
    let mut r = request.clone();
    match axis {
        SweepAxis::Omega => r.omega_grid = vec![value],
        SweepAxis::Omega0 => r.omega0 = value,
        SweepAxis::T => r.t = value,
        SweepAxis::Phi01 => {
            if request.params.gamma1 <= 0.0 {
                return Err(Error::invalid("phi01", "sweeping the SPM phase needs gamma1 > 0"));
            }
            if value < 0.0 {
                return Err(Error::invalid("phi01", "must be >= 0"));
            }
            let ratio = intensity_ratio(request)?;
            r.pulse1.n_peak = value / (2.0 * request.params.gamma1);
            r.pulse2.n_peak = ratio * r.pulse1.n_peak;
        }
        SweepAxis::IntensityRatio => {
            if value < 0.0 {
                return Err(Error::invalid("intensity_ratio", "must be >= 0"));
            }
            r.pulse2.n_peak = value * request.pulse1.n_peak;
        }
    }
    Ok(r)
}

fn intensity_ratio(request: &SpectrumRequest) -> Result<f64> {
    let (n1, n2) = (request.pulse1.n_peak, request.pulse2.n_peak);
    if n1 > 0.0 {
        Ok(n2 / n1)
    } else if n2 == 0.0 {
        Ok(0.0)
    } else {
        Err(Error::invalid("intensity_ratio", "undefined with a vacuum probe and a bright control"))
    }
}

/// Evaluates the request at every value of `axis`. Rows are ordered by value
/// and then by frequency, independent of how the work is scheduled.
pub fn sweep(request: &SpectrumRequest, axis: SweepAxis, values: &[f64]) -> Result<SweepTable> {
    request.validate()?;
    let blocks: Vec<(Vec<SweepRow>, Vec<RegimeWarning>)> = values
        .par_iter()
        .map(|&v| {
            let r = apply_axis(request, axis, v)?;
            r.validate()?;
            let res = compute_spectrum(&r)?;
            let mut notes = Vec::new();
            let rows = res
                .points
                .iter()
                .map(|p| {
                    negative_spectrum_warnings(p.omega, p.s_x, p.s_y, &mut notes);
                    SweepRow {
                        value: v,
                        omega: p.omega,
                        s_x: p.s_x,
                        s_y: p.s_y,
                        phase: res.phases.linear_phase,
                    }
                })
                .collect();
            Ok((rows, notes))
        })
        .collect::<Result<_>>()?;
    let mut warnings = regime_warnings(&request.kernel, &request.params, &request.pulse1, &request.pulse2);
    let mut rows = Vec::new();
    for (r, w) in blocks {
        rows.extend(r);
        warnings.extend(w);
    }
    Ok(SweepTable { axis, rows, warnings })
}
