//! Parameter presets for the seven published figure families and the tables
//! that reproduce them.
//!
//! Every family uses `γ₁ = γ₂ = 2γ̃`, `t = 0`, and five control/probe
//! intensity ratios labelled `a` to `e`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::nlo_phase::InteractionParams;
use crate::pulse::PulseSpec;
use crate::spectra::{compute_spectrum, sweep, PhaseMode, SpectrumRequest, SweepAxis};

pub const GAMMA1: f64 = 0.01;
pub const PULSE_DURATION: f64 = 100.0;
/// Peak SPM phase used for the frequency families.
pub const PHI01: f64 = 2.0;
pub const CURVES: [(&str, f64); 5] = [("a", 0.0), ("b", 2.0), ("c", 3.0), ("d", 5.0), ("e", 8.0)];

/// What a figure plots on its horizontal axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axis", rename_all = "snake_case")]
pub enum FigureAxis {
    /// `S_X(Ω)` at fixed `φ₀,₁`, phase optimal at `omega0`.
    Frequency { omega0: f64 },
    /// `S_X` at fixed `Ω` against `φ₀,₁`, phase optimal at `omega0`.
    PeakPhase { omega: f64, omega0: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigurePreset {
    pub number: u8,
    pub axis: FigureAxis,
    pub x: Vec<f64>,
}

impl FigurePreset {
    pub fn x_label(&self) -> &'static str {
        match self.axis {
            FigureAxis::Frequency { .. } => "Omega",
            FigureAxis::PeakPhase { .. } => "phi01",
        }
    }
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + step * i as f64).collect()
}

pub fn figure_preset(number: u8) -> Result<FigurePreset> {
    let frequencies = || grid(0.0, 3.0, 301);
    let peak_phases = || grid(0.01, 3.0, 300);
    let (axis, x) = match number {
        1 => (FigureAxis::Frequency { omega0: 0.0 }, frequencies()),
        2 => (FigureAxis::Frequency { omega0: 0.5 }, frequencies()),
        3 => (FigureAxis::Frequency { omega0: 0.7 }, frequencies()),
        4 => (FigureAxis::PeakPhase { omega: 0.0, omega0: 0.0 }, peak_phases()),
        5 => (FigureAxis::PeakPhase { omega: 0.3, omega0: 0.0 }, peak_phases()),
        6 => (FigureAxis::PeakPhase { omega: 0.5, omega0: 0.0 }, peak_phases()),
        7 => (FigureAxis::PeakPhase { omega: 0.5, omega0: 0.5 }, peak_phases()),
        n => return Err(Error::Config(format!("figure number must be 1..=7, got {n}"))),
    };
    Ok(FigurePreset { number, axis, x })
}

/// Request for one curve: probe at `φ₀,₁ = 2`, control at `ratio` times the
/// probe intensity.
pub fn curve_request(ratio: f64, omega_grid: Vec<f64>, omega0: f64) -> Result<SpectrumRequest> {
    let n1 = PHI01 / (2.0 * GAMMA1);
    Ok(SpectrumRequest {
        params: InteractionParams::new(GAMMA1, GAMMA1, 0.5 * GAMMA1)?,
        pulse1: PulseSpec::gaussian(PULSE_DURATION, n1)?,
        pulse2: PulseSpec::gaussian(PULSE_DURATION, ratio * n1)?,
        t: 0.0,
        omega_grid,
        omega0,
        phase_mode: PhaseMode::Optimal,
        kernel: Kernel::default(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureRow {
    pub curve_label: String,
    pub ratio: f64,
    pub x: f64,
    #[serde(rename = "S_X")]
    pub s_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureTable {
    pub preset: FigurePreset,
    pub rows: Vec<FigureRow>,
}

impl FigureTable {
    /// Rows of one curve, in x order.
    pub fn curve(&self, label: &str) -> Vec<&FigureRow> {
        self.rows.iter().filter(|r| r.curve_label == label).collect()
    }
}

pub fn run_figure(number: u8) -> Result<FigureTable> {
    let preset = figure_preset(number)?;
    let mut rows = Vec::with_capacity(CURVES.len() * preset.x.len());
    for (label, ratio) in CURVES {
        let values: Vec<(f64, f64)> = match preset.axis {
            FigureAxis::Frequency { omega0 } => {
                let res = compute_spectrum(&curve_request(ratio, preset.x.clone(), omega0)?)?;
                res.points.iter().map(|p| (p.omega, p.s_x)).collect()
            }
            FigureAxis::PeakPhase { omega, omega0 } => {
                let table = sweep(&curve_request(ratio, vec![omega], omega0)?, SweepAxis::Phi01, &preset.x)?;
                table.rows.iter().map(|r| (r.value, r.s_x)).collect()
            }
        };
        rows.extend(values.into_iter().map(|(x, s_x)| FigureRow {
            curve_label: label.to_string(),
            ratio,
            x,
            s_x,
        }));
    }
    Ok(FigureTable { preset, rows })
}
