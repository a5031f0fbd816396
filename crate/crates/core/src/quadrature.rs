//! Quadrature means, two-time correlators and the truncated correlation
//! functions of the probe pulse.
//!
//! The δ(τ) shot-noise part of every correlator is carried as a separate
//! weight (always ¼) and never discretized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::QuadSpec;
use crate::kernel::Kernel;
use crate::nlo_phase::{
    correlator_k_exact, correlator_k_quasistatic, mu_exact, phase_exact, InteractionParams, NonlinearPhases,
};
use crate::pulse::PulseSpec;

/// Coefficient of δ(τ) for coherent inputs.
pub const SHOT_NOISE_WEIGHT: f64 = 0.25;

/// `(⟨X₁(t)⟩, ⟨Y₁(t)⟩)`.
pub fn mean_quadratures(phases: &NonlinearPhases, pulse1: &PulseSpec) -> Result<(f64, f64)> {
    let amp = pulse1.amplitude(phases.t)?;
    let damp = (-phases.mu1 - phases.mu2x).exp();
    let (s, c) = phases.phi_tilde.sin_cos();
    Ok((amp * damp * c, amp * damp * s))
}

/// Ingredients of the two-time correlators `C_X(t₁,t₂)`, `C_Y(t₁,t₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairInputs {
    /// `|α₀₁(t₁)|`, `|α₀₁(t₂)|`
    pub amp1: f64,
    pub amp2: f64,
    /// `Φ̃₁,₂(t₁)`, `Φ̃₁,₂(t₂)`
    pub phi_tilde1: f64,
    pub phi_tilde2: f64,
    /// `μ₁(tᵢ) + μ̃₂(tᵢ)` at each time.
    pub damping1: f64,
    pub damping2: f64,
    /// Exponent coupling the two times: `K₁(t₁,t₂) + K̃₂(t₁,t₂)`.
    pub coupling: f64,
    /// Commutator phase `γ₁·h̃(t₂ − t₁)`.
    pub nudge: f64,
}

impl PairInputs {
    /// Quasi-static phases and correlators.
    pub fn quasistatic(
        kernel: &Kernel,
        params: &InteractionParams,
        pulse1: &PulseSpec,
        pulse2: &PulseSpec,
        t1: f64,
        t2: f64,
    ) -> Result<Self> {
        let tau_r = require_inertial(kernel)?;
        let at = |t| crate::nlo_phase::phases_quasistatic(params, pulse1, pulse2, t);
        let (a, b) = (at(t1)?, at(t2)?);
        Ok(PairInputs {
            amp1: pulse1.amplitude(t1)?,
            amp2: pulse1.amplitude(t2)?,
            phi_tilde1: a.phi_tilde,
            phi_tilde2: b.phi_tilde,
            damping1: a.mu1 + a.mu2x,
            damping2: b.mu1 + b.mu2x,
            coupling: correlator_k_quasistatic(kernel, pulse1, params.gamma1, t1, t2)?
                + correlator_k_quasistatic(kernel, pulse2, params.gamma_x, t1, t2)?,
            nudge: params.gamma1 * kernel.scaled_even((t2 - t1) / tau_r),
        })
    }

    /// Phases, damping and correlators from the exact kernel convolutions.
    pub fn exact(
        kernel: &Kernel,
        params: &InteractionParams,
        pulse1: &PulseSpec,
        pulse2: &PulseSpec,
        t1: f64,
        t2: f64,
        quad: &QuadSpec,
    ) -> Result<Self> {
        let tau_r = require_inertial(kernel)?;
        let tilde = |t: f64| -> Result<f64> {
            Ok(phase_exact(kernel, pulse1, params.gamma1, t, quad)?
                + pulse1.linear_phase.at(t)
                + phase_exact(kernel, pulse2, params.gamma_x, t, quad)?)
        };
        let damping = |t: f64| -> Result<f64> {
            Ok(mu_exact(kernel, pulse1, params.gamma1, t, quad)? + mu_exact(kernel, pulse2, params.gamma_x, t, quad)?)
        };
        Ok(PairInputs {
            amp1: pulse1.amplitude(t1)?,
            amp2: pulse1.amplitude(t2)?,
            phi_tilde1: tilde(t1)?,
            phi_tilde2: tilde(t2)?,
            damping1: damping(t1)?,
            damping2: damping(t2)?,
            coupling: correlator_k_exact(kernel, pulse1, params.gamma1, t1, t2, quad)?
                + correlator_k_exact(kernel, pulse2, params.gamma_x, t1, t2, quad)?,
            nudge: params.gamma1 * kernel.scaled_even((t2 - t1) / tau_r),
        })
    }

    /// The same correlator with the two times exchanged.
    pub fn swapped(&self) -> Self {
        PairInputs {
            amp1: self.amp2,
            amp2: self.amp1,
            phi_tilde1: self.phi_tilde2,
            phi_tilde2: self.phi_tilde1,
            damping1: self.damping2,
            damping2: self.damping1,
            ..*self
        }
    }
}

fn require_inertial(kernel: &Kernel) -> Result<f64> {
    match *kernel {
        Kernel::Exponential { tau_r } => Ok(tau_r),
        Kernel::Delta => Err(Error::SingularKernel {
            quantity: "two-time correlator",
        }),
    }
}

/// Pre-truncation correlators, smooth parts plus the δ weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlators {
    pub x_smooth: f64,
    pub y_smooth: f64,
    pub delta_weight: f64,
}

/// `C_X`, `C_Y` in their exponential (not γ-expanded) form:
///
/// `C_X = ¼δ + ½|α₁||α₂|e^{−μ̃}{e^{−Λ}cos[Φ̃₁+Φ̃₂+γ₁h̃] + e^{Λ}cos[Φ̃₁−Φ̃₂]}`
/// `C_Y = ¼δ − ½|α₁||α₂|e^{−μ̃}{e^{−Λ}cos[Φ̃₁+Φ̃₂+γ₁h̃] − e^{Λ}cos[Φ̃₁−Φ̃₂]}`
pub fn correlator_c_exact(p: &PairInputs) -> Correlators {
    let pref = 0.5 * p.amp1 * p.amp2 * (-(p.damping1 + p.damping2)).exp();
    let sum = (-p.coupling).exp() * (p.phi_tilde1 + p.phi_tilde2 + p.nudge).cos();
    let diff = p.coupling.exp() * (p.phi_tilde1 - p.phi_tilde2).cos();
    Correlators {
        x_smooth: pref * (sum + diff),
        y_smooth: -pref * (sum - diff),
        delta_weight: SHOT_NOISE_WEIGHT,
    }
}

/// `C − ⟨·(t₁)⟩⟨·(t₂)⟩` for both quadratures (smooth parts).
pub fn connected_correlators(p: &PairInputs) -> Correlators {
    let c = correlator_c_exact(p);
    let m1 = p.amp1 * (-p.damping1).exp();
    let m2 = p.amp2 * (-p.damping2).exp();
    Correlators {
        x_smooth: c.x_smooth - m1 * m2 * p.phi_tilde1.cos() * p.phi_tilde2.cos(),
        y_smooth: c.y_smooth - m1 * m2 * p.phi_tilde1.sin() * p.phi_tilde2.sin(),
        delta_weight: c.delta_weight,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSample {
    pub t: f64,
    pub tau: f64,
    pub smooth_value: f64,
    pub delta_weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPair {
    pub x: CorrelationSample,
    pub y: CorrelationSample,
}

/// γ²-truncated quasi-static correlation functions:
///
/// `R_X = ¼{δ(τ) − φ₁h(τ)sin2Φ̃ + φ*g(τ)sin²Φ̃}`
/// `R_Y = ¼{δ(τ) + φ₁h(τ)sin2Φ̃ + φ*g(τ)cos²Φ̃}`
pub fn corr_r(phases: &NonlinearPhases, kernel: &Kernel, tau: f64) -> Result<CorrelationPair> {
    require_inertial(kernel)?;
    let h = kernel.even(tau);
    let g = kernel.pair_correlation(tau);
    let (s, c) = phases.phi_tilde.sin_cos();
    let cross = phases.phi1 * h * 2.0 * s * c;
    let sample = |smooth: f64| CorrelationSample {
        t: phases.t,
        tau,
        smooth_value: 0.25 * smooth,
        delta_weight: SHOT_NOISE_WEIGHT,
    };
    Ok(CorrelationPair {
        x: sample(-cross + phases.phi_star * g * s * s),
        y: sample(cross + phases.phi_star * g * c * c),
    })
}
