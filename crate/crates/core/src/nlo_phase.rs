//! Nonlinear phase additions, damping exponents and time correlators.
//!
//! Every quantity comes in two forms: the exact convolution with the kernel
//! (evaluated by adaptive quadrature) and the quasi-static closed form valid
//! for `τ_p ≫ τ_r`. The quasi-static forms evaluate the envelope at `θ = 0`
//! for phases and damping, and at the midpoint `t₁ + τ/2` for correlators.

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::{integrate, QuadSpec};
use crate::kernel::Kernel;
use crate::pulse::PulseSpec;

/// Above this per-photon phase the γ² truncation is considered frayed.
pub const GAMMA_SOFT_LIMIT: f64 = 0.1;
/// Below this `τ_p/τ_r` the quasi-static closed forms are considered frayed.
pub const QUASI_STATIC_MIN_RATIO: f64 = 50.0;

/// Per-photon nonlinear phase coefficients (β·z folded in).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteractionParams {
    /// SPM of the probe pulse, γ₁.
    pub gamma1: f64,
    /// SPM of the control pulse, γ₂.
    pub gamma2: f64,
    /// XPM coupling, γ̃.
    pub gamma_x: f64,
}

impl InteractionParams {
    pub fn new(gamma1: f64, gamma2: f64, gamma_x: f64) -> Result<Self> {
        let p = InteractionParams {
            gamma1,
            gamma2,
            gamma_x,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn off() -> Self {
        InteractionParams {
            gamma1: 0.0,
            gamma2: 0.0,
            gamma_x: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma_x", self.gamma_x),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Conditions under which the truncated closed forms should not be trusted.
/// Reported, never clamped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegimeWarning {
    StrongNonlinearity { parameter: String, value: f64 },
    ShortPulse { pulse: String, tau_p_over_tau_r: f64 },
    NegativeSpectrum { quadrature: String, omega: f64, value: f64 },
}

pub fn regime_warnings(
    kernel: &Kernel,
    params: &InteractionParams,
    pulse1: &PulseSpec,
    pulse2: &PulseSpec,
) -> Vec<RegimeWarning> {
    let mut out = Vec::new();
    for (name, v) in [
        ("gamma1", params.gamma1),
        ("gamma2", params.gamma2),
        ("gamma_x", params.gamma_x),
    ] {
        if v > GAMMA_SOFT_LIMIT {
            out.push(RegimeWarning::StrongNonlinearity {
                parameter: name.to_string(),
                value: v,
            });
        }
    }
    if let Kernel::Exponential { tau_r } = *kernel {
        for (name, p) in [("pulse1", pulse1), ("pulse2", pulse2)] {
            let ratio = p.tau_p / tau_r;
            if ratio < QUASI_STATIC_MIN_RATIO {
                out.push(RegimeWarning::ShortPulse {
                    pulse: name.to_string(),
                    tau_p_over_tau_r: ratio,
                });
            }
        }
    }
    out
}

/// Nonlinear phases of the probe pulse at a single time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlinearPhases {
    pub t: f64,
    /// SPM phase φ₁(t).
    pub phi1: f64,
    /// XPM phase imprinted on the probe by the control, φ̃₂(t).
    pub phi2x: f64,
    /// XPM phase the probe imprints on the control, φ̃₁(t).
    pub phi1x: f64,
    /// SPM damping exponent μ₁(t).
    pub mu1: f64,
    /// XPM damping exponent μ̃₂(t).
    pub mu2x: f64,
    /// φ*₁,₂ = φ₁² + φ̃₁φ̃₂.
    pub phi_star: f64,
    /// Linear phase ϕ₁(t) of the probe.
    pub linear_phase: f64,
    /// Φ̃₁,₂ = φ₁ + ϕ₁ + φ̃₂.
    pub phi_tilde: f64,
}

impl NonlinearPhases {
    pub fn new(t: f64, phi1: f64, phi1x: f64, phi2x: f64, mu1: f64, mu2x: f64, linear_phase: f64) -> Self {
        NonlinearPhases {
            t,
            phi1,
            phi2x,
            phi1x,
            mu1,
            mu2x,
            phi_star: phi1 * phi1 + phi1x * phi2x,
            linear_phase,
            phi_tilde: phi1 + linear_phase + phi2x,
        }
    }

    /// Same nonlinear content with a different probe linear phase.
    pub fn with_linear_phase(self, linear_phase: f64) -> Self {
        NonlinearPhases {
            linear_phase,
            phi_tilde: self.phi1 + linear_phase + self.phi2x,
            ..self
        }
    }

    /// φ̃₁φ̃₂, the XPM part of φ*.
    pub fn cross_product(&self) -> f64 {
        self.phi1x * self.phi2x
    }

    pub fn is_linear(&self) -> bool {
        self.phi1 == 0.0 && self.phi_star == 0.0
    }
}

/// `½·φ₀·∫ h̃(θ) r²(t − θτ_r) dθ` with `φ₀ = 2·γ·n_peak`.
pub fn phase_exact(kernel: &Kernel, pulse: &PulseSpec, gamma_eff: f64, t: f64, quad: &QuadSpec) -> Result<f64> {
    let phi0 = 2.0 * gamma_eff * pulse.n_peak;
    if phi0 == 0.0 {
        return Ok(0.0);
    }
    match *kernel {
        Kernel::Delta => Ok(phi0 * pulse.envelope(t)?.powi(2)),
        Kernel::Exponential { tau_r } => {
            let integral = convolve_envelope(pulse, t, tau_r, quad, |theta| (-theta.abs()).exp())?;
            Ok(0.5 * phi0 * integral)
        }
    }
}

/// `½·μ₀·∫ h̃(θ)² r²(t − θτ_r) dθ` with `μ₀ = γ²·n_peak`.
pub fn mu_exact(kernel: &Kernel, pulse: &PulseSpec, gamma_eff: f64, t: f64, quad: &QuadSpec) -> Result<f64> {
    let mu0 = gamma_eff * gamma_eff * pulse.n_peak;
    if mu0 == 0.0 {
        return Ok(0.0);
    }
    match *kernel {
        Kernel::Delta => Err(Error::SingularKernel { quantity: "damping exponent μ" }),
        Kernel::Exponential { tau_r } => {
            let integral = convolve_envelope(pulse, t, tau_r, quad, |theta| (-2.0 * theta.abs()).exp())?;
            Ok(0.5 * mu0 * integral)
        }
    }
}

// ∫ w(θ) r²(t − θτ_r) dθ over the kernel window around θ = 0.
fn convolve_envelope(
    pulse: &PulseSpec,
    t: f64,
    tau_r: f64,
    quad: &QuadSpec,
    weight: impl Fn(f64) -> f64,
) -> Result<f64> {
    quad.validate()?;
    let w = quad.kernel_window;
    let mut bps = vec![0.0];
    bps.extend(pulse.shape.breakpoints(pulse.tau_p).into_iter().map(|b| (t - b) / tau_r));
    // envelope errors (tabulated range) surface after integration
    let failure = RefCell::new(None);
    let est = integrate(
        |theta| match pulse.envelope(t - theta * tau_r) {
            Ok(r) => weight(theta) * r * r,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        -w,
        w,
        &bps,
        quad,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(est?.value)
}

/// Quasi-static phases: `φ₁ = 2γ₁n̄₀₁(t)`, `φ̃₂ = 2γ̃n̄₀₂(t)`, `φ̃₁ = 2γ̃n̄₀₁(t)`,
/// `μ₁ = γ₁²n̄₀₁(t)/2`, `μ̃₂ = γ̃²n̄₀₂(t)/2`.
pub fn phases_quasistatic(
    params: &InteractionParams,
    pulse1: &PulseSpec,
    pulse2: &PulseSpec,
    t: f64,
) -> Result<NonlinearPhases> {
    let n1 = pulse1.photon_density(t)?;
    let n2 = pulse2.photon_density(t)?;
    Ok(NonlinearPhases::new(
        t,
        2.0 * params.gamma1 * n1,
        2.0 * params.gamma_x * n1,
        2.0 * params.gamma_x * n2,
        0.5 * params.gamma1 * params.gamma1 * n1,
        0.5 * params.gamma_x * params.gamma_x * n2,
        pulse1.linear_phase.at(t),
    ))
}

/// Phases from the exact kernel convolutions.
pub fn phases_exact(
    kernel: &Kernel,
    params: &InteractionParams,
    pulse1: &PulseSpec,
    pulse2: &PulseSpec,
    t: f64,
    quad: &QuadSpec,
) -> Result<NonlinearPhases> {
    Ok(NonlinearPhases::new(
        t,
        phase_exact(kernel, pulse1, params.gamma1, t, quad)?,
        phase_exact(kernel, pulse1, params.gamma_x, t, quad)?,
        phase_exact(kernel, pulse2, params.gamma_x, t, quad)?,
        mu_exact(kernel, pulse1, params.gamma1, t, quad)?,
        mu_exact(kernel, pulse2, params.gamma_x, t, quad)?,
        pulse1.linear_phase.at(t),
    ))
}

/// Time correlator `K(t₁,t₂) = μ₀·∫ h̃(t₁/τ_r − θ) h̃(t₂/τ_r − θ) r²(θτ_r) dθ`.
pub fn correlator_k_exact(
    kernel: &Kernel,
    pulse: &PulseSpec,
    gamma_eff: f64,
    t1: f64,
    t2: f64,
    quad: &QuadSpec,
) -> Result<f64> {
    let mu0 = gamma_eff * gamma_eff * pulse.n_peak;
    if mu0 == 0.0 {
        return Ok(0.0);
    }
    let Kernel::Exponential { tau_r } = *kernel else {
        return Err(Error::SingularKernel { quantity: "time correlator K" });
    };
    quad.validate()?;
    let (c1, c2) = (t1 / tau_r, t2 / tau_r);
    let lo = c1.min(c2) - quad.kernel_window;
    let hi = c1.max(c2) + quad.kernel_window;
    let mut bps = vec![c1, c2];
    bps.extend(pulse.shape.breakpoints(pulse.tau_p).into_iter().map(|b| b / tau_r));
    let failure = RefCell::new(None);
    let est = integrate(
        |theta| match pulse.envelope(theta * tau_r) {
            Ok(r) => (-(c1 - theta).abs() - (c2 - theta).abs()).exp() * r * r,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        lo,
        hi,
        &bps,
        quad,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(mu0 * est?.value)
}

/// Quasi-static correlator `μ₀·r²(t₁ + τ/2)·g(τ)·τ_r`, `τ = t₂ − t₁`.
pub fn correlator_k_quasistatic(kernel: &Kernel, pulse: &PulseSpec, gamma_eff: f64, t1: f64, t2: f64) -> Result<f64> {
    let mu0 = gamma_eff * gamma_eff * pulse.n_peak;
    if mu0 == 0.0 {
        return Ok(0.0);
    }
    let Kernel::Exponential { tau_r } = *kernel else {
        return Err(Error::SingularKernel { quantity: "time correlator K" });
    };
    let tau = t2 - t1;
    let r = pulse.envelope(t1 + 0.5 * tau)?;
    Ok(mu0 * r * r * kernel.pair_correlation(tau) * tau_r)
}
