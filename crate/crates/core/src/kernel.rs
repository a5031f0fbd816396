//! Response functions of the inertial electronic Kerr nonlinearity.
//!
//! Times are measured in units of the relaxation time, so the shipped
//! exponential kernel has `tau_r = 1` unless a caller overrides it. Frequencies
//! are reduced frequencies `Ω = ω·τ_r`.
//!
//! Fourier convention: `S(ω) = ∫ R(τ) e^{iωτ} dτ`. Under it the even kernel
//! `h` maps to `2·L(Ω)` and the pair correlation `g` to `4·L(Ω)²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonlinear response kernel. Closed set: the exponential electronic-Kerr
/// response and its noninertial (delta) limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Kernel {
    /// `H(t) = exp(-t/τ_r)/τ_r` for `t ≥ 0`.
    Exponential { tau_r: f64 },
    /// `H(t) = δ(t)`; the noninertial medium.
    Delta,
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::Exponential { tau_r: 1.0 }
    }
}

impl Kernel {
    pub fn exponential(tau_r: f64) -> Result<Self> {
        if !(tau_r.is_finite() && tau_r > 0.0) {
            return Err(Error::invalid("tau_r", format!("must be finite and > 0, got {tau_r}")));
        }
        Ok(Kernel::Exponential { tau_r })
    }

    /// Builds a kernel from its configuration name. Anything other than the
    /// two shipped kernels is rejected.
    pub fn from_name(name: &str, tau_r: f64) -> Result<Self> {
        match name {
            "exponential" => Kernel::exponential(tau_r),
            "delta" => Ok(Kernel::Delta),
            other => Err(Error::Config(format!(
                "unknown kernel `{other}` (expected `exponential` or `delta`)"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Kernel::Exponential { tau_r } => Kernel::exponential(tau_r).map(|_| ()),
            Kernel::Delta => Ok(()),
        }
    }

    /// Relaxation time; zero for the delta kernel.
    pub fn tau_r(&self) -> f64 {
        match *self {
            Kernel::Exponential { tau_r } => tau_r,
            Kernel::Delta => 0.0,
        }
    }

    pub fn is_inertial(&self) -> bool {
        matches!(self, Kernel::Exponential { .. })
    }

    /// Causal response `H(t)`. Exactly zero for `t < 0`.
    ///
    /// The delta kernel returns `+∞` at `t = 0`; it is only meaningful under
    /// an integral, which the rest of the crate handles analytically.
    pub fn causal(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match *self {
            Kernel::Exponential { tau_r } => (-t / tau_r).exp() / tau_r,
            Kernel::Delta => {
                if t == 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    /// Even symmetrization `h(t) = H(|t|)`.
    pub fn even(&self, t: f64) -> f64 {
        self.causal(t.abs())
    }

    /// Dimensionless even kernel `h̃(θ) = τ_r·h(θ·τ_r)`, `θ` in units of τ_r.
    pub fn scaled_even(&self, theta: f64) -> f64 {
        match *self {
            Kernel::Exponential { .. } => (-theta.abs()).exp(),
            Kernel::Delta => {
                if theta == 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    /// Pair correlation `g(τ) = (1/τ_r)(1 + |τ|/τ_r)·h̃(τ/τ_r)`, the quasi-static
    /// shape of the time correlators.
    pub fn pair_correlation(&self, tau: f64) -> f64 {
        match *self {
            Kernel::Exponential { tau_r } => {
                let x = tau.abs() / tau_r;
                (1.0 + x) * (-x).exp() / tau_r
            }
            Kernel::Delta => {
                if tau == 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    /// Spectral weight `L` at reduced frequency `omega`; identically 1 for the
    /// delta kernel.
    pub fn spectral_weight(&self, omega: f64) -> f64 {
        match *self {
            Kernel::Exponential { tau_r } => lorentzian(omega * tau_r),
            Kernel::Delta => 1.0,
        }
    }

    /// `∫ h(τ) e^{iωτ} dτ`.
    pub fn fourier_even(&self, omega: f64) -> f64 {
        2.0 * self.spectral_weight(omega)
    }

    /// `∫ g(τ) e^{iωτ} dτ`.
    pub fn fourier_pair_correlation(&self, omega: f64) -> f64 {
        let l = self.spectral_weight(omega);
        4.0 * l * l
    }
}

/// `L(Ω) = 1/(1 + Ω²)`.
pub fn lorentzian(omega: f64) -> f64 {
    1.0 / (1.0 + omega * omega)
}
