//! Classical descriptions of the two input coherent pulses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Envelope family `r(t)`, normalized so that `r(0) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    /// `exp(-t²/(2τ_p²))`
    Gaussian,
    /// `sech(t/τ_p)`
    Sech,
    /// 1 on `|t| ≤ τ_p`, 0 outside.
    FlatTop,
    /// Linear interpolation of samples; normalized by the value at `t = 0`.
    Tabulated { times: Vec<f64>, values: Vec<f64> },
}

impl Envelope {
    pub fn name(&self) -> &'static str {
        match self {
            Envelope::Gaussian => "gaussian",
            Envelope::Sech => "sech",
            Envelope::FlatTop => "flat_top",
            Envelope::Tabulated { .. } => "tabulated",
        }
    }

    /// Checks a tabulated envelope and rescales it so the sample at `t = 0` is 1.
    pub fn tabulated(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let env = Envelope::Tabulated { times, values };
        env.validate()?;
        let Envelope::Tabulated { times, mut values } = env else {
            unreachable!()
        };
        let peak = interpolate(&times, &values, 0.0)?;
        for v in &mut values {
            *v /= peak;
        }
        Ok(Envelope::Tabulated { times, values })
    }

    fn validate(&self) -> Result<()> {
        let Envelope::Tabulated { times, values } = self else {
            return Ok(());
        };
        if times.len() < 2 || times.len() != values.len() {
            return Err(Error::invalid(
                "shape.tabulated",
                "needs at least two samples and equal-length times/values",
            ));
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("shape.tabulated.times", "must be finite and strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid("shape.tabulated.values", "must be finite and non-negative"));
        }
        let peak = interpolate(times, values, 0.0)
            .map_err(|_| Error::invalid("shape.tabulated.times", "sample range must contain t = 0"))?;
        if peak <= 0.0 {
            return Err(Error::invalid("shape.tabulated.values", "envelope must be positive at t = 0"));
        }
        if values.iter().any(|v| *v > peak * (1.0 + 1e-12)) {
            return Err(Error::invalid("shape.tabulated.values", "envelope must peak at t = 0"));
        }
        Ok(())
    }

    /// Points where the envelope is not smooth. Quadrature splits there.
    pub fn breakpoints(&self, tau_p: f64) -> Vec<f64> {
        match self {
            Envelope::FlatTop => vec![-tau_p, tau_p],
            Envelope::Tabulated { times, .. } => times.clone(),
            Envelope::Gaussian | Envelope::Sech => Vec::new(),
        }
    }
}

fn interpolate(times: &[f64], values: &[f64], t: f64) -> Result<f64> {
    let (min, max) = (times[0], times[times.len() - 1]);
    if !(min..=max).contains(&t) {
        return Err(Error::OutOfRange { t, min, max });
    }
    let i = times.partition_point(|&x| x <= t);
    if i == times.len() {
        return Ok(values[values.len() - 1]);
    }
    let (t0, t1) = (times[i - 1], times[i]);
    let w = (t - t0) / (t1 - t0);
    Ok(values[i - 1] * (1.0 - w) + values[i] * w)
}

/// Linear phase `ϕ(t)` of a pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearPhase {
    Constant(f64),
    /// Coefficients `c₀ + c₁t + c₂t² + …`.
    Polynomial(Vec<f64>),
}

impl Default for LinearPhase {
    fn default() -> Self {
        LinearPhase::Constant(0.0)
    }
}

impl LinearPhase {
    pub fn at(&self, t: f64) -> f64 {
        match self {
            LinearPhase::Constant(c) => *c,
            LinearPhase::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &k| acc * t + k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSpec {
    #[serde(default = "default_shape")]
    pub shape: Envelope,
    /// Duration in units of τ_r.
    pub tau_p: f64,
    /// Peak mean photon-number density `n̄₀(0)`.
    pub n_peak: f64,
    #[serde(default)]
    pub linear_phase: LinearPhase,
}

fn default_shape() -> Envelope {
    Envelope::Gaussian
}

impl PulseSpec {
    pub fn new(shape: Envelope, tau_p: f64, n_peak: f64) -> Result<Self> {
        let p = PulseSpec {
            shape,
            tau_p,
            n_peak,
            linear_phase: LinearPhase::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn gaussian(tau_p: f64, n_peak: f64) -> Result<Self> {
        PulseSpec::new(Envelope::Gaussian, tau_p, n_peak)
    }

    pub fn with_linear_phase(mut self, phase: LinearPhase) -> Self {
        self.linear_phase = phase;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_p.is_finite() && self.tau_p > 0.0) {
            return Err(Error::invalid("tau_p", format!("must be finite and > 0, got {}", self.tau_p)));
        }
        if !(self.n_peak.is_finite() && self.n_peak >= 0.0) {
            return Err(Error::invalid("n_peak", format!("must be finite and >= 0, got {}", self.n_peak)));
        }
        if let LinearPhase::Polynomial(c) = &self.linear_phase {
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("linear_phase", "coefficients must be finite"));
            }
        }
        if let LinearPhase::Constant(c) = self.linear_phase {
            if !c.is_finite() {
                return Err(Error::invalid("linear_phase", "must be finite"));
            }
        }
        self.shape.validate()
    }

    /// Envelope `r(t)`.
    pub fn envelope(&self, t: f64) -> Result<f64> {
        let x = t / self.tau_p;
        Ok(match &self.shape {
            Envelope::Gaussian => (-0.5 * x * x).exp(),
            Envelope::Sech => 1.0 / x.cosh(),
            Envelope::FlatTop => {
                if x.abs() <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Envelope::Tabulated { times, values } => interpolate(times, values, t)?,
        })
    }

    /// Mean photon-number density `n̄₀(t) = n_peak·r(t)²`.
    pub fn photon_density(&self, t: f64) -> Result<f64> {
        let r = self.envelope(t)?;
        Ok(self.n_peak * r * r)
    }

    /// Coherent amplitude modulus `|α₀(t)| = √n̄₀(t)`.
    pub fn amplitude(&self, t: f64) -> Result<f64> {
        Ok(self.photon_density(t)?.sqrt())
    }
}
