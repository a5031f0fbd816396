//! Independent numeric checks of the closed forms, reported as named
//! pass/fail comparisons.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::figures::{curve_request, CURVES};
use crate::fock::{
    expect_exp_o, verify_commutator_and_statistics, verify_truncated_mean, ModeLattice, CLOSED_FORM_TOL,
    COMMUTATOR_TOL, NUMBER_TOL, PERMUTATION_TOL,
};
use crate::integrate::QuadSpec;
use crate::kernel::Kernel;
use crate::nlo_phase::{phase_exact, InteractionParams, NonlinearPhases};
use crate::pulse::PulseSpec;
use crate::quadrature::{corr_r, SHOT_NOISE_WEIGHT};
use crate::spectra::spectrum_closed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `|observed − expected| ≤ tolerance`.
    pub fn close(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            observed,
            expected,
            tolerance,
            pass: (observed - expected).abs() <= tolerance,
        }
    }

    /// Passes when `observed ≤ tolerance`; the expected value is 0.
    pub fn at_most(name: impl Into<String>, observed: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            observed,
            expected: 0.0,
            tolerance,
            pass: observed <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DftOracleConfig {
    /// Half-width of the lag window, in τ_r.
    pub window: f64,
    pub step: f64,
    pub omega_max: f64,
    pub omega_points: usize,
    pub omega0: f64,
    pub tolerance: f64,
}

impl Default for DftOracleConfig {
    fn default() -> Self {
        DftOracleConfig {
            window: 40.0,
            step: 0.01,
            omega_max: 3.0,
            omega_points: 301,
            omega0: 0.0,
            tolerance: 1e-6,
        }
    }
}

/// `¼ + 2∫₀^W R(τ)cos(Ωτ)dτ` by composite Simpson; `R` is even.
pub fn numeric_spectrum(smooth: impl Fn(f64) -> f64, omega: f64, window: f64, step: f64) -> f64 {
    let n = {
        let n = (window / step).ceil() as usize;
        n + n % 2
    };
    let h = window / n as f64;
    let f = |tau: f64| smooth(tau) * (omega * tau).cos();
    let mut s = f(0.0) + f(window);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    SHOT_NOISE_WEIGHT + 2.0 * s * h / 3.0
}

/// Numeric Fourier transform of the truncated correlation functions against
/// the closed-form spectra, on the figure-1 curves at their optimal phase.
pub fn dft_suite(cfg: &DftOracleConfig) -> Result<VerificationReport> {
    let kernel = Kernel::default();
    let mut checks = Vec::new();
    for (label, ratio) in CURVES {
        let req = curve_request(ratio, vec![0.0], cfg.omega0)?;
        let (phases, _) = req.resolved_phases()?;
        let (mut worst_x, mut worst_y) = (0.0f64, 0.0f64);
        for i in 0..cfg.omega_points {
            let omega = if cfg.omega_points > 1 {
                cfg.omega_max * i as f64 / (cfg.omega_points - 1) as f64
            } else {
                0.0
            };
            let closed = spectrum_closed(&phases, omega);
            let sx = numeric_spectrum(|tau| smooth_part(&phases, &kernel, tau).0, omega, cfg.window, cfg.step);
            let sy = numeric_spectrum(|tau| smooth_part(&phases, &kernel, tau).1, omega, cfg.window, cfg.step);
            worst_x = worst_x.max((sx - closed.s_x).abs());
            worst_y = worst_y.max((sy - closed.s_y).abs());
        }
        checks.push(Check::at_most(format!("curve {label}: max |S_X dft - closed|"), worst_x, cfg.tolerance));
        checks.push(Check::at_most(format!("curve {label}: max |S_Y dft - closed|"), worst_y, cfg.tolerance));
    }
    Ok(VerificationReport {
        suite: "dft".into(),
        checks,
    })
}

fn smooth_part(phases: &NonlinearPhases, kernel: &Kernel, tau: f64) -> (f64, f64) {
    let r = corr_r(phases, kernel, tau).expect("exponential kernel");
    (r.x.smooth_value, r.y.smooth_value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvolutionOracleConfig {
    /// Pulse durations in units of τ_r.
    pub durations: Vec<f64>,
    pub gamma: f64,
    pub phi0: f64,
    pub t: f64,
    /// Relative tolerance at `reference_duration`.
    pub tolerance: f64,
    pub reference_duration: f64,
    pub quad: QuadSpec,
}

impl Default for ConvolutionOracleConfig {
    fn default() -> Self {
        ConvolutionOracleConfig {
            durations: vec![50.0, 100.0, 200.0, 400.0],
            gamma: 0.01,
            phi0: 2.0,
            t: 0.0,
            tolerance: 1e-2,
            reference_duration: 100.0,
            quad: QuadSpec::default(),
        }
    }
}

/// Relative gap between the quasi-static phase `2γn̄₀(t)` and the exact
/// kernel convolution for Gaussian pulses of each duration.
pub fn convolution_errors(cfg: &ConvolutionOracleConfig) -> Result<Vec<(f64, f64)>> {
    let kernel = Kernel::default();
    cfg.durations
        .iter()
        .map(|&tau_p| {
            let pulse = PulseSpec::gaussian(tau_p, cfg.phi0 / (2.0 * cfg.gamma))?;
            let exact = phase_exact(&kernel, &pulse, cfg.gamma, cfg.t, &cfg.quad)?;
            let quasi = 2.0 * cfg.gamma * pulse.photon_density(cfg.t)?;
            Ok((tau_p, ((quasi - exact) / exact).abs()))
        })
        .collect()
}

pub fn convolution_suite(cfg: &ConvolutionOracleConfig) -> Result<VerificationReport> {
    let errors = convolution_errors(cfg)?;
    let mut checks = Vec::new();
    for &(tau_p, err) in &errors {
        if tau_p == cfg.reference_duration {
            checks.push(Check::at_most(
                format!("relative phase error at tau_p = {tau_p}"),
                err,
                cfg.tolerance,
            ));
        }
    }
    let increases = errors.windows(2).filter(|w| w[1].1 >= w[0].1).count();
    checks.push(Check::at_most(
        "non-decreasing steps in error vs duration",
        increases as f64,
        0.0,
    ));
    Ok(VerificationReport {
        suite: "convolution".into(),
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FockOracleConfig {
    pub lattice: ModeLattice,
    pub params: InteractionParams,
    /// Coupling for the normal-ordering mean.
    pub gamma: f64,
    /// Coupling for the truncation-order test (then halved).
    pub order_gamma: f64,
    pub order_tolerance: f64,
}

impl Default for FockOracleConfig {
    fn default() -> Self {
        FockOracleConfig {
            lattice: ModeLattice::default(),
            params: InteractionParams {
                gamma1: 0.2,
                gamma2: 0.2,
                gamma_x: 0.1,
            },
            gamma: 0.2,
            order_gamma: 0.01,
            order_tolerance: 0.3,
        }
    }
}

pub fn fock_suite(cfg: &FockOracleConfig) -> Result<VerificationReport> {
    let kernel = Kernel::default();
    let algebra = verify_commutator_and_statistics(&cfg.lattice, &cfg.params, &kernel)?;
    let mean = expect_exp_o(&cfg.lattice, cfg.gamma, &kernel)?;
    let order = verify_truncated_mean(&cfg.lattice, cfg.order_gamma, &kernel)?;
    let mut checks = vec![
        Check::at_most("commutator residual", algebra.commutator_residual, COMMUTATOR_TOL),
        Check::at_most("annihilator commutator residual", algebra.annihilator_residual, COMMUTATOR_TOL),
        Check::at_most("photon-number invariance", algebra.number_residual, NUMBER_TOL),
        Check::at_most("permutation relation", algebra.permutation_residual, PERMUTATION_TOL),
        Check::at_most("Heisenberg-form field operator", algebra.heisenberg_residual, PERMUTATION_TOL),
        Check::at_most("closed-form vs matrix mean", mean.difference, CLOSED_FORM_TOL),
    ];
    checks.push(Check::close(
        "truncated-mean convergence order",
        order.observed_order.unwrap_or(f64::NAN),
        3.0,
        cfg.order_tolerance,
    ));
    Ok(VerificationReport {
        suite: "fock".into(),
        checks,
    })
}

/// Magnitude of the single-bin closed form `exp(e^{iw} − 1)`.
pub fn single_bin_closed_form(w: f64) -> Complex64 {
    (Complex64::new(0.0, w).exp() - 1.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_spectrum_of_known_kernels() {
        let k = Kernel::default();
        for omega in [0.0, 0.5, 2.0] {
            let l = crate::kernel::lorentzian(omega);
            let h = numeric_spectrum(|t| k.even(t), omega, 40.0, 0.01) - 0.25;
            let g = numeric_spectrum(|t| k.pair_correlation(t), omega, 40.0, 0.01) - 0.25;
            assert!((h - 2.0 * l).abs() < 1e-8, "{h}");
            assert!((g - 4.0 * l * l).abs() < 1e-8, "{g}");
        }
    }

    #[test]
    fn dft_suite_passes_on_defaults() {
        let cfg = DftOracleConfig {
            omega_points: 31,
            ..Default::default()
        };
        let r = dft_suite(&cfg).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.checks.len(), 10);
    }

    #[test]
    fn convolution_errors_shrink() {
        let errs = convolution_errors(&ConvolutionOracleConfig::default()).unwrap();
        assert!(errs.windows(2).all(|w| w[1].1 < w[0].1), "{errs:?}");
        let r = convolution_suite(&ConvolutionOracleConfig::default()).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn fock_suite_passes_on_defaults() {
        let r = fock_suite(&FockOracleConfig::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn checks_report_failures() {
        assert!(!Check::at_most("x", 2.0, 1.0).pass);
        assert!(Check::close("x", 3.05, 3.0, 0.1).pass);
        assert!(!Check::close("x", f64::NAN, 3.0, 0.1).pass);
    }

    #[test]
    fn single_bin_closed_form_magnitude() {
        assert!((single_bin_closed_form(0.1).norm() - (0.1f64.cos() - 1.0).exp()).abs() < 1e-15);
    }
}
