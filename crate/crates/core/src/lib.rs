//! Quantum fluctuation spectra of the quadratures of an ultrashort probe
//! pulse under self- and cross-phase modulation with a control pulse in an
//! inertial electronic Kerr medium.
//!
//! Units: times in relaxation times τ_r, frequencies as `Ω = ω·τ_r`, photon
//! numbers as densities per unit time. Spectra are dimensionless; ¼ is the
//! shot-noise level of a coherent state.

pub mod error;
pub mod figures;
pub mod fock;
pub mod integrate;
pub mod kernel;
pub mod nlo_phase;
pub mod oracle;
pub mod pulse;
pub mod quadrature;
pub mod spectra;

pub use error::{Error, Result};
pub use fock::ModeLattice;
pub use integrate::QuadSpec;
pub use kernel::{lorentzian, Kernel};
pub use nlo_phase::{InteractionParams, NonlinearPhases, RegimeWarning};
pub use oracle::{Check, VerificationReport};
pub use pulse::{Envelope, LinearPhase, PulseSpec};
pub use spectra::{
    optimal_phase, spectrum_at, spectrum_closed, spectrum_optimal, PhaseMode, SpectrumPair, SpectrumRequest,
    SpectrumResult, SweepAxis,
};

/// Crate version, embedded in output provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
