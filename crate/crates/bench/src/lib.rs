//! Shared inputs for the benchmarks.

use kerrsq::figures::curve_request;
use kerrsq::{NonlinearPhases, SpectrumRequest};

/// Figure-1 request at the highest intensity ratio over `points` frequencies.
pub fn figure_one_request(points: usize) -> SpectrumRequest {
    let grid = (0..points).map(|i| 3.0 * i as f64 / (points - 1).max(1) as f64).collect();
    curve_request(8.0, grid, 0.0).expect("preset parameters are valid")
}

/// Phases of the figure-1 request, at the optimal linear phase.
pub fn figure_one_phases() -> NonlinearPhases {
    figure_one_request(2).resolved_phases().expect("preset parameters are valid").0
}
