//! Fixtures shared by the benchmarks: a lossless operating point on a small
//! pinned grid so one iteration stays in the millisecond range.

use tlsphot::circuits::OperatingPoint;
use tlsphot::{GridSpec, TlsParams};

/// Pulse width near the upper matching point of the lossless scatterer.
pub const SIGMA: f64 = 1.25;

/// A grid of `points` samples over +-32 coupling rates.
pub fn small_grid(points: usize) -> GridSpec {
    GridSpec::CIRCUIT.with_half_window(32.0).with_points(points)
}

pub fn operating_point(points: usize) -> OperatingPoint {
    OperatingPoint::at_sigma(TlsParams::lossless(), SIGMA, &small_grid(points))
        .expect("valid benchmark operating point")
}
