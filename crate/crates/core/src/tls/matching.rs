use super::{bound_overlap, epsilon1_analytic, eta_analytic, BoundOverlap, TlsParams};
use crate::error::{Error, Result};
use crate::optimize::{bisect, golden_max};
use crate::spectral::{make_pulse, GridSpec, PulseShape};

/// Which crossing of `eta(sigma) = epsilon1(sigma)^2 / 2` to return. The
/// upper branch loses less to the emitter and is the default operating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Branch {
    Lower,
    #[default]
    Upper,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Lower => "lower",
            Branch::Upper => "upper",
        }
    }
}

/// Bisection tolerance on sigma, in units of the waveguide rate.
pub const SIGMA_TOL: f64 = 1e-10;

/// `eta(sigma) - epsilon1(sigma)^2 / 2` for a centered Lorentzian.
///
/// Closed form when the emitter is lossless; otherwise the numeric overlap
/// on the grid `spec` picks for that width.
pub fn matching_function(p: &TlsParams, sigma: f64, spec: &GridSpec) -> Result<f64> {
    if p.is_lossless() {
        return Ok(eta_analytic(p, sigma)? - 0.5);
    }
    Ok(lorentzian_overlap(p, sigma, spec)?.mismatch())
}

pub(crate) fn lorentzian_overlap(
    p: &TlsParams,
    sigma: f64,
    spec: &GridSpec,
) -> Result<BoundOverlap> {
    let grid = spec.grid_for(sigma, 0.0, p.total_rate())?;
    let f = make_pulse(PulseShape::lorentzian(sigma), &grid)?;
    Ok(bound_overlap(p, &f))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingPoint {
    pub branch: Branch,
    pub sigma: f64,
    /// Matching function at the returned sigma.
    pub residual: f64,
}

/// Pulse width at which the scattered two-photon state is orthogonal to the
/// product image, on the grid rule [`GridSpec::ANALYSIS`].
pub fn matching_sigma(p: &TlsParams, branch: Branch) -> Result<f64> {
    Ok(matching_point(p, branch, &GridSpec::ANALYSIS)?.sigma)
}

pub fn matching_point(p: &TlsParams, branch: Branch, spec: &GridSpec) -> Result<MatchingPoint> {
    let scale = p.gamma_wg();
    let func = |s: f64| matching_function(p, s, spec);

    // The matching function has a single hump: negative for narrow pulses,
    // peaked near half the coupling rate, then decaying to -1/2.
    let mut lo = 0.05 * scale;
    let floor = 1e-3 * scale;
    while func(lo)? >= 0.0 {
        if lo <= floor {
            return Err(Error::NoCrossing { lo, hi: lo });
        }
        lo = (0.5 * lo).max(floor);
    }
    let mut hi = 20.0 * scale;
    while func(hi)? >= 0.0 {
        hi *= 2.0;
        if hi > 1e4 * scale {
            return Err(Error::NoCrossing { lo, hi });
        }
    }

    let mut failure = None;
    let (peak, peak_val) = golden_max(
        |s| match func(s) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        lo,
        hi,
        1e-4 * scale,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if peak_val <= 0.0 {
        return Err(Error::NoCrossing { lo, hi });
    }

    let (a, b) = match branch {
        Branch::Lower => (lo, peak),
        Branch::Upper => (peak, hi),
    };
    let mut failure = None;
    let sigma = bisect(
        |s| match func(s) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        a,
        b,
        SIGMA_TOL * scale,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(MatchingPoint {
        branch,
        sigma,
        residual: func(sigma)?,
    })
}

/// Analytic single-photon survival at the matching point, convenience for
/// callers that only hold a [`MatchingPoint`].
pub fn matched_epsilon1(p: &TlsParams, point: &MatchingPoint) -> Result<f64> {
    epsilon1_analytic(p, point.sigma)
}
