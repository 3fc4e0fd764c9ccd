//! Closed forms for Lorentzian input pulses.

use super::TlsParams;
use crate::error::{check_positive, Error, Result};
use crate::optimize::golden_max;

/// Half the magnitude of the overlap between the product image and the
/// bound two-photon term, lossless emitter, Lorentzian of width `sigma`:
///
/// `4 G^2 s (3 G^2 + 38 G s + 96 s^2) / ((G + 2s)^3 (3G + 2s)(G + 6s))`
pub fn eta_analytic(p: &TlsParams, sigma: f64) -> Result<f64> {
    check_positive("sigma", sigma)?;
    if !p.is_lossless() {
        return Err(Error::Domain {
            name: "gamma_loss",
            value: p.gamma_loss(),
            expected: "0 (closed form holds for a lossless emitter only)",
        });
    }
    let g = p.gamma_wg();
    let s = sigma;
    let num = 4.0 * g * g * s * (3.0 * g * g + 38.0 * g * s + 96.0 * s * s);
    let den = (g + 2.0 * s).powi(3) * (3.0 * g + 2.0 * s) * (g + 6.0 * s);
    Ok(num / den)
}

/// Single-photon survival probability for a Lorentzian of width `sigma`.
pub fn epsilon1_analytic(p: &TlsParams, sigma: f64) -> Result<f64> {
    check_positive("sigma", sigma)?;
    let (g, l) = (p.gamma_wg(), p.gamma_loss());
    let a = g + l;
    Ok(1.0 - 4.0 * l * g * (a + 4.0 * sigma) / (a * (a + 2.0 * sigma).powi(2)))
}

/// Squared norm of the bound two-photon term for a Lorentzian of width `sigma`.
pub fn epsilon_b_analytic(p: &TlsParams, sigma: f64) -> Result<f64> {
    check_positive("sigma", sigma)?;
    let g = p.gamma_wg();
    let a = p.total_rate();
    let s = sigma;
    let num = 16.0 * g.powi(4) * s * (38.0 * s * a + 3.0 * a * a + 96.0 * s * s);
    let den = a * a * (a + 2.0 * s).powi(3) * (3.0 * a + 2.0 * s) * (a + 6.0 * s);
    Ok(num / den)
}

/// Maximum of the lossless closed form over pulse width, by golden-section
/// search. Returns `(sigma, eta)`.
pub fn eta_peak(p: &TlsParams) -> Result<(f64, f64)> {
    // Probe the closed form once so a lossy emitter is rejected up front.
    eta_analytic(p, 1.0)?;
    let g = p.gamma_wg();
    let eta = |s: f64| eta_analytic(p, s).unwrap_or(f64::NEG_INFINITY);
    Ok(golden_max(eta, 1e-3 * g, 10.0 * g, 1e-12 * g))
}
