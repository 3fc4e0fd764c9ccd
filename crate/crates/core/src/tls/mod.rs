//! The two-level scatterer: transfer functions, one- and two-photon
//! scattering maps, closed forms for Lorentzian pulses and the matching
//! condition that makes photon sorting possible.

mod analytic;
mod matching;
mod scatter;

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{check_positive, Error, Result};

pub use analytic::{epsilon1_analytic, epsilon_b_analytic, eta_analytic, eta_peak};
pub use matching::{
    matched_epsilon1, matching_function, matching_point, matching_sigma, Branch, MatchingPoint,
    SIGMA_TOL,
};
pub(crate) use matching::lorentzian_overlap;
pub use scatter::{
    bound_amplitude, bound_overlap, decompose, eta_numeric, product_image, scatter_one,
    scatter_two, BoundOverlap, ScatterOneResult, ScatterTwoResult,
};

/// Emitter coupling rates. `gamma_wg` couples to the directional waveguide
/// mode, `gamma_loss` to everything else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlsParams {
    gamma_wg: f64,
    gamma_loss: f64,
}

impl Default for TlsParams {
    fn default() -> Self {
        Self::lossless()
    }
}

impl TlsParams {
    pub fn new(gamma_wg: f64, gamma_loss: f64) -> Result<Self> {
        check_positive("gamma_wg", gamma_wg)?;
        if !(gamma_loss >= 0.0 && gamma_loss.is_finite()) {
            return Err(Error::Domain {
                name: "gamma_loss",
                value: gamma_loss,
                expected: ">= 0",
            });
        }
        Ok(Self {
            gamma_wg,
            gamma_loss,
        })
    }

    /// Unit waveguide coupling, no loss.
    pub fn lossless() -> Self {
        Self {
            gamma_wg: 1.0,
            gamma_loss: 0.0,
        }
    }

    /// Unit waveguide coupling with the loss rate that gives `beta_dir`.
    pub fn from_beta(beta_dir: f64) -> Result<Self> {
        if !(beta_dir > 0.0 && beta_dir <= 1.0) {
            return Err(Error::Domain {
                name: "beta_dir",
                value: beta_dir,
                expected: "(0, 1]",
            });
        }
        Self::new(1.0, 1.0 / beta_dir - 1.0)
    }

    #[inline]
    pub fn gamma_wg(&self) -> f64 {
        self.gamma_wg
    }

    #[inline]
    pub fn gamma_loss(&self) -> f64 {
        self.gamma_loss
    }

    #[inline]
    pub fn total_rate(&self) -> f64 {
        self.gamma_wg + self.gamma_loss
    }

    /// `Gamma / (gamma + Gamma)`
    #[inline]
    pub fn beta_dir(&self) -> f64 {
        self.gamma_wg / self.total_rate()
    }

    #[inline]
    pub fn is_lossless(&self) -> bool {
        self.gamma_loss == 0.0
    }

    /// `t(delta) = (delta + i(gamma - Gamma)/2) / (delta + i(gamma + Gamma)/2)`
    #[inline]
    pub fn transfer_coeff(&self, delta: f64) -> C64 {
        let num = C64::new(delta, 0.5 * (self.gamma_loss - self.gamma_wg));
        let den = C64::new(delta, 0.5 * (self.gamma_loss + self.gamma_wg));
        num / den
    }

    /// `s(delta) = (1 - t(delta)) / (i sqrt(Gamma))`, evaluated in the
    /// cancellation-free form `sqrt(Gamma) / (delta + i(gamma + Gamma)/2)`.
    #[inline]
    pub fn s_coeff(&self, delta: f64) -> C64 {
        C64::new(self.gamma_wg.sqrt(), 0.0)
            / C64::new(delta, 0.5 * (self.gamma_loss + self.gamma_wg))
    }

    /// Prefactor `i sqrt(Gamma) / (2 pi)` of the two-photon bound kernel.
    #[inline]
    pub(crate) fn kernel_prefactor(&self) -> C64 {
        C64::new(0.0, self.gamma_wg.sqrt() / (2.0 * PI))
    }
}

pub fn transfer_coeff(p: &TlsParams, delta: f64) -> C64 {
    p.transfer_coeff(delta)
}

pub fn s_coeff(p: &TlsParams, delta: f64) -> C64 {
    p.s_coeff(delta)
}
