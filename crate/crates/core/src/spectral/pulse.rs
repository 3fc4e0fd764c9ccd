use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::amp::OnePhotonAmp;
use super::grid::{SpectralGrid, MAX_STEP_FRACTION, MIN_WINDOW_WIDTHS};
use crate::error::{check_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PulseKind {
    /// `sqrt(2 sigma^3 / pi) / (sigma^2 + (delta - center)^2)`
    Lorentzian,
    /// Unit-norm Gaussian amplitude whose intensity has standard deviation sigma.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseShape {
    pub kind: PulseKind,
    pub width: f64,
    pub center: f64,
}

impl PulseShape {
    pub fn lorentzian(width: f64) -> Self {
        Self {
            kind: PulseKind::Lorentzian,
            width,
            center: 0.0,
        }
    }

    pub fn gaussian(width: f64) -> Self {
        Self {
            kind: PulseKind::Gaussian,
            width,
            center: 0.0,
        }
    }

    pub fn centered_at(self, center: f64) -> Self {
        Self { center, ..self }
    }

    /// Continuum amplitude, unit norm on the whole real line.
    pub fn evaluate(&self, delta: f64) -> f64 {
        let s = self.width;
        let x = delta - self.center;
        match self.kind {
            PulseKind::Lorentzian => (2.0 * s.powi(3) / PI).sqrt() / (s * s + x * x),
            PulseKind::Gaussian => {
                (2.0 * PI * s * s).powf(-0.25) * (-x * x / (4.0 * s * s)).exp()
            }
        }
    }

    /// Even in detuning, so invariant under spectral inversion.
    pub fn is_time_symmetric(&self) -> bool {
        self.center == 0.0
    }

    /// Checks that `grid` resolves the pulse: spacing at most `width / 10`
    /// and at least 25 widths between the center and either window edge.
    pub fn check_resolution(&self, grid: &SpectralGrid) -> Result<()> {
        check_positive("width", self.width)?;
        let max_step = MAX_STEP_FRACTION * self.width;
        if grid.spacing() > max_step * (1.0 + 1e-12) {
            return Err(Error::Resolution(format!(
                "spacing {} exceeds width/10 = {}",
                grid.spacing(),
                max_step
            )));
        }
        let need = MIN_WINDOW_WIDTHS * self.width;
        let room = (grid.delta_max() - self.center).min(self.center - grid.delta_min());
        if room < need * (1.0 - 1e-12) {
            return Err(Error::Resolution(format!(
                "window edge is {room} from the pulse center, need at least 25*width = {need}"
            )));
        }
        Ok(())
    }
}

/// Samples `shape` on `grid` and renormalizes to unit discrete norm.
pub fn make_pulse(shape: PulseShape, grid: &Arc<SpectralGrid>) -> Result<OnePhotonAmp> {
    shape.check_resolution(grid)?;
    let raw = OnePhotonAmp::from_fn(grid.clone(), |d| C64::new(shape.evaluate(d), 0.0));
    Ok(raw.normalized())
}
