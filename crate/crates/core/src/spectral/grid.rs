use std::sync::Arc;

use crate::error::{check_positive, Error, Result};

/// Uniform detuning grid with trapezoid weights.
///
/// Detunings are measured from the emitter resonance in units of the
/// waveguide coupling rate. Samples are `delta_min + i * spacing` for
/// `i in 0..n_points`.
#[derive(Debug, Clone)]
pub struct SpectralGrid {
    delta_min: f64,
    delta_max: f64,
    spacing: f64,
    weights: Vec<f64>,
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.weights.len() == other.weights.len()
            && self.delta_min.to_bits() == other.delta_min.to_bits()
            && self.delta_max.to_bits() == other.delta_max.to_bits()
    }
}

impl SpectralGrid {
    /// Grid on `[-delta_max, delta_max]` with an odd number of points so
    /// that zero detuning is a sample.
    pub fn symmetric(delta_max: f64, n_points: usize) -> Result<Arc<Self>> {
        check_positive("delta_max", delta_max)?;
        if n_points % 2 == 0 {
            return Err(Error::Input(format!(
                "n_points must be odd so that zero detuning is sampled, got {n_points}"
            )));
        }
        Self::new(-delta_max, delta_max, n_points)
    }

    pub fn new(delta_min: f64, delta_max: f64, n_points: usize) -> Result<Arc<Self>> {
        if !(delta_min.is_finite() && delta_max.is_finite()) || delta_max <= delta_min {
            return Err(Error::Input(format!(
                "grid bounds [{delta_min}, {delta_max}] are empty or not finite"
            )));
        }
        if n_points < 3 {
            return Err(Error::Input(format!("n_points must be >= 3, got {n_points}")));
        }
        let spacing = (delta_max - delta_min) / (n_points - 1) as f64;
        let mut weights = vec![spacing; n_points];
        weights[0] = 0.5 * spacing;
        weights[n_points - 1] = 0.5 * spacing;
        Ok(Arc::new(Self {
            delta_min,
            delta_max,
            spacing,
            weights,
        }))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn delta_min(&self) -> f64 {
        self.delta_min
    }

    #[inline]
    pub fn delta_max(&self) -> f64 {
        self.delta_max
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn sample(&self, i: usize) -> f64 {
        if i + 1 == self.len() {
            self.delta_max
        } else {
            self.delta_min + i as f64 * self.spacing
        }
    }

    pub fn samples(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.sample(i))
    }

    pub fn is_symmetric(&self) -> bool {
        (self.delta_min + self.delta_max).abs() <= 1e-12 * self.delta_max.abs().max(1.0)
            && self.len() % 2 == 1
    }

    /// Index of the sample at `-delta`.
    #[inline]
    pub fn mirror(&self, i: usize) -> usize {
        self.len() - 1 - i
    }

    /// Same spacing over twice the window (`n -> 2n - 1`).
    ///
    /// Lorentzian tails make window truncation the dominant discretization
    /// error, so this is the refinement used by every convergence check.
    pub fn refined(&self) -> Result<Arc<Self>> {
        let n = 2 * self.len() - 1;
        let half = 0.5 * (self.delta_max - self.delta_min);
        let mid = 0.5 * (self.delta_max + self.delta_min);
        Self::new(mid - 2.0 * half, mid + 2.0 * half, n)
    }
}

/// Rule for choosing a grid that resolves a pulse.
///
/// The half-window is `max(widths * sigma + |center|, rates * rate)` and the
/// point count is the larger of `min_points` and the smallest odd count that
/// keeps the spacing at or below `min(sigma, rate) / 10`. The emitter
/// linewidth `rate` sets the pole distance of every transfer function, so it
/// has to be resolved as well as the pulse.
///
/// `half_window` and `points` pin the window or the point count regardless
/// of the pulse; a pinned grid that fails to resolve a pulse is rejected when
/// the pulse is sampled. `refinements` applies [`SpectralGrid::refined`] that
/// many times to the grid the rule picks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub window_widths: f64,
    pub window_rates: f64,
    pub min_points: usize,
    pub half_window: Option<f64>,
    pub points: Option<usize>,
    pub refinements: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::ANALYSIS
    }
}

impl GridSpec {
    /// Scalar figures of merit (overlaps, norms, matching points).
    pub const ANALYSIS: GridSpec = GridSpec {
        window_widths: 150.0,
        window_rates: 25.0,
        min_points: 4001,
        half_window: None,
        points: None,
        refinements: 0,
    };

    /// Multi-rail circuit simulation, where every rail pair stores an
    /// `n x n` amplitude.
    pub const CIRCUIT: GridSpec = GridSpec {
        window_widths: 50.0,
        window_rates: 25.0,
        min_points: 1001,
        half_window: None,
        points: None,
        refinements: 0,
    };

    pub fn with_half_window(mut self, half_window: f64) -> Self {
        self.half_window = Some(half_window);
        self
    }

    pub fn with_points(mut self, points: usize) -> Self {
        self.points = Some(points);
        self
    }

    /// The same rule followed by one more window doubling.
    pub fn doubled(&self) -> Self {
        Self {
            refinements: self.refinements + 1,
            ..*self
        }
    }

    pub fn grid_for(&self, sigma: f64, center: f64, rate: f64) -> Result<Arc<SpectralGrid>> {
        check_positive("sigma", sigma)?;
        check_positive("rate", rate)?;
        check_positive("window_widths", self.window_widths)?;
        if self.window_widths < MIN_WINDOW_WIDTHS {
            return Err(Error::Resolution(format!(
                "window of {} widths is below the required {MIN_WINDOW_WIDTHS}",
                self.window_widths
            )));
        }
        let delta_max = match self.half_window {
            Some(w) => {
                check_positive("half_window", w)?;
                w
            }
            None => (self.window_widths * sigma + center.abs()).max(self.window_rates * rate),
        };
        let n = match self.points {
            Some(n) => n,
            None => {
                let max_step = sigma.min(rate) * MAX_STEP_FRACTION;
                let n = ((2.0 * delta_max / max_step).ceil() as usize + 1)
                    .max(self.min_points)
                    .max(3);
                n | 1
            }
        };
        let mut grid = SpectralGrid::symmetric(delta_max, n)?;
        for _ in 0..self.refinements {
            grid = grid.refined()?;
        }
        Ok(grid)
    }
}

/// Largest spacing allowed for a pulse of width sigma, as a fraction of sigma.
pub const MAX_STEP_FRACTION: f64 = 0.1;
/// Smallest half-window allowed for a pulse of width sigma, in units of sigma.
pub const MIN_WINDOW_WIDTHS: f64 = 25.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_spacing_and_symmetry() {
        let g = SpectralGrid::symmetric(10.0, 2001).unwrap();
        assert!(g.is_symmetric());
        let s: Vec<f64> = g.samples().collect();
        for w in s.windows(2) {
            assert!((w[1] - w[0] - g.spacing()).abs() < 1e-12);
        }
        assert_eq!(s[1000], 0.0);
        for i in 0..g.len() {
            assert!((g.sample(i) + g.sample(g.mirror(i))).abs() < 1e-12);
        }
    }

    #[test]
    fn even_point_count_rejected() {
        assert!(SpectralGrid::symmetric(10.0, 2000).is_err());
    }

    #[test]
    fn trapezoid_integrates_polynomials() {
        let g = SpectralGrid::new(0.0, 1.0, 101).unwrap();
        let integral: f64 = g.samples().zip(g.weights()).map(|(x, w)| w * x).sum();
        assert!((integral - 0.5).abs() < 1e-14);
    }

    #[test]
    fn refinement_keeps_spacing_and_nests_samples() {
        let g = SpectralGrid::symmetric(5.0, 101).unwrap();
        let r = g.refined().unwrap();
        assert_eq!(r.len(), 201);
        assert!((r.spacing() - g.spacing()).abs() < 1e-15);
        assert_eq!(r.delta_max(), 10.0);
        assert!(r.is_symmetric());
    }

    #[test]
    fn spec_resolves_narrow_pulses() {
        let g = GridSpec::ANALYSIS.grid_for(0.05, 0.0, 1.0).unwrap();
        assert!(g.spacing() <= 0.005 + 1e-15);
        assert!(g.delta_max() >= 25.0);
        let g = GridSpec::ANALYSIS.grid_for(2.0, 0.0, 1.0).unwrap();
        assert_eq!(g.delta_max(), 300.0);
        assert!(g.spacing() <= 0.1);
        let g = GridSpec::ANALYSIS.grid_for(0.5, 0.0, 1.0).unwrap();
        assert_eq!(g.len(), 4001);
    }

    #[test]
    fn doubled_rule_matches_refined_grid() {
        for (spec, sigma) in [(GridSpec::ANALYSIS, 0.5), (GridSpec::CIRCUIT, 1.25), (GridSpec::ANALYSIS, 0.07)] {
            let g = spec.grid_for(sigma, 0.0, 1.0).unwrap();
            let d = spec.doubled().grid_for(sigma, 0.0, 1.0).unwrap();
            assert_eq!(*d, *g.refined().unwrap());
        }
    }

    #[test]
    fn pinned_grids() {
        let spec = GridSpec::CIRCUIT.with_points(201).with_half_window(10.0);
        let g = spec.grid_for(3.0, 0.0, 1.0).unwrap();
        assert_eq!((g.len(), g.delta_max()), (201, 10.0));
        let d = spec.doubled().grid_for(3.0, 0.0, 1.0).unwrap();
        assert_eq!(*d, *g.refined().unwrap());
        let g = GridSpec::CIRCUIT.with_half_window(40.0).grid_for(1.0, 0.0, 1.0).unwrap();
        assert_eq!(g.delta_max(), 40.0);
        assert!(g.spacing() <= 0.1);
        assert!(GridSpec::CIRCUIT.with_points(200).grid_for(1.0, 0.0, 1.0).is_err());
        assert!(GridSpec::CIRCUIT.with_half_window(-1.0).grid_for(1.0, 0.0, 1.0).is_err());
    }
}
