//! The four devices built from the scatterer: photon sorter, Bell-state
//! analyzer, nonlinear-sign gate and controlled-sign gate, plus their
//! success-probability curves.

mod bell;
mod curves;
mod cz;
mod ns;
mod sorter;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use bell::{bell_analyzer, bell_input, BellReport, BellState, BELL_DETECTOR_OF_RAIL};
pub use curves::{success_curves, SuccessRow};
pub use cz::{
    cz_gate, cz_oracle, dual_rail_basis, logical_amplitudes, logical_state, CzOptions, CzReport,
    L1, L2, U1, U2,
};
pub use ns::{compensation_eta2, ns_gate, ns_target};
pub use sorter::{photon_sorter, SorterOutput};

use crate::error::Result;
use crate::spectral::{make_pulse, GridSpec, OnePhotonAmp, PulseShape, SpectralGrid};
use crate::state::{DetectionPattern, FewPhotonState};
use crate::tls::{bound_overlap, matching_point, Branch, TlsParams};

/// Emitter, pulse and grid shared by every element of a circuit.
#[derive(Debug, Clone)]
pub struct OperatingPoint {
    pub params: TlsParams,
    pub sigma: f64,
    pub grid: Arc<SpectralGrid>,
    /// Centered Lorentzian input mode on `grid`.
    pub pulse: OnePhotonAmp,
    /// Single-photon survival on `grid`.
    pub epsilon1: f64,
    /// Bound-term norm on `grid`.
    pub epsilon_b: f64,
    /// Half the overlap magnitude of product image and bound term on `grid`.
    pub eta: f64,
}

impl OperatingPoint {
    /// Operating point at an explicit width on the grid `spec` picks.
    pub fn at_sigma(params: TlsParams, sigma: f64, spec: &GridSpec) -> Result<Self> {
        let grid = spec.grid_for(sigma, 0.0, params.total_rate())?;
        Self::on_grid(params, sigma, grid)
    }

    /// Operating point at the matching width of `branch`, solved on the
    /// analysis grid and then sampled on the grid `spec` picks.
    pub fn matched(params: TlsParams, branch: Branch, spec: &GridSpec) -> Result<Self> {
        let point = matching_point(&params, branch, &GridSpec::ANALYSIS)?;
        Self::at_sigma(params, point.sigma, spec)
    }

    pub fn on_grid(params: TlsParams, sigma: f64, grid: Arc<SpectralGrid>) -> Result<Self> {
        let pulse = make_pulse(PulseShape::lorentzian(sigma), &grid)?;
        let b = bound_overlap(&params, &pulse);
        Ok(Self {
            params,
            sigma,
            grid,
            pulse,
            epsilon1: b.epsilon1,
            epsilon_b: b.epsilon_b,
            eta: b.eta(),
        })
    }

    /// Same emitter and width on a grid with twice the window at the same
    /// spacing.
    pub fn refined(&self) -> Result<Self> {
        Self::on_grid(self.params, self.sigma, self.grid.refined()?)
    }

    /// `eta - epsilon1^2 / 2` on this grid; zero when perfectly matched.
    pub fn mismatch(&self) -> f64 {
        self.eta - 0.5 * self.epsilon1 * self.epsilon1
    }

    /// The scattered pulse `t f`, normalized: the pulse gate's pump mode.
    pub fn pump_mode(&self) -> OnePhotonAmp {
        crate::tls::scatter_one(&self.params, &self.pulse).out.normalized()
    }
}

/// Outcome of one circuit run.
#[derive(Debug, Clone)]
pub struct CircuitReport {
    pub output: FewPhotonState,
    pub success_prob: f64,
    /// Fidelity to the ideal output, where the circuit defines one.
    pub fidelity: Option<f64>,
    pub lost_mass: f64,
    pub patterns: BTreeMap<DetectionPattern, f64>,
}

impl CircuitReport {
    fn new(output: FewPhotonState, success_prob: f64, fidelity: Option<f64>) -> Self {
        Self {
            lost_mass: output.lost_mass(),
            patterns: output.detection_distribution(),
            output,
            success_prob,
            fidelity,
        }
    }
}
