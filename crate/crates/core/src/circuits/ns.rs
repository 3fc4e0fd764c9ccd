use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::OperatingPoint;
use crate::error::{Error, Result};
use crate::mode_ops::{component_phase_loss, gem_invert, sfg_reverse};
use crate::spectral::product_state;
use crate::state::{Component, FewPhotonState};

/// Extra two-photon loss that equalizes the lossy gate's output:
/// `epsilon1^2 / (epsilon_b - epsilon1^2)`, one for a lossless emitter.
pub fn compensation_eta2(op: &OperatingPoint) -> Result<f64> {
    if op.params.is_lossless() {
        return Ok(1.0);
    }
    let e1sq = op.epsilon1 * op.epsilon1;
    let eta2 = e1sq / (op.epsilon_b - e1sq);
    if !(0.0..=1.0).contains(&eta2) {
        return Err(Error::Domain {
            name: "eta2",
            value: eta2,
            expected: "[0, 1]",
        });
    }
    Ok(eta2)
}

/// Nonlinear-sign gate on `rail`: scatterer, sorter, pi phase (and optional
/// loss `eta2`) on the pair that stayed, conversion back, spectral inversion,
/// second pass through the scatterer.
///
/// `eta2` defaults to [`compensation_eta2`]. The pulse must be even in
/// detuning for the inversion to undo the first scattering; odd parts show
/// up as reduced fidelity rather than an error.
pub fn ns_gate(
    state: &FewPhotonState,
    rail: usize,
    op: &OperatingPoint,
    eta2: Option<f64>,
) -> Result<FewPhotonState> {
    let eta2 = match eta2 {
        Some(v) => v,
        None => compensation_eta2(op)?,
    };
    let sorted = super::photon_sorter(state, rail, op)?;
    let spec = crate::mode_ops::PulseGateSpec::new(&op.pump_mode())?;
    let flipped = component_phase_loss(&sorted.state, Component::Same(rail), PI, eta2.sqrt())?;
    let merged = sfg_reverse(&flipped, &spec, sorted.ancilla, rail)?;
    let inverted = gem_invert(&merged, rail)?;
    let out = inverted.apply_tls(rail, &op.params)?;
    out.remove_rail(sorted.ancilla)
}

/// `alpha |0> + xi |1_f> - gamma |2_f>` on a single rail, the ideal output for
/// input amplitudes `(alpha, xi, gamma)`.
pub fn ns_target(
    template: &FewPhotonState,
    rail: usize,
    op: &OperatingPoint,
    amps: [C64; 3],
) -> Result<FewPhotonState> {
    let mut s = FewPhotonState::empty(op.grid.clone(), template.rails().to_vec());
    s.set_vacuum(amps[0]);
    s.set_one(rail, op.pulse.scaled(amps[1]))?;
    s.set_same(rail, product_state(&op.pulse).scaled(-amps[2]))?;
    Ok(s)
}
