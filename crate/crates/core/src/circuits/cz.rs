use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64 as C64;

use super::{ns_gate, CircuitReport, OperatingPoint};
use crate::error::{Error, Result};
use crate::spectral::PairAmp;
use crate::state::{FewPhotonState, Rail};

/// Rail indices of the two dual-rail qubits.
pub const U1: usize = 0;
pub const L1: usize = 1;
pub const U2: usize = 2;
pub const L2: usize = 3;

/// Rail of qubit `q` (0 or 1) holding logical value `v`. Logical zero is the
/// photon in the lower rail.
fn rail_of(q: usize, v: usize) -> usize {
    match (q, v) {
        (0, 0) => L1,
        (0, _) => U1,
        (_, 0) => L2,
        _ => U2,
    }
}

fn cz_rails() -> Vec<Rail> {
    ["u1", "l1", "u2", "l2"].into_iter().map(Rail::signal).collect()
}

/// Logical basis state `|q1 q2>` with both photons in the pulse mode.
pub fn dual_rail_basis(q1: usize, q2: usize, op: &OperatingPoint) -> Result<FewPhotonState> {
    if q1 > 1 || q2 > 1 {
        return Err(Error::Input(format!("logical values must be 0 or 1, got {q1}{q2}")));
    }
    let mut amps = [C64::new(0.0, 0.0); 4];
    amps[2 * q1 + q2] = C64::new(1.0, 0.0);
    logical_state(op, amps)
}

/// `sum_k amps[k] |k>` over the logical basis `00, 01, 10, 11`.
pub fn logical_state(op: &OperatingPoint, amps: [C64; 4]) -> Result<FewPhotonState> {
    let ff = PairAmp::product(&op.pulse, &op.pulse)?;
    let mut s = FewPhotonState::empty(op.grid.clone(), cz_rails());
    for (k, amp) in amps.iter().enumerate() {
        if amp.norm() == 0.0 {
            continue;
        }
        let mut v = ff.clone();
        v.scale(*amp);
        s.set_cross(rail_of(0, k >> 1), rail_of(1, k & 1), v)?;
    }
    Ok(s)
}

/// Amplitudes `<q1 q2 | state>` on the logical basis with both photons in
/// the pulse mode.
pub fn logical_amplitudes(state: &FewPhotonState, op: &OperatingPoint) -> Result<[C64; 4]> {
    let mut out = [C64::new(0.0, 0.0); 4];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut amps = [C64::new(0.0, 0.0); 4];
        amps[k] = C64::new(1.0, 0.0);
        *slot = state.overlap(&logical_state(op, amps)?)?;
    }
    Ok(out)
}

/// The ideal gate on logical amplitudes: a sign flip on `|01>`, the basis
/// state with the lower rail of the first qubit and the upper rail of the
/// second occupied.
pub fn cz_oracle(amps: [C64; 4]) -> [C64; 4] {
    [amps[0], -amps[1], amps[2], amps[3]]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CzOptions {
    /// Add the two-photon loss that equalizes lossy output amplitudes.
    pub compensate: bool,
    /// Amplitude transmission of the bypass rails; defaults to the
    /// single-photon survival through a nonlinear-sign gate, `epsilon1`.
    pub outer_transmission: Option<f64>,
}

impl Default for CzOptions {
    fn default() -> Self {
        Self {
            compensate: true,
            outer_transmission: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CzReport {
    pub report: CircuitReport,
    /// Output amplitudes on the logical basis `00, 01, 10, 11`.
    pub logical: [C64; 4],
    /// Input amplitudes on the same basis.
    pub input: [C64; 4],
}

/// Controlled-sign gate: `l1` and `u2` meet on a balanced beamsplitter, pass
/// one nonlinear-sign gate each and recombine; `u1` and `l2` bypass through
/// attenuators matched to the gates' single-photon transmission.
pub fn cz_gate(state: &FewPhotonState, op: &OperatingPoint, options: CzOptions) -> Result<CzReport> {
    if state.n_rails() != 4 || state.max_photons() != 2 || state.vacuum_amp().norm() > 0.0 {
        return Err(Error::Input(
            "the gate takes a two-photon state on four rails".into(),
        ));
    }
    let input = logical_amplitudes(state, op)?;
    let eta2 = if options.compensate { None } else { Some(1.0) };
    let mut s = state.beamsplitter(L1, U2, FRAC_PI_4, 0.0)?;
    s = ns_gate(&s, L1, op, eta2)?;
    s = ns_gate(&s, U2, op, eta2)?;
    s = s.beamsplitter(L1, U2, -FRAC_PI_4, 0.0)?;
    let outer = options.outer_transmission.unwrap_or(op.epsilon1.min(1.0));
    s = s.loss_channel(U1, outer)?;
    s = s.loss_channel(L2, outer)?;

    let logical = logical_amplitudes(&s, op)?;
    let success: f64 = logical.iter().map(|a| a.norm_sqr()).sum();
    let ideal = cz_oracle(input);
    let norm_in: f64 = ideal.iter().map(|a| a.norm_sqr()).sum();
    let overlap: C64 = ideal.iter().zip(&logical).map(|(a, b)| a.conj() * b).sum();
    let fidelity = if success > 0.0 && norm_in > 0.0 {
        Some(overlap.norm_sqr() / (success * norm_in))
    } else {
        None
    };
    Ok(CzReport {
        report: CircuitReport::new(s, success, fidelity),
        logical,
        input,
    })
}
