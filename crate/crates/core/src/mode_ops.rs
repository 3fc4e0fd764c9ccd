//! Active mode operations: the mode-selective sum-frequency pulse gate, its
//! reverse, spectral inversion in a gradient echo memory, and phase or loss
//! on a single state sector.
//!
//! The sum-frequency rail is an ordinary rail with carrier
//! [`Carrier::SumFrequency`]; a converted photon is stored there in the pump
//! mode itself, since nothing downstream resolves its spectrum.

use std::f64::consts::SQRT_2;

use num_complex::Complex64 as C64;

use crate::error::{check_unit, Error, Result};
use crate::spectral::{inner1, OnePhotonAmp, PairAmp, TimeReverse, TwoPhotonAmp};
use crate::state::{Carrier, Component, FewPhotonState};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Relative weight of a non-pump component tolerated on the ancilla rail
/// when converting back.
const PUMP_MODE_TOL: f64 = 1e-8;

/// How the pulse gate acts on two photons sharing the signal rail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SfgModel {
    /// Converts only the component with both photons in the pump mode, the
    /// idealized sorter in which a two-photon state orthogonal to the pump
    /// product stays put.
    #[default]
    Ideal,
    /// Each photon independently: the pump-mode part of either photon
    /// converts, including pairs with exactly one photon in the pump mode.
    PhotonWise,
}

/// A pulse gate converting one spectral mode of the signal rail.
#[derive(Debug, Clone)]
pub struct PulseGateSpec {
    pump: OnePhotonAmp,
    efficiency: f64,
    model: SfgModel,
}

impl PulseGateSpec {
    /// Unit-efficiency ideal gate for `pump`, which is renormalized.
    pub fn new(pump: &OnePhotonAmp) -> Result<Self> {
        let n = pump.norm_sqr();
        if !(n > 0.0) {
            return Err(Error::Input("pump mode has zero norm".into()));
        }
        Ok(Self {
            pump: pump.normalized(),
            efficiency: 1.0,
            model: SfgModel::Ideal,
        })
    }

    pub fn with_efficiency(mut self, efficiency: f64) -> Result<Self> {
        check_unit("efficiency", efficiency)?;
        self.efficiency = efficiency;
        Ok(self)
    }

    pub fn with_model(mut self, model: SfgModel) -> Self {
        self.model = model;
        self
    }

    pub fn pump(&self) -> &OnePhotonAmp {
        &self.pump
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn model(&self) -> SfgModel {
        self.model
    }

    fn converted(&self) -> C64 {
        C64::new(self.efficiency.sqrt(), 0.0)
    }

    fn retained(&self) -> C64 {
        C64::new((1.0 - self.efficiency).sqrt(), 0.0)
    }
}

fn check_carrier(state: &FewPhotonState, rail: usize, carrier: Carrier) -> Result<()> {
    let r = state.rails().get(rail).ok_or(Error::NoSuchRail(rail))?;
    if r.carrier != carrier {
        return Err(Error::Contract(format!(
            "rail {rail} carries {:?}, expected {carrier:?}",
            r.carrier
        )));
    }
    Ok(())
}

/// Splits `psi` as `c u u + u r + r u + R`, with `r` and `R` orthogonal to
/// the pump mode `u` in every photon. Returns `(c, r)`.
fn pump_decomposition(u: &OnePhotonAmp, psi: &TwoPhotonAmp) -> Result<(C64, OnePhotonAmp)> {
    let g = psi.contract(u)?;
    let c = inner1(u, &g)?;
    let r = g.add_scaled(-c, u)?;
    Ok((c, r))
}

/// Converts the pump-mode content of `signal` onto the empty sum-frequency
/// rail `ancilla`.
///
/// Each photon sees a mode beamsplitter: its pump-mode part moves to the
/// ancilla with amplitude `sqrt(e)` and keeps `sqrt(1 - e)` on the signal.
/// Photons of the same-rail pair follow [`SfgModel`].
pub fn sfg_extract(
    state: &FewPhotonState,
    spec: &PulseGateSpec,
    signal: usize,
    ancilla: usize,
) -> Result<FewPhotonState> {
    check_carrier(state, signal, Carrier::Signal)?;
    check_carrier(state, ancilla, Carrier::SumFrequency)?;
    if !state.rail_is_empty(ancilla) {
        return Err(Error::Contract(format!("ancilla rail {ancilla} is occupied")));
    }
    let u = &spec.pump;
    let (kc, kr) = (spec.converted(), spec.retained());
    let mut s = state.clone();

    if let Some(g) = s.take_one(signal) {
        let c = inner1(u, &g)?;
        s.add_one(signal, ONE, &g.add_scaled(c * (kr - ONE), u)?)?;
        s.add_one(ancilla, c * kc, u)?;
    }

    for (other, chi) in s.take_cross_with(signal) {
        // First index on the signal rail; convert it photon-wise.
        let c = chi.contract_first(u)?;
        let mut kept = chi;
        kept.axpy(kr - ONE, &PairAmp::product(u, &c)?)?;
        s.add_pair(signal, other, ONE, &kept)?;
        s.add_pair(ancilla, other, kc, &PairAmp::product(u, &c)?)?;
    }

    if let Some(psi) = s.take_same(signal) {
        let (c, r) = pump_decomposition(u, &psi)?;
        let uu = PairAmp::product(u, u)?;
        let mut kept = psi.into_pair();
        // c u u -> (1-e) c u u on the signal, sqrt(2 e (1-e)) c split, e c both converted.
        kept.axpy(c * (kr * kr - ONE), &uu)?;
        s.add_pair(ancilla, ancilla, c * kc * kc / SQRT_2, &uu)?;
        s.add_pair(signal, ancilla, c * kr * kc * SQRT_2, &uu)?;
        if spec.model == SfgModel::PhotonWise {
            // u r + r u: the pump-mode photon converts, its partner stays.
            let ur = PairAmp::product(u, &r)?;
            kept.axpy(kr - ONE, &ur)?;
            kept.axpy_transposed(kr - ONE, &ur)?;
            s.add_pair(signal, ancilla, kc * SQRT_2, &PairAmp::product(&r, u)?)?;
        }
        s.add_pair(signal, signal, C64::new(1.0 / SQRT_2, 0.0), &kept)?;
    }
    Ok(s)
}

/// Pump-mode amplitude of `a`, erroring if `a` has weight outside that mode.
fn pump_coefficient(u: &OnePhotonAmp, a: &OnePhotonAmp) -> Result<C64> {
    let c = inner1(u, a)?;
    let total = a.norm_sqr();
    let residual = (total - c.norm_sqr()).max(0.0);
    if residual > PUMP_MODE_TOL * total.max(1e-300) {
        return Err(Error::Contract(format!(
            "ancilla photon is not in the pump mode (off-mode weight {residual:e})"
        )));
    }
    Ok(c)
}

/// Converts ancilla photons (which must be in the pump mode) back onto the
/// signal rail with amplitude `sqrt(e)`; the unconverted remainder is lost.
pub fn sfg_reverse(
    state: &FewPhotonState,
    spec: &PulseGateSpec,
    ancilla: usize,
    signal: usize,
) -> Result<FewPhotonState> {
    check_carrier(state, signal, Carrier::Signal)?;
    check_carrier(state, ancilla, Carrier::SumFrequency)?;
    let u = &spec.pump;
    let k = spec.converted();
    let before = state.norm_sqr();
    let mut s = state.clone();

    if let Some(a) = s.take_one(ancilla) {
        let c = pump_coefficient(u, &a)?;
        s.add_one(signal, c * k, u)?;
    }
    for (other, chi) in s.take_cross_with(ancilla) {
        // chi(x, y): x on the ancilla, y on `other`. The ancilla photon must
        // be u(x) times some partner amplitude d(y).
        let d = chi.contract_first(u)?;
        let rebuilt = PairAmp::product(u, &d)?;
        let mut diff = chi.clone();
        diff.axpy(-ONE, &rebuilt)?;
        if diff.norm_sqr() > PUMP_MODE_TOL * chi.norm_sqr().max(1e-300) {
            return Err(Error::Contract(
                "ancilla photon of a pair is not in the pump mode".into(),
            ));
        }
        s.add_pair(signal, other, k, &rebuilt)?;
    }
    if let Some(psi) = s.take_same(ancilla) {
        let (c, r) = pump_decomposition(u, &psi)?;
        if r.norm_sqr() > PUMP_MODE_TOL * psi.norm_sqr().max(1e-300) {
            return Err(Error::Contract("ancilla pair is not in the pump mode".into()));
        }
        s.add_pair(signal, signal, c * k * k / SQRT_2, &PairAmp::product(u, u)?)?;
    }
    s.add_lost(before - s.norm_sqr());
    Ok(s)
}

/// Spectral inversion `F(delta) -> F(-delta)` of every photon on `rail`.
/// The memory's storage delay is a global phase and is dropped.
pub fn gem_invert(state: &FewPhotonState, rail: usize) -> Result<FewPhotonState> {
    state.map_rail_indices(
        rail,
        |a| a.time_reverse(),
        |a| a.time_reverse(),
        |a| a.time_reverse_first(),
        |a| a.time_reverse_second(),
    )
}

/// Multiplies one sector by `e^{i phase} * amp_transmission^photons`; the
/// removed probability is booked as lost.
pub fn component_phase_loss(
    state: &FewPhotonState,
    component: Component,
    phase: f64,
    amp_transmission: f64,
) -> Result<FewPhotonState> {
    check_unit("amp_transmission", amp_transmission)?;
    let factor = C64::from_polar(amp_transmission.powi(component.photons()), phase);
    let mut s = state.clone();
    s.scale_component(component, factor)?;
    Ok(s)
}

/// Probability that a photon-wise gate splits the pair `psi`: the weight
/// `2 e |r|^2` of the branch with exactly one photon converted, where `r` is
/// the pump-mode contraction of `psi` minus its pump-parallel part.
pub fn leakage_metric(spec: &PulseGateSpec, psi: &TwoPhotonAmp) -> Result<f64> {
    let (_, r) = pump_decomposition(&spec.pump, psi)?;
    Ok(2.0 * spec.efficiency * r.norm_sqr())
}
