use super::OperatingPoint;
use crate::error::Result;
use crate::mode_ops::{leakage_metric, sfg_extract, PulseGateSpec, SfgModel};
use crate::state::{FewPhotonState, Rail};

/// State after sorting plus diagnostics of how ideal the sorting was.
#[derive(Debug, Clone)]
pub struct SorterOutput {
    pub state: FewPhotonState,
    /// Index of the sum-frequency rail holding the sorted single photons.
    pub ancilla: usize,
    /// `eta - epsilon1^2 / 2` at the operating point; zero for perfect sorting.
    pub mismatch: f64,
    /// Probability a photon-wise pulse gate would split the scattered pair
    /// on this rail (zero if the rail held no pair).
    pub leakage: f64,
}

/// Scatterer followed by a pulse gate whose pump is the scattered input
/// mode `t f`: single photons leave on a new sum-frequency rail, scattered
/// pairs (orthogonal to the pump product when matched) stay on `rail`.
pub fn photon_sorter(
    state: &FewPhotonState,
    rail: usize,
    op: &OperatingPoint,
) -> Result<SorterOutput> {
    let scattered = state.apply_tls(rail, &op.params)?;
    let spec = PulseGateSpec::new(&op.pump_mode())?;
    let leakage = match scattered.same_rail(rail) {
        Some(psi) => leakage_metric(&spec.clone().with_model(SfgModel::PhotonWise), psi)?,
        None => 0.0,
    };
    let mut widened = scattered;
    let label = format!("{}'", widened.rails()[rail].label);
    let ancilla = widened.add_rail(Rail::sum_frequency(label));
    let state = sfg_extract(&widened, &spec, rail, ancilla)?;
    Ok(SorterOutput {
        state,
        ancilla,
        mismatch: op.mismatch(),
        leakage,
    })
}
