//! Detuning-space representation of one- and two-photon amplitudes.

mod amp;
mod grid;
mod pulse;

pub use amp::{
    inner1, inner2, inner_pair, product_state, symmetric_product, OnePhotonAmp, PairAmp,
    TimeReverse, TwoPhotonAmp,
};
pub(crate) use amp::check_same_grid;
pub use grid::{GridSpec, SpectralGrid, MAX_STEP_FRACTION, MIN_WINDOW_WIDTHS};
pub use pulse::{make_pulse, PulseKind, PulseShape};
