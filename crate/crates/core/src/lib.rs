//! Few-photon spectral simulation of a chiral two-level scatterer combined
//! with mode-selective frequency conversion, spectral inversion and linear
//! optics.
//!
//! Detunings and rates are in units of the waveguide coupling rate unless a
//! [`tls::TlsParams`] says otherwise.

pub mod circuits;
pub mod error;
pub mod mode_ops;
pub mod optimize;
pub mod spectral;
pub mod state;
pub mod sweeps;
pub mod tls;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use spectral::{
    inner1, inner2, make_pulse, product_state, GridSpec, OnePhotonAmp, PairAmp, PulseKind,
    PulseShape, SpectralGrid, TimeReverse, TwoPhotonAmp,
};
pub use tls::TlsParams;
pub use state::{Carrier, Component, DetectionPattern, FewPhotonState, Rail};
