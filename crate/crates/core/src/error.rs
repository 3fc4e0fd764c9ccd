use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid resolution: {0}")]
    Resolution(String),
    #[error("amplitudes live on different grids")]
    GridMismatch,
    #[error("grid is not symmetric about zero detuning")]
    AsymmetricGrid,
    #[error("two-photon amplitude is not exchange-symmetric (max deviation {0:e})")]
    Asymmetric(f64),
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("no sign change of the matching function in [{lo}, {hi}]")]
    NoCrossing { lo: f64, hi: f64 },
    #[error("rail {0} does not exist")]
    NoSuchRail(usize),
    #[error("rails {0} and {1} carry different carriers")]
    CarrierMismatch(usize, usize),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected: "[0, 1]",
        })
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected: "> 0",
        })
    }
}
