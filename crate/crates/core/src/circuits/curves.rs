use crate::error::Result;
use crate::tls::{epsilon1_analytic, epsilon_b_analytic, matching_point, Branch, TlsParams};
use crate::spectral::GridSpec;

/// Figures of merit at the upper matching point for one coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessRow {
    pub beta: f64,
    /// Matching width, or `None` if no crossing exists at this coupling.
    pub sigma: Option<f64>,
    pub epsilon1: f64,
    pub epsilon_b: f64,
}

impl SuccessRow {
    /// Average Bell-analyzer success, `epsilon_b / 2`.
    pub fn bell_success(&self) -> f64 {
        0.5 * self.epsilon_b
    }

    /// Controlled-sign success, `epsilon1^4`.
    pub fn cz_success(&self) -> f64 {
        self.epsilon1.powi(4)
    }

    /// Probability a photon pair loses at least one photon, `1 + epsilon1^2 - epsilon_b`.
    pub fn pair_loss(&self) -> f64 {
        1.0 + self.epsilon1 * self.epsilon1 - self.epsilon_b
    }

    /// Same for two independently scattered photons, `1 - epsilon1^2`.
    pub fn independent_loss(&self) -> f64 {
        1.0 - self.epsilon1 * self.epsilon1
    }
}

/// Success and loss figures along the directional coupling `betas`, with
/// widths on `branch` solved on the grid rule `spec`. Closed forms give the
/// survival probabilities at each width.
pub fn success_curves(betas: &[f64], branch: Branch, spec: &GridSpec) -> Result<Vec<SuccessRow>> {
    betas
        .iter()
        .map(|&beta| {
            let p = TlsParams::from_beta(beta)?;
            Ok(match matching_point(&p, branch, spec) {
                Ok(m) => SuccessRow {
                    beta,
                    sigma: Some(m.sigma),
                    epsilon1: epsilon1_analytic(&p, m.sigma)?,
                    epsilon_b: epsilon_b_analytic(&p, m.sigma)?,
                },
                Err(crate::Error::NoCrossing { .. }) => SuccessRow {
                    beta,
                    sigma: None,
                    epsilon1: f64::NAN,
                    epsilon_b: f64::NAN,
                },
                Err(e) => return Err(e),
            })
        })
        .collect()
}
