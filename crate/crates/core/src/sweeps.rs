//! Figure tables: the eta family against pulse width, and loss and
//! success probabilities against the directional coupling.

use rayon::prelude::*;

use crate::error::{check_positive, Error, Result};
use crate::spectral::GridSpec;
use crate::tls::{
    epsilon1_analytic, eta_analytic, lorentzian_overlap, matching_point, Branch, TlsParams,
};
use crate::circuits::{success_curves, SuccessRow};

/// Parameters of a figure sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Directional coupling values, each in `(0, 1]`.
    pub betas: Vec<f64>,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Number of log-spaced widths in `[sigma_min, sigma_max]`.
    pub n_sigma: usize,
    pub grid: GridSpec,
}

impl SweepSpec {
    /// Three couplings against width, as in the eta figure.
    pub fn eta_family() -> Self {
        Self {
            betas: vec![1.0, 0.95, 0.90],
            sigma_min: 0.05,
            sigma_max: 5.0,
            n_sigma: 200,
            grid: GridSpec::ANALYSIS,
        }
    }

    /// Couplings from 0.80 to 1 in steps of 0.01, for loss and success curves.
    pub fn beta_range() -> Self {
        Self {
            betas: (80..=100).map(|k| k as f64 / 100.0).collect(),
            ..Self::eta_family()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.betas.is_empty() {
            return Err(Error::Input("no beta values to sweep".into()));
        }
        for &b in &self.betas {
            if !(b > 0.0 && b <= 1.0) {
                return Err(Error::Domain {
                    name: "beta",
                    value: b,
                    expected: "(0, 1]",
                });
            }
        }
        check_positive("sigma_min", self.sigma_min)?;
        if !(self.sigma_max > self.sigma_min) {
            return Err(Error::Domain {
                name: "sigma_max",
                value: self.sigma_max,
                expected: "> sigma_min",
            });
        }
        if self.n_sigma < 2 {
            return Err(Error::Input("n_sigma must be at least 2".into()));
        }
        Ok(())
    }

    /// Log-spaced widths.
    pub fn sigmas(&self) -> Vec<f64> {
        let (a, b) = (self.sigma_min.ln(), self.sigma_max.ln());
        let last = (self.n_sigma - 1) as f64;
        (0..self.n_sigma)
            .map(|k| (a + (b - a) * k as f64 / last).exp())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaRow {
    pub beta: f64,
    pub sigma: f64,
    pub eta: f64,
    /// `epsilon1^2 / 2`, the matching threshold.
    pub half_eps1_sq: f64,
    /// The matching function changes sign between this width and the next.
    pub is_crossing: bool,
}

/// `eta` and `epsilon1^2 / 2` against width for every coupling: closed form
/// for a lossless emitter, numeric overlap on the sweep grid otherwise.
pub fn fig1b_data(spec: &SweepSpec) -> Result<Vec<EtaRow>> {
    spec.validate()?;
    let sigmas = spec.sigmas();
    let mut rows = Vec::with_capacity(spec.betas.len() * sigmas.len());
    for &beta in &spec.betas {
        let p = TlsParams::from_beta(beta)?;
        let mut block: Vec<EtaRow> = sigmas
            .par_iter()
            .map(|&sigma| {
                let eta = if p.is_lossless() {
                    eta_analytic(&p, sigma)?
                } else {
                    lorentzian_overlap(&p, sigma, &spec.grid)?.eta()
                };
                let e1 = epsilon1_analytic(&p, sigma)?;
                Ok(EtaRow {
                    beta,
                    sigma,
                    eta,
                    half_eps1_sq: 0.5 * e1 * e1,
                    is_crossing: false,
                })
            })
            .collect::<Result<_>>()?;
        for k in 0..block.len().saturating_sub(1) {
            let a = block[k].eta - block[k].half_eps1_sq;
            let b = block[k + 1].eta - block[k + 1].half_eps1_sq;
            block[k].is_crossing = (a < 0.0) != (b < 0.0);
        }
        rows.extend(block);
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossRow {
    pub beta: f64,
    pub branch: Branch,
    /// Matching width, `None` when the coupling admits no crossing.
    pub sigma: Option<f64>,
    /// `1 + epsilon1^2 - epsilon_b`
    pub pair_loss: f64,
    /// `1 - epsilon1^2`
    pub independent_loss: f64,
}

/// Loss of a scattered pair and of two independent photons at both matching
/// points of every coupling.
pub fn loss_curves(spec: &SweepSpec) -> Result<Vec<LossRow>> {
    spec.validate()?;
    let mut rows = Vec::new();
    for branch in [Branch::Upper, Branch::Lower] {
        for r in curve_rows(spec, branch)? {
            rows.push(LossRow {
                beta: r.beta,
                branch,
                sigma: r.sigma,
                pair_loss: r.pair_loss(),
                independent_loss: r.independent_loss(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessCurveRow {
    pub beta: f64,
    pub sigma: Option<f64>,
    /// Average Bell-analyzer success, `epsilon_b / 2`.
    pub bell: f64,
    /// Controlled-sign success, `epsilon1^4`.
    pub cz: f64,
}

/// Bell-analyzer and controlled-sign success at the upper matching point.
pub fn fig3_data(spec: &SweepSpec) -> Result<Vec<SuccessCurveRow>> {
    spec.validate()?;
    Ok(curve_rows(spec, Branch::Upper)?
        .into_iter()
        .map(|r| SuccessCurveRow {
            beta: r.beta,
            sigma: r.sigma,
            bell: r.bell_success(),
            cz: r.cz_success(),
        })
        .collect())
}

fn curve_rows(spec: &SweepSpec, branch: Branch) -> Result<Vec<SuccessRow>> {
    let rows: Vec<Vec<SuccessRow>> = spec
        .betas
        .par_iter()
        .map(|&b| success_curves(&[b], branch, &spec.grid))
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Both matching widths for one coupling, `None` where no crossing exists.
pub fn matching_points(p: &TlsParams, spec: &GridSpec) -> Result<[(Branch, Option<f64>); 2]> {
    let solve = |branch| match matching_point(p, branch, spec) {
        Ok(m) => Ok((branch, Some(m.sigma))),
        Err(Error::NoCrossing { .. }) => Ok((branch, None)),
        Err(e) => Err(e),
    };
    Ok([solve(Branch::Lower)?, solve(Branch::Upper)?])
}
