use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use super::TlsParams;
use crate::error::{Error, Result};
use crate::spectral::{inner2, OnePhotonAmp, SpectralGrid, TwoPhotonAmp};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

fn transfer_samples(p: &TlsParams, grid: &SpectralGrid) -> Vec<C64> {
    grid.samples().map(|d| p.transfer_coeff(d)).collect()
}

fn s_samples(p: &TlsParams, grid: &SpectralGrid) -> Vec<C64> {
    grid.samples().map(|d| p.s_coeff(d)).collect()
}

/// Full linear convolution, `out[q] = sum_{m + n = q} a[m] b[n]`.
///
/// Short inputs are summed directly; long ones go through an FFT, whose
/// round-off is far below the quadrature error of any grid in use.
fn convolve(a: &[C64], b: &[C64]) -> Vec<C64> {
    let len = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= 64 {
        let mut out = vec![ZERO; len];
        for (m, x) in a.iter().enumerate() {
            for (o, y) in out[m..m + b.len()].iter_mut().zip(b) {
                *o += x * y;
            }
        }
        return out;
    }
    let size = len.next_power_of_two();
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);
    let padded = |x: &[C64]| {
        let mut v = x.to_vec();
        v.resize(size, ZERO);
        v
    };
    let mut fa = padded(a);
    let mut fb = padded(b);
    forward.process(&mut fa);
    forward.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inverse.process(&mut fa);
    let scale = 1.0 / size as f64;
    fa.truncate(len);
    fa.iter_mut().for_each(|v| *v *= scale);
    fa
}

#[derive(Debug, Clone)]
pub struct ScatterOneResult {
    /// `f(delta) t(delta)`, not renormalized.
    pub out: OnePhotonAmp,
    /// Probability that the photon stays in the guided mode.
    pub epsilon1: f64,
    pub lost: f64,
}

pub fn scatter_one(p: &TlsParams, f: &OnePhotonAmp) -> ScatterOneResult {
    let out = f.map_samples(|d, v| v * p.transfer_coeff(d));
    let epsilon1 = out.norm_sqr();
    ScatterOneResult {
        lost: f.norm_sqr() - epsilon1,
        out,
        epsilon1,
    }
}

/// Two-photon scattering of an arbitrary symmetric amplitude:
///
/// `out(p1, p2) = t(p1) t(p2) psi(p1, p2) + K s(p1) s(p2) I(p1 + p2)`,
/// `I(P) = int dk psi(k, P - k) (s(k) + s(P - k))`, `K = i sqrt(Gamma) / 2pi`.
///
/// The momentum-conserving delta is integrated out by parametrizing the
/// output over total detuning, so `I` is a trapezoid sum along each
/// anti-diagonal of the uniform grid.
pub fn scatter_two(p: &TlsParams, psi: &TwoPhotonAmp) -> TwoPhotonAmp {
    let grid = psi.grid().clone();
    let n = grid.len();
    let h = grid.spacing();
    let w = grid.weights();
    let t = transfer_samples(p, &grid);
    let s = s_samples(p, &grid);
    let vals = psi.values();

    let mut anti = vec![ZERO; 2 * n - 1];
    for (q, slot) in anti.iter_mut().enumerate() {
        let lo = q.saturating_sub(n - 1);
        let hi = q.min(n - 1);
        let mut acc = ZERO;
        for m in lo..=hi {
            let k = q - m;
            acc += vals[m * n + k] * (s[m] + s[k]) * (w[m] * w[k] / h);
        }
        *slot = acc;
    }

    let kappa = p.kernel_prefactor();
    TwoPhotonAmp::from_fn(grid, |i, j| {
        t[i] * t[j] * vals[i * n + j] + kappa * s[i] * s[j] * anti[i + j]
    })
}

/// Anti-diagonal integral `I(P)` for the product input `f (x) f`, as a
/// convolution.
fn product_antidiagonal(p: &TlsParams, f: &OnePhotonAmp) -> Vec<C64> {
    let grid = f.grid();
    let h = grid.spacing();
    let w = grid.weights();
    let s = s_samples(p, grid);
    let wf: Vec<C64> = f.values().iter().zip(w).map(|(v, w)| v * w).collect();
    let wfs: Vec<C64> = wf.iter().zip(&s).map(|(a, b)| a * b).collect();
    convolve(&wfs, &wf).into_iter().map(|v| v * (2.0 / h)).collect()
}

/// Linear image `f t (x) f t` of the product input.
pub fn product_image(p: &TlsParams, f: &OnePhotonAmp) -> TwoPhotonAmp {
    let ft = scatter_one(p, f).out;
    crate::spectral::product_state(&ft)
}

/// Bound (spectrally entangled) term generated from the product input `f (x) f`.
pub fn bound_amplitude(p: &TlsParams, f: &OnePhotonAmp) -> TwoPhotonAmp {
    let anti = product_antidiagonal(p, f);
    let s = s_samples(p, f.grid());
    let kappa = p.kernel_prefactor();
    TwoPhotonAmp::from_fn(f.grid().clone(), |i, j| kappa * s[i] * s[j] * anti[i + j])
}

/// `eta = |<f t (x) f t | bound>| / 2`, from explicitly built amplitudes.
pub fn eta_numeric(p: &TlsParams, f: &OnePhotonAmp) -> Result<f64> {
    let image = product_image(p, f);
    let bound = bound_amplitude(p, f);
    Ok(0.5 * inner2(&image, &bound)?.norm())
}

/// Scalars of the product-input scattering problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundOverlap {
    /// `<f t (x) f t | bound>`, real and negative for even pulses.
    pub overlap: C64,
    pub epsilon1: f64,
    pub epsilon_b: f64,
}

impl BoundOverlap {
    pub fn eta(&self) -> f64 {
        0.5 * self.overlap.norm()
    }

    /// `eta - epsilon1^2 / 2`; zero at the sorting point.
    pub fn mismatch(&self) -> f64 {
        self.eta() - 0.5 * self.epsilon1 * self.epsilon1
    }

    /// Angle of the overlap measured from the negative real axis.
    pub fn phase_residual(&self) -> f64 {
        (-self.overlap).arg()
    }
}

/// Same scalars as [`eta_numeric`] and the bound-term norm, evaluated as
/// one-dimensional convolutions without storing any `n x n` amplitude.
///
/// Both double sums factor through the total detuning index `q = i + j`:
/// `<a (x) a | K s s I> = K sum_q I_q (g * g)_q` with `g = w conj(a) s`, and
/// `|K s s I|^2 = |K|^2 sum_q |I_q|^2 (v * v)_q` with `v = w |s|^2`.
pub fn bound_overlap(p: &TlsParams, f: &OnePhotonAmp) -> BoundOverlap {
    let grid = f.grid();
    let w = grid.weights();
    let s = s_samples(p, grid);
    let one = scatter_one(p, f);
    let anti = product_antidiagonal(p, f);
    let kappa = p.kernel_prefactor();

    let g: Vec<C64> = one
        .out
        .values()
        .iter()
        .zip(&s)
        .zip(w)
        .map(|((a, s), w)| a.conj() * s * w)
        .collect();
    let gg = convolve(&g, &g);
    let overlap = kappa * anti.iter().zip(&gg).map(|(a, b)| a * b).sum::<C64>();

    let v: Vec<C64> = s.iter().zip(w).map(|(s, w)| C64::new(w * s.norm_sqr(), 0.0)).collect();
    let vv = convolve(&v, &v);
    let epsilon_b =
        kappa.norm_sqr() * anti.iter().zip(&vv).map(|(a, b)| a.norm_sqr() * b.re).sum::<f64>();

    BoundOverlap {
        overlap,
        epsilon1: one.epsilon1,
        epsilon_b,
    }
}

/// Two-photon output split into the normalized product image and its
/// orthogonal complement.
#[derive(Debug, Clone)]
pub struct ScatterTwoResult {
    pub out: TwoPhotonAmp,
    /// Amplitude on the normalized product image `f t (x) f t / epsilon1`.
    pub coeff_along: C64,
    /// Norm of the component orthogonal to the product image.
    pub coeff_orth: f64,
    /// Probability that fewer than two photons remain guided.
    pub lost: f64,
    pub epsilon1: f64,
    /// `<f t (x) f t | bound>`
    pub overlap: C64,
}

impl ScatterTwoResult {
    pub fn eta(&self) -> f64 {
        0.5 * self.overlap.norm()
    }

    /// Normalized state orthogonal to the product image.
    pub fn orthogonal_mode(&self, image: &TwoPhotonAmp) -> Result<TwoPhotonAmp> {
        if self.coeff_orth == 0.0 {
            return Err(Error::Contract("no orthogonal component".into()));
        }
        let mut r = self.out.clone();
        r.axpy(-self.coeff_along / self.epsilon1, image)?;
        r.scale(C64::new(1.0 / self.coeff_orth, 0.0));
        Ok(r)
    }
}

pub fn decompose(p: &TlsParams, f: &OnePhotonAmp) -> Result<ScatterTwoResult> {
    let input = crate::spectral::product_state(f);
    let out = scatter_two(p, &input);
    let one = scatter_one(p, f);
    let epsilon1 = one.epsilon1;
    let image = crate::spectral::product_state(&one.out);
    let proj = inner2(&image, &out)?;
    let coeff_along = proj / epsilon1;
    let total = out.norm_sqr();
    let coeff_orth = (total - coeff_along.norm_sqr()).max(0.0).sqrt();
    let overlap = proj - C64::new(epsilon1 * epsilon1, 0.0);
    Ok(ScatterTwoResult {
        lost: input.norm_sqr() - total,
        out,
        coeff_along,
        coeff_orth,
        epsilon1,
        overlap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_convolution_matches_direct_sum() {
        let a: Vec<C64> = (0..300).map(|k| C64::new((k as f64).sin(), 0.3 * k as f64 / 300.0)).collect();
        let b: Vec<C64> = (0..200).map(|k| C64::new(1.0 / (1.0 + k as f64), (k as f64).cos())).collect();
        let fast = convolve(&a, &b);
        for (q, v) in fast.iter().enumerate() {
            let mut direct = ZERO;
            for m in q.saturating_sub(b.len() - 1)..=q.min(a.len() - 1) {
                direct += a[m] * b[q - m];
            }
            assert!((v - direct).norm() < 1e-11, "{q}: {v} vs {direct}");
        }
    }
}
