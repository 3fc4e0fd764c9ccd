use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::grid::SpectralGrid;
use crate::error::{Error, Result};

fn same_grid(a: &Arc<SpectralGrid>, b: &Arc<SpectralGrid>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// Spectral amplitude of a single photon.
#[derive(Debug, Clone, PartialEq)]
pub struct OnePhotonAmp {
    grid: Arc<SpectralGrid>,
    values: Vec<C64>,
}

impl OnePhotonAmp {
    pub fn new(grid: Arc<SpectralGrid>, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Input(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<SpectralGrid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn from_fn(grid: Arc<SpectralGrid>, mut f: impl FnMut(f64) -> C64) -> Self {
        let values = grid.samples().map(&mut f).collect();
        Self { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn norm_sqr(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v.norm_sqr())
            .sum()
    }

    /// Unit-norm copy. A zero amplitude is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return self.clone();
        }
        self.scaled(C64::new(1.0 / n, 0.0))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Samplewise product with a spectral filter.
    pub fn map_samples(&self, mut f: impl FnMut(f64, C64) -> C64) -> Self {
        let values = self
            .grid
            .samples()
            .zip(&self.values)
            .map(|(d, v)| f(d, *v))
            .collect();
        Self {
            grid: self.grid.clone(),
            values,
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: C64, other: &Self) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + factor * b)
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            values,
        })
    }
}

/// `sum_i w_i conj(a_i) b_i`
pub fn inner1(a: &OnePhotonAmp, b: &OnePhotonAmp) -> Result<C64> {
    same_grid(&a.grid, &b.grid)?;
    Ok(a.grid
        .weights()
        .iter()
        .zip(a.values.iter().zip(&b.values))
        .map(|(w, (x, y))| x.conj() * y * *w)
        .sum())
}

/// Dense `n x n` amplitude indexed by `(photon on the first rail, photon on
/// the second rail)`. No exchange symmetry is assumed.
#[derive(Debug, Clone, PartialEq)]
pub struct PairAmp {
    grid: Arc<SpectralGrid>,
    values: Vec<C64>,
}

impl PairAmp {
    pub fn from_values(grid: Arc<SpectralGrid>, values: Vec<C64>) -> Result<Self> {
        let n = grid.len();
        if values.len() != n * n {
            return Err(Error::Input(format!(
                "{} values for an {n}x{n} amplitude",
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<SpectralGrid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_fn(grid: Arc<SpectralGrid>, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let n = grid.len();
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(i, j));
            }
        }
        Self { grid, values }
    }

    pub fn product(a: &OnePhotonAmp, b: &OnePhotonAmp) -> Result<Self> {
        same_grid(&a.grid, &b.grid)?;
        Ok(Self::from_fn(a.grid.clone(), |i, j| a.values[i] * b.values[j]))
    }

    #[inline]
    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    #[inline]
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.dim() + j]
    }

    pub fn row(&self, i: usize) -> &[C64] {
        let n = self.dim();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn norm_sqr(&self) -> f64 {
        weighted_norm_sqr(&self.grid, &self.values)
    }

    pub fn transposed(&self) -> Self {
        Self::from_fn(self.grid.clone(), |i, j| self.get(j, i))
    }

    pub fn scale(&mut self, factor: C64) {
        self.values.iter_mut().for_each(|v| *v *= factor);
    }

    /// `self += factor * other`
    pub fn axpy(&mut self, factor: C64, other: &Self) -> Result<()> {
        same_grid(&self.grid, &other.grid)?;
        self.values
            .iter_mut()
            .zip(&other.values)
            .for_each(|(a, b)| *a += factor * b);
        Ok(())
    }

    /// `self += factor * transpose(other)`
    pub fn axpy_transposed(&mut self, factor: C64, other: &Self) -> Result<()> {
        same_grid(&self.grid, &other.grid)?;
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                self.values[i * n + j] += factor * other.values[j * n + i];
            }
        }
        Ok(())
    }

    /// Apply `f(first_index_value, second_index_value)` pointwise-diagonal
    /// filters to each photon.
    pub fn filter(&mut self, first: &[C64], second: &[C64]) {
        let n = self.dim();
        for i in 0..n {
            let row = &mut self.values[i * n..(i + 1) * n];
            for (v, s) in row.iter_mut().zip(second) {
                *v *= first[i] * s;
            }
        }
    }

    /// Contract the first photon with `conj(u)`: `g(j) = sum_i w_i conj(u_i) psi(i, j)`.
    pub fn contract_first(&self, u: &OnePhotonAmp) -> Result<OnePhotonAmp> {
        same_grid(&self.grid, &u.grid)?;
        let n = self.dim();
        let w = self.grid.weights();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let c = u.values[i].conj() * w[i];
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.row(i)) {
                *o += c * v;
            }
        }
        OnePhotonAmp::new(self.grid.clone(), out)
    }

    /// Contract the second photon with `conj(u)`.
    pub fn contract_second(&self, u: &OnePhotonAmp) -> Result<OnePhotonAmp> {
        same_grid(&self.grid, &u.grid)?;
        let w = self.grid.weights();
        let uw: Vec<C64> = u.values.iter().zip(w).map(|(x, w)| x.conj() * w).collect();
        let out = (0..self.dim())
            .map(|i| self.row(i).iter().zip(&uw).map(|(v, c)| v * c).sum())
            .collect();
        OnePhotonAmp::new(self.grid.clone(), out)
    }

    fn reversed(&self, first: bool, second: bool) -> Result<Self> {
        if !self.grid.is_symmetric() {
            return Err(Error::AsymmetricGrid);
        }
        let g = &self.grid;
        Ok(Self::from_fn(self.grid.clone(), |i, j| {
            let a = if first { g.mirror(i) } else { i };
            let b = if second { g.mirror(j) } else { j };
            self.get(a, b)
        }))
    }

    /// Reverse only the photon on the first rail.
    pub fn time_reverse_first(&self) -> Result<Self> {
        self.reversed(true, false)
    }

    /// Reverse only the photon on the second rail.
    pub fn time_reverse_second(&self) -> Result<Self> {
        self.reversed(false, true)
    }
}

fn weighted_norm_sqr(grid: &SpectralGrid, values: &[C64]) -> f64 {
    let n = grid.len();
    let w = grid.weights();
    (0..n)
        .map(|i| {
            let row: f64 = values[i * n..(i + 1) * n]
                .iter()
                .zip(w)
                .map(|(v, wj)| wj * v.norm_sqr())
                .sum();
            w[i] * row
        })
        .sum()
}

fn weighted_inner(grid: &SpectralGrid, a: &[C64], b: &[C64]) -> C64 {
    let n = grid.len();
    let w = grid.weights();
    (0..n)
        .map(|i| {
            let row: C64 = a[i * n..(i + 1) * n]
                .iter()
                .zip(&b[i * n..(i + 1) * n])
                .zip(w)
                .map(|((x, y), wj)| x.conj() * y * *wj)
                .sum();
            row * w[i]
        })
        .sum()
}

/// `sum_ij w_i w_j conj(a_ij) b_ij` for arbitrary rail-pair amplitudes.
pub fn inner_pair(a: &PairAmp, b: &PairAmp) -> Result<C64> {
    same_grid(&a.grid, &b.grid)?;
    Ok(weighted_inner(&a.grid, &a.values, &b.values))
}

/// Exchange-symmetric two-photon amplitude, `psi(i, j) == psi(j, i)`.
///
/// Its squared ket norm is `sum_ij w_i w_j |psi_ij|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonAmp(PairAmp);

/// Relative tolerance for accepting an amplitude as exchange-symmetric.
const SYMMETRY_TOL: f64 = 1e-12;

impl TwoPhotonAmp {
    /// Accepts `values` only if they are exchange-symmetric; the stored
    /// amplitude is then exactly symmetric.
    pub fn new(grid: Arc<SpectralGrid>, values: Vec<C64>) -> Result<Self> {
        let pair = PairAmp::from_values(grid, values)?;
        let n = pair.dim();
        let scale = pair.values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((pair.get(i, j) - pair.get(j, i)).norm());
            }
        }
        if worst > SYMMETRY_TOL * scale {
            return Err(Error::Asymmetric(worst));
        }
        Ok(Self::symmetrize(pair))
    }

    /// Exchange-symmetric part `(psi + psi^T) / 2` of an arbitrary pair amplitude.
    pub fn symmetrize(mut pair: PairAmp) -> Self {
        let n = pair.dim();
        for i in 0..n {
            for j in i + 1..n {
                let m = 0.5 * (pair.values[i * n + j] + pair.values[j * n + i]);
                pair.values[i * n + j] = m;
                pair.values[j * n + i] = m;
            }
        }
        Self(pair)
    }

    pub fn from_fn(grid: Arc<SpectralGrid>, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let n = grid.len();
        let mut pair = PairAmp::zeros(grid);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                pair.values[i * n + j] = v;
                pair.values[j * n + i] = v;
            }
        }
        Self(pair)
    }

    pub fn zeros(grid: Arc<SpectralGrid>) -> Self {
        Self(PairAmp::zeros(grid))
    }

    #[inline]
    pub fn grid(&self) -> &Arc<SpectralGrid> {
        self.0.grid()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0.get(i, j)
    }

    #[inline]
    pub fn values(&self) -> &[C64] {
        self.0.values()
    }

    pub fn as_pair(&self) -> &PairAmp {
        &self.0
    }

    pub fn into_pair(self) -> PairAmp {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    pub fn scale(&mut self, factor: C64) {
        self.0.scale(factor)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    /// `self += factor * other`; stays symmetric.
    pub fn axpy(&mut self, factor: C64, other: &Self) -> Result<()> {
        self.0.axpy(factor, &other.0)
    }

    /// The same spectral filter applied to both photons.
    pub fn filter(&mut self, filter: &[C64]) {
        self.0.filter(filter, filter)
    }

    /// `g(j) = sum_i w_i conj(u_i) psi(i, j)`
    pub fn contract(&self, u: &OnePhotonAmp) -> Result<OnePhotonAmp> {
        self.0.contract_first(u)
    }
}

/// `sum_ij w_i w_j conj(a_ij) b_ij`
pub fn inner2(a: &TwoPhotonAmp, b: &TwoPhotonAmp) -> Result<C64> {
    inner_pair(&a.0, &b.0)
}

/// `psi(i, j) = f_i f_j`
pub fn product_state(f: &OnePhotonAmp) -> TwoPhotonAmp {
    let v = f.values();
    TwoPhotonAmp::from_fn(f.grid().clone(), |i, j| v[i] * v[j])
}

/// Symmetric amplitude `(f_i g_j + g_i f_j) / 2`.
pub fn symmetric_product(f: &OnePhotonAmp, g: &OnePhotonAmp) -> Result<TwoPhotonAmp> {
    same_grid(f.grid(), g.grid())?;
    let (a, b) = (f.values(), g.values());
    Ok(TwoPhotonAmp::from_fn(f.grid().clone(), |i, j| {
        0.5 * (a[i] * b[j] + b[i] * a[j])
    }))
}

/// Spectral inversion `F(delta) -> F(-delta)` of every photon.
pub trait TimeReverse: Sized {
    fn time_reverse(&self) -> Result<Self>;
}

impl TimeReverse for OnePhotonAmp {
    fn time_reverse(&self) -> Result<Self> {
        if !self.grid.is_symmetric() {
            return Err(Error::AsymmetricGrid);
        }
        let values = self.values.iter().rev().copied().collect();
        Ok(Self {
            grid: self.grid.clone(),
            values,
        })
    }
}

impl TimeReverse for PairAmp {
    fn time_reverse(&self) -> Result<Self> {
        self.reversed(true, true)
    }
}

impl TimeReverse for TwoPhotonAmp {
    fn time_reverse(&self) -> Result<Self> {
        Ok(Self(self.0.time_reverse()?))
    }
}

pub(crate) fn check_same_grid(a: &Arc<SpectralGrid>, b: &Arc<SpectralGrid>) -> Result<()> {
    same_grid(a, b)
}
