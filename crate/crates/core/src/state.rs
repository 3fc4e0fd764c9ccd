//! Few-photon multi-rail states: at most two photons in total, each sector
//! carrying its own spectral amplitude, plus the probability that has left
//! the guided modes.
//!
//! Ket conventions, with `a_r(x)` the annihilator of rail `r` at detuning `x`:
//!
//! * one photon on rail `r`: `int f(x) a_r^+(x) |0>`
//! * two photons on rail `r`: `(1/sqrt 2) iint psi(x, y) a_r^+(x) a_r^+(y) |0>`
//!   with `psi` exchange-symmetric
//! * one photon on each of rails `a < b`: `iint chi(x, y) a_a^+(x) a_b^+(y) |0>`
//!
//! so every sector's squared ket norm is its plain quadrature norm.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{check_unit, Error, Result};
use crate::spectral::{
    check_same_grid, inner1, inner2, inner_pair, OnePhotonAmp, PairAmp, SpectralGrid,
    TwoPhotonAmp,
};
use crate::tls::{scatter_one, scatter_two, TlsParams};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Carrier frequency band of a rail. Only rails in the same band interfere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Carrier {
    Signal,
    SumFrequency,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rail {
    pub label: String,
    pub carrier: Carrier,
}

impl Rail {
    pub fn signal(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            carrier: Carrier::Signal,
        }
    }

    pub fn sum_frequency(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            carrier: Carrier::SumFrequency,
        }
    }
}

/// A sector of the state, addressed for per-component operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Vacuum,
    One(usize),
    /// Both photons on one rail.
    Same(usize),
    /// One photon on each of two rails (order is irrelevant).
    Cross(usize, usize),
}

impl Component {
    pub fn photons(self) -> i32 {
        match self {
            Component::Vacuum => 0,
            Component::One(_) => 1,
            Component::Same(_) | Component::Cross(..) => 2,
        }
    }
}

/// Photon count per rail.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DetectionPattern(Vec<u8>);

impl DetectionPattern {
    pub fn new(counts: Vec<u8>) -> Result<Self> {
        let total: u32 = counts.iter().map(|&c| c as u32).sum();
        if total > 2 {
            return Err(Error::Input(format!(
                "pattern holds {total} photons, at most 2 are representable"
            )));
        }
        Ok(Self(counts))
    }

    /// Pattern on `n_rails` rails with one count per listed rail.
    pub fn from_rails(n_rails: usize, rails: &[usize]) -> Result<Self> {
        let mut counts = vec![0u8; n_rails];
        for &r in rails {
            *counts
                .get_mut(r)
                .ok_or(Error::NoSuchRail(r))? += 1;
        }
        Self::new(counts)
    }

    pub fn counts(&self) -> &[u8] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&c| c as u32).sum()
    }

    /// Rails that fired, repeated for double counts.
    pub fn rails(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(r, &c)| std::iter::repeat(r).take(c as usize))
            .collect()
    }
}

impl fmt::Display for DetectionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(r, c)| format!("{r}:{c}"))
            .collect();
        if parts.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&parts.join(","))
        }
    }
}

#[derive(Debug, Clone)]
pub struct FewPhotonState {
    grid: Arc<SpectralGrid>,
    rails: Vec<Rail>,
    vacuum: C64,
    one: BTreeMap<usize, OnePhotonAmp>,
    same: BTreeMap<usize, TwoPhotonAmp>,
    cross: BTreeMap<(usize, usize), PairAmp>,
    lost_mass: f64,
}

impl FewPhotonState {
    /// The vacuum on the given rails.
    pub fn vacuum(grid: Arc<SpectralGrid>, rails: Vec<Rail>) -> Self {
        Self {
            grid,
            rails,
            vacuum: ONE,
            one: BTreeMap::new(),
            same: BTreeMap::new(),
            cross: BTreeMap::new(),
            lost_mass: 0.0,
        }
    }

    /// An all-zero state (no vacuum amplitude) to be filled with `set_*`.
    pub fn empty(grid: Arc<SpectralGrid>, rails: Vec<Rail>) -> Self {
        let mut s = Self::vacuum(grid, rails);
        s.vacuum = ZERO;
        s
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn rails(&self) -> &[Rail] {
        &self.rails
    }

    pub fn n_rails(&self) -> usize {
        self.rails.len()
    }

    pub fn vacuum_amp(&self) -> C64 {
        self.vacuum
    }

    pub fn one_photon(&self, rail: usize) -> Option<&OnePhotonAmp> {
        self.one.get(&rail)
    }

    pub fn same_rail(&self, rail: usize) -> Option<&TwoPhotonAmp> {
        self.same.get(&rail)
    }

    /// Cross-rail pair amplitude with the first index on `min(a, b)`.
    pub fn cross_pair(&self, a: usize, b: usize) -> Option<&PairAmp> {
        self.cross.get(&(a.min(b), a.max(b)))
    }

    pub fn lost_mass(&self) -> f64 {
        self.lost_mass
    }

    fn check_rail(&self, r: usize) -> Result<()> {
        if r < self.rails.len() {
            Ok(())
        } else {
            Err(Error::NoSuchRail(r))
        }
    }

    pub fn set_vacuum(&mut self, amp: C64) {
        self.vacuum = amp;
    }

    pub fn set_one(&mut self, rail: usize, amp: OnePhotonAmp) -> Result<()> {
        self.check_rail(rail)?;
        check_same_grid(&self.grid, amp.grid())?;
        self.one.insert(rail, amp);
        Ok(())
    }

    pub fn set_same(&mut self, rail: usize, amp: TwoPhotonAmp) -> Result<()> {
        self.check_rail(rail)?;
        check_same_grid(&self.grid, amp.grid())?;
        self.same.insert(rail, amp);
        Ok(())
    }

    /// Sets the pair amplitude with its first index on rail `a`.
    pub fn set_cross(&mut self, a: usize, b: usize, amp: PairAmp) -> Result<()> {
        self.check_rail(a)?;
        self.check_rail(b)?;
        if a == b {
            return Err(Error::Input("cross pair needs two distinct rails".into()));
        }
        check_same_grid(&self.grid, amp.grid())?;
        let amp = if a < b { amp } else { amp.transposed() };
        self.cross.insert((a.min(b), a.max(b)), amp);
        Ok(())
    }

    /// Probability still in the guided modes.
    pub fn norm_sqr(&self) -> f64 {
        self.vacuum.norm_sqr()
            + self.one.values().map(OnePhotonAmp::norm_sqr).sum::<f64>()
            + self.same.values().map(TwoPhotonAmp::norm_sqr).sum::<f64>()
            + self.cross.values().map(PairAmp::norm_sqr).sum::<f64>()
    }

    /// Guided probability plus the lost mass; one for a physical state.
    pub fn total_probability(&self) -> f64 {
        self.norm_sqr() + self.lost_mass
    }

    /// Rescales the guided part to unit norm and clears the lost mass.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n <= 0.0 {
            return Err(Error::Contract("cannot normalize a zero state".into()));
        }
        let mut s = self.scaled(C64::new(1.0 / n.sqrt(), 0.0));
        s.lost_mass = 0.0;
        Ok(s)
    }

    fn scaled(&self, k: C64) -> Self {
        let mut s = self.clone();
        s.vacuum *= k;
        s.one.values_mut().for_each(|a| *a = a.scaled(k));
        s.same.values_mut().for_each(|a| a.scale(k));
        s.cross.values_mut().for_each(|a| a.scale(k));
        s
    }

    /// Highest photon number with nonzero amplitude in any sector.
    pub fn max_photons(&self) -> usize {
        if !self.same.is_empty() || !self.cross.is_empty() {
            2
        } else if !self.one.is_empty() {
            1
        } else {
            0
        }
    }

    /// True if no sector holds a photon on `rail`.
    pub fn rail_is_empty(&self, rail: usize) -> bool {
        !self.one.contains_key(&rail)
            && !self.same.contains_key(&rail)
            && !self.cross.keys().any(|&(a, b)| a == rail || b == rail)
    }

    /// Appends an empty rail and returns its index.
    pub fn add_rail(&mut self, rail: Rail) -> usize {
        self.rails.push(rail);
        self.rails.len() - 1
    }

    /// Drops an empty rail, shifting higher indices down by one.
    pub fn remove_rail(&self, rail: usize) -> Result<Self> {
        self.check_rail(rail)?;
        if !self.rail_is_empty(rail) {
            return Err(Error::Contract(format!(
                "rail {rail} still holds photons and cannot be removed"
            )));
        }
        let shift = |r: usize| if r > rail { r - 1 } else { r };
        let mut s = self.clone();
        s.rails.remove(rail);
        s.one = self.one.iter().map(|(&r, a)| (shift(r), a.clone())).collect();
        s.same = self.same.iter().map(|(&r, a)| (shift(r), a.clone())).collect();
        s.cross = self
            .cross
            .iter()
            .map(|(&(a, b), v)| ((shift(a), shift(b)), v.clone()))
            .collect();
        Ok(s)
    }

    /// Frequency-independent linear-optical map on the listed rails.
    ///
    /// `matrix[k][l]` is the amplitude for a photon entering `rails[k]` to
    /// leave in `rails[l]`; rails not listed are untouched. The matrix must be
    /// unitary for the bookkeeping to stay exact, which is not checked here.
    pub fn linear_optics(&self, rails: &[usize], matrix: &[Vec<C64>]) -> Result<Self> {
        for &r in rails {
            self.check_rail(r)?;
        }
        if matrix.len() != rails.len() || matrix.iter().any(|row| row.len() != rails.len()) {
            return Err(Error::Input("mode matrix does not match rail list".into()));
        }
        for (k, &a) in rails.iter().enumerate() {
            if rails[..k].contains(&a) {
                return Err(Error::Input(format!("rail {a} listed twice")));
            }
            for &b in &rails[k + 1..] {
                if self.rails[a].carrier != self.rails[b].carrier {
                    return Err(Error::CarrierMismatch(a, b));
                }
            }
        }
        let targets = |src: usize| -> Vec<(usize, C64)> {
            match rails.iter().position(|&r| r == src) {
                Some(k) => rails
                    .iter()
                    .zip(&matrix[k])
                    .filter(|(_, m)| **m != ZERO)
                    .map(|(&d, &m)| (d, m))
                    .collect(),
                None => vec![(src, ONE)],
            }
        };

        let mut out = Accumulator::new(&self.grid);
        for (&src, amp) in &self.one {
            for (d, m) in targets(src) {
                out.add_one(d, m, amp)?;
            }
        }
        for (&src, amp) in &self.same {
            let tg = targets(src);
            for &(d, md) in &tg {
                for &(e, me) in &tg {
                    out.add_ordered(d, e, md * me / SQRT_2, amp.as_pair())?;
                }
            }
        }
        for (&(a, b), amp) in &self.cross {
            let tb = targets(b);
            for (d, md) in targets(a) {
                for &(e, me) in &tb {
                    out.add_ordered(d, e, md * me, amp)?;
                }
            }
        }
        Ok(out.finish(self))
    }

    /// Beamsplitter `a_i -> cos(theta) a_i + e^{i phi} sin(theta) a_j`,
    /// `a_j -> -e^{-i phi} sin(theta) a_i + cos(theta) a_j`.
    pub fn beamsplitter(&self, i: usize, j: usize, theta: f64, phi: f64) -> Result<Self> {
        if i == j {
            return Err(Error::Input("beamsplitter needs two distinct rails".into()));
        }
        let (c, s) = (C64::new(theta.cos(), 0.0), theta.sin());
        let m = vec![
            vec![c, C64::from_polar(s, phi)],
            vec![-C64::from_polar(s, -phi), c],
        ];
        self.linear_optics(&[i, j], &m)
    }

    /// Exchanges the contents of rails `i` and `j`.
    pub fn swap_rails(&self, i: usize, j: usize) -> Result<Self> {
        let m = vec![vec![ZERO, ONE], vec![ONE, ZERO]];
        self.linear_optics(&[i, j], &m)
    }

    /// Per-photon amplitude transmission on `rail`; the removed probability
    /// is booked as lost.
    pub fn loss_channel(&self, rail: usize, amp_transmission: f64) -> Result<Self> {
        self.check_rail(rail)?;
        check_unit("amp_transmission", amp_transmission)?;
        let filter = vec![C64::new(amp_transmission, 0.0); self.grid.len()];
        Ok(self.filter_rail(rail, &filter, |amp| amp.scaled(C64::new(amp_transmission.powi(2), 0.0)), true))
    }

    /// Applies a diagonal spectral filter to every photon on `rail`, with
    /// `same_rail` handling the two-photon sector (which need not factorize).
    fn filter_rail(
        &self,
        rail: usize,
        filter: &[C64],
        same_rail: impl Fn(&TwoPhotonAmp) -> TwoPhotonAmp,
        book_loss: bool,
    ) -> Self {
        let before = self.norm_sqr();
        let ones = vec![ONE; filter.len()];
        let mut s = self.clone();
        if let Some(a) = s.one.get_mut(&rail) {
            let v: Vec<C64> = a.values().iter().zip(filter).map(|(x, f)| x * f).collect();
            a.values_mut().copy_from_slice(&v);
        }
        if let Some(a) = s.same.get_mut(&rail) {
            *a = same_rail(a);
        }
        for (&(a, b), amp) in s.cross.iter_mut() {
            if a == rail {
                amp.filter(filter, &ones);
            } else if b == rail {
                amp.filter(&ones, filter);
            }
        }
        if book_loss {
            s.lost_mass += (before - s.norm_sqr()).max(0.0);
        }
        s
    }

    /// Passes every photon on `rail` through the emitter.
    ///
    /// Probability leaving the guided modes is booked as lost only for a
    /// lossy emitter; a lossless one is unitary, so any deficit there is
    /// discretization error and stays visible in [`Self::total_probability`].
    pub fn apply_tls(&self, rail: usize, p: &TlsParams) -> Result<Self> {
        self.check_rail(rail)?;
        let t: Vec<C64> = self.grid.samples().map(|d| p.transfer_coeff(d)).collect();
        let mut s = self.filter_rail(rail, &t, |psi| scatter_two(p, psi), !p.is_lossless());
        if let Some(a) = self.one.get(&rail) {
            s.one.insert(rail, scatter_one(p, a).out);
        }
        Ok(s)
    }

    /// Applies `op` to every spectral amplitude index that sits on `rail`.
    pub(crate) fn map_rail_indices(
        &self,
        rail: usize,
        one: impl Fn(&OnePhotonAmp) -> Result<OnePhotonAmp>,
        same: impl Fn(&TwoPhotonAmp) -> Result<TwoPhotonAmp>,
        first: impl Fn(&PairAmp) -> Result<PairAmp>,
        second: impl Fn(&PairAmp) -> Result<PairAmp>,
    ) -> Result<Self> {
        self.check_rail(rail)?;
        let mut s = self.clone();
        if let Some(a) = s.one.get_mut(&rail) {
            *a = one(a)?;
        }
        if let Some(a) = s.same.get_mut(&rail) {
            *a = same(a)?;
        }
        for (&(a, b), amp) in s.cross.iter_mut() {
            if a == rail {
                *amp = first(amp)?;
            } else if b == rail {
                *amp = second(amp)?;
            }
        }
        Ok(s)
    }

    /// Multiplies one sector by `factor` and books the removed probability
    /// as lost.
    pub(crate) fn scale_component(&mut self, component: Component, factor: C64) -> Result<()> {
        let before = self.norm_sqr();
        match component {
            Component::Vacuum => self.vacuum *= factor,
            Component::One(r) => {
                self.check_rail(r)?;
                if let Some(a) = self.one.get_mut(&r) {
                    *a = a.scaled(factor);
                }
            }
            Component::Same(r) => {
                self.check_rail(r)?;
                if let Some(a) = self.same.get_mut(&r) {
                    a.scale(factor);
                }
            }
            Component::Cross(a, b) => {
                self.check_rail(a)?;
                self.check_rail(b)?;
                if let Some(v) = self.cross.get_mut(&(a.min(b), a.max(b))) {
                    v.scale(factor);
                }
            }
        }
        self.lost_mass += (before - self.norm_sqr()).max(0.0);
        Ok(())
    }

    pub(crate) fn take_one(&mut self, rail: usize) -> Option<OnePhotonAmp> {
        self.one.remove(&rail)
    }

    pub(crate) fn take_same(&mut self, rail: usize) -> Option<TwoPhotonAmp> {
        self.same.remove(&rail)
    }

    /// Removes every cross pair touching `rail`, returned as
    /// `(other rail, amplitude with the first index on rail)`.
    pub(crate) fn take_cross_with(&mut self, rail: usize) -> Vec<(usize, PairAmp)> {
        let keys: Vec<_> = self
            .cross
            .keys()
            .filter(|&&(a, b)| a == rail || b == rail)
            .copied()
            .collect();
        keys.into_iter()
            .map(|k| {
                let amp = self.cross.remove(&k).expect("key listed above");
                if k.0 == rail {
                    (k.1, amp)
                } else {
                    (k.0, amp.transposed())
                }
            })
            .collect()
    }

    pub(crate) fn add_lost(&mut self, p: f64) {
        self.lost_mass += p.max(0.0);
    }

    /// Adds `factor * amp` to the one-photon sector of `rail`.
    pub(crate) fn add_one(&mut self, rail: usize, factor: C64, amp: &OnePhotonAmp) -> Result<()> {
        match self.one.get_mut(&rail) {
            Some(a) => *a = a.add_scaled(factor, amp)?,
            None => {
                self.one.insert(rail, amp.scaled(factor));
            }
        }
        Ok(())
    }

    /// Adds `factor * amp` as an ordered pair amplitude (first index on `a`);
    /// see [`Accumulator::add_ordered`] for the same-rail convention.
    pub(crate) fn add_pair(&mut self, a: usize, b: usize, factor: C64, amp: &PairAmp) -> Result<()> {
        let mut acc = Accumulator::new(&self.grid);
        acc.add_ordered(a, b, factor, amp)?;
        for (r, v) in acc.same {
            let v = TwoPhotonAmp::symmetrize(v);
            match self.same.get_mut(&r) {
                Some(x) => x.axpy(ONE, &v)?,
                None => {
                    self.same.insert(r, v);
                }
            }
        }
        for (k, v) in acc.cross {
            match self.cross.get_mut(&k) {
                Some(x) => x.axpy(ONE, &v)?,
                None => {
                    self.cross.insert(k, v);
                }
            }
        }
        Ok(())
    }

    /// Probability of observing exactly `pattern`, integrated over spectra.
    pub fn project_detection(&self, pattern: &DetectionPattern) -> Result<f64> {
        if pattern.counts().len() != self.rails.len() {
            return Err(Error::Input(format!(
                "pattern covers {} rails, state has {}",
                pattern.counts().len(),
                self.rails.len()
            )));
        }
        Ok(match pattern.rails().as_slice() {
            [] => self.vacuum.norm_sqr(),
            [r] => self.one.get(r).map_or(0.0, OnePhotonAmp::norm_sqr),
            [a, b] if a == b => self.same.get(a).map_or(0.0, TwoPhotonAmp::norm_sqr),
            [a, b] => self.cross.get(&(*a, *b)).map_or(0.0, PairAmp::norm_sqr),
            _ => unreachable!("patterns hold at most two photons"),
        })
    }

    /// Probability of every populated detection pattern.
    pub fn detection_distribution(&self) -> BTreeMap<DetectionPattern, f64> {
        let n = self.rails.len();
        let pat = |rails: &[usize]| DetectionPattern::from_rails(n, rails).expect("valid rails");
        let mut out = BTreeMap::new();
        if self.vacuum != ZERO {
            out.insert(pat(&[]), self.vacuum.norm_sqr());
        }
        for (&r, a) in &self.one {
            out.insert(pat(&[r]), a.norm_sqr());
        }
        for (&r, a) in &self.same {
            out.insert(pat(&[r, r]), a.norm_sqr());
        }
        for (&(a, b), v) in &self.cross {
            out.insert(pat(&[a, b]), v.norm_sqr());
        }
        out
    }

    /// `<other|self>` over the guided sectors.
    pub fn overlap(&self, other: &Self) -> Result<C64> {
        check_same_grid(&self.grid, &other.grid)?;
        if self.rails.len() != other.rails.len() {
            return Err(Error::Input("states have different rail counts".into()));
        }
        let mut acc = other.vacuum.conj() * self.vacuum;
        for (r, a) in &other.one {
            if let Some(b) = self.one.get(r) {
                acc += inner1(a, b)?;
            }
        }
        for (r, a) in &other.same {
            if let Some(b) = self.same.get(r) {
                acc += inner2(a, b)?;
            }
        }
        for (k, a) in &other.cross {
            if let Some(b) = self.cross.get(k) {
                acc += inner_pair(a, b)?;
            }
        }
        Ok(acc)
    }

    /// `|<target|self>|^2` with both states renormalized over their guided
    /// part: the fidelity conditioned on no photon having been lost.
    pub fn fidelity(&self, target: &Self) -> Result<f64> {
        let o = self.overlap(target)?;
        let n = self.norm_sqr() * target.norm_sqr();
        if n <= 0.0 {
            return Err(Error::Contract("fidelity with a zero state".into()));
        }
        Ok(o.norm_sqr() / n)
    }
}

/// Collects sector contributions of a linear map before they are frozen
/// into a state.
struct Accumulator {
    grid: Arc<SpectralGrid>,
    one: BTreeMap<usize, OnePhotonAmp>,
    /// Same-rail sectors, symmetrized in `finish`.
    same: BTreeMap<usize, PairAmp>,
    cross: BTreeMap<(usize, usize), PairAmp>,
}

impl Accumulator {
    fn new(grid: &Arc<SpectralGrid>) -> Self {
        Self {
            grid: grid.clone(),
            one: BTreeMap::new(),
            same: BTreeMap::new(),
            cross: BTreeMap::new(),
        }
    }

    fn add_one(&mut self, rail: usize, factor: C64, amp: &OnePhotonAmp) -> Result<()> {
        let slot = self
            .one
            .entry(rail)
            .or_insert_with(|| OnePhotonAmp::zeros(self.grid.clone()));
        *slot = slot.add_scaled(factor, amp)?;
        Ok(())
    }

    /// Adds the ket `factor * iint amp(x, y) a_a^+(x) a_b^+(y) |0>`.
    ///
    /// For `a == b` this is `(1/sqrt 2) iint sqrt(2) factor amp a^+ a^+`, so
    /// the same-rail sector receives `sqrt(2) * factor * sym(amp)`.
    fn add_ordered(&mut self, a: usize, b: usize, factor: C64, amp: &PairAmp) -> Result<()> {
        if factor == ZERO {
            return Ok(());
        }
        let grid = self.grid.clone();
        if a == b {
            let slot = self.same.entry(a).or_insert_with(|| PairAmp::zeros(grid));
            slot.axpy(factor * SQRT_2, amp)
        } else if a < b {
            let slot = self.cross.entry((a, b)).or_insert_with(|| PairAmp::zeros(grid));
            slot.axpy(factor, amp)
        } else {
            let slot = self.cross.entry((b, a)).or_insert_with(|| PairAmp::zeros(grid));
            slot.axpy_transposed(factor, amp)
        }
    }

    fn finish(self, template: &FewPhotonState) -> FewPhotonState {
        FewPhotonState {
            grid: template.grid.clone(),
            rails: template.rails.clone(),
            vacuum: template.vacuum,
            one: self.one,
            same: self
                .same
                .into_iter()
                .map(|(r, v)| (r, TwoPhotonAmp::symmetrize(v)))
                .collect(),
            cross: self.cross,
            lost_mass: template.lost_mass,
        }
    }
}
