use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64 as C64;

use super::{photon_sorter, CircuitReport, OperatingPoint};
use crate::error::{Error, Result};
use crate::spectral::PairAmp;
use crate::state::{FewPhotonState, Rail};

/// The four maximally entangled dual-rail states, with logical zero as the
/// photon in the upper rail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellState {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PsiPlus,
        BellState::PsiMinus,
        BellState::PhiPlus,
        BellState::PhiMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
        }
    }

    /// The two detector pairs that announce this state.
    pub fn detector_pairs(self) -> [(u8, u8); 2] {
        match self {
            BellState::PsiPlus => [(1, 4), (2, 3)],
            BellState::PsiMinus => [(1, 2), (3, 4)],
            BellState::PhiPlus => [(5, 8), (6, 7)],
            BellState::PhiMinus => [(5, 7), (6, 8)],
        }
    }

    /// States with one photon per logical value pair are identified from
    /// single photons; the other two from sorted pairs.
    pub fn is_psi(self) -> bool {
        matches!(self, BellState::PsiPlus | BellState::PsiMinus)
    }

    /// State announced by a detector pair, if any.
    pub fn from_detectors(pair: (u8, u8)) -> Option<Self> {
        let pair = (pair.0.min(pair.1), pair.0.max(pair.1));
        Self::ALL
            .into_iter()
            .find(|b| b.detector_pairs().contains(&pair))
    }
}

/// Detector number of each output rail: the four signal rails `u1, l1, u2,
/// l2` (after the network: A, C, B, D) and then the four sum-frequency
/// rails A', B', C', D' in the order their sorters were added.
pub const BELL_DETECTOR_OF_RAIL: [u8; 8] = [5, 6, 8, 7, 1, 3, 4, 2];

fn bell_rails() -> Vec<Rail> {
    ["u1", "l1", "u2", "l2"].into_iter().map(Rail::signal).collect()
}

/// Dual-rail input on rails `u1, l1, u2, l2` = `0, 1, 2, 3`, each photon in
/// the operating point's pulse.
pub fn bell_input(bell: BellState, op: &OperatingPoint) -> Result<FewPhotonState> {
    let f = &op.pulse;
    let ff = PairAmp::product(f, f)?;
    let mut s = FewPhotonState::empty(op.grid.clone(), bell_rails());
    let h = FRAC_1_SQRT_2;
    let (pairs, sign): ([(usize, usize); 2], f64) = match bell {
        // |01> +- |10> = u1 l2 +- l1 u2
        BellState::PsiPlus => ([(0, 3), (1, 2)], 1.0),
        BellState::PsiMinus => ([(0, 3), (1, 2)], -1.0),
        // |00> +- |11> = u1 u2 +- l1 l2
        BellState::PhiPlus => ([(0, 2), (1, 3)], 1.0),
        BellState::PhiMinus => ([(0, 2), (1, 3)], -1.0),
    };
    let mut a = ff.clone();
    a.scale(C64::new(h, 0.0));
    s.set_cross(pairs[0].0, pairs[0].1, a)?;
    let mut b = ff;
    b.scale(C64::new(sign * h, 0.0));
    s.set_cross(pairs[1].0, pairs[1].1, b)?;
    Ok(s)
}

#[derive(Debug, Clone)]
pub struct BellReport {
    pub input: BellState,
    pub report: CircuitReport,
    /// Probability per unordered detector pair (equal entries for a double
    /// click in one detector).
    pub detector_pairs: BTreeMap<(u8, u8), f64>,
}

impl BellReport {
    /// Probability outside the pairs that announce the input state, among
    /// two-click events.
    pub fn off_target(&self) -> f64 {
        let wanted = self.input.detector_pairs();
        self.detector_pairs
            .iter()
            .filter(|(k, _)| !wanted.contains(k))
            .map(|(_, v)| v)
            .sum()
    }

    /// Most probable announced state.
    pub fn decoded(&self) -> Option<BellState> {
        BellState::ALL.into_iter().max_by(|a, b| {
            let score = |s: &BellState| -> f64 {
                s.detector_pairs()
                    .iter()
                    .map(|k| self.detector_pairs.get(k).copied().unwrap_or(0.0))
                    .sum()
            };
            score(a).total_cmp(&score(b))
        })
    }
}

/// Deterministic Bell-state analyzer on rails `u1, l1, u2, l2`.
///
/// Balanced beamsplitters mix `u1` with `u2` (outputs A, B) and `l1` with
/// `l2` (C, D); a photon sorter on each output sends single photons to the
/// sum-frequency detectors 1-4 and keeps pairs; the pairs then cross two
/// more balanced layers, A-C and B-D followed by A-B and C-D, before the
/// detectors 5-8.
pub fn bell_analyzer(state: &FewPhotonState, op: &OperatingPoint, input: BellState) -> Result<BellReport> {
    if state.n_rails() != 4 || state.max_photons() != 2 || state.vacuum_amp().norm() > 0.0 {
        return Err(Error::Input(
            "the analyzer takes a two-photon state on four rails".into(),
        ));
    }
    let (a, c, b, d) = (0, 1, 2, 3);
    let mut s = state.beamsplitter(0, 2, FRAC_PI_4, 0.0)?;
    s = s.beamsplitter(1, 3, FRAC_PI_4, 0.0)?;
    for rail in [a, b, c, d] {
        s = photon_sorter(&s, rail, op)?.state;
    }
    s = s.beamsplitter(a, c, FRAC_PI_4, 0.0)?;
    s = s.beamsplitter(b, d, FRAC_PI_4, 0.0)?;
    s = s.beamsplitter(a, b, FRAC_PI_4, 0.0)?;
    s = s.beamsplitter(c, d, FRAC_PI_4, 0.0)?;

    let mut detector_pairs = BTreeMap::new();
    for (pattern, p) in s.detection_distribution() {
        if let [x, y] = pattern.rails()[..] {
            let (dx, dy) = (BELL_DETECTOR_OF_RAIL[x], BELL_DETECTOR_OF_RAIL[y]);
            *detector_pairs.entry((dx.min(dy), dx.max(dy))).or_insert(0.0) += p;
        }
    }
    let success = input
        .detector_pairs()
        .iter()
        .map(|k| detector_pairs.get(k).copied().unwrap_or(0.0))
        .sum();
    Ok(BellReport {
        input,
        report: CircuitReport::new(s, success, None),
        detector_pairs,
    })
}
