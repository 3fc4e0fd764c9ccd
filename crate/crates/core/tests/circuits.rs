use std::sync::OnceLock;

use tlsphot::circuits::*;
use tlsphot::spectral::product_state;
use tlsphot::tls::{epsilon1_analytic, epsilon_b_analytic, Branch};
use tlsphot::*;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn lossless() -> &'static OperatingPoint {
    static OP: OnceLock<OperatingPoint> = OnceLock::new();
    OP.get_or_init(|| OperatingPoint::matched(TlsParams::lossless(), Branch::Upper, &GridSpec::CIRCUIT).unwrap())
}

fn lossy() -> &'static OperatingPoint {
    static OP: OnceLock<OperatingPoint> = OnceLock::new();
    OP.get_or_init(|| {
        OperatingPoint::matched(TlsParams::from_beta(0.95).unwrap(), Branch::Upper, &GridSpec::CIRCUIT).unwrap()
    })
}

/// Closed-form survival probabilities at the operating point's width.
fn analytic_eps(op: &OperatingPoint) -> (f64, f64) {
    (
        epsilon1_analytic(&op.params, op.sigma).unwrap(),
        epsilon_b_analytic(&op.params, op.sigma).unwrap(),
    )
}

fn one_or_two(op: &OperatingPoint, alpha: f64, xi: f64) -> FewPhotonState {
    let mut s = FewPhotonState::empty(op.grid.clone(), vec![Rail::signal("a")]);
    s.set_one(0, op.pulse.scaled(c(alpha))).unwrap();
    s.set_same(0, product_state(&op.pulse).scaled(c(xi))).unwrap();
    s
}

fn w1(a: Option<&OnePhotonAmp>) -> f64 {
    a.map_or(0.0, |v| v.norm_sqr())
}

fn w2(a: Option<&TwoPhotonAmp>) -> f64 {
    a.map_or(0.0, |v| v.norm_sqr())
}

#[test]
fn matched_operating_point() {
    let op = lossless();
    assert!((op.sigma - 1.250_495_887_6).abs() < 1e-8);
    assert!((op.epsilon1 - 1.0).abs() < 1e-12);
    assert!(op.mismatch().abs() < 1e-4);
    assert!((op.pump_mode().norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn sorter_separates_photon_numbers() {
    let op = lossless();
    let out = photon_sorter(&one_or_two(op, 0.6, 0.8), 0, op).unwrap();
    let singles = w1(out.state.one_photon(out.ancilla));
    let pairs = w2(out.state.same_rail(0));
    assert!((singles - 0.36).abs() < 1e-3, "{singles}");
    assert!((pairs - 0.64).abs() < 1e-3, "{pairs}");
    assert!(w1(out.state.one_photon(0)) < 1e-12);
    assert!(w2(out.state.same_rail(out.ancilla)) < 1e-6);
    assert!(out.mismatch.abs() < 1e-4);
    assert!(out.leakage > 0.0);
    assert_eq!(out.state.rails()[out.ancilla].carrier, Carrier::SumFrequency);
}

#[test]
fn sorter_passes_vacuum() {
    let op = lossless();
    let s = FewPhotonState::vacuum(op.grid.clone(), vec![Rail::signal("a")]);
    let out = photon_sorter(&s, 0, op).unwrap();
    assert_eq!(out.state.vacuum_amp(), c(1.0));
    assert_eq!(out.state.max_photons(), 0);
    assert_eq!(out.leakage, 0.0);
}

#[test]
fn lossy_sorter_weights() {
    let op = lossy();
    let (e1, eb) = analytic_eps(op);
    let out = photon_sorter(&one_or_two(op, 0.6, 0.8), 0, op).unwrap();
    let singles = w1(out.state.one_photon(out.ancilla));
    let pairs = w2(out.state.same_rail(0));
    assert!((singles - 0.36 * e1).abs() < 1e-3, "{singles}");
    assert!((pairs - 0.64 * (eb - e1 * e1)).abs() < 1e-3, "{pairs}");
    assert!((out.state.total_probability() - 1.0).abs() < 1e-3);
}

#[test]
fn bell_states_reach_their_own_detectors() {
    let op = lossless();
    for bell in BellState::ALL {
        let r = bell_analyzer(&bell_input(bell, op).unwrap(), op, bell).unwrap();
        assert!(r.off_target() < 1e-6, "{}: {}", bell.name(), r.off_target());
        assert_eq!(r.decoded(), Some(bell));
        for pair in bell.detector_pairs() {
            let p = r.detector_pairs[&pair];
            assert!((p - 0.5).abs() < 1e-5, "{} {pair:?}: {p}", bell.name());
        }
        assert!((r.report.success_prob - 1.0).abs() < 1e-5);
    }
}

#[test]
fn bell_detector_pairs_are_consistent() {
    for bell in BellState::ALL {
        for pair in bell.detector_pairs() {
            assert_eq!(BellState::from_detectors(pair), Some(bell));
        }
    }
    assert_eq!(BellState::from_detectors((1, 5)), None);
    let mut rails = BELL_DETECTOR_OF_RAIL.to_vec();
    rails.sort_unstable();
    assert_eq!(rails, (1..=8).collect::<Vec<u8>>());
}

#[test]
fn lossy_bell_success() {
    let op = lossy();
    let (e1, eb) = analytic_eps(op);
    let psi = bell_analyzer(&bell_input(BellState::PsiMinus, op).unwrap(), op, BellState::PsiMinus).unwrap();
    let phi = bell_analyzer(&bell_input(BellState::PhiPlus, op).unwrap(), op, BellState::PhiPlus).unwrap();
    assert!((psi.report.success_prob - e1 * e1).abs() < 1e-3);
    assert!((phi.report.success_prob - (eb - e1 * e1)).abs() < 1e-3);
    assert!((0.5 * (psi.report.success_prob + phi.report.success_prob) - 0.5 * eb).abs() < 1e-3);
    assert!((psi.report.output.total_probability() - 1.0).abs() < 1e-3);
}

#[test]
fn bell_analyzer_rejects_other_inputs() {
    let op = lossless();
    let s = FewPhotonState::vacuum(op.grid.clone(), (0..4).map(|k| Rail::signal(format!("{k}"))).collect());
    assert!(bell_analyzer(&s, op, BellState::PsiPlus).is_err());
}

fn ns_input(op: &OperatingPoint) -> (FewPhotonState, [C64; 3]) {
    let amps = [c(0.5), C64::new(0.3, 0.4), C64::new(0.0, 0.5f64.sqrt())];
    let mut s = FewPhotonState::empty(op.grid.clone(), vec![Rail::signal("a")]);
    s.set_vacuum(amps[0]);
    s.set_one(0, op.pulse.scaled(amps[1])).unwrap();
    s.set_same(0, product_state(&op.pulse).scaled(amps[2])).unwrap();
    (s, amps)
}

#[test]
fn ns_gate_flips_the_pair_sign() {
    let op = lossless();
    let (s, amps) = ns_input(op);
    let out = ns_gate(&s, 0, op, None).unwrap();
    let target = ns_target(&s, 0, op, amps).unwrap();
    assert!(out.fidelity(&target).unwrap() > 1.0 - 1e-9);
    assert!((out.total_probability() - 1.0).abs() < 1e-5);
    assert_eq!(out.n_rails(), 1);
}

#[test]
fn ns_gate_twice_is_identity() {
    let op = lossless();
    let (s, _) = ns_input(op);
    let twice = ns_gate(&ns_gate(&s, 0, op, None).unwrap(), 0, op, None).unwrap();
    assert!(twice.fidelity(&s).unwrap() > 1.0 - 1e-9);
}

#[test]
fn lossy_ns_gate_amplitudes() {
    let op = lossy();
    let (e1, _) = analytic_eps(op);
    let (s, _) = ns_input(op);
    let out = ns_gate(&s, 0, op, None).unwrap();
    let one = inner1(&op.pulse, out.one_photon(0).unwrap()).unwrap() / C64::new(0.3, 0.4);
    let two = inner2(&product_state(&op.pulse), out.same_rail(0).unwrap()).unwrap()
        / C64::new(0.0, 0.5f64.sqrt());
    assert!((one - c(e1)).norm() < 1e-3, "{one}");
    assert!((two + c(e1 * e1)).norm() < 1e-3, "{two}");
    assert_eq!(out.vacuum_amp(), c(0.5));
}

#[test]
fn compensation_factor() {
    assert_eq!(compensation_eta2(lossless()).unwrap(), 1.0);
    let op = lossy();
    let (e1, eb) = analytic_eps(op);
    let eta2 = compensation_eta2(op).unwrap();
    assert!((eta2 - e1 * e1 / (eb - e1 * e1)).abs() < 1e-4, "{eta2}");
    assert!(eta2 < 1.0);
}

fn basis_amps(k: usize) -> [C64; 4] {
    let mut a = [c(0.0); 4];
    a[k] = c(1.0);
    a
}

#[test]
fn cz_truth_table() {
    let op = lossless();
    for k in 0..4 {
        let r = cz_gate(&logical_state(op, basis_amps(k)).unwrap(), op, CzOptions::default()).unwrap();
        let expected = cz_oracle(basis_amps(k));
        for (got, want) in r.logical.iter().zip(&expected) {
            assert!((got - want).norm() < 1e-5, "|{k:02b}>: {got} vs {want}");
        }
        // Nothing outside the dual-rail code space.
        let stray: f64 = r
            .report
            .patterns
            .iter()
            .filter(|(p, _)| p.counts()[0] + p.counts()[1] != 1 || p.counts()[2] + p.counts()[3] != 1)
            .map(|(_, v)| v)
            .sum();
        assert!(stray < 1e-6, "{stray}");
    }
}

#[test]
fn cz_superposition_fidelity() {
    let op = lossless();
    let amps = [c(0.5), C64::new(0.0, 0.5), c(-0.5), C64::new(0.3, 0.4)];
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let amps = amps.map(|a| a / norm);
    let r = cz_gate(&logical_state(op, amps).unwrap(), op, CzOptions::default()).unwrap();
    assert!(r.report.fidelity.unwrap() > 1.0 - 1e-9);
    assert!((r.report.success_prob - 1.0).abs() < 1e-5);
    for (a, b) in r.input.iter().zip(&amps) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn lossy_cz_is_balanced_with_compensation() {
    let op = lossy();
    let (e1, eb) = analytic_eps(op);
    let amps = [c(0.5); 4];
    let on = cz_gate(&logical_state(op, amps).unwrap(), op, CzOptions::default()).unwrap();
    for a in on.logical {
        assert!((a.norm() / 0.5 - e1 * e1).abs() < 1e-3, "{a}");
    }
    assert!((on.report.success_prob - e1.powi(4)).abs() < 1e-3);
    assert!(on.report.fidelity.unwrap() > 1.0 - 1e-6);
    let mags = on.logical.map(|a| a.norm());
    let skew = mags.iter().cloned().fold(0.0, f64::max) - mags.iter().cloned().fold(1.0, f64::min);
    assert!(skew < 1e-4, "{skew}");

    let off = cz_gate(
        &logical_state(op, amps).unwrap(),
        op,
        CzOptions { compensate: false, ..CzOptions::default() },
    )
    .unwrap();
    let mags = off.logical.map(|a| a.norm() / 0.5);
    assert!((mags[1] - (eb - e1 * e1)).abs() < 1e-3, "{}", mags[1]);
    for k in [0, 2, 3] {
        assert!((mags[k] - e1 * e1).abs() < 1e-3);
    }
}

#[test]
fn cz_rejects_malformed_options_and_inputs() {
    let op = lossless();
    let s = logical_state(op, basis_amps(0)).unwrap();
    let bad = CzOptions { outer_transmission: Some(1.5), ..CzOptions::default() };
    assert!(cz_gate(&s, op, bad).is_err());
    assert!(dual_rail_basis(2, 0, op).is_err());
    let lone = FewPhotonState::vacuum(op.grid.clone(), vec![Rail::signal("x"); 4]);
    assert!(cz_gate(&lone, op, CzOptions::default()).is_err());
}

#[test]
fn success_curve_rows() {
    let rows = success_curves(&[1.0, 0.95, 0.9], Branch::Upper, &GridSpec::ANALYSIS).unwrap();
    assert!((rows[0].bell_success() - 1.0).abs() < 1e-4);
    assert!((rows[0].cz_success() - 1.0).abs() < 1e-12);
    assert!(rows[0].pair_loss().abs() < 1e-4);
    for w in rows.windows(2) {
        assert!(w[1].bell_success() < w[0].bell_success());
        assert!(w[1].cz_success() < w[0].cz_success());
    }
    for r in &rows {
        // Both are one at beta = 1, up to the root tolerance.
        assert!(r.bell_success() >= r.cz_success() - 1e-9);
        assert!(r.pair_loss() < r.independent_loss() || r.beta == 1.0);
    }
    let op = lossy();
    let (e1, eb) = analytic_eps(op);
    assert!((rows[1].epsilon1 - e1).abs() < 1e-12 && (rows[1].epsilon_b - eb).abs() < 1e-12);
}
