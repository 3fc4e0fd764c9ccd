use std::sync::OnceLock;

use tlsphot::sweeps::*;
use tlsphot::tls::Branch;
use tlsphot::{GridSpec, TlsParams};

fn eta_rows() -> &'static [EtaRow] {
    static ROWS: OnceLock<Vec<EtaRow>> = OnceLock::new();
    ROWS.get_or_init(|| fig1b_data(&SweepSpec::eta_family()).unwrap())
}

fn block(beta: f64) -> Vec<EtaRow> {
    eta_rows().iter().filter(|r| r.beta == beta).copied().collect()
}

#[test]
fn eta_family_shape() {
    let rows = eta_rows();
    assert_eq!(rows.len(), 600);
    let lossless = block(1.0);
    let peak = lossless.iter().max_by(|a, b| a.eta.total_cmp(&b.eta)).unwrap();
    assert!((peak.sigma - 0.47).abs() < 0.02, "{}", peak.sigma);
    assert!((peak.eta - 0.7196).abs() < 1e-3, "{}", peak.eta);
    assert!(lossless.iter().all(|r| (r.half_eps1_sq - 0.5).abs() < 1e-12));
    assert!(rows.iter().all(|r| r.eta >= 0.0 && r.eta < 0.75));

    let crossings: Vec<f64> = lossless.iter().filter(|r| r.is_crossing).map(|r| r.sigma).collect();
    assert_eq!(crossings.len(), 2, "{crossings:?}");
    assert!((crossings[0] / 0.1634 - 1.0).abs() < 0.03, "{crossings:?}");
    assert!((crossings[1] / 1.2505 - 1.0).abs() < 0.03, "{crossings:?}");
}

#[test]
fn loss_lowers_eta_and_threshold() {
    let (a, b, c) = (block(1.0), block(0.95), block(0.9));
    for ((x, y), z) in a.iter().zip(&b).zip(&c) {
        assert!(x.half_eps1_sq > y.half_eps1_sq && y.half_eps1_sq > z.half_eps1_sq);
        assert!(x.eta > y.eta && y.eta > z.eta, "sigma {}", x.sigma);
    }
}

#[test]
fn eta_family_is_deterministic() {
    let mut spec = SweepSpec::eta_family();
    spec.betas = vec![1.0, 0.95];
    spec.n_sigma = 12;
    assert_eq!(fig1b_data(&spec).unwrap(), fig1b_data(&spec).unwrap());
}

#[test]
fn sweep_spec_validation() {
    let mut spec = SweepSpec::eta_family();
    spec.betas = vec![1.2];
    assert!(spec.validate().is_err());
    let mut spec = SweepSpec::eta_family();
    spec.sigma_max = spec.sigma_min;
    assert!(spec.validate().is_err());
    let mut spec = SweepSpec::eta_family();
    spec.n_sigma = 1;
    assert!(spec.validate().is_err());
    let s = SweepSpec::eta_family().sigmas();
    assert!((s[0] - 0.05).abs() < 1e-15 && (s[199] - 5.0).abs() < 1e-12);
    assert_eq!(SweepSpec::beta_range().betas.len(), 21);
}

fn coarse_betas() -> SweepSpec {
    SweepSpec {
        betas: vec![1.0, 0.95, 0.9, 0.85],
        ..SweepSpec::beta_range()
    }
}

#[test]
fn pair_loss_beats_independent_loss() {
    let rows = loss_curves(&coarse_betas()).unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0].branch, Branch::Upper);
    for r in &rows {
        if r.beta == 1.0 {
            assert!(r.pair_loss.abs() < 1e-4 && r.independent_loss.abs() < 1e-12);
        } else {
            assert!(r.pair_loss < r.independent_loss, "{r:?}");
        }
    }
    for (u, l) in rows[..4].iter().zip(&rows[4..]) {
        assert_eq!(u.beta, l.beta);
        assert!(u.independent_loss <= l.independent_loss + 1e-12);
        assert!(u.sigma.unwrap() > l.sigma.unwrap());
    }
}

#[test]
fn success_curves_are_ordered_and_monotone() {
    let rows = fig3_data(&coarse_betas()).unwrap();
    assert!((rows[0].bell - 1.0).abs() < 1e-6 && (rows[0].cz - 1.0).abs() < 1e-12);
    for r in &rows {
        assert!(r.bell >= r.cz - 1e-9, "{r:?}");
    }
    for w in rows.windows(2) {
        assert!(w[1].bell < w[0].bell && w[1].cz < w[0].cz);
    }
}

#[test]
fn matching_points_for_lossless_emitter() {
    let [(lb, lo), (ub, hi)] = matching_points(&TlsParams::lossless(), &GridSpec::ANALYSIS).unwrap();
    assert_eq!((lb, ub), (Branch::Lower, Branch::Upper));
    assert!((lo.unwrap() - 0.163_394_337_662_639_3).abs() < 1e-9);
    assert!((hi.unwrap() - 1.250_495_887_608_521_7).abs() < 1e-9);
    let heavy = TlsParams::from_beta(0.5).unwrap();
    let [(_, lo), (_, hi)] = matching_points(&heavy, &GridSpec::ANALYSIS).unwrap();
    assert!(lo.is_none() && hi.is_none());
}
