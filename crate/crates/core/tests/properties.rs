use proptest::prelude::*;
use tlsphot::spectral::{inner1, PairAmp, TimeReverse};
use tlsphot::*;

fn grid() -> std::sync::Arc<SpectralGrid> {
    SpectralGrid::symmetric(8.0, 161).unwrap()
}

/// A smooth pulse with random center, width and chirp.
fn pulse(center: f64, width: f64, chirp: f64) -> OnePhotonAmp {
    OnePhotonAmp::from_fn(grid(), |d| {
        let x = (d - center) / width;
        C64::from_polar((-x * x).exp(), chirp * x * x)
    })
}

fn arb_pulse() -> impl Strategy<Value = OnePhotonAmp> {
    (-2.0..2.0f64, 0.5..2.0f64, -1.0..1.0f64).prop_map(|(c, w, k)| pulse(c, w, k))
}

fn arb_c64() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inner_product_is_sesquilinear(f in arb_pulse(), g in arb_pulse(), h in arb_pulse(), a in arb_c64(), b in arb_c64()) {
        let combo = g.scaled(a).add_scaled(b, &h).unwrap();
        let lhs = inner1(&f, &combo).unwrap();
        let rhs = a * inner1(&f, &g).unwrap() + b * inner1(&f, &h).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
        let left = inner1(&f.scaled(a), &g).unwrap();
        prop_assert!((left - a.conj() * inner1(&f, &g).unwrap()).norm() < 1e-10 * (1.0 + left.norm()));
        let swapped = inner1(&g, &f).unwrap().conj();
        prop_assert!((swapped - inner1(&f, &g).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn time_reversal_is_a_norm_preserving_involution(f in arb_pulse(), g in arb_pulse()) {
        let r = f.time_reverse().unwrap();
        prop_assert!((r.norm_sqr() - f.norm_sqr()).abs() < 1e-12);
        let back = r.time_reverse().unwrap();
        prop_assert!(back.values().iter().zip(f.values()).all(|(a, b)| a == b));
        let pair = PairAmp::product(&f, &g).unwrap();
        let both = pair.time_reverse_first().unwrap().time_reverse_second().unwrap();
        prop_assert!((both.norm_sqr() - pair.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn beamsplitter_inverse_restores_state(f in arb_pulse(), g in arb_pulse(), theta in -3.2..3.2f64, phi in -3.2..3.2f64) {
        let rails = vec![Rail::signal("a"), Rail::signal("b")];
        let mut s = FewPhotonState::empty(grid(), rails);
        s.set_vacuum(C64::new(0.3, 0.0));
        s.set_one(1, g.scaled(C64::new(0.2, 0.1))).unwrap();
        s.set_same(0, tlsphot::spectral::product_state(&f).scaled(C64::new(0.0, 0.5))).unwrap();
        s.set_cross(0, 1, PairAmp::product(&f, &g).unwrap()).unwrap();
        let s = s.normalized().unwrap();
        let there = s.beamsplitter(0, 1, theta, phi).unwrap();
        prop_assert!((there.norm_sqr() - 1.0).abs() < 1e-10);
        let back = there.beamsplitter(0, 1, -theta, phi).unwrap();
        prop_assert!((back.fidelity(&s).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lossless_emitter_is_unitary_on_single_photons(f in arb_pulse(), rate in 0.5..3.0f64) {
        let p = TlsParams::new(rate, 0.0).unwrap();
        let mut s = FewPhotonState::empty(grid(), vec![Rail::signal("a")]);
        s.set_one(0, f.normalized()).unwrap();
        let out = s.apply_tls(0, &p).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert_eq!(out.lost_mass(), 0.0);
        let same = s.loss_channel(0, 1.0).unwrap();
        prop_assert!((same.fidelity(&s).unwrap() - 1.0).abs() < 1e-14);
    }
}
