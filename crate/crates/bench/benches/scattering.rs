use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use tlsphot::circuits::ns_gate;
use tlsphot::tls::{bound_overlap, scatter_two};
use tlsphot::{product_state, C64, FewPhotonState, Rail};
use tlsphot_bench::operating_point;

fn two_photon(c: &mut Criterion) {
    let mut group = c.benchmark_group("two_photon");
    for points in [641, 1281] {
        let op = operating_point(points);
        let pair = product_state(&op.pulse);
        group.bench_with_input(BenchmarkId::new("scatter_two", points), &points, |b, _| {
            b.iter(|| scatter_two(&op.params, black_box(&pair)))
        });
        group.bench_with_input(BenchmarkId::new("bound_overlap", points), &points, |b, _| {
            b.iter(|| bound_overlap(&op.params, black_box(&op.pulse)))
        });
    }
    group.finish();
}

fn circuits(c: &mut Criterion) {
    let op = operating_point(641);
    let mut state = FewPhotonState::empty(op.grid.clone(), vec![Rail::signal("a")]);
    state.set_vacuum(C64::new(0.5, 0.0));
    state.set_one(0, op.pulse.scaled(C64::new(0.5, 0.0))).unwrap();
    state
        .set_same(0, product_state(&op.pulse).scaled(C64::new(0.5f64.sqrt(), 0.0)))
        .unwrap();

    let mut group = c.benchmark_group("circuits");
    group.sample_size(20);
    group.bench_function("apply_tls", |b| {
        b.iter(|| black_box(&state).apply_tls(0, &op.params).unwrap())
    });
    group.bench_function("ns_gate", |b| {
        b.iter(|| ns_gate(black_box(&state), 0, &op, None).unwrap())
    });
    group.finish();
}

criterion_group!(benches, two_photon, circuits);
criterion_main!(benches);
