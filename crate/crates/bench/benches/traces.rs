use criterion::{black_box, criterion_group, criterion_main, Criterion};
use skein_bench::diagram;
use skein_core::bigon::{self, SliceWord};
use skein_core::qtrace::TraceContext;
use skein_core::{fixtures, Sign};

fn torus(c: &mut Criterion) {
    let s = fixtures::punctured_torus();
    let ctx = TraceContext::new(&s).unwrap();
    for n in [[0, 1, 1], [1, 2, 1], [2, 3, 3]] {
        let d = diagram(&s, &n);
        c.bench_function(&format!("torus shear {:?}", n), |b| b.iter(|| ctx.shear_trace(black_box(&d)).unwrap()));
        c.bench_function(&format!("torus extended {:?}", n), |b| b.iter(|| ctx.extended_trace(black_box(&d)).unwrap()));
    }
}

fn quadrilateral(c: &mut Criterion) {
    let s = fixtures::quadrilateral();
    let ctx = TraceContext::new(&s).unwrap();
    let d = diagram(&s, &[1, 1, 2, 1, 1]);
    c.bench_function("quadrilateral extended", |b| b.iter(|| ctx.extended_trace(black_box(&d)).unwrap()));
    c.bench_function("quadrilateral naive", |b| b.iter(|| ctx.naive_state_sum(black_box(&d)).unwrap()));
}

fn bigon_braid(c: &mut Criterion) {
    let slices = bigon::height_braid(&[3, 1, 0, 2], &[0, 2, 3, 1]);
    let w = SliceWord::new(slices, vec![Sign::Plus; 4], vec![Sign::Plus; 4]).unwrap();
    c.bench_function("bigon resolve", |b| b.iter(|| bigon::evaluate_counit(black_box(&w)).unwrap()));
    c.bench_function("bigon transfer", |b| b.iter(|| bigon::evaluate_counit_transfer(black_box(&w)).unwrap()));
}

criterion_group!(benches, torus, quadrilateral, bigon_braid);
criterion_main!(benches);
