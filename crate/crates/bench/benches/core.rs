use criterion::{black_box, criterion_group, criterion_main, Criterion};

use kangaroo_bench::{antelope, dense, prime, zwickel_context};
use kangaroo_core::blowup::weak_transform;
use kangaroo_core::oblique::uniqueness_search;
use kangaroo_core::zwickel::{det_monomiality_check, transform_matrix};
use kangaroo_core::{shade, BlowupStep, Ring};

fn poly(c: &mut Criterion) {
    let a = dense(3, 6);
    let b = dense(3, 5);
    c.bench_function("poly mul (y+z+w+1)^6 * (y+z+w+1)^5 mod 3", |bn| bn.iter(|| black_box(&a) * black_box(&b)));
}

fn shade_and_blowup(c: &mut Criterion) {
    let f = antelope();
    let step = BlowupStep::y(1, vec![1, 0]).unwrap();
    c.bench_function("shade antelope", |bn| bn.iter(|| shade(black_box(&f)).unwrap()));
    c.bench_function("weak transform antelope", |bn| bn.iter(|| weak_transform(black_box(&f), &step).unwrap()));
}

fn zwickel(c: &mut Criterion) {
    let ctx = zwickel_context();
    c.bench_function("transform matrix m=3 c=4", |bn| bn.iter(|| transform_matrix(black_box(&ctx)).unwrap()));
    let m = transform_matrix(&ctx).unwrap();
    c.bench_function("determinant check m=3 c=4", |bn| bn.iter(|| det_monomiality_check(&ctx, black_box(&m)).unwrap()));
}

fn oblique(c: &mut Criterion) {
    let ring = Ring::new(prime(2), &["y", "z"]);
    let mut g = c.benchmark_group("oblique");
    g.sample_size(10);
    g.bench_function("class search r=(3,3) k=2", |bn| bn.iter(|| uniqueness_search(&ring, &[3, 3], 2, 1 << 20).unwrap()));
    g.finish();
}

criterion_group!(benches, poly, shade_and_blowup, zwickel, oblique);
criterion_main!(benches);
