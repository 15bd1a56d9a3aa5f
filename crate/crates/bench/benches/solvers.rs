use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pihier_bench::{initial_data, sech2_samples};
use pihier_core::kdvlab::{critical_point, kdv_evolve_values};
use pihier_core::painleve::{solve_pole_free, BvpConfig};

fn painleve(c: &mut Criterion) {
    let m2 = BvpConfig::new(2, 40.0, 2000);
    c.bench_function("pole-free m=2 N=2000", |b| {
        b.iter(|| solve_pole_free(black_box(&m2)).unwrap())
    });
    let m4 = BvpConfig::new(4, 60.0, 1201);
    c.bench_function("pole-free m=4 N=1201", |b| {
        b.iter(|| solve_pole_free(black_box(&m4)).unwrap())
    });
}

fn kdv(c: &mut Criterion) {
    let (u0, mut cfg) = sech2_samples(0.05, 4096);
    // a fixed number of steps
    cfg.dt = Some(1e-4);
    c.bench_function("kdv 100 steps N=4096", |b| {
        b.iter(|| kdv_evolve_values(black_box(&u0), &cfg, &[1e-2]).unwrap())
    });
    let data = initial_data(4);
    c.bench_function("critical point m=4", |b| {
        b.iter(|| critical_point(black_box(&data), 4).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = painleve, kdv
}
criterion_main!(benches);
