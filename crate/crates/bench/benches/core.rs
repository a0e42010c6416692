use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mabuchi_core::exact::{rat, Polynomial};
use mabuchi_core::pn_bundles::{grid_scan, grid_scan_serial, ScanBounds};
use mabuchi_core::{
    build_profile, classify, mabuchi_weight, solve_kr_soliton, AdmissibleManifold, KrConfig,
};

fn polynomial_kernels(c: &mut Criterion) {
    let p = Polynomial::linear(rat(7, 3), rat(1, 1)).pow(12)
        * Polynomial::linear(rat(1, 1), rat(-1, 1)).pow(5);
    let q = Polynomial::linear(rat(5, 2), rat(-1, 1)).pow(9);
    c.bench_function("poly_mul_deg17x9", |b| {
        b.iter(|| black_box(&p) * black_box(&q))
    });
    c.bench_function("poly_integral_deg17", |b| {
        b.iter(|| black_box(&p).definite_integral(&rat(-1, 1), &rat(1, 1)))
    });
}

fn classification(c: &mut Criterion) {
    let m = AdmissibleManifold::from_pn_bundle(6, 1, 2, 4).unwrap();
    c.bench_function("classify_pn_6_1_2_4", |b| {
        b.iter(|| classify(black_box(&m)).unwrap())
    });
    let blow_up = AdmissibleManifold::from_pn_bundle(5, 1, 3, 0).unwrap();
    c.bench_function("mabuchi_profile_pn_5_1_3_0", |b| {
        b.iter(|| {
            let u = mabuchi_weight(&blow_up).unwrap();
            build_profile(&blow_up, &u).unwrap()
        })
    });
}

fn scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("grid_scan_default");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| grid_scan(ScanBounds::default()).unwrap())
    });
    group.bench_function("serial", |b| {
        b.iter(|| grid_scan_serial(ScanBounds::default()).unwrap())
    });
    group.finish();
}

fn kr_solver(c: &mut Criterion) {
    let m = AdmissibleManifold::from_pn_bundle(1, 1, 0, 1).unwrap();
    let mut group = c.benchmark_group("kr_soliton");
    group.sample_size(10);
    group.bench_function("pn_1_1_0_1_64_digits", |b| {
        b.iter(|| solve_kr_soliton(&m, &KrConfig::default()).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    polynomial_kernels,
    classification,
    scans,
    kr_solver
);
criterion_main!(benches);
