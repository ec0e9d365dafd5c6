use criterion::{black_box, criterion_group, criterion_main, Criterion};

use elliptica::exchange::big_f;
use elliptica::rmatrix_gl2::w_matrix;
use elliptica::rmatrix_gln::{belavin_w, XiMuTauPoint};
use elliptica::specfun::{jacobi_theta, qpoch, theta_p};
use elliptica::surfaces::c1_p_q3;
use elliptica::{LabelPair, RationalCharacteristic, TruncationPolicy, C64};
use elliptica_bench::{rank_two_params, sample_z};

fn special_functions(c: &mut Criterion) {
    let pol = TruncationPolicy::default();
    let z = sample_z();
    c.bench_function("qpoch two bases", |b| {
        b.iter(|| qpoch(black_box(z), &[C64::new(0.36, 0.0), C64::new(0.25, 0.0)], &pol).unwrap())
    });
    c.bench_function("theta_p", |b| b.iter(|| theta_p(black_box(z), C64::new(0.25, 0.0), &pol).unwrap()));
    let ch = RationalCharacteristic::half_shifted(1, 2, 3);
    c.bench_function("jacobi theta N=3", |b| {
        b.iter(|| jacobi_theta(&ch, black_box(C64::new(0.21, 0.04)), C64::new(0.1, 0.6), &pol).unwrap())
    });
}

fn r_matrices(c: &mut Criterion) {
    let pol = TruncationPolicy::default();
    let params = rank_two_params();
    let z = sample_z();
    c.bench_function("eight-vertex W", |b| b.iter(|| w_matrix(black_box(z), &params, &pol).unwrap()));
    let point = XiMuTauPoint::new(C64::new(0.13, 0.02), C64::new(0.05, 0.2), C64::new(0.1, 0.7)).unwrap();
    c.bench_function("Z_N W N=3", |b| b.iter(|| belavin_w(black_box(&point), 3, &pol).unwrap()));
    let w = w_matrix(z, &params, &pol).unwrap();
    let big = w.kron(&w);
    c.bench_function("16x16 contraction", |b| b.iter(|| black_box(&big).mul(&big)));
}

fn structure_function(c: &mut Criterion) {
    let pol = TruncationPolicy::default();
    let params = c1_p_q3(0.55);
    let labels = LabelPair::new(1, 7);
    c.bench_function("F (1,7)", |b| b.iter(|| big_f(labels, labels, black_box(C64::new(0.8, 0.1)), &params, &pol).unwrap()));
}

criterion_group!(benches, special_functions, r_matrices, structure_function);
criterion_main!(benches);
