//! Hot-path benchmarks: witness enumeration, the two compilers, and the
//! exact scalar rings.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_rational::BigRational;

use countq_core::algebraic_converse::{qap_decide, sqrt2_field_circuit};
use countq_core::bits::BitString;
use countq_core::constructions::{run_rational, run_sqrt2, RunOptions};
use countq_core::exact_scalar::{Amplitude, FieldElement, NumberFieldSpec, RootTwoScalar};
use countq_core::gap_oracle::{self, families};

fn bench_gap_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("gap");
    group.sample_size(20);
    let x = BitString::empty();
    let parity = families::parity(0, 16);
    group.bench_function("parity_m16", |b| {
        b.iter(|| gap_oracle::gap(black_box(&parity), &x).unwrap())
    });
    let majority = families::majority(0, 16);
    group.bench_function("majority_m16", |b| {
        b.iter(|| gap_oracle::gap(black_box(&majority), &x).unwrap())
    });
    group.finish();
}

fn bench_compilers(c: &mut Criterion) {
    let mut group = c.benchmark_group("compilers");
    group.sample_size(20);
    let x = BitString::empty();
    let opts = RunOptions::default();
    let pred = families::majority(0, 8);
    group.bench_function("sqrt2_majority_m8", |b| {
        b.iter(|| run_sqrt2(black_box(&pred), &x, &opts).unwrap())
    });
    let pred6 = families::majority(0, 6);
    group.bench_function("rational_majority_m6", |b| {
        b.iter(|| run_rational(black_box(&pred6), &x, &opts).unwrap())
    });
    let circuit = sqrt2_field_circuit(&families::parity(0, 6), &x).unwrap();
    group.bench_function("qap_parity_m6_field", |b| {
        b.iter(|| qap_decide(black_box(&circuit), &opts).unwrap())
    });
    group.finish();
}

fn bench_scalars(c: &mut Criterion) {
    let mut group = c.benchmark_group("scalars");
    let a = RootTwoScalar::new(123456789i64, -987654321i64, 17);
    let b = RootTwoScalar::new(-555555, 444444, 9);
    group.bench_function("roottwo_mul", |bch| {
        bch.iter(|| black_box(&a).try_mul(black_box(&b)).unwrap())
    });
    let spec = NumberFieldSpec::sqrt2();
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let fa = FieldElement::new(spec.clone(), vec![q(12345, 77), q(-9876, 13)]).unwrap();
    let fb = FieldElement::new(spec, vec![q(-321, 5), q(654, 11)]).unwrap();
    group.bench_function("field_mul_x2m2", |bch| {
        bch.iter(|| black_box(&fa).try_mul(black_box(&fb)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_gap_enumeration, bench_compilers, bench_scalars);
criterion_main!(benches);
