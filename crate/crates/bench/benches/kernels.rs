use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use multequi_bench::params::*;
use multequi_core::dynatomic::{center_poly, dynatomic_resultant, multiplier_resultant_by_power_sums};
use multequi_core::equidist::parameter_roots;
use multequi_core::itinerary::coded_cycles;
use multequi_core::numroots::{aberth_solve_exact, periodic_cycles};
use multequi_core::potential::green_m;
use multequi_core::{CFloat, Var};
use num_bigint::BigInt;

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact");
    g.sample_size(10);
    for n in EXACT_N {
        g.bench_with_input(BenchmarkId::new("resultant", n), &n, |b, &n| b.iter(|| dynatomic_resultant(black_box(n))));
        g.bench_with_input(BenchmarkId::new("power_sums", n), &n, |b, &n| {
            b.iter(|| multiplier_resultant_by_power_sums(black_box(n)))
        });
    }
    g.finish();
}

fn roots(c: &mut Criterion) {
    let p = center_poly(CENTER_N).unwrap();
    let mut coeffs = vec![(BigInt::from(0), BigInt::from(0)); p.degree(Var::C) as usize + 1];
    for (e, v) in p.terms() {
        coeffs[e[Var::C.index()]].0 = v.clone();
    }
    let mut g = c.benchmark_group("roots");
    g.sample_size(10);
    g.bench_function("aberth_centers_8", |b| b.iter(|| aberth_solve_exact(black_box(&coeffs), 1e-30)));
    let c3 = CFloat::from_real(3.0, PRECISION);
    g.bench_function("periodic_cycles_c3_8", |b| b.iter(|| periodic_cycles(black_box(&c3), CYCLE_N, PRECISION)));
    g.bench_function("coded_cycles_c3_8", |b| b.iter(|| coded_cycles(black_box(&c3), CYCLE_N, PRECISION)));
    let rho = CFloat::from_real(8f64.powi(TRACKED_N as i32), PRECISION);
    g.bench_function("tracked_roots_9", |b| b.iter(|| parameter_roots(TRACKED_N, black_box(&rho), PRECISION)));
    g.finish();
}

fn potential(c: &mut Criterion) {
    let points = [CFloat::new(0.3, 0.5, PRECISION), CFloat::new(-0.75, 0.1, PRECISION), CFloat::new(2.0, 1.0, PRECISION)];
    c.bench_function("green_m", |b| {
        b.iter(|| points.iter().map(|p| green_m(black_box(p), 1e-12).value).sum::<f64>())
    });
}

criterion_group!(benches, exact, roots, potential);
criterion_main!(benches);
