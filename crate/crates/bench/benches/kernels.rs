use archipelago::kernels::{
    asym_kernel_thm11, asym_kernel_thm13, kernel_fullq_exact, LemniscateKernel, LemniscateSource, TypoReading,
};
use archipelago::numerics::reg_inc_gamma_q;
use archipelago::EnsembleParams;
use archipelago::orthopoly::{closed_form_polysystem, gram_polysystem};
use archipelago_bench::{boundary_pair, induced, lemniscate, outer_pair};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use std::hint::black_box;

fn systems(c: &mut Criterion) {
    let mut g = c.benchmark_group("polysystem");
    for n in [20usize, 80] {
        let p = induced(n);
        g.bench_with_input(BenchmarkId::new("closed_form", n), &p, |b, p| {
            b.iter(|| closed_form_polysystem(black_box(p), n).unwrap())
        });
    }
    let p = EnsembleParams::induced(20, 2.0, 2.0).unwrap();
    g.bench_function("gram_c2_n20", |b| b.iter(|| gram_polysystem(black_box(&p), 20, None).unwrap()));
    g.finish();
}

fn exact_kernels(c: &mut Criterion) {
    let (z, w) = outer_pair();
    let mut g = c.benchmark_group("exact_kernel");
    for n in [20usize, 80] {
        let sys = closed_form_polysystem(&induced(n), n).unwrap();
        g.bench_with_input(BenchmarkId::new("full_q", n), &sys, |b, sys| {
            b.iter(|| kernel_fullq_exact(black_box(z), black_box(w), sys).unwrap())
        });
    }
    let lem = LemniscateKernel::new(&lemniscate(8), LemniscateSource::GramLemniscate).unwrap();
    let (bz, bw) = boundary_pair();
    g.bench_function("lemniscate_gram_dn16", |b| b.iter(|| lem.eval(black_box(bz), black_box(bw)).unwrap()));
    g.finish();
}

fn asymptotic_kernels(c: &mut Criterion) {
    let (z, w) = outer_pair();
    let (bz, bw) = boundary_pair();
    let p = induced(400);
    let q = lemniscate(600);
    c.bench_function("asym_macroscopic_n400", |b| b.iter(|| asym_kernel_thm11(black_box(z), black_box(w), &p).unwrap()));
    c.bench_function("asym_boundary_n600", |b| {
        b.iter(|| asym_kernel_thm13(black_box(bz), black_box(bw), &q, TypoReading::Corrected).unwrap())
    });
    c.bench_function("inc_gamma_q_n400", |b| {
        b.iter(|| reg_inc_gamma_q(black_box(400), Complex64::new(800.0, 10.0)))
    });
}

criterion_group!(benches, systems, exact_kernels, asymptotic_kernels);
criterion_main!(benches);
