use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zfrt_bench::{contact_context, mirror_context, words};
use zfrt_core::{
    build_generator, hamiltonian, nf, rho, verify_defect_algebra, GeneratorRole, HamiltonianKind, LetterKind,
};

fn normal_form(c: &mut Criterion) {
    let ctx = mirror_context();
    let mut group = c.benchmark_group("nf");
    for len in [2, 4, 6] {
        let batch = words(&ctx, 32, len);
        group.bench_with_input(BenchmarkId::new("random-words", len), &batch, |b, batch| {
            b.iter(|| {
                for p in batch {
                    black_box(nf(p, &ctx).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn rho_images(c: &mut Criterion) {
    let ctx = contact_context();
    let k = ctx.grid().points()[0];
    let creator = ctx.letter(LetterKind::Create, k);
    c.bench_function("rho/creator", |b| b.iter(|| black_box(rho(&creator, &ctx).unwrap())));
    c.bench_function("generator/A", |b| {
        b.iter(|| black_box(build_generator(GeneratorRole::DefectAnnihilator, k, &ctx).unwrap()))
    });
}

fn hierarchy(c: &mut Criterion) {
    let ctx = contact_context();
    let mut group = c.benchmark_group("hamiltonian");
    group.sample_size(10);
    for order in [1, 2] {
        group.bench_with_input(BenchmarkId::new("defect", order), &order, |b, &order| {
            b.iter(|| black_box(hamiltonian(HamiltonianKind::Defect, order, &ctx).unwrap()))
        });
    }
    group.finish();
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    group.bench_function("defect-algebra", |b| b.iter(|| black_box(verify_defect_algebra(&ctx))));
    group.finish();
}

criterion_group!(benches, normal_form, rho_images, hierarchy);
criterion_main!(benches);
