//! Benchmarks for the operations the verification suite leans on:
//! entropy and cumulant evaluations, one solver run each for the
//! conjugate ascent and the decomposition barrier, and a Luxemburg
//! norm bracketing. Fixed seeds keep instances comparable across runs.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use statgeom_core::algebra::sample::{rng_for, sample_dual, sample_observable, sample_state};
use statgeom_core::duality::{conjugate, psi_decompose};
use statgeom_core::entropy::relative_entropy;
use statgeom_core::orlicz::{luxemburg_norm, YoungFunctionHandle};
use statgeom_core::perturbation::{cumulant, perturb};
use statgeom_core::BlockShape;

fn bench_core_ops(c: &mut Criterion) {
    let shape = BlockShape::full(4).unwrap();
    let mut rng = rng_for("bench", 42);
    let phi = sample_state(&shape, 1.0, &mut rng);
    let omega = sample_state(&shape, 1.0, &mut rng);
    let h = sample_observable(&shape, 1.0, &mut rng);
    let v_small = sample_dual(&shape, 0.1, &mut rng);
    let v_psi = sample_dual(&shape, 0.2, &mut rng);

    c.bench_function("relative_entropy_dim4", |b| {
        b.iter(|| relative_entropy(black_box(&omega), black_box(&phi)).unwrap())
    });

    c.bench_function("cumulant_dim4", |b| {
        b.iter(|| cumulant(black_box(&phi), black_box(&h)).unwrap())
    });

    c.bench_function("perturb_dim4", |b| {
        b.iter(|| perturb(black_box(&phi), black_box(&h)).unwrap())
    });

    let handle = YoungFunctionHandle::phi_phi(phi.clone());
    c.bench_function("luxemburg_norm_dim4", |b| {
        b.iter(|| luxemburg_norm(black_box(&handle), (&h).into()).unwrap())
    });

    c.bench_function("conjugate_ascent_dim4", |b| {
        b.iter(|| conjugate(black_box(&handle), black_box(&v_small)).unwrap())
    });

    c.bench_function("psi_barrier_dim4", |b| {
        b.iter(|| psi_decompose(black_box(&phi), black_box(&v_psi)).unwrap())
    });
}

criterion_group!(benches, bench_core_ops);
criterion_main!(benches);
