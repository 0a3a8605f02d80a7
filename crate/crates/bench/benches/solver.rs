use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperflock_core::{
    build_kernel_table, classify_symmetry, compute_signals, step, GridSpec, ModelParams,
    PopulationState, SchemeId, SymmetryOptions,
};

fn reference_setup(nx: usize) -> (ModelParams, GridSpec, hyperflock_core::KernelTable) {
    let params = ModelParams::default();
    let dx = params.domain_length / nx as f64;
    let grid = GridSpec::new(dx, 2.0 * dx, 100.0, params.domain_length).unwrap();
    let kernels = build_kernel_table(&params, &grid).unwrap();
    (params, grid, kernels)
}

fn perturbed_state(nx: usize) -> PopulationState {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    PopulationState::new(
        (0..nx).map(|_| 1.0 + rng.gen_range(-0.2..0.2)).collect(),
        (0..nx).map(|_| 1.0 + rng.gen_range(-0.2..0.2)).collect(),
    )
}

fn bench_signals(c: &mut Criterion) {
    let mut group = c.benchmark_group("signals");
    for nx in [640usize, 1280] {
        let (params, _, kernels) = reference_setup(nx);
        let state = perturbed_state(nx);
        group.bench_with_input(BenchmarkId::from_parameter(nx), &nx, |b, _| {
            b.iter(|| compute_signals(black_box(&state), &kernels, &params))
        });
    }
    group.finish();
}

fn bench_steps(c: &mut Criterion) {
    let nx = 1280;
    let (params, grid, kernels) = reference_setup(nx);
    let state = perturbed_state(nx);
    let mut group = c.benchmark_group("step");
    for scheme in [
        SchemeId::Upwind,
        SchemeId::MacCormack,
        SchemeId::Fsm,
        SchemeId::Qsa,
        SchemeId::QsaSuperbee,
        SchemeId::QsaMc,
    ] {
        group.bench_function(scheme.name(), |b| {
            b.iter(|| step(scheme, black_box(&state), &params, &grid, &kernels))
        });
    }
    group.finish();
}

fn bench_symmetry_scan(c: &mut Criterion) {
    let nx = 1280;
    let (_, grid, _) = reference_setup(nx);
    let dx = grid.dx;
    let u: Vec<f64> = (0..nx)
        .map(|i| {
            let x = i as f64 * dx;
            2.0 + ((0.2 * std::f64::consts::PI * x).sin() + 1.0).powi(3)
        })
        .collect();
    c.bench_function("classify_symmetry/1280", |b| {
        b.iter(|| classify_symmetry(black_box(&u), &grid, &SymmetryOptions::default()))
    });
}

criterion_group!(benches, bench_signals, bench_steps, bench_symmetry_scan);
criterion_main!(benches);
