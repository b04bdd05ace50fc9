use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qmak_core::csp::{generate_one_bad_edge, generate_regular_gap_instance, GapMode};
use qmak_core::state::{random_state, Dft, StateProfile};
use qmak_core::verifier::{
    cond_unif_reject_exact, cons_reject_exact, cons_reject_two, run_verifier_exact, sample_test, unif_reject_exact,
    ExactCaps,
};
use qmak_core::{ColoringState, EdgeMode, TestKind, VerifierConfig};

fn dft(c: &mut Criterion) {
    let mut g = c.benchmark_group("dft_apply");
    for n in [16usize, 64, 256] {
        let f = Dft::new(n).unwrap();
        let s = random_state(n, 1, 0, &StateProfile::Haar).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| f.apply(black_box(s.alphas()))));
    }
    g.finish();
}

fn exact_tests(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact");
    for n in [16usize, 64] {
        let (inst, col) = generate_one_bad_edge(n, 3, 0).unwrap();
        let s = ColoringState::from_coloring(&inst, &col).unwrap();
        let h = random_state(n, 3, 1, &StateProfile::Haar).unwrap();
        g.bench_with_input(BenchmarkId::new("cons_two", n), &n, |b, _| {
            b.iter(|| cons_reject_two(&inst, black_box(&s), black_box(&h), EdgeMode::AsListed).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("unif", n), &n, |b, _| b.iter(|| unif_reject_exact(black_box(&h))));
        let cfg = VerifierConfig::bt09(EdgeMode::AsListed);
        let pair = [s.clone(), h.clone()];
        g.bench_with_input(BenchmarkId::new("bt09_objective", n), &n, |b, _| {
            b.iter(|| run_verifier_exact(&cfg, &inst, black_box(&pair), ExactCaps::default()).unwrap())
        });
    }
    let (inst, col) = generate_one_bad_edge(8, 3, 0).unwrap();
    let s = ColoringState::from_coloring(&inst, &col).unwrap();
    let states = vec![s; 4];
    g.bench_function("cons_enumeration_n8_kappa4", |b| {
        b.iter(|| cons_reject_exact(&inst, black_box(&states), EdgeMode::AsListed, ExactCaps::default()).unwrap())
    });
    g.finish();
}

fn cond_unif(c: &mut Criterion) {
    let mut g = c.benchmark_group("cond_unif_dp");
    let s = random_state(64, 3, 2, &StateProfile::Haar).unwrap();
    for kappa in [16usize, 64, 256] {
        let states = vec![s.clone(); kappa];
        let z = 0.99 * kappa as f64 / 3.0;
        g.bench_with_input(BenchmarkId::from_parameter(kappa), &kappa, |b, _| {
            b.iter(|| cond_unif_reject_exact(black_box(&states), z).unwrap())
        });
    }
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let g = generate_regular_gap_instance(256, 3, 3, 0, GapMode::FrustratedCount { count: 16 }).unwrap();
    let s = ColoringState::from_coloring(&g.instance, &g.hidden).unwrap();
    let states = vec![s; 16];
    let mut grp = c.benchmark_group("sampling");
    grp.sample_size(10);
    grp.bench_function("cons_n256_kappa16_1e4", |b| {
        b.iter(|| {
            sample_test(TestKind::Cons, &g.instance, &states, EdgeMode::AsListed, 0.0, 10_000, 0, ExactCaps::default())
                .unwrap()
        })
    });
    grp.finish();
}

criterion_group!(benches, dft, exact_tests, cond_unif, sampling);
criterion_main!(benches);
