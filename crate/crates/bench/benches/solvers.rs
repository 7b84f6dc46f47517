use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qpdeg_core::degeneracy::{default_p_grid, DEFAULT_TOL};
use qpdeg_core::intersect::{intersect_curves_with, Sweep};
use qpdeg_core::reduction::design;
use qpdeg_core::{
    energy, energy_level, fit_hyperbola, fit_parabola, reduced_spectrum, solve_q, trace,
    DeformationPoint, LevelPair,
};

fn pair(n: u32, k: u32) -> LevelPair {
    LevelPair::new(n, k).unwrap()
}

fn energies(c: &mut Criterion) {
    let pt = DeformationPoint::new(0.554400, 0.6).unwrap();
    c.bench_function("energy_level n=0..=20", |b| {
        b.iter(|| {
            (0..=20)
                .map(|n| energy_level(n, black_box(pt)))
                .sum::<f64>()
        })
    });
    c.bench_function("energy real n=7.5", |b| {
        b.iter(|| energy(black_box(7.5), black_box(pt)).unwrap())
    });
}

fn roots(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_q");
    for (n, k) in [(1, 1), (3, 1), (0, 10)] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{n}:{k}")),
            &pair(n, k),
            |b, &pr| b.iter(|| solve_q(pr, black_box(0.6), DEFAULT_TOL).unwrap()),
        );
    }
    group.finish();

    let grid = default_p_grid(128);
    c.bench_function("trace 1:1 over 128 p", |b| {
        b.iter(|| trace(pair(1, 1), &grid, DEFAULT_TOL).unwrap())
    });
}

fn fits(c: &mut Criterion) {
    let spec = design(pair(1, 1), pair(3, 1), 0.6, DEFAULT_TOL)
        .unwrap()
        .spec;
    c.bench_function("fit_parabola", |b| {
        b.iter(|| fit_parabola(black_box(spec)).unwrap())
    });
    c.bench_function("fit_hyperbola R=1", |b| {
        b.iter(|| fit_hyperbola(black_box(spec), 1.0).unwrap())
    });
    c.bench_function("design (1,1),(3,1)", |b| {
        b.iter(|| design(pair(1, 1), pair(3, 1), black_box(0.6), DEFAULT_TOL).unwrap())
    });
    let d = design(pair(1, 1), pair(3, 1), 0.6, DEFAULT_TOL).unwrap();
    let rel = fit_parabola(d.spec).unwrap();
    c.bench_function("reduced_spectrum nmax=12", |b| {
        b.iter(|| reduced_spectrum(&rel, &d.assignment, black_box(0.6), 12).unwrap())
    });
}

fn crossings(c: &mut Criterion) {
    let mut group = c.benchmark_group("intersect 0:10 x 2:1");
    group.sample_size(10);
    for samples in [1024, 4096] {
        let sweep = Sweep {
            samples,
            ..Sweep::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(samples), &sweep, |b, &sweep| {
            b.iter(|| intersect_curves_with(pair(0, 10), pair(2, 1), 1e-10, sweep).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, energies, roots, fits, crossings);
criterion_main!(benches);
