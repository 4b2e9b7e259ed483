use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use residuum_bench::{expr, unit_circle};
use residuum_core::identities::suite;
use residuum_core::{
    integrate_path, potential_2d, residue_small_circle, vp_integrate_path, vt_1d, Complex, Measure,
    RadiiSchedule,
};

fn quadrature(c: &mut Criterion) {
    let f = expr("exp(z)*conj(z)/(z-2)");
    let circle = unit_circle();
    c.bench_function("integrate_path/circle", |b| {
        b.iter(|| integrate_path(black_box(&f), &circle, Measure::Dz, 1e-10).unwrap())
    });

    let g = expr("1/(z-1)");
    let pole = [Complex::new(1.0, 0.0)];
    let sched = RadiiSchedule::halving(0.1);
    c.bench_function("vp_integrate_path/boundary_pole", |b| {
        b.iter(|| {
            vp_integrate_path(black_box(&g), &circle, &pole, Measure::Dz, &sched, 1e-10).unwrap()
        })
    });
}

fn potentials(c: &mut Criterion) {
    let circle = unit_circle();
    let points: Vec<Complex> = (0..41)
        .flat_map(|i| {
            (0..41).map(move |j| Complex::new(-1.5 + 0.075 * i as f64, -1.5 + 0.075 * j as f64))
        })
        .collect();
    c.bench_function("potential_2d/grid_41x41", |b| {
        b.iter(|| {
            for &p in &points {
                black_box(potential_2d(&circle, p, 1e-12).unwrap());
            }
        })
    });
}

fn residues(c: &mut Criterion) {
    let f = expr("exp(z)/z^2 + 1/conj(z)");
    let sched = RadiiSchedule::halving(0.1);
    c.bench_function("residue_small_circle/mixed", |b| {
        b.iter(|| residue_small_circle(black_box(&f), Complex::new(0.0, 0.0), &sched).unwrap())
    });

    let log = expr("log(z)");
    c.bench_function("vt_1d/log", |b| {
        b.iter(|| vt_1d(black_box(&log), -1.0, 2.0, &[0.0], &sched, 1e-10).unwrap())
    });
}

fn verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for selector in ["planar", "boundary", "lemmas"] {
        let cases = suite::cases(selector).unwrap();
        group.bench_function(selector, |b| {
            b.iter(|| {
                for case in &cases {
                    black_box(case.run().unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, quadrature, potentials, residues, verification);
criterion_main!(benches);
