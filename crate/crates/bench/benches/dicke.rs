use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use squeeze_core::dicke::{dicke_hamiltonian, evolve, tau_grid, OPTIMAL_ALPHA0};
use squeeze_core::qalgebra::eigh;
use squeeze_core::{DickeConfig, C64};

fn config(atoms: u32, blocks: bool) -> DickeConfig {
    let mut cfg = DickeConfig::new(atoms, C64::from(OPTIMAL_ALPHA0), tau_grid(0.0, std::f64::consts::PI, 50));
    cfg.use_blocks = blocks;
    cfg
}

fn evolution(c: &mut Criterion) {
    let mut g = c.benchmark_group("dicke_evolve");
    g.sample_size(10);
    for atoms in [10, 30, 60] {
        g.bench_with_input(BenchmarkId::new("blocks", atoms), &atoms, |b, &n| {
            let cfg = config(n, true);
            b.iter(|| evolve(black_box(&cfg)).unwrap())
        });
    }
    for atoms in [4, 10] {
        g.bench_with_input(BenchmarkId::new("full", atoms), &atoms, |b, &n| {
            let cfg = config(n, false);
            b.iter(|| evolve(black_box(&cfg)).unwrap())
        });
    }
    g.finish();
}

fn diagonalisation(c: &mut Criterion) {
    let mut g = c.benchmark_group("dicke_eigh");
    g.sample_size(10);
    for atoms in [4, 10, 20] {
        let cfg = config(atoms, false);
        let h = dicke_hamiltonian(cfg.spin(), cfg.photon_cutoff(), 1.0);
        g.bench_with_input(BenchmarkId::from_parameter(h.dim()), &h, |b, h| b.iter(|| eigh(black_box(h)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, evolution, diagonalisation);
criterion_main!(benches);
