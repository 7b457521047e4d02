use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use nhspec_core::continuum::ContinuumModel;
use nhspec_core::diagnostics::envelope_fit;
use nhspec_core::edge::{edge_state, SemiInfinite};
use nhspec_core::numeric::{eig_complex_dense, eig_sym_tridiag, hessenberg_reduce};
use nhspec_core::topology::{continuum_curve, lattice_curve, winding_number};
use nhspec_core::{Boundary, ComplexMatrix, LatticeModel};

/// Deterministic dense test matrix without pulling in an RNG.
fn scrambled(n: usize) -> ComplexMatrix {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let data = (0..n * n).map(|_| Complex64::new(next(), next())).collect();
    ComplexMatrix::from_row_major(n, data).unwrap()
}

fn bench_dense(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense");
    for n in [32, 64, 128] {
        let m = scrambled(n);
        group.bench_with_input(BenchmarkId::new("hessenberg", n), &m, |b, m| b.iter(|| hessenberg_reduce(black_box(m))));
        group.bench_with_input(BenchmarkId::new("eigenvalues", n), &m, |b, m| {
            b.iter(|| eig_complex_dense(black_box(m), false).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("eigenpairs", n), &m, |b, m| {
            b.iter(|| eig_complex_dense(black_box(m), true).unwrap())
        });
    }
    group.finish();
}

fn bench_lattice(c: &mut Criterion) {
    let mut group = c.benchmark_group("lattice");
    for bc in [Boundary::Open, Boundary::Periodic] {
        let m = LatticeModel::new(1.0, 0.005, 0.0, 100, bc).unwrap();
        group.bench_function(format!("qr_{bc:?}_100"), |b| b.iter(|| m.numeric_spectrum().unwrap()));
    }
    let obc = LatticeModel::new(1.0, 0.005, 0.0, 100, Boundary::Open).unwrap();
    group.bench_function("hermitized_100", |b| b.iter(|| obc.hermitized_spectrum().unwrap()));
    for n in [100usize, 1000] {
        let diag = vec![0.0; n];
        let off = vec![1.0; n - 1];
        group.bench_with_input(BenchmarkId::new("bisection", n), &n, |b, _| {
            b.iter(|| eig_sym_tridiag(black_box(&diag), black_box(&off)).unwrap())
        });
    }
    group.finish();
}

fn bench_topology(c: &mut Criterion) {
    let ring = lattice_curve(&LatticeModel::new(1.0, 0.005, 0.0, 100, Boundary::Periodic).unwrap()).unwrap();
    let parabola = continuum_curve(&ContinuumModel::new(0.005, 0.0, 100.0).unwrap()).unwrap();
    let base = Complex64::new(0.5, 0.0);
    c.bench_function("winding_ellipse_4096", |b| b.iter(|| winding_number(&ring, black_box(base), 4096).unwrap()));
    c.bench_function("winding_parabola_4096", |b| {
        b.iter(|| winding_number(&parabola, black_box(base), 4096).unwrap())
    });
}

fn bench_states(c: &mut Criterion) {
    let m = ContinuumModel::new(0.05, 60.0, 100.0).unwrap();
    let wf = m.obc_state(13, 2001).unwrap();
    c.bench_function("envelope_fit_2001", |b| b.iter(|| envelope_fit(black_box(&wf)).unwrap()));
    c.bench_function("residual_norm_2001", |b| {
        b.iter(|| m.residual_norm(black_box(&wf), Complex64::new(m.obc_energy(13).unwrap(), 0.0)).unwrap())
    });
    let g = SemiInfinite::new(0.005, 100.0).unwrap();
    c.bench_function("edge_state_4001", |b| {
        b.iter(|| edge_state(black_box(Complex64::new(0.1, -0.05)), &g, 4001).unwrap())
    });
}

criterion_group!(benches, bench_dense, bench_lattice, bench_topology, bench_states);
criterion_main!(benches);
