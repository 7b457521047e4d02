//! Criterion benchmarks for the nhspec solvers live in `benches/`.
