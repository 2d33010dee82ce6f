//! Criterion benchmarks for the spin-ring solvers; see `benches/`.
