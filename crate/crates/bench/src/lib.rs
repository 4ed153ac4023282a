//! Criterion benchmarks for the solver and evaluation hot paths; see `benches/`.
