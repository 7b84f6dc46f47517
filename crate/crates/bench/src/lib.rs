//! Criterion benchmarks for qpdeg-core; see `benches/solvers.rs`.
