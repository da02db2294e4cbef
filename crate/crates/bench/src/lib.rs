//! Criterion benchmarks for the `fanotope` pipeline; see `benches/`.
