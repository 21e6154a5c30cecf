//! Criterion benchmarks for bouc-core; see `benches/`.
