//! Criterion benchmarks for `nkh-core` live in `benches/`.
