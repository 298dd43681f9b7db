//! Criterion benchmarks for `hsr-core`; see `benches/`.
