//! Criterion benchmarks for `hfold-core`; see `benches/`.
