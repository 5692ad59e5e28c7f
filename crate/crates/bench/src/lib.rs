//! Criterion benchmarks for `infoscope-core`; see `benches/`.
