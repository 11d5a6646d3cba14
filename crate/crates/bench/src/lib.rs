//! Criterion benchmarks for the search engines live in `benches/`.
