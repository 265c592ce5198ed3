//! Benchmarks for the concrete engines live under `benches/`.
