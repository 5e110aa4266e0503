//! Benchmarks for quiverlab; see `benches/`.
