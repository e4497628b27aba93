//! Benchmarks for the symcomp engines; see `benches/engines.rs`.
