//! Benchmark-only crate; see `benches/channel.rs`.
