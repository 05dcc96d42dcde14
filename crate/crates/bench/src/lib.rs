//! Benchmark-only crate; see `benches/`.

/// Parameters shared by the benchmarks.
pub mod params {
    pub const EXACT_N: [u32; 2] = [4, 5];
    pub const CENTER_N: u32 = 8;
    pub const CYCLE_N: u32 = 8;
    pub const TRACKED_N: u32 = 9;
    pub const PRECISION: u32 = 128;
}
