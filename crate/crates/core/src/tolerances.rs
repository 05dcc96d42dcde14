//! Thresholds of the acceptance suite, in one place.

/// Wall-clock budget for printing `R_1..R_3`, seconds.
pub const GOLDEN_RUNTIME_S: f64 = 1.0;
/// Budget for the exact degree table up to period 8.
pub const DEGREE_RUNTIME_S: f64 = 300.0;
pub const DEGREE_MAX_N: u32 = 8;
pub const POWER_IDENTITY_MAX_N: u32 = 6;

/// Centers against `R_n(c, 0)` roots.
pub const CENTER_MATCH: f64 = 1e-12;
pub const CENTER_MAX_N: u32 = 8;
/// `R_2(c, −1)` root against `−5/4`.
pub const PARABOLIC_MATCH: f64 = 1e-20;

/// Pointwise potential error at `n = 14` with `ρ_n = 1`.
pub const POINTWISE_ERROR: f64 = 0.02;
pub const POINTWISE_PROBES: [[f64; 2]; 3] = [[2.0, 0.0], [3.0, 0.0], [1.0, 1.0]];
pub const POINTWISE_RUNTIME_S: f64 = 600.0;

/// `|mean g_M − η|` at `n = 12` with `ρ_n = 8^n`.
pub const DRIFT_MEAN: f64 = 0.15;
/// Relative error of `u(0)` against `2L` at `n = 12`.
pub const DRIFT_U_REL: f64 = 0.05;
pub const DRIFT_RUNTIME_S: f64 = 900.0;

/// Mean of `g_M` over the root set at `n = 12` with `ρ_n = 1`.
pub const BOUNDARY_MEAN: f64 = 0.05;

/// Coded cycles against dynatomic roots at `c = 3`.
pub const ITINERARY_HAUSDORFF: f64 = 1e-20;
pub const ITINERARY_MAX_N: u32 = 10;
pub const ITINERARY_RUNTIME_S: f64 = 300.0;

/// Green's function tolerance and the allowed defect `3·tol` of
/// `g_c(f_c(z)) = 2 g_c(z)`.
pub const GREEN_TOL: f64 = 1e-12;
pub const FUNCTIONAL_EQ_FACTOR: f64 = 3.0;
pub const FUNCTIONAL_EQ_POINTS: usize = 1000;
pub const FUNCTIONAL_EQ_SEED: u64 = 0x5eed_0f_9e3;
pub const MOBIUS_MAX_N: u32 = 8;

/// Cycle-wise against exact evaluation of `R_n`.
pub const CROSS_PATH_REL: f64 = 1e-10;
