//! Green's functions of the filled Julia set and of the Mandelbrot set.
//!
//! Outside the escape radius `R = max(4, |c|)` the orbit `w_{k+1} = w_k² + c`
//! satisfies `|w_{k+1}| ≥ |w_k|² − |c| ≥ |w_k|`, and
//!
//! ```text
//! g_c(z) = 2^{-N} log|w_N| + Σ_{k ≥ N} 2^{-k-1} log|1 + c / w_k²|.
//! ```
//!
//! Each tail term is at most `2^{-k-1} (−log(1 − |c|/|w_k|²))` and the ratios
//! `|c|/|w_k|²` decrease, so the tail is bounded by
//! `2^{-N} (−log(1 − |c|/|w_N|²))`. Iteration continues past escape until
//! that bound drops below the requested tolerance.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::cfloat::CFloat;

/// Default iteration cap for orbits that do not escape.
pub const DEFAULT_ITERATION_CAP: u32 = 100_000;

/// Past this modulus the tail bound is below any tolerance in use.
const OVERFLOW_GUARD: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenValue {
    pub value: f64,
    pub abs_error: f64,
    /// `false` means no escape within the iteration cap; `value` is then 0.
    pub escaped: bool,
}

impl GreenValue {
    fn inside() -> Self {
        GreenValue { value: 0.0, abs_error: 0.0, escaped: false }
    }
}

fn to_c64(x: &CFloat) -> C64 {
    let (re, im) = x.to_c64();
    C64::new(re, im)
}

/// `g_c(z)` with the default iteration cap.
pub fn green_julia(c: &CFloat, z: &CFloat, tol: f64) -> GreenValue {
    green_julia_c64(to_c64(c), to_c64(z), tol, DEFAULT_ITERATION_CAP)
}

/// `g_M(c) = g_c(c)`.
pub fn green_m(c: &CFloat, tol: f64) -> GreenValue {
    let c = to_c64(c);
    green_julia_c64(c, c, tol, DEFAULT_ITERATION_CAP)
}

/// `g_M` at a double-precision point.
pub fn green_m_c64(c: C64, tol: f64) -> GreenValue {
    green_julia_c64(c, c, tol, DEFAULT_ITERATION_CAP)
}

pub fn green_julia_c64(c: C64, z: C64, tol: f64, cap: u32) -> GreenValue {
    assert!(tol > 0.0, "tolerance must be positive");
    let c_abs = c.norm();
    let radius = c_abs.max(4.0);
    let mut w = z;
    let mut n: i32 = 0;
    let mut steps: u32 = 0;
    while w.norm() < radius {
        if steps >= cap || !w.is_finite() {
            return GreenValue::inside();
        }
        w = w * w + c;
        n += 1;
        steps += 1;
    }
    loop {
        let wa = w.norm();
        let ratio = c_abs / (wa * wa);
        let scale = 0.5f64.powi(n);
        let tail = scale * -(-ratio).ln_1p();
        if tail <= tol || wa > OVERFLOW_GUARD {
            let value = scale * wa.ln();
            // rounding in the orbit and the final logarithm
            let rounding = (n as f64 + 2.0) * f64::EPSILON * value.abs().max(scale);
            return GreenValue { value, abs_error: tail + rounding, escaped: true };
        }
        w = w * w + c;
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: f64, im: f64) -> GreenValue {
        green_m_c64(C64::new(re, im), 1e-12)
    }

    #[test]
    fn outside_unit_disk_at_zero_parameter() {
        let v = green_julia_c64(C64::new(0.0, 0.0), C64::new(2.0, 0.0), 1e-12, DEFAULT_ITERATION_CAP);
        assert!(v.escaped);
        assert!((v.value - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn interior_points() {
        assert!(!green_julia_c64(C64::new(0.0, 0.0), C64::new(0.5, 0.0), 1e-9, 1000).escaped);
        assert!(!green_julia_c64(C64::new(-1.0, 0.0), C64::new(0.0, 0.0), 1e-9, 1000).escaped);
        assert!(!g(0.0, 0.0).escaped);
    }

    #[test]
    fn known_parameter_values() {
        assert!((g(1.0, 0.0).value - 0.4073).abs() < 1e-3);
        assert!((g(1e6, 0.0).value - 1e6f64.ln()).abs() < 1e-4);
    }

    #[test]
    fn conjugation_symmetry_is_exact() {
        let a = g(-0.75, 0.3);
        let b = g(-0.75, -0.3);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
