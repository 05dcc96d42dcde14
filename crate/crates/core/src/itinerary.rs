//! Periodic points of `f_c` for `c` outside the Mandelbrot set, coded by
//! binary itineraries.
//!
//! The two inverse branches are `g_b(w) = ± i·√c·√(1 − w/c)` with principal
//! square roots; bit 0 takes the `+` sign. For real `c > 1/4` this is the
//! branch of `(w − c)^{1/2}` with nonnegative imaginary part, so bit 0 points
//! lie in the upper half-plane. For complex `c` the cut is the radial ray
//! `{t·c : t ≥ 1}`, which stays away from the Julia set when `c` is far
//! enough outside the Mandelbrot set.

use std::fmt;

use rug::{Complex, Float};
use serde::Serialize;

use crate::cfloat::CFloat;
use crate::numroots::{Cycle, NumError};
use crate::potential::green_m;

/// Default lower bound on `g_M(c)` for the inverse-branch construction.
pub const DEFAULT_MARGIN: f64 = 0.05;
/// Required contraction of the composite inverse map over one period.
pub const CONTRACTION_BOUND: f64 = 0.9;

const MAX_PASSES: usize = 100_000;

/// A cyclic binary word of exact period `len`, stored as its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Code {
    pub bits: Vec<u8>,
}

impl Code {
    pub fn parse(s: &str) -> Option<Code> {
        let bits: Option<Vec<u8>> = s
            .chars()
            .map(|ch| match ch {
                '0' => Some(0),
                '1' => Some(1),
                _ => None,
            })
            .collect();
        bits.filter(|b| !b.is_empty()).map(|bits| Code { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Shift left by one: the itinerary of the image point.
    pub fn rotate(&self) -> Code {
        let mut bits = self.bits.clone();
        bits.rotate_left(1);
        Code { bits }
    }

    pub fn flipped(&self) -> Code {
        Code { bits: self.bits.iter().map(|b| 1 - b).collect() }
    }

    fn exact_period(&self) -> usize {
        let n = self.bits.len();
        (1..=n)
            .find(|&p| n % p == 0 && (0..n).all(|i| self.bits[i] == self.bits[(i + p) % n]))
            .unwrap_or(n)
    }

    fn is_least_rotation(&self) -> bool {
        let n = self.bits.len();
        (1..n).all(|s| {
            let rotated = self.bits[s..].iter().chain(&self.bits[..s]);
            self.bits.iter().le(rotated)
        })
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// One least-rotation representative per primitive necklace of length `n`.
pub fn exact_period_codes(n: u32) -> Vec<Code> {
    assert!((1..=30).contains(&n), "period out of range");
    let n = n as usize;
    (0u64..1 << n)
        .map(|w| Code { bits: (0..n).map(|i| ((w >> (n - 1 - i)) & 1) as u8).collect() })
        .filter(|code| code.exact_period() == n && code.is_least_rotation())
        .collect()
}

fn branch(c_sqrt: &Complex, c: &Complex, w: &Complex, bit: u8, prec: u32) -> Complex {
    // ± i √c √(1 − w/c)
    let inner = Complex::with_val(prec, 1) - Complex::with_val(prec, w / c);
    let mut out = inner.sqrt() * c_sqrt;
    out.mul_i_mut(bit == 1);
    out
}

fn check_margin(c: &CFloat, margin: f64) -> Result<f64, NumError> {
    let g = green_m(c, 1e-12);
    if !g.escaped || g.value <= margin {
        return Err(NumError::NoContraction(format!(
            "g_M(c) = {:.6} is not above the margin {margin}",
            g.value
        )));
    }
    Ok(g.value)
}

/// The cycle whose `k`-th point lies in the branch region of bit `k`.
pub fn point_by_code(c: &CFloat, code: &Code, prec: u32) -> Result<Cycle, NumError> {
    point_by_code_with_margin(c, code, prec, DEFAULT_MARGIN)
}

pub fn point_by_code_with_margin(c: &CFloat, code: &Code, prec: u32, margin: f64) -> Result<Cycle, NumError> {
    check_margin(c, margin)?;
    trace_code(c, code, prec)
}

fn trace_code(c: &CFloat, code: &Code, prec: u32) -> Result<Cycle, NumError> {
    let n = code.len();
    let cc = Complex::with_val(prec, c.as_complex());
    let c_sqrt = Complex::with_val(prec, cc.sqrt_ref());
    let tol = Float::with_val(prec, 1) >> (prec - 4);
    let mut w = Complex::new(prec);
    let mut converged = false;
    for _ in 0..MAX_PASSES {
        let mut next = w.clone();
        for k in (0..n).rev() {
            next = branch(&c_sqrt, &cc, &next, code.bits[k], prec);
        }
        let step = Float::with_val(prec, Complex::with_val(prec, &next - &w).abs_ref());
        w = next;
        if step <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(NumError::NoContraction(format!("code {code} did not settle")));
    }
    // Forward orbit through the branch choices, so that point k carries bit k.
    let mut points = vec![Complex::new(prec); n];
    points[0] = w.clone();
    let mut cur = w;
    for k in (1..n).rev() {
        cur = branch(&c_sqrt, &cc, &cur, code.bits[k], prec);
        points[k] = cur.clone();
    }
    let mut rho = Complex::with_val(prec, 1);
    for p in &points {
        rho *= p;
        rho *= 2;
    }
    let contraction = Float::with_val(prec, rho.abs_ref()).recip().to_f64();
    if contraction > CONTRACTION_BOUND {
        return Err(NumError::NoContraction(format!(
            "code {code}: |1/ρ| = {contraction:.4} exceeds {CONTRACTION_BOUND}"
        )));
    }
    let points: Vec<CFloat> = points.into_iter().map(CFloat::from_complex).collect();
    // A contraction by κ per pass leaves the fixed point within step·κ/(1−κ).
    let radius = tol.to_f64() * 2.0;
    Ok(Cycle::new(points, CFloat::from_complex(rho), vec![radius; n]))
}

/// All period-`n` cycles, one per exact-period code.
pub fn coded_cycles(c: &CFloat, n: u32, prec: u32) -> Result<Vec<(Code, Cycle)>, NumError> {
    check_margin(c, DEFAULT_MARGIN)?;
    let codes = exact_period_codes(n);
    let mut out = Vec::with_capacity(codes.len());
    for code in codes {
        let cycle = trace_code(c, &code, prec)?;
        out.push((code, cycle));
    }
    check_distinct(&out)?;
    Ok(out)
}

/// Distinct codes must give pairwise distinct points.
fn check_distinct(cycles: &[(Code, Cycle)]) -> Result<(), NumError> {
    let mut pts: Vec<(f64, f64, usize)> = Vec::new();
    for (i, (_, cyc)) in cycles.iter().enumerate() {
        for p in &cyc.points {
            let (x, y) = p.to_c64();
            pts.push((x, y, i));
        }
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    for (k, a) in pts.iter().enumerate() {
        for b in &pts[k + 1..] {
            if b.0 - a.0 > 1e-9 {
                break;
            }
            if (b.1 - a.1).abs() <= 1e-9 {
                return Err(NumError::NoContraction(format!(
                    "two codes reach the same point near ({}, {})",
                    a.0, a.1
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct CodeRate {
    pub code: String,
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplierGrowth {
    pub n: u32,
    /// `log 2 + g_M(c)/2`, the rate predicted by `σ_i(λ) ~ 2λ`.
    pub target: f64,
    pub per_code: Vec<CodeRate>,
    pub max_deviation: f64,
}

/// Per-code rates `(1/n) log|ρ_i|` and their largest deviation from the target.
pub fn multiplier_growth(c: &CFloat, n: u32) -> Result<MultiplierGrowth, NumError> {
    let g = check_margin(c, DEFAULT_MARGIN)?;
    let target = std::f64::consts::LN_2 + g / 2.0;
    let prec = c.prec().max(crate::cfloat::DEFAULT_PRECISION);
    let mut per_code = Vec::new();
    let mut max_deviation: f64 = 0.0;
    for (code, cycle) in coded_cycles(c, n, prec)? {
        let rate = cycle.multiplier.ln_abs().to_f64() / n as f64;
        max_deviation = max_deviation.max((rate - target).abs());
        per_code.push(CodeRate { code: code.to_string(), rate });
    }
    Ok(MultiplierGrowth { n, target, per_code, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn necklace_counts() {
        let show = |n| exact_period_codes(n).iter().map(|c| c.to_string()).collect::<Vec<_>>();
        assert_eq!(show(1), vec!["0", "1"]);
        assert_eq!(show(2), vec!["01"]);
        assert_eq!(show(3), vec!["001", "011"]);
        assert_eq!(exact_period_codes(6).len(), 9);
    }

    #[test]
    fn fixed_points_at_three() {
        let c = CFloat::from_real(3.0, 128);
        let up = point_by_code(&c, &Code::parse("0").unwrap(), 128).unwrap();
        let (x, y) = up.points[0].to_c64();
        assert!((x - 0.5).abs() < 1e-15 && (y - 1.658_312_395_177_699_9).abs() < 1e-15);
        let down = point_by_code(&c, &Code::parse("1").unwrap(), 128).unwrap();
        assert!((down.points[0].im_f64() + 1.658_312_395_177_699_9).abs() < 1e-15);
    }

    #[test]
    fn two_cycle_at_three() {
        let c = CFloat::from_real(3.0, 128);
        let cyc = point_by_code(&c, &Code::parse("01").unwrap(), 128).unwrap();
        assert!((cyc.multiplier.re_f64() - 16.0).abs() < 1e-25);
        assert!(cyc.points[0].im_f64() > 0.0 && cyc.points[1].im_f64() < 0.0);
    }

    #[test]
    fn inside_the_mandelbrot_set_is_rejected() {
        let c = CFloat::from_real(-1.0, 128);
        assert!(matches!(point_by_code(&c, &Code::parse("0").unwrap(), 128), Err(NumError::NoContraction(_))));
    }
}
