//! Multiprecision Aberth–Ehrlich iteration with certified inclusion disks.
//!
//! Inclusion radii come from the Weierstrass corrections: with
//! `W_i = p(z_i) / (a_d Π_{j≠i} (z_i − z_j))`, the disks `D(z_i, d·|W_i|)`
//! contain all roots, and a connected component made of `k` disks contains
//! exactly `k` of them. Overlapping disks are merged into one entry.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use rug::ops::CompleteRound;
use rug::{Complex, Float};

use super::{NumError, RootEntry, RootSet};
use crate::cfloat::{to_rug, CFloat};

/// Working precision of the first attempt.
pub const START_PRECISION: u32 = 128;
/// Last precision of the escalation ladder.
pub const MAX_PRECISION: u32 = 2048;

const MAX_SWEEPS: usize = 600;
/// Fixed irrational offset for initial arguments.
const ROTATION: f64 = 0.618_033_988_749_894_9;

static SOLVES: AtomicUsize = AtomicUsize::new(0);
static VIETA_CHECKS: AtomicUsize = AtomicUsize::new(0);
static VIETA_FAILURES: AtomicUsize = AtomicUsize::new(0);

/// Counters over the life of the process: `(solves, vieta checks, vieta failures)`.
pub fn vieta_counters() -> (usize, usize, usize) {
    (
        SOLVES.load(Ordering::Relaxed),
        VIETA_CHECKS.load(Ordering::Relaxed),
        VIETA_FAILURES.load(Ordering::Relaxed),
    )
}

/// Roots of `Σ coeffs[k] z^k` (ascending order) with every inclusion radius at
/// most `target_radius`. Coefficients are used at their own precision.
pub fn aberth_solve(coeffs: &[CFloat], target_radius: f64) -> Result<RootSet, NumError> {
    let owned: Vec<Complex> = coeffs.iter().map(|c| c.as_complex().clone()).collect();
    solve(&|prec| owned.iter().map(|c| Complex::with_val(prec, c)).collect(), coeffs.len(), target_radius)
}

/// Same as [`aberth_solve`] for exact Gaussian-integer coefficients
/// `(re, im)`, which are re-rounded at every rung of the precision ladder.
pub fn aberth_solve_exact(coeffs: &[(BigInt, BigInt)], target_radius: f64) -> Result<RootSet, NumError> {
    let ints: Vec<(rug::Integer, rug::Integer)> = coeffs.iter().map(|(a, b)| (to_rug(a), to_rug(b))).collect();
    solve(
        &|prec| ints.iter().map(|(a, b)| Complex::with_val(prec, (a, b))).collect(),
        coeffs.len(),
        target_radius,
    )
}

fn solve(source: &dyn Fn(u32) -> Vec<Complex>, len: usize, target: f64) -> Result<RootSet, NumError> {
    SOLVES.fetch_add(1, Ordering::Relaxed);
    let probe = source(START_PRECISION);
    let degree = probe.iter().rposition(|c| !(c.real().is_zero() && c.imag().is_zero())).ok_or_else(|| NumError::InvalidInput("zero polynomial".into()))?;
    if degree == 0 || len == 0 {
        return Err(NumError::InvalidInput("degree must be at least one".into()));
    }
    let zeros = probe.iter().position(|c| !(c.real().is_zero() && c.imag().is_zero())).expect("nonzero");
    let mut prec = START_PRECISION;
    let mut approx: Option<Vec<Complex>> = None;
    let mut last_residual = f64::INFINITY;
    loop {
        let full = source(prec);
        let coeffs: Vec<Complex> = full[zeros..=degree].to_vec();
        let mut z = match approx.take() {
            Some(prev) => prev.into_iter().map(|x| Complex::with_val(prec, x)).collect(),
            None => initial_guesses(&coeffs, prec),
        };
        if !z.is_empty() {
            iterate(&coeffs, &mut z, prec);
        }
        let radii = weierstrass_radii(&coeffs, &z, prec);
        let mut entries = merge(&z, &radii, prec);
        if zeros > 0 {
            entries.push(RootEntry { value: CFloat::zero(prec), radius: 0.0, multiplicity: zeros });
        }
        let worst = entries.iter().map(|e| e.radius).fold(0.0f64, f64::max);
        if worst <= target {
            let set = RootSet { roots: entries, degree, precision: prec, certified: true };
            check_vieta(&full[..=degree], &set, prec)?;
            return Ok(set);
        }
        last_residual = last_residual.min(worst);
        if prec >= MAX_PRECISION {
            return Err(NumError::NoConvergence { residual: last_residual, precision: prec });
        }
        prec *= 2;
        approx = Some(z);
    }
}

/// Points on circles whose radii come from the upper convex hull of
/// `(k, log|a_k|)`.
fn initial_guesses(coeffs: &[Complex], prec: u32) -> Vec<Complex> {
    let d = coeffs.len() - 1;
    let logs: Vec<f64> = coeffs.iter().map(log2_abs).collect();
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..=d {
        if logs[k] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (i, j) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop j if it lies on or below the segment i -> k
            let cross = (logs[j] - logs[i]) * (k - i) as f64 - (logs[k] - logs[i]) * (j - i) as f64;
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut out = Vec::with_capacity(d);
    for w in hull.windows(2) {
        let (i, k) = (w[0], w[1]);
        let count = k - i;
        let log_r = (logs[i] - logs[k]) / count as f64;
        for j in 0..count {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 / count as f64) + 2.0 * std::f64::consts::PI * i as f64 / d as f64 + ROTATION;
            let r = Float::with_val(prec, log_r).exp2();
            let re = Float::with_val(prec, &r * theta.cos());
            let im = Float::with_val(prec, &r * theta.sin());
            out.push(Complex::with_val(prec, (re, im)));
        }
    }
    out
}

fn log2_abs(c: &Complex) -> f64 {
    let a = Float::with_val(c.prec().0, c.abs_ref());
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = a.to_f64_exp();
    m.abs().log2() + e as f64
}

/// `(p(x), p'(x), Σ|a_k||x|^k)` by Horner.
fn horner(coeffs: &[Complex], x: &Complex, prec: u32) -> (Complex, Complex, Float) {
    let mut p = Complex::new(prec);
    let mut dp = Complex::new(prec);
    let mut mag = Float::new(prec);
    let ax = Float::with_val(prec, x.abs_ref());
    for a in coeffs.iter().rev() {
        dp *= x;
        dp += &p;
        p *= x;
        p += a;
        mag *= &ax;
        mag += Float::with_val(prec, a.abs_ref());
    }
    (p, dp, mag)
}

fn iterate(coeffs: &[Complex], z: &mut [Complex], prec: u32) {
    let d = z.len();
    let tol = Float::with_val(prec, 1) >> (prec - 12);
    let unit = Float::with_val(prec, 1) >> (prec - 4);
    let mut done = vec![false; d];
    for _ in 0..MAX_SWEEPS {
        let mut moved = false;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (p, dp, mag) = horner(coeffs, &z[i], prec);
            // at the rounding floor further sweeps only move z[i] by noise
            let noise = Float::with_val(prec, &mag * &unit) * (2 * d + 2) as u32;
            if Float::with_val(prec, p.abs_ref()) <= noise {
                done[i] = true;
                continue;
            }
            let newton = Complex::with_val(prec, &p / &dp);
            let mut s = Complex::new(prec);
            for j in 0..d {
                if j != i {
                    let diff = Complex::with_val(prec, &z[i] - &z[j]);
                    s += diff.recip();
                }
            }
            let denom = Complex::with_val(prec, 1) - Complex::with_val(prec, &newton * &s);
            let w = newton / denom;
            if !w.real().is_finite() || !w.imag().is_finite() {
                continue;
            }
            let size = Float::with_val(prec, w.abs_ref());
            let scale = Float::with_val(prec, z[i].abs_ref()).max(&Float::with_val(prec, 1));
            z[i] -= &w;
            if size <= Float::with_val(prec, &tol * &scale) {
                done[i] = true;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
}

fn weierstrass_radii(coeffs: &[Complex], z: &[Complex], prec: u32) -> Vec<f64> {
    let d = z.len();
    let lead = Float::with_val(prec, coeffs[d].abs_ref());
    let unit = Float::with_val(prec, 1) >> (prec - 4);
    (0..d)
        .map(|i| {
            let (p, _, mag) = horner(coeffs, &z[i], prec);
            // Horner rounding: at most 2d·u·Σ|a_k||z|^k.
            let err = Float::with_val(prec, &mag * &unit) * (2 * d + 2) as u32;
            let num = Float::with_val(prec, p.abs_ref()) + err;
            let mut den = lead.clone();
            for j in 0..d {
                if j != i {
                    den *= Float::with_val(prec, (&z[i] - &z[j]).complete((prec, prec)).abs_ref());
                }
            }
            if den.is_zero() {
                return f64::INFINITY;
            }
            let r = num / den * d as u32;
            let r = r.to_f64();
            // Inclusion must survive the final conversion to f64.
            if r == 0.0 {
                0.0
            } else {
                r * (1.0 + 1e-12) + f64::MIN_POSITIVE
            }
        })
        .collect()
}

/// Union of overlapping disks; each component becomes one entry.
fn merge(z: &[Complex], radii: &[f64], prec: u32) -> Vec<RootEntry> {
    let d = z.len();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..d {
        for j in i + 1..d {
            let dist = Float::with_val(prec, (&z[i] - &z[j]).complete((prec, prec)).abs_ref()).to_f64();
            if dist <= radii[i] + radii[j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; d];
    for i in 0..d {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
        .into_iter()
        .map(|members| {
            if members.len() == 1 {
                let i = members[0];
                return RootEntry { value: CFloat::from_complex(z[i].clone()), radius: radii[i], multiplicity: 1 };
            }
            let mut center = Complex::new(prec);
            for &i in &members {
                center += &z[i];
            }
            center /= members.len() as u32;
            let radius = members
                .iter()
                .map(|&i| Float::with_val(prec, (&z[i] - &center).complete((prec, prec)).abs_ref()).to_f64() + radii[i])
                .fold(0.0, f64::max);
            RootEntry { value: CFloat::from_complex(center), radius, multiplicity: members.len() }
        })
        .collect()
}

/// Sum and product of the roots against the coefficient ratios.
fn check_vieta(coeffs: &[Complex], set: &RootSet, prec: u32) -> Result<(), NumError> {
    VIETA_CHECKS.fetch_add(1, Ordering::Relaxed);
    let d = coeffs.len() - 1;
    let lead = &coeffs[d];
    let unit = Float::with_val(prec, 1) >> (prec - 16);
    let mut sum = Complex::new(prec);
    let mut sum_slack = Float::new(prec);
    let mut prod = Complex::with_val(prec, 1);
    let mut prod_hi = Float::with_val(prec, 1);
    let mut prod_lo = Float::with_val(prec, 1);
    let mut abs_sum = Float::new(prec);
    for e in &set.roots {
        let v = e.value.as_complex();
        let av = Float::with_val(prec, v.abs_ref());
        let r = Float::with_val(prec, e.radius);
        for _ in 0..e.multiplicity {
            sum += v;
            sum_slack += &r;
            abs_sum += &av;
            prod *= v;
            prod_hi *= Float::with_val(prec, &av + &r);
            prod_lo *= &av;
        }
    }
    let want_sum = Complex::with_val(prec, -&coeffs[d - 1]) / lead;
    let sum_err = Float::with_val(prec, (sum - &want_sum).abs_ref());
    let sum_tol = sum_slack + (abs_sum + Float::with_val(prec, want_sum.abs_ref())) * &unit;
    let sign = if d % 2 == 0 { 1 } else { -1 };
    let want_prod = Complex::with_val(prec, &coeffs[0] * sign) / lead;
    let prod_err = Float::with_val(prec, (prod - &want_prod).abs_ref());
    let prod_tol = Float::with_val(prec, &prod_hi - &prod_lo) + (prod_hi + Float::with_val(prec, want_prod.abs_ref())) * &unit;
    if sum_err <= sum_tol && prod_err <= prod_tol {
        Ok(())
    } else {
        VIETA_FAILURES.fetch_add(1, Ordering::Relaxed);
        Err(NumError::VietaMismatch { sum_error: sum_err.to_f64(), product_error: prod_err.to_f64() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> CFloat {
        CFloat::new(re, im, 128)
    }

    #[test]
    fn unit_quadratic() {
        let set = aberth_solve(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1e-30).unwrap();
        assert_eq!(set.total_multiplicity(), 2);
        let mut ims: Vec<f64> = set.roots.iter().map(|e| e.value.im_f64()).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-30 && (ims[1] - 1.0).abs() < 1e-30);
        assert!(set.roots.iter().all(|e| e.radius <= 1e-30 && e.value.re_f64().abs() < 1e-30));
    }

    #[test]
    fn exact_zero_roots_are_factored() {
        // z^3 - z^2 = z^2 (z - 1)
        let set = aberth_solve(&[c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)], 1e-20).unwrap();
        let zero = set.roots.iter().find(|e| e.value.is_zero()).unwrap();
        assert_eq!(zero.multiplicity, 2);
        assert_eq!(set.total_multiplicity(), 3);
    }

    #[test]
    fn double_root_is_merged() {
        // (z - 1)^2 (z + 2)
        let coeffs: Vec<(BigInt, BigInt)> = [2, -3, 0, 1].iter().map(|&a| (BigInt::from(a), BigInt::from(0))).collect();
        let set = aberth_solve_exact(&coeffs, 1e-20).unwrap();
        let double = set.roots.iter().find(|e| e.multiplicity == 2).unwrap();
        assert!((double.value.re_f64() - 1.0).abs() < 1e-20);
    }

    #[test]
    fn huge_coefficients() {
        // (z - 10^40)(z - 10^-40) has coefficients spanning 80 orders.
        let big = BigInt::from(10).pow(40);
        let coeffs = vec![(big.clone(), BigInt::from(0)), (-(&big * &big) - 1, BigInt::from(0)), (big.clone(), BigInt::from(0))];
        let set = aberth_solve_exact(&coeffs, 1e-60).unwrap();
        let mut mags: Vec<f64> = set.roots.iter().map(|e| e.value.abs_f64()).collect();
        mags.sort_by(f64::total_cmp);
        assert!((mags[0] * 1e40 - 1.0).abs() < 1e-12, "{mags:?}");
        assert!((mags[1] / 1e40 - 1.0).abs() < 1e-12);
    }
}
