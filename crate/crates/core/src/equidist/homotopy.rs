//! Path tracking in the multiplier for periods beyond the exact cap.
//!
//! A parameter `c` lies in `X_n(ρ)` when some cycle `z₀, …, z_{n−1}` solves
//!
//! ```text
//! z_{i+1} = z_i² + c  (indices mod n),    ∏ 2 z_i = ρ.
//! ```
//!
//! At `ρ = 0` the solutions are the superattracting cycles over the centers
//! of period `n`. Each is continued in double precision on the whole cycle,
//! which stays well conditioned where the single composed map does not,
//! then polished in multiprecision. A path that stalls just short of a
//! singular endpoint (the satellites at `ρ = 1`) is handed to the polish.

use num_complex::Complex64 as C64;
use rug::{Complex, Float};

use crate::cfloat::CFloat;
use crate::dynatomic::divisors;

/// `(f^k)'(z) = Π 2 f^i(z)` over the first `k` points of the orbit.
pub(crate) fn orbit_multiplier(z: C64, c: C64, k: u32) -> C64 {
    let (mut w, mut a) = (z, C64::new(1.0, 0.0));
    for _ in 0..k {
        a *= 2.0 * w;
        w = w * w + c;
    }
    a
}

/// The whole cycle `z_0, …, z_{n−1}` together with `c`. Tracking every
/// point keeps the Jacobian entries of size `|z|`, where the single-point
/// system `f^n(z) = z` has derivatives of the size of the multiplier.
#[derive(Debug, Clone)]
pub(crate) struct CycleState {
    pub z: Vec<C64>,
    pub c: C64,
}

impl CycleState {
    /// The critical orbit of a center, which has multiplier 0.
    pub fn at_center(n: u32, c: C64) -> Self {
        let mut z = vec![C64::new(0.0, 0.0); n as usize];
        for i in 1..n as usize {
            z[i] = z[i - 1] * z[i - 1] + c;
        }
        CycleState { z, c }
    }

    /// The orbit of `z`, which need not close up.
    pub fn from_point(n: u32, z: C64, c: C64) -> Self {
        let mut pts = vec![z; n as usize];
        for i in 1..n as usize {
            pts[i] = pts[i - 1] * pts[i - 1] + c;
        }
        CycleState { z: pts, c }
    }

    fn scale(&self) -> f64 {
        1.0 + self.c.norm() + self.z.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn shifted(&self, d: &[C64], h: f64) -> Self {
        let n = self.z.len();
        CycleState { z: (0..n).map(|i| self.z[i] + d[i] * h).collect(), c: self.c + d[n] * h }
    }
}

fn rho_scale(rho: C64) -> f64 {
    rho.norm().max(1.0)
}

/// `z_{i+1} − z_i² − c` for each `i` (cyclically) and `(Π 2z_i − ρ) / max(1, |ρ|)`.
fn residual(st: &CycleState, rho: C64) -> Vec<C64> {
    let n = st.z.len();
    let mut out: Vec<C64> = (0..n).map(|i| st.z[(i + 1) % n] - st.z[i] * st.z[i] - st.c).collect();
    let prod = st.z.iter().fold(C64::new(1.0, 0.0), |p, z| p * 2.0 * z);
    out.push((prod - rho) / rho_scale(rho));
    out
}

fn jacobian(st: &CycleState, rho: C64) -> Vec<Vec<C64>> {
    let n = st.z.len();
    let zero = C64::new(0.0, 0.0);
    let mut j = vec![vec![zero; n + 1]; n + 1];
    for i in 0..n {
        j[i][(i + 1) % n] += 1.0;
        j[i][i] -= 2.0 * st.z[i];
        j[i][n] = C64::new(-1.0, 0.0);
    }
    // products of 2z over all indices but one, without division
    let mut prefix = vec![C64::new(1.0, 0.0); n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] * 2.0 * st.z[i];
    }
    let mut suffix = C64::new(1.0, 0.0);
    let s = rho_scale(rho);
    for i in (0..n).rev() {
        j[n][i] = prefix[i] * suffix * 2.0 / s;
        suffix = suffix * 2.0 * st.z[i];
    }
    j
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<C64>>, mut b: Vec<C64>) -> Option<Vec<C64>> {
    let m = b.len();
    for k in 0..m {
        let p = (k..m).max_by(|&x, &y| a[x][k].norm().total_cmp(&a[y][k].norm()))?;
        if a[p][k].norm() == 0.0 {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        for r in k + 1..m {
            let f = a[r][k] / a[k][k];
            if f.norm() == 0.0 {
                continue;
            }
            for col in k..m {
                let t = a[k][col];
                a[r][col] -= f * t;
            }
            let t = b[k];
            b[r] -= f * t;
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); m];
    for k in (0..m).rev() {
        let mut acc = b[k];
        for col in k + 1..m {
            acc -= a[k][col] * x[col];
        }
        x[k] = acc / a[k][k];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn newton_step(st: &CycleState, rho: C64) -> Option<Vec<C64>> {
    let r = residual(st, rho);
    solve(jacobian(st, rho), r.into_iter().map(|x| -x).collect())
}

/// Derivative of the state along `ρ'`.
fn tangent(st: &CycleState, rho: C64, drho: C64) -> Option<Vec<C64>> {
    let n = st.z.len();
    let mut rhs = vec![C64::new(0.0, 0.0); n + 1];
    rhs[n] = drho / rho_scale(rho);
    solve(jacobian(st, rho), rhs)
}

/// One leg of the multiplier path, parameterized by `s ∈ [0, 1]`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Leg {
    Line { from: C64, to: C64 },
    /// `exp((1−s)·from + s·to)` in logarithmic coordinates.
    Spiral { from: C64, to: C64 },
}

impl Leg {
    fn at(&self, s: f64) -> (C64, C64) {
        match *self {
            Leg::Line { from, to } => (from + (to - from) * s, to - from),
            Leg::Spiral { from, to } => {
                let r = (from + (to - from) * s).exp();
                (r, r * (to - from))
            }
        }
    }
}

/// Legs from `ρ = 0` to `target`. Inside the unit disk a straight segment
/// stays in the hyperbolic component; outside, the path leaves the disk
/// through `|ρ| = 1` away from the root `ρ = 1` and spirals in the
/// logarithm. `twist` varies the detour for re-tracking.
pub(crate) fn legs(target: C64, twist: f64) -> Vec<Leg> {
    let zero = C64::new(0.0, 0.0);
    if target.norm() <= 1.0 && twist == 0.0 {
        return vec![Leg::Line { from: zero, to: target }];
    }
    let base = if target.norm() > 0.0 { target.arg() } else { 0.0 };
    let mid = C64::from_polar(0.5, base + 0.3 + twist);
    let from = C64::new(0.5f64.ln(), base + 0.3 + twist);
    let to = C64::new(target.norm().ln(), base);
    vec![Leg::Line { from: zero, to: mid }, Leg::Spiral { from, to }]
}

#[derive(Debug, Clone)]
pub(crate) struct TrackEnd {
    pub state: CycleState,
    /// Reached `s = 1` on the last leg.
    pub complete: bool,
}

const MIN_STEP: f64 = 1e-13;
const CORRECTOR_TOL: f64 = 1e-11;
const ENDGAME: f64 = 1e-3;

/// Follow the cycle of the center `c0` along the legs.
pub(crate) fn track(n: u32, c0: C64, legs: &[Leg], max_step: f64) -> TrackEnd {
    track_from(CycleState::at_center(n, c0), legs, max_step)
}

pub(crate) fn track_from(mut st: CycleState, legs: &[Leg], max_step: f64) -> TrackEnd {
    for leg in legs {
        let mut s = 0.0;
        let mut h = max_step / 4.0;
        while s < 1.0 {
            h = h.min(1.0 - s);
            let (rho, d0) = leg.at(s);
            let ok = tangent(&st, rho, d0).and_then(|t| {
                let (next, _) = leg.at(s + h);
                correct(&st.shifted(&t, h), next, max_norm(&t) * h)
            });
            match ok {
                Some(next) => {
                    st = next;
                    s += h;
                    h = (h * 1.5).min(max_step);
                }
                None => {
                    h /= 2.0;
                    if h < MIN_STEP {
                        // a collapsing cycle at ρ = 1 makes the end singular;
                        // refinement takes over from close enough
                        let last = std::ptr::eq(leg, legs.last().expect("nonempty"));
                        return TrackEnd { state: st, complete: last && 1.0 - s < ENDGAME };
                    }
                }
            }
        }
    }
    TrackEnd { state: st, complete: true }
}

/// Newton corrector; rejects large or non-contracting corrections. Endpoints
/// are polished in multiprecision, so the tolerance only has to keep the
/// iterate on its own path.
fn correct(start: &CycleState, rho: C64, predicted: f64) -> Option<CycleState> {
    let tol = CORRECTOR_TOL * start.scale();
    let mut st = start.clone();
    let mut last = f64::INFINITY;
    for it in 0..8 {
        let d = newton_step(&st, rho)?;
        let size = max_norm(&d);
        if it == 0 && size > 0.3 * predicted + tol {
            return None;
        }
        st = st.shifted(&d, 1.0);
        if size <= tol {
            return Some(st);
        }
        if size > 0.5 * last {
            return None;
        }
        last = size;
    }
    None
}

/// Multiprecision Newton polish of `(f^k(z) − z, (f^k)'(z) − target)`.
/// Returns the solution and the size of the last correction in `c`.
pub(crate) fn polish_system(k: u32, z: C64, c: C64, target: &CFloat, prec: u32) -> Option<(CFloat, CFloat, f64)> {
    let mut z = Complex::with_val(prec, (z.re, z.im));
    let mut c = Complex::with_val(prec, (c.re, c.im));
    let target = Complex::with_val(prec, target.as_complex());
    let tol = Float::with_val(prec, 1) >> (prec - 10);
    let mut last = Float::with_val(prec, f64::INFINITY);
    for _ in 0..80 {
        let (mut w, mut a, mut b) = (z.clone(), Complex::with_val(prec, 1), Complex::new(prec));
        let (mut az, mut ac) = (Complex::new(prec), Complex::new(prec));
        for _ in 0..k {
            az = Complex::with_val(prec, &a * &a) + Complex::with_val(prec, &w * &az);
            az *= 2;
            ac = Complex::with_val(prec, &b * &a) + Complex::with_val(prec, &w * &ac);
            ac *= 2;
            b *= &w;
            b *= 2;
            b += 1;
            a *= &w;
            a *= 2;
            w.square_mut();
            w += &c;
        }
        let f = Complex::with_val(prec, &w - &z);
        let fz = Complex::with_val(prec, &a - 1);
        let g = Complex::with_val(prec, &a - &target);
        let det = Complex::with_val(prec, &fz * &ac) - Complex::with_val(prec, &b * &az);
        if det.real().is_zero() && det.imag().is_zero() {
            return None;
        }
        let dz = -(Complex::with_val(prec, &f * &ac) - Complex::with_val(prec, &b * &g)) / &det;
        let dc = -(Complex::with_val(prec, &fz * &g) - Complex::with_val(prec, &f * &az)) / &det;
        let size_c = Float::with_val(prec, dc.abs_ref());
        let size = Float::with_val(prec, dz.abs_ref()) + &size_c;
        if !size.is_finite() {
            return None;
        }
        z += dz;
        c += dc;
        let scale = Float::with_val(prec, c.abs_ref()) + Float::with_val(prec, z.abs_ref()) + 1u32;
        if size <= Float::with_val(prec, &tol * &scale) {
            let r = size_c.to_f64() * 2.0 + (Float::with_val(prec, &tol * &scale).to_f64());
            return Some((CFloat::from_complex(z), CFloat::from_complex(c), r));
        }
        // quadratic convergence must set in once corrections are small
        if size > last && size < Float::with_val(prec, 1e-8) {
            return None;
        }
        last = size;
    }
    None
}

fn mp_abs(x: &Complex) -> f64 {
    Float::with_val(53, x.abs_ref()).to_f64()
}

/// Multiprecision Newton on the cycle system. Returns the first point, `c`
/// and a bound on the error in `c`.
pub(crate) fn polish_cycle(st: &CycleState, target: &CFloat, prec: u32) -> Option<(CFloat, CFloat, f64)> {
    let n = st.z.len();
    let mut z: Vec<Complex> = st.z.iter().map(|p| Complex::with_val(prec, (p.re, p.im))).collect();
    let mut c = Complex::with_val(prec, (st.c.re, st.c.im));
    let rho = Complex::with_val(prec, target.as_complex());
    let inv_scale = Float::with_val(prec, 1) / Float::with_val(prec, rho.abs_ref()).max(&Float::with_val(prec, 1));
    let tol = 2f64.powi(-(prec as i32) + 10);
    let mut last = f64::INFINITY;
    for _ in 0..80 {
        // residual and Jacobian, as in the double-precision tracker
        let mut rhs: Vec<Complex> = (0..n)
            .map(|i| {
                let mut r = Complex::with_val(prec, z[i].square_ref());
                r += &c;
                r -= &z[(i + 1) % n];
                r
            })
            .collect();
        let mut prefix = vec![Complex::with_val(prec, 1)];
        for zi in &z {
            let next = Complex::with_val(prec, prefix.last().expect("nonempty") * zi) * 2u32;
            prefix.push(next);
        }
        let mut last_row = Complex::with_val(prec, &prefix[n] - &rho);
        last_row *= &inv_scale;
        rhs.push(-last_row);
        let mut a = vec![vec![Complex::new(prec); n + 1]; n + 1];
        for i in 0..n {
            a[i][(i + 1) % n] += 1u32;
            let two_z = Complex::with_val(prec, &z[i] * 2u32);
            a[i][i] -= two_z;
            a[i][n] = Complex::with_val(prec, -1);
        }
        let mut suffix = Complex::with_val(prec, 1);
        for i in (0..n).rev() {
            let mut d = Complex::with_val(prec, &prefix[i] * &suffix);
            d *= 2u32;
            d *= &inv_scale;
            a[n][i] = d;
            suffix *= &z[i];
            suffix *= 2u32;
        }
        let d = solve_mp(a, rhs, prec)?;
        let size = d.iter().map(mp_abs).fold(0.0, f64::max);
        let size_c = mp_abs(&d[n]);
        if !size.is_finite() {
            return None;
        }
        for (zi, di) in z.iter_mut().zip(&d) {
            *zi += di;
        }
        c += &d[n];
        let scale = 1.0 + mp_abs(&c) + z.iter().map(mp_abs).fold(0.0, f64::max);
        if size <= tol * scale {
            let r = 2.0 * size_c + tol * scale;
            let first = z.swap_remove(0);
            return Some((CFloat::from_complex(first), CFloat::from_complex(c), r));
        }
        // quadratic convergence must set in once corrections are small
        if size > last && size < 1e-8 * scale {
            return None;
        }
        last = size;
    }
    None
}

fn solve_mp(mut a: Vec<Vec<Complex>>, mut b: Vec<Complex>, prec: u32) -> Option<Vec<Complex>> {
    let m = b.len();
    for k in 0..m {
        let p = (k..m).max_by(|&x, &y| mp_abs(&a[x][k]).total_cmp(&mp_abs(&a[y][k])))?;
        if a[p][k].real().is_zero() && a[p][k].imag().is_zero() {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        let pivot = a[k][k].clone();
        for r in k + 1..m {
            if a[r][k].real().is_zero() && a[r][k].imag().is_zero() {
                continue;
            }
            let f = Complex::with_val(prec, &a[r][k] / &pivot);
            for col in k..m {
                let t = Complex::with_val(prec, &f * &a[k][col]);
                a[r][col] -= t;
            }
            let t = Complex::with_val(prec, &f * &b[k]);
            b[r] -= t;
        }
    }
    let mut x = vec![Complex::new(prec); m];
    for k in (0..m).rev() {
        let mut acc = b[k].clone();
        for col in k + 1..m {
            acc -= Complex::with_val(prec, &a[k][col] * &x[col]);
        }
        x[k] = acc / &a[k][k];
    }
    Some(x)
}

/// A solution of the period-`n` system, or of a degenerate satellite
/// system when `ρ = 1` and the `n`-cycle has collapsed onto a `k`-cycle
/// whose multiplier is a primitive `n/k`-th root of unity.
#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub z: CFloat,
    pub c: CFloat,
    pub radius: f64,
    /// Period of the cycle actually solved for.
    pub period: u32,
}

/// Polish `(z, c)` onto the period-`n` system at `rho`; near `ρ = 1` also
/// try the satellite systems.
pub(crate) fn refine(n: u32, st: &CycleState, rho: &CFloat, prec: u32) -> Option<Solution> {
    if let Some((zz, cc, r)) = polish_cycle(st, rho, prec) {
        return Some(Solution { z: zz, c: cc, radius: r, period: n });
    }
    let (z, c) = (st.z[0], st.c);
    if rho.dist(&CFloat::one(rho.prec())) > 1e-12 {
        return None;
    }
    let mut best: Option<(f64, Solution)> = None;
    for k in divisors(n).into_iter().filter(|&k| k < n) {
        let q = n / k;
        let a = orbit_multiplier(z, c, k);
        // nearest primitive q-th root of unity to the current k-multiplier
        let omega = (1..q)
            .filter(|p| gcd(*p, q) == 1)
            .map(|p| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * p as f64 / q as f64))
            .min_by(|x, y| (x - a).norm().total_cmp(&(y - a).norm()))?;
        let target = root_of_unity(q, omega, prec);
        if let Some((zz, cc, r)) = polish_system(k, z, c, &target, prec) {
            let (x, y) = cc.to_c64();
            let moved = (C64::new(x, y) - c).norm();
            if best.as_ref().map_or(true, |b| moved < b.0) {
                best = Some((moved, Solution { z: zz, c: cc, radius: r, period: k }));
            }
        }
    }
    best.filter(|(moved, _)| *moved < 1e-3 * (1.0 + c.norm())).map(|b| b.1)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `e^{2πi p/q}` at full precision, identified by its f64 approximation.
fn root_of_unity(q: u32, approx: C64, prec: u32) -> CFloat {
    let p = (approx.arg() / (2.0 * std::f64::consts::PI) * q as f64).round();
    let angle: Float = Float::with_val(prec, rug::float::Constant::Pi) * 2 * p / q;
    let (s, co) = angle.sin_cos(Float::new(prec));
    CFloat::from_floats(co, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_jacobian_matches_finite_differences() {
        let st = CycleState { z: vec![C64::new(0.3, -0.2), C64::new(-0.7, 0.4), C64::new(1.1, 0.1)], c: C64::new(-0.4, 0.5) };
        let rho = C64::new(3.0, -2.0);
        let j = jacobian(&st, rho);
        let base = residual(&st, rho);
        let h = 1e-7;
        for k in 0..4 {
            let mut d = vec![C64::new(0.0, 0.0); 4];
            d[k] = C64::new(1.0, 0.0);
            let moved = residual(&st.shifted(&d, h), rho);
            for r in 0..4 {
                assert!(((moved[r] - base[r]) / h - j[r][k]).norm() < 1e-5, "row {r} col {k}");
            }
        }
    }

    #[test]
    fn elimination_solves_permuted_systems() {
        let one = C64::new(1.0, 0.0);
        let a = vec![vec![C64::new(0.0, 0.0), one, one], vec![C64::new(2.0, 1.0), one, C64::new(0.0, 0.0)], vec![one, C64::new(0.0, -3.0), one]];
        let x = vec![C64::new(1.0, 2.0), C64::new(-1.0, 0.5), C64::new(0.25, 0.0)];
        let b: Vec<C64> = a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
        let got = solve(a, b).unwrap();
        assert!(got.iter().zip(&x).all(|(p, q)| (p - q).norm() < 1e-14));
    }

    #[test]
    fn period_two_path_to_multiplier_minus_one() {
        // R_2(c, ρ) = ρ − 4c − 4: the basilica center moves to −5/4.
        let end = track(2, C64::new(-1.0, 0.0), &legs(C64::new(-1.0, 0.0), 0.0), 0.05);
        assert!(end.complete);
        assert!((end.state.c - C64::new(-1.25, 0.0)).norm() < 1e-10);
        let sol = refine(2, &end.state, &CFloat::from_real(-1.0, 128), 128).unwrap();
        assert!(sol.c.dist(&CFloat::from_real(-1.25, 128)) < 1e-30);
    }

    #[test]
    fn satellite_endpoint_is_recovered() {
        // ρ = 1 on the period-2 path ends at c = −3/4, where the 2-cycle
        // collapses onto the fixed point with multiplier −1.
        let end = track(2, C64::new(-1.0, 0.0), &legs(C64::new(1.0, 0.0), 0.0), 0.05);
        let sol = refine(2, &end.state, &CFloat::one(128), 128).unwrap();
        assert_eq!(sol.period, 1);
        assert!(sol.c.dist(&CFloat::from_real(-0.75, 128)) < 1e-30);
    }
}
