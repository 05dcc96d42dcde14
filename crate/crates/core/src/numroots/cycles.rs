use rug::{Complex, Float};

use super::oracle::{implicit_roots, DynatomicAt};
use super::{CompensatedSum, NumError};
use crate::cfloat::CFloat;
use crate::dynatomic::{d_n, nu_n};
use crate::itinerary;
use crate::potential::green_m;

/// An ordered period-`n` orbit with its multiplier `Π 2·points[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    pub points: Vec<CFloat>,
    pub multiplier: CFloat,
    pub period: u32,
    /// Inclusion radius of each point.
    pub radii: Vec<f64>,
}

impl Cycle {
    pub fn new(points: Vec<CFloat>, multiplier: CFloat, radii: Vec<f64>) -> Self {
        let period = points.len() as u32;
        Cycle { points, multiplier, period, radii }
    }

    /// Start the orbit at `points[k]`.
    pub fn rotated(&self, k: usize) -> Cycle {
        let mut out = self.clone();
        out.points.rotate_left(k);
        out.radii.rotate_left(k);
        out.multiplier = multiplier_of(&out.points);
        out
    }

    /// First-order bound on the multiplier error from the point radii, plus
    /// rounding in the product.
    pub fn multiplier_error(&self) -> f64 {
        let m = self.multiplier.abs_f64();
        let rel: f64 = self
            .points
            .iter()
            .zip(&self.radii)
            .map(|(z, r)| {
                let a = z.abs_f64();
                if a > 2.0 * r {
                    r / (a - r)
                } else {
                    f64::INFINITY
                }
            })
            .sum();
        let first = if rel.is_finite() { m * rel * (1.0 + rel) } else { 2.0 * self.radii.iter().sum::<f64>().max(1.0) };
        let rounding = m * (self.points.len() as f64 + 2.0) * 2f64.powi(-(self.multiplier.prec() as i32) + 2);
        first + rounding
    }

    /// `max_i |f_c(points[i]) − points[i+1]|`.
    pub fn closure_residual(&self, c: &CFloat) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| {
                let image = self.points[i].square() + c.clone();
                image.dist(&self.points[(i + 1) % n])
            })
            .fold(0.0, f64::max)
    }
}

fn multiplier_of(points: &[CFloat]) -> CFloat {
    let prec = points.iter().map(|p| p.prec()).max().unwrap_or(53);
    let mut m = Complex::with_val(prec, 1);
    for p in points {
        m *= p.as_complex();
        m *= 2;
    }
    CFloat::from_complex(m)
}

/// Which construction produced a set of cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleSource {
    /// Inverse-branch contraction along binary codes (parameter outside M).
    Itinerary,
    /// Simultaneous root finding on the dynatomic polynomial.
    Aberth,
}

/// The forward orbit of `z` under `f_c`, closed after `n` steps.
pub fn cycle_from_point(c: &CFloat, z: &CFloat, n: u32, radius: f64) -> Cycle {
    let prec = c.prec().max(z.prec());
    let cc = Complex::with_val(prec, c.as_complex());
    let mut w = Complex::with_val(prec, z.as_complex());
    let mut points = Vec::with_capacity(n as usize);
    for _ in 0..n {
        points.push(CFloat::from_complex(w.clone()));
        w.square_mut();
        w += &cc;
    }
    let multiplier = multiplier_of(&points);
    // The radius grows by at most |2z| per forward step.
    let mut radii = Vec::with_capacity(n as usize);
    let mut r = radius;
    for p in &points {
        radii.push(r);
        r *= 2.0 * p.abs_f64() + r;
    }
    Cycle::new(points, multiplier, radii)
}

/// All `nu_n / n` cycles of exact period `n` of `f_c`, from the roots of
/// `Φ_n(·, c)` grouped by forward iteration.
pub fn periodic_cycles(c: &CFloat, n: u32, prec: u32) -> Result<Vec<Cycle>, NumError> {
    if n == 0 {
        return Err(NumError::InvalidInput("period must be positive".into()));
    }
    let c = c.with_prec(prec);
    let set = implicit_roots(&DynatomicAt::new(n, &c), prec)
        .map_err(|e| NumError::ClusterUnresolved(format!("dynatomic roots at period {n}: {e}")))?;
    let roots: Vec<CFloat> = set.roots.iter().map(|e| e.value.clone()).collect();
    let radii: Vec<f64> = set.roots.iter().map(|e| e.radius).collect();
    let next = successor_map(&c, &roots)?;

    let mut seen = vec![false; roots.len()];
    let mut cycles = Vec::with_capacity(roots.len() / n as usize);
    for start in 0..roots.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut k = next[start];
        while k != start {
            if seen[k] || orbit.len() >= n as usize {
                return Err(NumError::ClusterUnresolved(format!("orbit grouping broke at period {n}")));
            }
            seen[k] = true;
            orbit.push(k);
            k = next[k];
        }
        if orbit.len() != n as usize {
            return Err(NumError::ClusterUnresolved(format!(
                "found an orbit of length {} at period {n}",
                orbit.len()
            )));
        }
        let points: Vec<CFloat> = orbit.iter().map(|&i| roots[i].clone()).collect();
        let r: Vec<f64> = orbit.iter().map(|&i| radii[i]).collect();
        cycles.push(Cycle::new(points.clone(), multiplier_of(&points), r));
    }
    debug_assert_eq!(cycles.len() as u64 * n as u64, nu_n(n));
    Ok(cycles)
}

/// For each root, the index of the root nearest to its image. The match must
/// be unambiguous: the nearest candidate is 1000 times closer than the next.
fn successor_map(c: &CFloat, roots: &[CFloat]) -> Result<Vec<usize>, NumError> {
    let coords: Vec<(f64, f64)> = roots.iter().map(|r| r.to_c64()).collect();
    let mut next = vec![usize::MAX; roots.len()];
    let mut taken = vec![false; roots.len()];
    for (i, r) in roots.iter().enumerate() {
        let image = r.square() + c.clone();
        let (x, y) = image.to_c64();
        let mut best = (f64::INFINITY, usize::MAX);
        let mut second = f64::INFINITY;
        for (j, &(a, b)) in coords.iter().enumerate() {
            let d = (a - x).hypot(b - y);
            if d < best.0 {
                second = best.0;
                best = (d, j);
            } else if d < second {
                second = d;
            }
        }
        let (d1, j) = best;
        let d1 = if d1 < 1e-12 { image.dist(&roots[j]) } else { d1 };
        if !(d1 * 1000.0 < second) || taken[j] {
            return Err(NumError::ClusterUnresolved(format!("ambiguous image of root {i}")));
        }
        taken[j] = true;
        next[i] = j;
    }
    Ok(next)
}

/// Cycles at `c` from the itinerary construction when `c` is far enough
/// outside M, otherwise from root finding.
pub fn cycles_for(c: &CFloat, n: u32, prec: u32) -> Result<(Vec<Cycle>, CycleSource), NumError> {
    let g = green_m(c, 1e-12);
    if g.escaped && g.value > itinerary::DEFAULT_MARGIN {
        if let Ok(coded) = itinerary::coded_cycles(&c.with_prec(prec), n, prec) {
            return Ok((coded.into_iter().map(|(_, cyc)| cyc).collect(), CycleSource::Itinerary));
        }
    }
    Ok((periodic_cycles(c, n, prec)?, CycleSource::Aberth))
}

/// `u_{n,ρ}(c) = (1/d_n) Σ_C log|ρ − ρ(C)|`, or `−∞` when `ρ` is a cycle
/// multiplier to within the error bounds.
pub fn u_value(c: &CFloat, n: u32, rho: &CFloat) -> Result<f64, NumError> {
    let prec = c.prec().max(rho.prec()).max(super::START_PRECISION);
    let (cycles, _) = cycles_for(c, n, prec)?;
    Ok(u_value_from_cycles(&cycles, n, rho))
}

pub fn u_value_from_cycles(cycles: &[Cycle], n: u32, rho: &CFloat) -> f64 {
    let mut sum = CompensatedSum::default();
    for cyc in cycles {
        let diff = rho.clone() - cyc.multiplier.clone();
        let bound = cyc.multiplier_error() + rho.abs_f64() * 2f64.powi(-(rho.prec() as i32) + 1);
        let size = diff.abs();
        if size <= Float::with_val(53, bound) {
            return f64::NEG_INFINITY;
        }
        sum.add(size.ln().to_f64());
    }
    sum.value() / d_n(n) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_at_zero_have_multiplier_two_to_the_n() {
        let cycles = periodic_cycles(&CFloat::zero(128), 3, 128).unwrap();
        assert_eq!(cycles.len(), 2);
        for cyc in &cycles {
            assert!(cyc.multiplier.dist(&CFloat::from_real(8.0, 128)) < 1e-30);
            assert!(cyc.closure_residual(&CFloat::zero(128)) < 1e-30);
        }
    }

    #[test]
    fn basilica_cycle() {
        let c = CFloat::from_real(-1.0, 128);
        let cycles = periodic_cycles(&c, 2, 128).unwrap();
        assert_eq!(cycles.len(), 1);
        assert!(cycles[0].multiplier.abs_f64() < 1e-30);
    }

    #[test]
    fn rotation_keeps_multiplier() {
        let c = CFloat::new(0.3, 0.2, 128);
        for cyc in periodic_cycles(&c, 4, 128).unwrap() {
            for k in 1..4 {
                assert!(cyc.rotated(k).multiplier.dist(&cyc.multiplier) < 1e-28);
            }
        }
    }

    #[test]
    fn u_value_at_zero() {
        let zero = CFloat::zero(128);
        let u = u_value(&zero, 3, &zero).unwrap();
        assert!((u - 2.0 * std::f64::consts::LN_2).abs() < 1e-14);
        assert_eq!(u_value(&zero, 3, &CFloat::from_real(8.0, 128)).unwrap(), f64::NEG_INFINITY);
        assert_eq!(u_value(&zero, 1, &zero).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn both_sources_agree_outside() {
        let c = CFloat::from_real(3.0, 128);
        let rho = CFloat::new(1.0, 0.0, 128);
        let (coded, src) = cycles_for(&c, 5, 128).unwrap();
        assert_eq!(src, CycleSource::Itinerary);
        let a = u_value_from_cycles(&coded, 5, &rho);
        let b = u_value_from_cycles(&periodic_cycles(&c, 5, 128).unwrap(), 5, &rho);
        assert!((a - b).abs() < 1e-13);
    }
}
