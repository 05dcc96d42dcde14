//! Root finding for polynomials known only through their logarithmic
//! derivative: the dynatomic polynomial at a fixed parameter and the
//! exact-period factor of the critical orbit.
//!
//! Both are Möbius products of iterates, so `p'/p` is a signed sum of
//! `F'/F` terms that can be evaluated by iteration without ever forming the
//! (astronomically large) coefficients. Double-precision Aberth sweeps give
//! approximations that are then polished by multiprecision Newton steps.

use num_complex::Complex64 as C64;
use rug::{Complex, Float};

use super::{NumError, RootEntry, RootSet};
use crate::cfloat::CFloat;
use crate::dynatomic::{divisors, mobius, nu_n, d_n};

const MAX_SWEEPS: usize = 2000;
const ROTATION: f64 = 0.618_033_988_749_894_9;
/// Past this modulus the derivative is carried as the ratio `F'/F`.
const LARGE: f64 = 1e10;
/// Past this modulus only the ratio is carried; it doubles per step.
const HUGE: f64 = 1e150;

/// An iterate `F` with its derivative, switching to `q = F'/F` once `F` is
/// large so that nothing overflows.
#[derive(Debug, Clone, Copy)]
enum Orbit {
    Small { f: C64, df: C64 },
    Large { f: C64, q: C64 },
    Huge { q: C64 },
}

impl Orbit {
    fn new(f: C64, df: C64) -> Self {
        Orbit::Small { f, df }
    }

    /// `F ← F² + c`, `F' ← 2 F F' + shift`.
    fn step(&mut self, c: C64, shift: f64) {
        *self = match *self {
            Orbit::Small { f, df } => {
                let df = 2.0 * f * df + shift;
                let f = f * f + c;
                if f.norm() > LARGE {
                    Orbit::Large { f, q: df / f }
                } else {
                    Orbit::Small { f, df }
                }
            }
            Orbit::Large { f, q } => {
                let sq = f * f;
                let next = sq + c;
                // q' = (2 F² q + shift) / (F² + c)
                let q = (2.0 * q + shift / sq) / (1.0 + c / sq);
                if next.norm() > HUGE {
                    Orbit::Huge { q }
                } else {
                    Orbit::Large { f: next, q }
                }
            }
            Orbit::Huge { q } => Orbit::Huge { q: 2.0 * q },
        }
    }

    fn log_derivative(&self) -> C64 {
        match *self {
            Orbit::Small { f, df } => df / f,
            Orbit::Large { q, .. } | Orbit::Huge { q } => q,
        }
    }

    /// `(F' − 1) / (F − z)`.
    fn shifted_log_derivative(&self, z: C64) -> C64 {
        match *self {
            Orbit::Small { f, df } => (df - 1.0) / (f - z),
            Orbit::Large { f, q } => (q - 1.0 / f) / (1.0 - z / f),
            Orbit::Huge { q } => q,
        }
    }
}

/// A polynomial presented by its degree and logarithmic derivative.
pub trait LogDerivative {
    fn degree(&self) -> usize;
    /// Radius of a disk containing every root.
    fn root_bound(&self) -> f64;
    fn log_derivative(&self, x: C64) -> C64;
    fn log_derivative_mp(&self, x: &Complex, prec: u32) -> Complex;
}

/// `Φ_n(·, c)` as a polynomial in `z`.
#[derive(Debug, Clone)]
pub struct DynatomicAt {
    pub n: u32,
    pub c: CFloat,
    c64: C64,
    terms: Vec<(u32, i32)>,
}

impl DynatomicAt {
    pub fn new(n: u32, c: &CFloat) -> Self {
        let terms = divisors(n).into_iter().map(|m| (m, mobius(n / m))).filter(|t| t.1 != 0).collect();
        let (re, im) = c.to_c64();
        DynatomicAt { n, c: c.clone(), c64: C64::new(re, im), terms }
    }
}

/// Escape-radius bound on periodic points: `(1 + sqrt(1 + 4|c|)) / 2`.
pub fn periodic_point_bound(c_abs: f64) -> f64 {
    (1.0 + (1.0 + 4.0 * c_abs).sqrt()) / 2.0
}

impl LogDerivative for DynatomicAt {
    fn degree(&self) -> usize {
        nu_n(self.n) as usize
    }

    fn root_bound(&self) -> f64 {
        periodic_point_bound(self.c64.norm())
    }

    fn log_derivative(&self, z: C64) -> C64 {
        // L_m = (F_m' - 1) / (F_m - z) with F_m = f^m(z).
        let mut out = C64::new(0.0, 0.0);
        let mut orbit = Orbit::new(z, C64::new(1.0, 0.0));
        let mut m_done = 0;
        for &(m, sign) in &self.terms {
            while m_done < m {
                orbit.step(self.c64, 0.0);
                m_done += 1;
            }
            out += orbit.shifted_log_derivative(z) * sign as f64;
        }
        out
    }

    fn log_derivative_mp(&self, z: &Complex, prec: u32) -> Complex {
        let c = Complex::with_val(prec, self.c.as_complex());
        let mut out = Complex::new(prec);
        let mut f = Complex::with_val(prec, z);
        let mut df = Complex::with_val(prec, 1);
        let mut m_done = 0;
        for &(m, sign) in &self.terms {
            while m_done < m {
                df *= &f;
                df *= 2;
                f.square_mut();
                f += &c;
                m_done += 1;
            }
            let num = Complex::with_val(prec, &df - 1);
            let den = Complex::with_val(prec, &f - z);
            if den.real().is_zero() && den.imag().is_zero() {
                return on_root(prec);
            }
            let l = num / den;
            if sign > 0 {
                out += l;
            } else {
                out -= l;
            }
        }
        out
    }
}

/// Exact-period factor of `c ↦ f_c^{∘n}(0)`; its roots are the centers of
/// period `n`.
#[derive(Debug, Clone)]
pub struct CenterPoly {
    pub n: u32,
    terms: Vec<(u32, i32)>,
}

impl CenterPoly {
    pub fn new(n: u32) -> Self {
        let terms = divisors(n).into_iter().map(|m| (m, mobius(n / m))).filter(|t| t.1 != 0).collect();
        CenterPoly { n, terms }
    }
}

impl LogDerivative for CenterPoly {
    fn degree(&self) -> usize {
        d_n(self.n) as usize
    }

    fn root_bound(&self) -> f64 {
        2.0
    }

    fn log_derivative(&self, c: C64) -> C64 {
        // g_1 = c, g_k = g_{k-1}^2 + c; L_m = g_m'/g_m.
        let mut out = C64::new(0.0, 0.0);
        let mut orbit = Orbit::new(c, C64::new(1.0, 0.0));
        let mut m_done = 1;
        for &(m, sign) in &self.terms {
            while m_done < m {
                orbit.step(c, 1.0);
                m_done += 1;
            }
            out += orbit.log_derivative() * sign as f64;
        }
        out
    }

    fn log_derivative_mp(&self, c: &Complex, prec: u32) -> Complex {
        let mut out = Complex::new(prec);
        let mut g = Complex::with_val(prec, c);
        let mut dg = Complex::with_val(prec, 1);
        let mut m_done = 1;
        for &(m, sign) in &self.terms {
            while m_done < m {
                dg *= &g;
                dg *= 2;
                dg += 1;
                g.square_mut();
                g += c;
                m_done += 1;
            }
            if g.real().is_zero() && g.imag().is_zero() {
                return on_root(prec);
            }
            let l = Complex::with_val(prec, &dg / &g);
            if sign > 0 {
                out += l;
            } else {
                out -= l;
            }
        }
        out
    }
}

fn on_root(prec: u32) -> Complex {
    Complex::with_val(prec, (Float::with_val(prec, rug::float::Special::Infinity), 0))
}

/// Double-precision Aberth iteration from points on the bounding circle.
pub fn aberth_f64(p: &dyn LogDerivative) -> Vec<C64> {
    let d = p.degree();
    let r = p.root_bound();
    let mut z: Vec<C64> = (0..d)
        .map(|k| C64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / d as f64 + ROTATION))
        .collect();
    let mut done = vec![false; d];
    for _ in 0..MAX_SWEEPS {
        let mut moved = false;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let l = p.log_derivative(zi);
            let mut s = C64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    s += 1.0 / (zi - zj);
                }
            }
            let w = 1.0 / (l - s);
            if !w.is_finite() {
                continue;
            }
            z[i] = zi - w;
            if w.norm() <= 1e-14 * zi.norm().max(1.0) {
                done[i] = true;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    z
}

/// Newton polishing at `prec` bits. The inclusion radius `d / |p'/p|`
/// bounds the distance to the nearest root.
pub fn polish(p: &dyn LogDerivative, start: C64, prec: u32) -> Result<(CFloat, f64), NumError> {
    let d = p.degree() as f64;
    let mut z = Complex::with_val(prec, (start.re, start.im));
    let tol = Float::with_val(prec, 1) >> (prec - 12);
    for _ in 0..60 {
        let l = p.log_derivative_mp(&z, prec);
        if l.real().is_nan() || l.imag().is_nan() {
            break;
        }
        if l.real().is_infinite() || l.imag().is_infinite() {
            // landed exactly on a root
            return Ok((CFloat::from_complex(z), 0.0));
        }
        let step = Complex::with_val(prec, l.recip_ref());
        let size = Float::with_val(prec, step.abs_ref());
        z -= &step;
        let scale = Float::with_val(prec, z.abs_ref()).max(&Float::with_val(prec, 1));
        if size <= Float::with_val(prec, &tol * &scale) {
            let l = p.log_derivative_mp(&z, prec);
            let radius = if l.real().is_infinite() || l.imag().is_infinite() {
                0.0
            } else {
                let inv = Float::with_val(prec, l.abs_ref()).recip();
                (inv * d).to_f64() * (1.0 + 1e-12)
            };
            return Ok((CFloat::from_complex(z), radius));
        }
    }
    Err(NumError::NoConvergence { residual: f64::NAN, precision: prec })
}

/// All roots, polished at `prec` bits, as a root set whose entries are
/// required to be pairwise separated.
pub fn implicit_roots(p: &dyn LogDerivative, prec: u32) -> Result<RootSet, NumError> {
    let approx = aberth_f64(p);
    let mut roots = Vec::with_capacity(approx.len());
    for z in approx {
        let (value, radius) = polish(p, z, prec)?;
        roots.push(RootEntry { value, radius, multiplicity: 1 });
    }
    let set = RootSet { degree: p.degree(), roots, precision: prec, certified: true };
    set.check_separated()?;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_two_at_three() {
        let p = DynatomicAt::new(2, &CFloat::from_real(3.0, 128));
        let set = implicit_roots(&p, 128).unwrap();
        for e in &set.roots {
            assert!((e.value.re_f64() + 0.5).abs() < 1e-30);
            assert!((e.value.im_f64().abs() - 1.936_491_673_103_708_5).abs() < 1e-15);
            assert!(e.radius < 1e-30);
        }
    }

    #[test]
    fn period_three_centers() {
        let set = implicit_roots(&CenterPoly::new(3), 128).unwrap();
        let mut re: Vec<f64> = set.roots.iter().map(|e| e.value.re_f64()).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.754_877_666_246_692_7).abs() < 1e-14);
        assert!((re[1] + 0.122_561_166_876_653_6).abs() < 1e-14);
    }

    #[test]
    fn large_degree_dynatomic() {
        // nu_10 = 990 roots at c = 3; log-derivative stays finite throughout.
        let p = DynatomicAt::new(10, &CFloat::from_real(3.0, 128));
        let set = implicit_roots(&p, 128).unwrap();
        assert_eq!(set.total_multiplicity(), 990);
        assert!(set.roots.iter().all(|e| e.radius < 1e-25));
    }
}
