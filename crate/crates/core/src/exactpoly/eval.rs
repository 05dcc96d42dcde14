//! Partial evaluation at exact rationals and full evaluation at complex
//! floating-point points with a Horner rounding bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rug::Float;

use super::{MPoly, Var};
use crate::cfloat::{to_rug, CFloat};

/// A value assigned to one variable.
#[derive(Debug, Clone)]
pub enum Assignment {
    Rational(BigRational),
    /// Gaussian rational `re + i·im`; only valid for full complex evaluation
    /// or through [`MPoly::specialize_gaussian`].
    Gaussian(BigRational, BigRational),
    Complex(CFloat),
}

impl Assignment {
    pub fn int(v: i64) -> Self {
        Assignment::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    fn to_cfloat(&self, prec: u32) -> CFloat {
        match self {
            Assignment::Rational(q) => CFloat::from_rational(q, prec),
            Assignment::Gaussian(re, im) => CFloat::from_rationals(re, im, prec),
            Assignment::Complex(z) => z.clone(),
        }
    }
}

/// Result of an exact partial evaluation: `poly = scale · p|assignment`,
/// with `scale` a positive integer that clears every denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialized {
    pub poly: MPoly,
    pub scale: BigInt,
}

/// Either an exact lower-arity polynomial or a complex value with an
/// absolute error bound.
#[derive(Debug, Clone)]
pub enum Evaluated {
    Poly(Specialized),
    Value { value: CFloat, abs_error: f64 },
}

/// Dispatch on the kind of assignment: all-rational inputs give an exact
/// polynomial, anything complex requires every variable of `p` to be assigned.
pub fn evaluate(p: &MPoly, at: &[(Var, Assignment)]) -> Evaluated {
    let all_rational = at.iter().all(|(_, a)| matches!(a, Assignment::Rational(_)));
    if all_rational {
        let pairs: Vec<(Var, BigRational)> = at
            .iter()
            .map(|(v, a)| match a {
                Assignment::Rational(q) => (*v, q.clone()),
                _ => unreachable!(),
            })
            .collect();
        return Evaluated::Poly(p.specialize(&pairs));
    }
    let prec = at
        .iter()
        .filter_map(|(_, a)| match a {
            Assignment::Complex(z) => Some(z.prec()),
            _ => None,
        })
        .max()
        .unwrap_or(crate::cfloat::DEFAULT_PRECISION);
    let mut point = [None, None, None];
    for (v, a) in at {
        point[v.index()] = Some(a.to_cfloat(prec));
    }
    for v in Var::ALL {
        if point[v.index()].is_none() {
            assert!(p.degree(v) <= 0, "variable {} must be assigned for complex evaluation", v.name());
            point[v.index()] = Some(CFloat::zero(prec));
        }
    }
    let [z, c, r] = point.map(|x| x.expect("filled"));
    let (value, abs_error) = p.eval_complex(&z, &c, &r);
    Evaluated::Value { value, abs_error }
}

impl MPoly {
    /// Substitute exact rationals for some variables. Denominators are
    /// cleared by multiplying with `den^deg` per substituted variable.
    pub fn specialize(&self, at: &[(Var, BigRational)]) -> Specialized {
        let mut poly = self.clone();
        let mut scale = BigInt::one();
        for (v, q) in at {
            let deg = poly.degree(*v);
            if deg < 0 {
                continue;
            }
            let deg = deg as usize;
            let num = q.numer();
            let den = q.denom();
            // term e contributes coeff · num^k · den^(deg-k)
            let num_pows = powers(num, deg);
            let den_pows = powers(den, deg);
            let terms: Vec<_> = poly
                .terms()
                .map(|(mut e, c)| {
                    let k = e[v.index()];
                    e[v.index()] = 0;
                    (e, c * &num_pows[k] * &den_pows[deg - k])
                })
                .collect();
            poly = MPoly::from_terms(terms);
            scale *= &den_pows[deg];
        }
        let g = poly.content().gcd(&scale);
        if !g.is_one() && !g.is_zero() {
            poly = poly.div_scalar_exact(&g).expect("gcd divides content");
            scale /= &g;
        }
        if poly.is_zero() {
            scale = BigInt::one();
        }
        Specialized { poly, scale }
    }

    /// Substitute a Gaussian rational `re + i·im` for `v`; returns the real
    /// and imaginary parts, both scaled by the same positive integer.
    pub fn specialize_gaussian(&self, v: Var, re: &BigRational, im: &BigRational) -> (Specialized, Specialized) {
        let deg = self.degree(v);
        if deg < 0 {
            let zero = Specialized { poly: MPoly::zero(), scale: BigInt::one() };
            return (zero.clone(), zero);
        }
        let deg = deg as usize;
        let den = re.denom().lcm(im.denom());
        let a = re.numer() * (&den / re.denom());
        let b = im.numer() * (&den / im.denom());
        // (a + ib)^k as Gaussian integers
        let mut pw: Vec<(BigInt, BigInt)> = vec![(BigInt::one(), BigInt::zero())];
        for k in 1..=deg {
            let (x, y) = &pw[k - 1];
            pw.push((x * &a - y * &b, x * &b + y * &a));
        }
        let den_pows = powers(&den, deg);
        let mut re_terms = Vec::new();
        let mut im_terms = Vec::new();
        for (mut e, c) in self.terms() {
            let k = e[v.index()];
            e[v.index()] = 0;
            let s = c * &den_pows[deg - k];
            re_terms.push((e, &s * &pw[k].0));
            im_terms.push((e, &s * &pw[k].1));
        }
        let scale = den_pows[deg].clone();
        (
            Specialized { poly: MPoly::from_terms(re_terms), scale: scale.clone() },
            Specialized { poly: MPoly::from_terms(im_terms), scale },
        )
    }

    /// Value at a complex point together with an a-priori bound on the
    /// accumulated rounding error of the nested Horner scheme.
    pub fn eval_complex(&self, z: &CFloat, c: &CFloat, r: &CFloat) -> (CFloat, f64) {
        let prec = z.prec().max(c.prec()).max(r.prec());
        if self.is_zero() {
            return (CFloat::zero(prec), 0.0);
        }
        let [dz, dc, dr] = self.dims();
        let mut acc_z = CFloat::zero(prec);
        // Magnitude of the same scheme run on |coeffs| and |point| bounds the
        // error: |err| <= gamma_k * H(|a|, |x|) with k = 2·(total steps).
        let mut mag_z = Float::new(prec);
        let (az, ac, ar) = (z.abs(), c.abs(), r.abs());
        for iz in (0..dz).rev() {
            let mut acc_c = CFloat::zero(prec);
            let mut mag_c = Float::new(prec);
            for ic in (0..dc).rev() {
                let mut acc_r = CFloat::zero(prec);
                let mut mag_r = Float::new(prec);
                for ir in (0..dr).rev() {
                    let k = self.coeff_ref([iz, ic, ir]).expect("in range");
                    acc_r = &acc_r * r + CFloat::from_bigint(k, prec);
                    mag_r = mag_r * &ar + Float::with_val(prec, to_rug(k).abs());
                }
                acc_c = &acc_c * c + acc_r;
                mag_c = mag_c * &ac + mag_r;
            }
            acc_z = &acc_z * z + acc_c;
            mag_z = mag_z * &az + mag_c;
        }
        let steps = 2.0 * (dz + dc + dr) as f64 + 4.0;
        let bound = Float::with_val(prec, mag_z * (4.0 * steps)) >> prec;
        let mut bound = bound.to_f64();
        if bound == 0.0 && !acc_z.is_zero() {
            bound = f64::MIN_POSITIVE;
        }
        (acc_z, bound)
    }
}

fn powers(base: &BigInt, k: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(BigInt::one());
    for i in 1..=k {
        let next = &out[i - 1] * base;
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn specialize_examples() {
        let r1 = p("r^2 - 2*r + 4*c");
        let s = r1.specialize(&[(Var::R, q(0, 1))]);
        assert_eq!(s.poly, p("4*c"));
        assert_eq!(s.scale, BigInt::one());
        let r3 = p("64*c^3 + 128*c^2 - 8*c*r + 64*c + r^2 - 16*r + 64");
        assert_eq!(r3.specialize(&[(Var::C, q(0, 1))]).poly, p("r^2 - 16*r + 64"));
        assert!(p("4*c").specialize(&[(Var::C, q(0, 1))]).poly.is_zero());
    }

    #[test]
    fn rational_denominators_are_cleared() {
        // r^2 - 2r + 4c at r = 1/2: 1/4 - 1 + 4c -> times 4: 16c - 3.
        let s = p("r^2 - 2*r + 4*c").specialize(&[(Var::R, q(1, 2))]);
        assert_eq!(s.poly, p("16*c - 3"));
        assert_eq!(s.scale, BigInt::from(4));
    }

    #[test]
    fn gaussian_specialization_splits_parts() {
        // r^2 + c at r = i: -1 + c, imaginary part 0.
        let (re, im) = p("r^2 + c").specialize_gaussian(Var::R, &q(0, 1), &q(1, 1));
        assert_eq!(re.poly, p("c - 1"));
        assert!(im.poly.is_zero());
        // r at r = 1/2 + i/3: scale 6, parts 3 and 2.
        let (re, im) = p("r").specialize_gaussian(Var::R, &q(1, 2), &q(1, 3));
        assert_eq!((re.poly, im.poly, re.scale), (p("3"), p("2"), BigInt::from(6)));
    }

    #[test]
    fn complex_evaluation_with_bound() {
        let r3 = p("64*c^3 + 128*c^2 - 8*c*r + 64*c + r^2 - 16*r + 64");
        let at = [
            (Var::C, Assignment::Complex(CFloat::new(-0.5, 0.25, 128))),
            (Var::R, Assignment::int(3)),
        ];
        let Evaluated::Value { value, abs_error } = evaluate(&r3, &at) else { panic!() };
        // direct f64 evaluation
        let c = num_complex::Complex64::new(-0.5, 0.25);
        let r = 3.0;
        let want = 64.0 * c * c * c + 128.0 * c * c - 8.0 * c * r + 64.0 * c + r * r - 16.0 * r + 64.0;
        assert!((value.re_f64() - want.re).abs() < 1e-12);
        assert!((value.im_f64() - want.im).abs() < 1e-12);
        assert!(abs_error > 0.0 && abs_error < 1e-30);
    }
}
