//! Complex numbers at a configurable binary precision.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use rug::ops::Pow;
use rug::integer::Order;
use rug::{Complex, Float, Integer};

/// Smallest precision any value carries.
pub const MIN_PRECISION: u32 = 53;

/// Working precision used when the caller does not choose one.
pub const DEFAULT_PRECISION: u32 = 128;

fn clamp(prec: u32) -> u32 {
    prec.max(MIN_PRECISION)
}

/// Complex number; arithmetic between mismatched precisions promotes to
/// the larger one.
#[derive(Clone, PartialEq)]
pub struct CFloat {
    inner: Complex,
}

impl CFloat {
    pub fn new(re: f64, im: f64, prec: u32) -> Self {
        CFloat { inner: Complex::with_val(clamp(prec), (re, im)) }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(0.0, 0.0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::new(1.0, 0.0, prec)
    }

    pub fn from_real(re: f64, prec: u32) -> Self {
        Self::new(re, 0.0, prec)
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        let prec = clamp(re.prec().max(im.prec()));
        CFloat { inner: Complex::with_val(prec, (re, im)) }
    }

    pub fn from_complex(inner: Complex) -> Self {
        let prec = clamp(inner.prec().0.max(inner.prec().1));
        if inner.prec() == (prec, prec) {
            CFloat { inner }
        } else {
            CFloat { inner: Complex::with_val(prec, inner) }
        }
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        let re = Float::with_val(clamp(prec), to_rug(v));
        Self::from_floats(re, Float::new(clamp(prec)))
    }

    pub fn from_rational(v: &BigRational, prec: u32) -> Self {
        let num = Self::from_bigint(v.numer(), prec + 8);
        let den = Self::from_bigint(v.denom(), prec + 8);
        (num / den).with_prec(prec)
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational, prec: u32) -> Self {
        let r = Self::from_rational(re, prec);
        let i = Self::from_rational(im, prec);
        Self::from_floats(r.inner.real().clone(), i.inner.real().clone())
    }

    pub fn i(prec: u32) -> Self {
        Self::new(0.0, 1.0, prec)
    }

    pub fn prec(&self) -> u32 {
        self.inner.prec().0
    }

    /// Same value rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        CFloat { inner: Complex::with_val(clamp(prec), &self.inner) }
    }

    pub fn as_complex(&self) -> &Complex {
        &self.inner
    }

    pub fn re(&self) -> &Float {
        self.inner.real()
    }

    pub fn im(&self) -> &Float {
        self.inner.imag()
    }

    pub fn re_f64(&self) -> f64 {
        self.inner.real().to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.inner.imag().to_f64()
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re_f64(), self.im_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.inner.real().is_zero() && self.inner.imag().is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.inner.real().is_finite() && self.inner.imag().is_finite()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.inner.abs_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// `log |self|` at working precision; `-inf` at zero.
    pub fn ln_abs(&self) -> Float {
        let a = self.abs();
        if a.is_zero() {
            return Float::with_val(self.prec(), f64::NEG_INFINITY);
        }
        a.ln()
    }

    pub fn conj(&self) -> Self {
        CFloat { inner: self.inner.clone().conj() }
    }

    pub fn sqrt(&self) -> Self {
        CFloat { inner: self.inner.clone().sqrt() }
    }

    pub fn exp(&self) -> Self {
        CFloat { inner: self.inner.clone().exp() }
    }

    pub fn square(&self) -> Self {
        CFloat { inner: self.inner.clone().square() }
    }

    pub fn powu(&self, k: u32) -> Self {
        CFloat { inner: self.inner.clone().pow(k) }
    }

    pub fn scale_f64(&self, k: f64) -> Self {
        CFloat { inner: self.inner.clone() * k }
    }

    pub fn recip(&self) -> Self {
        CFloat { inner: self.inner.clone().recip() }
    }

    /// Exact rational real and imaginary parts; `None` if not finite.
    pub fn to_rationals(&self) -> Option<(BigRational, BigRational)> {
        Some((float_to_rational(self.re())?, float_to_rational(self.im())?))
    }

    /// `|self - other|` as an f64.
    pub fn dist(&self, other: &CFloat) -> f64 {
        (self - other).abs_f64()
    }
}

/// Exact conversion back from GMP.
pub fn from_rug(v: &Integer) -> BigInt {
    let digits: Vec<u64> = v.to_digits(Order::Lsf);
    let mag = BigInt::from_biguint(Sign::Plus, num_bigint::BigUint::new(
        digits.iter().flat_map(|d| [*d as u32, (*d >> 32) as u32]).collect(),
    ));
    if *v < 0 {
        -mag
    } else {
        mag
    }
}

/// The exact rational value of a finite float.
pub fn float_to_rational(x: &Float) -> Option<BigRational> {
    let (mant, exp) = x.to_integer_exp()?;
    let mant = from_rug(&mant);
    let one = BigInt::from(1);
    Some(if exp >= 0 {
        BigRational::from_integer(mant << exp as usize)
    } else {
        BigRational::new(mant, one << (-exp) as usize)
    })
}

/// Exact conversion of a big integer.
pub fn to_rug(v: &BigInt) -> Integer {
    let (sign, digits) = v.to_u64_digits();
    let mag = Integer::from_digits(&digits, Order::Lsf);
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

fn promote(a: &CFloat, b: &CFloat) -> u32 {
    a.prec().max(b.prec())
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&CFloat> for &CFloat {
            type Output = CFloat;
            fn $method(self, rhs: &CFloat) -> CFloat {
                let prec = promote(self, rhs);
                CFloat { inner: Complex::with_val(prec, &self.inner $op &rhs.inner) }
            }
        }
        impl $trait<CFloat> for CFloat {
            type Output = CFloat;
            fn $method(self, rhs: CFloat) -> CFloat {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CFloat> for CFloat {
            type Output = CFloat;
            fn $method(self, rhs: &CFloat) -> CFloat {
                (&self).$method(rhs)
            }
        }
        impl $trait<CFloat> for &CFloat {
            type Output = CFloat;
            fn $method(self, rhs: CFloat) -> CFloat {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for CFloat {
    type Output = CFloat;
    fn neg(self) -> CFloat {
        CFloat { inner: -self.inner }
    }
}

impl Neg for &CFloat {
    type Output = CFloat;
    fn neg(self) -> CFloat {
        CFloat { inner: Complex::with_val(self.inner.prec(), -&self.inner) }
    }
}

impl fmt::Debug for CFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CFloat({}, {}; {} bits)", self.re_f64(), self.im_f64(), self.prec())
    }
}

impl fmt::Display for CFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_c64();
        if im < 0.0 {
            write!(f, "{re:.17e}-{:.17e}i", -im)
        } else {
            write!(f, "{re:.17e}+{im:.17e}i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_round_trip() {
        let x = CFloat::new(-0.375, 1e20, 128);
        let (re, im) = x.to_rationals().unwrap();
        assert_eq!(re, BigRational::new(BigInt::from(-3), BigInt::from(8)));
        assert_eq!(im, BigRational::from_integer(BigInt::from(10).pow(20)));
        assert_eq!(CFloat::zero(64).to_rationals().unwrap().0, BigRational::from_integer(BigInt::from(0)));
        let big = BigInt::from(3).pow(200) * -1;
        assert_eq!(from_rug(&to_rug(&big)), big);
    }

    #[test]
    fn precision_promotes_to_the_larger() {
        let a = CFloat::new(1.0, 0.0, 64);
        let b = CFloat::new(0.0, 1.0, 300);
        assert_eq!((&a + &b).prec(), 300);
        assert_eq!((&b * &a).prec(), 300);
        assert_eq!(CFloat::new(1.0, 0.0, 8).prec(), MIN_PRECISION);
    }

    #[test]
    fn rational_conversion_is_accurate() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let x = CFloat::from_rational(&third, 200);
        let err = (x * CFloat::from_real(3.0, 200) - CFloat::one(200)).abs();
        assert!(err < Float::with_val(200, 1e-58));
    }

    #[test]
    fn ln_abs_of_zero_is_negative_infinity() {
        let z = CFloat::zero(128);
        assert!(z.ln_abs().is_infinite());
        assert!(z.ln_abs() < 0);
    }
}
