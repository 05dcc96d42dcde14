//! Exact dense polynomials in the three ordered variables `(z, c, r)` with
//! arbitrary-precision integer coefficients.
//!
//! `r` is the multiplier variable (written ρ in the mathematical notation).
//! Coefficients are stored in a dense tensor indexed by the exponent triple,
//! trimmed so that the stored extent in each variable is exactly the true
//! degree plus one. The zero polynomial has an empty tensor and reports
//! degree `-1` in every variable.

mod eval;
pub mod modp;
mod nth_root;
mod resultant;
mod text;

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use eval::{evaluate, Assignment, Evaluated, Specialized};
pub use resultant::{resultant_z, resultant_z_bareiss, resultant_z_modular, ResultantBounds};

/// Default size budget, in stored coefficients, for any single polynomial.
pub const DEFAULT_SIZE_BUDGET: usize = 1 << 28;

static SIZE_BUDGET: AtomicUsize = AtomicUsize::new(DEFAULT_SIZE_BUDGET);

/// Current coefficient budget used by the fallible constructors.
pub fn size_budget() -> usize {
    SIZE_BUDGET.load(Ordering::Relaxed)
}

/// Replace the process-wide coefficient budget. Returns the previous value.
pub fn set_size_budget(budget: usize) -> usize {
    SIZE_BUDGET.swap(budget.max(1), Ordering::Relaxed)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial would need {needed} coefficients, budget is {budget}")]
    CapacityOverflow { needed: u128, budget: usize },
    #[error("exact division left a nonzero remainder")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not a perfect {0}-th power")]
    NotAPower(u32),
    #[error("resultant needs positive z-degree in both arguments")]
    DegreeTooLow,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("modular reconstruction failed: {0}")]
    Reconstruction(String),
}

/// One of the three ordered variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Z = 0,
    C = 1,
    R = 2,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::Z, Var::C, Var::R];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        match self {
            Var::Z => 'z',
            Var::C => 'c',
            Var::R => 'r',
        }
    }
}

/// Exponent triple `[z, c, r]`.
pub type Exps = [usize; 3];

/// Exact dense trivariate polynomial over ℤ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    /// Extent per variable (degree + 1); all zero for the zero polynomial.
    dims: [usize; 3],
    coeffs: Vec<BigInt>,
}

fn checked_len(dims: [usize; 3]) -> Result<usize, PolyError> {
    let needed = dims.iter().map(|&d| d as u128).product::<u128>();
    let budget = size_budget();
    if needed > budget as u128 {
        return Err(PolyError::CapacityOverflow { needed, budget });
    }
    Ok(needed as usize)
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { dims: [0; 3], coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(value: BigInt) -> Self {
        if value.is_zero() {
            return Self::zero();
        }
        MPoly { dims: [1; 3], coeffs: vec![value] }
    }

    pub fn from_i64(value: i64) -> Self {
        Self::constant(BigInt::from(value))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v.index()] = 1;
        Self::monomial(BigInt::one(), e)
    }

    pub fn monomial(coeff: BigInt, exps: Exps) -> Self {
        Self::from_terms([(exps, coeff)])
    }

    /// Build from `(exponents, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Exps, BigInt)>,
    {
        let terms: Vec<(Exps, BigInt)> = terms.into_iter().collect();
        let mut dims = [0usize; 3];
        for (e, _) in &terms {
            for v in 0..3 {
                dims[v] = dims[v].max(e[v] + 1);
            }
        }
        if terms.is_empty() {
            return Self::zero();
        }
        let len = checked_len(dims).expect("term list exceeds the size budget");
        let mut p = MPoly { dims, coeffs: vec![BigInt::zero(); len] };
        for (e, c) in terms {
            let i = p.index(e);
            p.coeffs[i] += c;
        }
        p.trimmed()
    }

    /// Allocate a zero tensor of the given extents (not trimmed).
    pub(crate) fn with_dims(dims: [usize; 3]) -> Result<Self, PolyError> {
        if dims.iter().any(|&d| d == 0) {
            return Ok(Self::zero());
        }
        let len = checked_len(dims)?;
        Ok(MPoly { dims, coeffs: vec![BigInt::zero(); len] })
    }

    #[inline]
    pub(crate) fn index(&self, e: Exps) -> usize {
        (e[0] * self.dims[1] + e[1]) * self.dims[2] + e[2]
    }

    #[inline]
    pub(crate) fn exps_of(&self, mut i: usize) -> Exps {
        let r = i % self.dims[2];
        i /= self.dims[2];
        let c = i % self.dims[1];
        let z = i / self.dims[1];
        [z, c, r]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.dims == [1; 3] && self.coeffs[0].is_one()
    }

    /// Degree in `v`, `-1` for the zero polynomial.
    pub fn degree(&self, v: Var) -> i64 {
        self.dims[v.index()] as i64 - 1
    }

    pub fn degrees(&self) -> [i64; 3] {
        [self.degree(Var::Z), self.degree(Var::C), self.degree(Var::R)]
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    /// Number of stored coefficients (including zeros inside the box).
    pub fn stored_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, e: Exps) -> BigInt {
        if (0..3).all(|v| e[v] < self.dims[v]) {
            self.coeffs[self.index(e)].clone()
        } else {
            BigInt::zero()
        }
    }

    pub(crate) fn coeff_ref(&self, e: Exps) -> Option<&BigInt> {
        if (0..3).all(|v| e[v] < self.dims[v]) {
            Some(&self.coeffs[self.index(e)])
        } else {
            None
        }
    }

    /// Nonzero terms in storage order (z-major, ascending).
    pub fn terms(&self) -> impl Iterator<Item = (Exps, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.exps_of(i), c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Largest coefficient bit length.
    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// Re-establish the trimmed-extent invariant.
    pub(crate) fn trimmed(self) -> Self {
        let mut top = [0usize; 3];
        let mut any = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                any = true;
                let e = self.exps_of(i);
                for v in 0..3 {
                    top[v] = top[v].max(e[v] + 1);
                }
            }
        }
        if !any {
            return Self::zero();
        }
        if top == self.dims {
            return self;
        }
        let mut out = MPoly { dims: top, coeffs: vec![BigInt::zero(); top.iter().product()] };
        for (i, c) in self.coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                let e = exps_of_dims(self.dims, i);
                let j = out.index(e);
                out.coeffs[j] = c;
            }
        }
        out
    }

    /// Leading term with respect to lex order on `order` (first entry most significant).
    pub fn leading_term(&self, order: [Var; 3]) -> Option<(Exps, &BigInt)> {
        self.terms().max_by(|(a, _), (b, _)| {
            order
                .iter()
                .map(|v| a[v.index()])
                .cmp(order.iter().map(|v| b[v.index()]))
        })
    }

    /// Flip the overall sign so that the leading coefficient in `(r, c, z)` lex
    /// order is positive.
    pub fn normalize_sign(self) -> Self {
        let negative = self
            .leading_term([Var::R, Var::C, Var::Z])
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        if negative {
            -self
        } else {
            self
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        MPoly { dims: self.dims, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Exact division of every coefficient by an integer.
    pub fn div_scalar_exact(&self, k: &BigInt) -> Result<Self, PolyError> {
        if k.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return Err(PolyError::NotDivisible);
            }
            coeffs.push(q);
        }
        Ok(MPoly { dims: self.dims, coeffs })
    }

    /// Content: gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: Var) -> Self {
        let k = v.index();
        if self.dims[k] <= 1 {
            return Self::zero();
        }
        let mut dims = self.dims;
        dims[k] -= 1;
        let mut out = MPoly { dims, coeffs: vec![BigInt::zero(); dims.iter().product()] };
        for (e, c) in self.terms() {
            if e[k] == 0 {
                continue;
            }
            let mut f = e;
            f[k] -= 1;
            let j = out.index(f);
            out.coeffs[j] = c * BigInt::from(e[k]);
        }
        out.trimmed()
    }

    /// Product with the size budget enforced.
    pub fn multiply(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let dims = [0, 1, 2].map(|v| self.dims[v] + other.dims[v] - 1);
        let mut out = Self::with_dims(dims)?;
        let rhs: Vec<(Exps, &BigInt)> = other.terms().collect();
        for (ea, ca) in self.terms() {
            for (eb, cb) in &rhs {
                let j = out.index([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]]);
                out.coeffs[j] += ca * *cb;
            }
        }
        Ok(out.trimmed())
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u32) -> Result<MPoly, PolyError> {
        let mut base = self.clone();
        let mut acc = MPoly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.multiply(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor`.
    ///
    /// Runs the one-divisor division algorithm in lex order `z > c > r`; when
    /// the division is exact the remainder is reached without ever meeting a
    /// leading term that the divisor's leading term does not divide.
    pub fn exact_divide(&self, divisor: &MPoly) -> Result<MPoly, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (lead_e, lead_c) = divisor
            .leading_term([Var::Z, Var::C, Var::R])
            .map(|(e, c)| (e, c.clone()))
            .expect("nonzero divisor");
        for v in 0..3 {
            if self.dims[v] < divisor.dims[v] {
                return Err(PolyError::NotDivisible);
            }
        }
        let qdims = [0, 1, 2].map(|v| self.dims[v] - lead_e[v]);
        let mut quot = Self::with_dims(qdims)?;
        let mut rem = self.clone();
        let dterms: Vec<(Exps, BigInt)> = divisor.terms().map(|(e, c)| (e, c.clone())).collect();
        // Descending lex scan over the remainder's box.
        for z in (0..rem.dims[0]).rev() {
            for c in (0..rem.dims[1]).rev() {
                for r in (0..rem.dims[2]).rev() {
                    let idx = rem.index([z, c, r]);
                    if rem.coeffs[idx].is_zero() {
                        continue;
                    }
                    if z < lead_e[0] || c < lead_e[1] || r < lead_e[2] {
                        return Err(PolyError::NotDivisible);
                    }
                    let (q, rr) = rem.coeffs[idx].div_rem(&lead_c);
                    if !rr.is_zero() {
                        return Err(PolyError::NotDivisible);
                    }
                    let shift = [z - lead_e[0], c - lead_e[1], r - lead_e[2]];
                    for (e, dc) in &dterms {
                        let j = rem.index([e[0] + shift[0], e[1] + shift[1], e[2] + shift[2]]);
                        rem.coeffs[j] -= &q * dc;
                    }
                    let qi = quot.index(shift);
                    quot.coeffs[qi] = q;
                }
            }
        }
        Ok(quot.trimmed())
    }

    /// `outer` with its `z` replaced by the polynomial `inner` (Horner in z).
    pub fn compose_z(outer: &MPoly, inner: &MPoly) -> Result<MPoly, PolyError> {
        let mut acc = MPoly::zero();
        for z in (0..outer.dims[0]).rev() {
            acc = acc.multiply(inner)?;
            acc = &acc + &outer.z_slice(z);
        }
        Ok(acc)
    }

    /// Coefficient of `z^k` as a polynomial in `(c, r)`.
    pub fn z_slice(&self, k: usize) -> MPoly {
        if k >= self.dims[0] {
            return Self::zero();
        }
        let dims = [1, self.dims[1], self.dims[2]];
        let len = self.dims[1] * self.dims[2];
        let start = k * len;
        MPoly { dims, coeffs: self.coeffs[start..start + len].to_vec() }.trimmed()
    }

    /// Coefficient of `v^k`, with `v` removed (its exponent set to zero).
    pub fn slice(&self, v: Var, k: usize) -> MPoly {
        let terms = self
            .terms()
            .filter(|(e, _)| e[v.index()] == k)
            .map(|(mut e, c)| {
                e[v.index()] = 0;
                (e, c.clone())
            })
            .collect::<Vec<_>>();
        Self::from_terms(terms)
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, v: Var, k: usize) -> MPoly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        Self::from_terms(self.terms().map(|(mut e, c)| {
            e[v.index()] += k;
            (e, c.clone())
        }))
    }

    /// Rename variables: the term `z^a c^b r^d` goes to exponent vector with
    /// `a` placed at `map[0]`, `b` at `map[1]`, `d` at `map[2]`.
    pub fn permute_vars(&self, map: [Var; 3]) -> MPoly {
        Self::from_terms(self.terms().map(|(e, c)| {
            let mut f = [0; 3];
            for v in 0..3 {
                f[map[v].index()] += e[v];
            }
            (f, c.clone())
        }))
    }

    /// Sum of absolute values of the coefficients.
    pub fn norm1(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

fn exps_of_dims(dims: [usize; 3], mut i: usize) -> Exps {
    let r = i % dims[2];
    i /= dims[2];
    let c = i % dims[1];
    let z = i / dims[1];
    [z, c, r]
}

fn add_sub(a: &MPoly, b: &MPoly, negate_b: bool) -> MPoly {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b.clone() } else { b.clone() };
    }
    let dims = [0, 1, 2].map(|v| a.dims[v].max(b.dims[v]));
    let mut out = MPoly::with_dims(dims).expect("sum fits the budget when both summands do");
    for (e, c) in a.terms() {
        let j = out.index(e);
        out.coeffs[j] += c;
    }
    for (e, c) in b.terms() {
        let j = out.index(e);
        if negate_b {
            out.coeffs[j] -= c;
        } else {
            out.coeffs[j] += c;
        }
    }
    out.trimmed()
}

impl std::ops::Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        add_sub(self, rhs, false)
    }
}

impl std::ops::Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        add_sub(self, rhs, true)
    }
}

impl std::ops::Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        add_sub(&self, &rhs, false)
    }
}

impl std::ops::Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        add_sub(&self, &rhs, true)
    }
}

impl std::ops::Neg for MPoly {
    type Output = MPoly;
    fn neg(mut self) -> MPoly {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

/// Panics if the product exceeds the size budget; use [`MPoly::multiply`]
/// where overflow must be handled.
impl std::ops::Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.multiply(rhs).expect("polynomial product exceeds the size budget")
    }
}

impl std::ops::Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({})", self)
    }
}

/// Free-function form of [`MPoly::multiply`].
pub fn multiply(a: &MPoly, b: &MPoly) -> Result<MPoly, PolyError> {
    a.multiply(b)
}

/// Free-function form of [`MPoly::exact_divide`].
pub fn exact_divide(a: &MPoly, b: &MPoly) -> Result<MPoly, PolyError> {
    a.exact_divide(b)
}

pub use nth_root::nth_root;

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn zero_has_sentinel_degrees() {
        let z = MPoly::zero();
        assert_eq!(z.degrees(), [-1, -1, -1]);
        assert_eq!(z.stored_len(), 0);
        let t = &p("z + c") - &p("z + c");
        assert!(t.is_zero());
        assert_eq!(t.degrees(), [-1, -1, -1]);
    }

    #[test]
    fn degrees_are_trimmed() {
        let a = &p("z^3 + c*r + 1") - &p("z^3");
        assert_eq!(a.degrees(), [0, 1, 1]);
        assert_eq!(a.stored_len(), 4);
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(&p("z") * &p("z"), p("z^2"));
        assert_eq!(&p("z^2 + c") * &p("z^2 + c"), p("z^4 + 2*c*z^2 + c^2"));
        let phi1 = p("z^2 - z + c");
        let phi2 = p("z^2 + z + c + 1");
        let f2 = p("z^4 + 2*c*z^2 + c^2 + c");
        assert_eq!(&phi1 * &phi2, &f2 - &p("z"));
        assert_eq!(&phi1 * &phi2, p("z^4 + 2*c*z^2 - z + c^2 + c"));
    }

    #[test]
    fn multiply_respects_budget() {
        let prev = set_size_budget(100);
        let a = p("z^9 + c^9 + 1");
        let res = a.multiply(&a);
        set_size_budget(prev);
        assert!(matches!(res, Err(PolyError::CapacityOverflow { .. })));
    }

    #[test]
    fn exact_divide_examples() {
        let f2mz = p("z^4 + 2*c*z^2 - z + c^2 + c");
        assert_eq!(f2mz.exact_divide(&p("z^2 - z + c")).unwrap(), p("z^2 + z + c + 1"));
        let q = p("3*z*c - r^2 + 7");
        assert_eq!(q.exact_divide(&MPoly::one()).unwrap(), q);
        assert_eq!(p("z^4 + 2*c*z^2 + c^2").exact_divide(&p("z^2 + c")).unwrap(), p("z^2 + c"));
    }

    #[test]
    fn exact_divide_detects_remainder() {
        assert_eq!(p("z^2 + 1").exact_divide(&p("z + 1")), Err(PolyError::NotDivisible));
        assert_eq!(p("3*z").exact_divide(&p("2*z")), Err(PolyError::NotDivisible));
        assert_eq!(p("z").exact_divide(&MPoly::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn derivative_and_sign() {
        assert_eq!(p("z^4 + 2*c*z^2 + c^2 + c").derivative(Var::Z), p("4*z^3 + 4*c*z"));
        assert_eq!(p("-r + 4*c").normalize_sign(), p("r - 4*c"));
        assert_eq!(p("-c^2 + z^5").normalize_sign(), p("c^2 - z^5"));
    }

    #[test]
    fn compose_gives_second_iterate() {
        let f = p("z^2 + c");
        assert_eq!(MPoly::compose_z(&f, &f).unwrap(), p("z^4 + 2*c*z^2 + c^2 + c"));
    }
}
