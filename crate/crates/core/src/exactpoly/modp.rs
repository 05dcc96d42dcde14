//! Word-size prime field arithmetic, dense univariate polynomials over it,
//! interpolation and Chinese remaindering back to ℤ.
//!
//! Primes stay below 2^59 so that a `u128` accumulator can absorb at least
//! 1024 unreduced products before it has to be folded.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

/// Upper bound (exclusive) for the primes handed out by [`primes_below_2_59`].
pub const PRIME_BITS: u32 = 59;

/// How many unreduced `u128` products may be summed before folding.
const LAZY_TERMS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    pub p: u64,
}

impl Field {
    pub fn new(p: u64) -> Self {
        debug_assert!(p >= 3 && p < (1u64 << PRIME_BITS));
        Field { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    #[inline]
    pub fn fold(self, acc: u128) -> u64 {
        (acc % self.p as u128) as u64
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero mod {}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    pub fn from_bigint(self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = v.mod_floor(&p);
        u64::try_from(r).expect("residue fits in u64")
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let f = Field { p: n };
    // Deterministic witness set for 64-bit inputs.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(a % n, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^59, largest first. Deterministic.
pub fn primes_below_2_59() -> impl Iterator<Item = u64> {
    let mut candidate = (1u64 << PRIME_BITS) - 1;
    std::iter::from_fn(move || {
        while candidate > 3 {
            let c = candidate;
            candidate -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
        None
    })
}

/// Dense polynomial over a prime field, ascending coefficients, trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    pub c: Vec<u64>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn from_coeffs(mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lead(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn eval(&self, f: Field, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
    }
}

/// Schoolbook product with lazy reduction.
pub fn mul(f: Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    let mut acc = vec![0u128; n];
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    for (chunk_idx, chunk) in short.chunks(LAZY_TERMS).enumerate() {
        let base = chunk_idx * LAZY_TERMS;
        for (i, &x) in chunk.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u128;
            let row = &mut acc[base + i..base + i + long.len()];
            for (slot, &y) in row.iter_mut().zip(long) {
                *slot += x * y as u128;
            }
        }
        if short.len() > LAZY_TERMS {
            for slot in acc.iter_mut() {
                *slot %= f.p as u128;
            }
        }
    }
    let mut out: Vec<u64> = acc.into_iter().map(|v| f.fold(v)).collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Reduce `a` modulo a monic polynomial `m` (ascending coefficients).
pub fn rem_monic(f: Field, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = m.len() - 1;
    debug_assert_eq!(m[dm], 1);
    if a.len() <= dm {
        let mut out = a.to_vec();
        while out.last() == Some(&0) {
            out.pop();
        }
        return out;
    }
    let neg: Vec<u64> = m[..dm].iter().map(|&x| f.neg(x)).collect();
    let mut acc: Vec<u128> = a.iter().map(|&x| x as u128).collect();
    let mut pending = 0usize;
    for top in (dm..a.len()).rev() {
        let q = f.fold(acc[top]);
        acc[top] = 0;
        if q != 0 {
            let q = q as u128;
            let row = &mut acc[top - dm..top];
            for (slot, &y) in row.iter_mut().zip(&neg) {
                *slot += q * y as u128;
            }
        }
        pending += 1;
        if pending == LAZY_TERMS - 1 {
            for slot in acc[..top].iter_mut() {
                *slot %= f.p as u128;
            }
            pending = 0;
        }
    }
    let mut out: Vec<u64> = acc[..dm].iter().map(|&v| f.fold(v)).collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// `a * b mod m` for monic `m`.
pub fn mulmod(f: Field, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    rem_monic(f, &mul(f, a, b), m)
}

/// Quotient and remainder by a divisor with invertible leading coefficient.
pub fn divrem(f: Field, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), trim(a.to_vec()));
    }
    let inv = f.inv(b[db]);
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - db];
    for top in (db..a.len()).rev() {
        let t = f.mul(r[top], inv);
        q[top - db] = t;
        if t != 0 {
            for j in 0..=db {
                r[top - db + j] = f.sub(r[top - db + j], f.mul(t, b[j]));
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Resultant with formal degrees `(da, db)`: the Sylvester determinant of
/// the coefficient vectors padded to those degrees, with `a`'s rows first.
pub fn resultant_formal(f: Field, a: &[u64], da: usize, b: &[u64], db: usize) -> u64 {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    let (mut da, mut db) = (da, db);
    let mut scale = 1u64;
    // Strip vanishing formal leading coefficients:
    // a_m = 0  => Res_{m,n} = (-1)^n b_n Res_{m-1,n};
    // b_n = 0  => Res_{m,n} = a_m Res_{m,n-1}.
    loop {
        let a_top = if a.len() == da + 1 { a[da] } else { 0 };
        let b_top = if b.len() == db + 1 { b[db] } else { 0 };
        if a_top != 0 && b_top != 0 {
            break;
        }
        if a.is_empty() || b.is_empty() {
            if da == 0 && a.is_empty() && db == 0 {
                return 0;
            }
            // A zero polynomial with positive formal degree gives a zero row.
            if (a.is_empty() && db > 0) || (b.is_empty() && da > 0) {
                return 0;
            }
        }
        if a_top == 0 && da > 0 {
            if b_top == 0 {
                // Both leading coefficients vanish: first column is zero.
                if db > 0 {
                    return 0;
                }
            }
            let sign = if db % 2 == 1 { f.neg(1) } else { 1 };
            scale = f.mul(scale, f.mul(sign, b_top));
            da -= 1;
            continue;
        }
        if b_top == 0 && db > 0 {
            scale = f.mul(scale, a_top);
            db -= 1;
            continue;
        }
        // One side has formal degree zero.
        break;
    }
    if da == 0 {
        let a0 = a.first().copied().unwrap_or(0);
        return f.mul(scale, f.pow(a0, db as u64));
    }
    if db == 0 {
        let b0 = b.first().copied().unwrap_or(0);
        return f.mul(scale, f.pow(b0, da as u64));
    }
    // Euclid on true degrees: Res(a,b) = (-1)^{mn} lc(b)^{m - deg r} Res(b, r).
    let mut acc = scale;
    loop {
        let m = a.len() - 1;
        let n = b.len() - 1;
        if n == 0 {
            return f.mul(acc, f.pow(b[0], m as u64));
        }
        let (_, r) = divrem(f, &a, &b);
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        if (m * n) % 2 == 1 {
            acc = f.neg(acc);
        }
        acc = f.mul(acc, f.pow(b[n], (m - dr) as u64));
        a = b;
        b = r;
    }
}

/// Interpolate values at the points `0, 1, ..., k-1`, returning ascending
/// coefficients of the unique polynomial of degree `< k`.
pub fn interpolate_consecutive(f: Field, values: &[u64]) -> Vec<u64> {
    let k = values.len();
    // Newton divided differences on integer nodes: denominators are i - j.
    let mut dd = values.to_vec();
    for level in 1..k {
        for i in (level..k).rev() {
            let num = f.sub(dd[i], dd[i - 1]);
            let den = f.inv(f.from_i64(level as i64));
            dd[i] = f.mul(num, den);
        }
    }
    // Expand Newton form  Σ dd[i] Π_{j<i} (x - j)  by Horner from the top.
    let mut poly: Vec<u64> = Vec::with_capacity(k);
    for i in (0..k).rev() {
        // poly = poly * (x - i) + dd[i]
        let node = f.from_i64(i as i64);
        let mut next = vec![0u64; poly.len() + 1];
        for (j, &a) in poly.iter().enumerate() {
            next[j + 1] = f.add(next[j + 1], a);
            next[j] = f.sub(next[j], f.mul(a, node));
        }
        next[0] = f.add(next[0], dd[i]);
        poly = next;
    }
    trim(poly)
}

/// Incremental Chinese remaindering of a vector of residues into symmetric
/// integer representatives.
#[derive(Debug, Clone)]
pub struct Crt {
    modulus: BigUint,
    values: Vec<BigInt>,
}

impl Crt {
    pub fn new(len: usize) -> Self {
        Crt { modulus: BigUint::one(), values: vec![BigInt::zero(); len] }
    }

    pub fn modulus_bits(&self) -> u64 {
        self.modulus.bits()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Fold in residues modulo a new prime `p`. Values are kept in `[0, M)`.
    pub fn absorb(&mut self, f: Field, residues: &[u64]) {
        assert_eq!(residues.len(), self.values.len());
        let m_mod_p = {
            let big_p = BigUint::from(f.p);
            u64::try_from(&self.modulus % &big_p).expect("fits")
        };
        let inv = f.inv(m_mod_p);
        let modulus = BigInt::from(self.modulus.clone());
        let p_big = BigInt::from(f.p);
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let cur = f.from_bigint(v);
            let t = f.mul(f.sub(r, cur), inv);
            if t != 0 {
                *v += &modulus * BigInt::from(t);
            }
        }
        let _ = p_big;
        self.modulus *= BigUint::from(f.p);
    }

    /// Symmetric representatives in `(-M/2, M/2]`.
    pub fn symmetric(&self) -> Vec<BigInt> {
        let m = BigInt::from(self.modulus.clone());
        let half = &m >> 1;
        self.values
            .iter()
            .map(|v| if v > &half { v - &m } else { v.clone() })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> Field {
        Field::new(primes_below_2_59().next().unwrap())
    }

    #[test]
    fn primes_are_prime_and_descending() {
        let ps: Vec<u64> = primes_below_2_59().take(5).collect();
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        for p in ps {
            assert!(p < 1 << 59);
            assert!(is_prime_u64(p));
        }
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007u64 * 998_244_353));
    }

    #[test]
    fn rem_matches_divrem() {
        let f = field();
        let a: Vec<u64> = (1..40).map(|i| (i * i * 7919) as u64).collect();
        let m: Vec<u64> = vec![5, 0, 3, 11, 1];
        let (_, r) = divrem(f, &a, &m);
        assert_eq!(rem_monic(f, &a, &m), r);
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(x - 3, x - 5) = 3 - 5 = -2 with a's rows first.
        let f = field();
        let a = vec![f.neg(3), 1];
        let b = vec![f.neg(5), 1];
        assert_eq!(resultant_formal(f, &a, 1, &b, 1), f.from_i64(-2));
        // Res(x^2 - 5x + 3, 2x - 5) = (2a - 5)(2b - 5) over the roots a, b = -13.
        let a = vec![3, f.neg(5), 1];
        let b = vec![f.neg(5), 2];
        assert_eq!(resultant_formal(f, &a, 2, &b, 1), f.from_i64(-13));
        assert_eq!(resultant_formal(f, &b, 1, &a, 2), f.from_i64(-13));
    }

    #[test]
    fn resultant_with_vanishing_formal_lead() {
        // a = 0*x + a0 treated with formal degree 1: det [[0, a0], [b1, b0]] = -a0 b1.
        let f = field();
        assert_eq!(resultant_formal(f, &[7], 1, &[2, 3], 1), f.from_i64(-21));
        assert_eq!(resultant_formal(f, &[2, 3], 1, &[7], 1), 21);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = field();
        let poly = vec![f.from_i64(-4), 0, 9, 1, f.from_i64(-2)];
        let vals: Vec<u64> = (0..5).map(|x| UPoly { c: poly.clone() }.eval(f, x)).collect();
        assert_eq!(interpolate_consecutive(f, &vals), poly);
    }

    #[test]
    fn crt_reconstructs_signed_values() {
        let targets = [BigInt::from(-123456789012345678i64) * BigInt::from(987654321u64), BigInt::from(17)];
        let mut crt = Crt::new(2);
        for p in primes_below_2_59().take(3) {
            let f = Field::new(p);
            let res: Vec<u64> = targets.iter().map(|t| f.from_bigint(t)).collect();
            crt.absorb(f, &res);
        }
        assert_eq!(crt.symmetric(), targets.to_vec());
    }
}
