//! Exact polynomial n-th roots by coefficient matching.
//!
//! Writing `p = Σ b_j v^j` in its main variable `v` (after removing the
//! lowest power of `v`), the root `a = Σ a_k v^k` satisfies the power-series
//! recurrence
//!
//! ```text
//! a_k = Σ_{j=1..k} ((n+1)·j − n·k) · b_j · a_{k−j} / (n · k · b_0)
//! ```
//!
//! with `a_0` the n-th root of `b_0`, found recursively in the remaining
//! variables. Every division is exact in ℤ[other variables] when a root
//! exists; the final answer is verified by multiplying back.

use num_bigint::BigInt;
use num_traits::Signed;

use super::{MPoly, PolyError, Var};

/// `r` with `r^n = ±p`, normalized to a positive leading coefficient in
/// `(r, c, z)` lex order.
pub fn nth_root(p: &MPoly, n: u32) -> Result<MPoly, PolyError> {
    if n == 0 {
        return Err(PolyError::NotAPower(0));
    }
    if n == 1 || p.is_zero() {
        return Ok(p.clone().normalize_sign());
    }
    let (root, _) = signed_root(p, n)?;
    let check = root.pow(n)?;
    if check != *p && check != -p.clone() {
        return Err(PolyError::NotAPower(n));
    }
    Ok(root.normalize_sign())
}

/// Root `a` together with the sign `s` such that `a^n = s·p`.
fn signed_root(p: &MPoly, n: u32) -> Result<(MPoly, bool), PolyError> {
    let main = [Var::R, Var::C, Var::Z].into_iter().find(|&v| p.degree(v) > 0);
    let Some(v) = main else {
        let c = p.coeff([0, 0, 0]);
        let mag = c.abs();
        let r = mag.nth_root(n);
        if num_traits::pow(r.clone(), n as usize) != mag {
            return Err(PolyError::NotAPower(n));
        }
        // For odd n the sign goes into the root; for even n it goes into s.
        if c.is_negative() && n % 2 == 1 {
            return Ok((MPoly::constant(-r), true));
        }
        return Ok((MPoly::constant(r), !c.is_negative()));
    };
    let deg = p.degree(v) as usize;
    let low = (0..=deg).find(|&k| !p.slice(v, k).is_zero()).expect("nonzero polynomial");
    if low % n as usize != 0 || (deg - low) % n as usize != 0 {
        return Err(PolyError::NotAPower(n));
    }
    let top = (deg - low) / n as usize;
    let b: Vec<MPoly> = (low..=deg).map(|k| p.slice(v, k)).collect();
    let (a0, positive) = signed_root(&b[0], n)?;
    // Work with s·p so that a_0^n = b_0 exactly.
    let b: Vec<MPoly> = if positive { b } else { b.into_iter().map(|x| -x).collect() };
    let nb0 = b[0].scale(&BigInt::from(n));
    let mut a: Vec<MPoly> = vec![a0];
    let n_i = n as i64;
    for k in 1..=top {
        let mut acc = MPoly::zero();
        for j in 1..=k.min(b.len() - 1) {
            let w = (n_i + 1) * j as i64 - n_i * k as i64;
            if w == 0 || b[j].is_zero() || a[k - j].is_zero() {
                continue;
            }
            let term = b[j].multiply(&a[k - j])?.scale(&BigInt::from(w));
            acc = &acc + &term;
        }
        let ak = if acc.is_zero() {
            MPoly::zero()
        } else {
            let den = nb0.scale(&BigInt::from(k));
            acc.exact_divide(&den).map_err(|_| PolyError::NotAPower(n))?
        };
        a.push(ak);
    }
    let shift = low / n as usize;
    let mut root = MPoly::zero();
    for (k, ak) in a.into_iter().enumerate() {
        if !ak.is_zero() {
            root = &root + &ak.shift(v, k + shift);
        }
    }
    if root.is_zero() {
        return Err(PolyError::NotAPower(n));
    }
    Ok((root, positive))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn square_root_of_period_two_resultant() {
        let sq = p("r^2 - 8*r*c - 8*r + 16*c^2 + 32*c + 16");
        assert_eq!(nth_root(&sq, 2).unwrap(), p("r - 4*c - 4"));
        let square = p("r^2 + 8*r*c + 8*r + 16*c^2 + 32*c + 16");
        assert_eq!(nth_root(&square, 2).unwrap(), p("r + 4*c + 4"));
    }

    #[test]
    fn cube_of_binomial() {
        let cube = p("z^6 + 3*z^4*c + 3*z^2*c^2 + c^3");
        assert_eq!(nth_root(&cube, 3).unwrap(), p("z^2 + c"));
    }

    #[test]
    fn identity_case_normalizes_sign() {
        assert_eq!(nth_root(&p("-r + c"), 1).unwrap(), p("r - c"));
    }

    #[test]
    fn negative_even_power() {
        let q = -p("r - c*z + 2").pow(4).unwrap();
        assert_eq!(nth_root(&q, 4).unwrap(), p("r - c*z + 2"));
    }

    #[test]
    fn non_powers_are_rejected() {
        assert_eq!(nth_root(&p("r^2 + 1"), 2), Err(PolyError::NotAPower(2)));
        assert_eq!(nth_root(&p("8*c^3 + 1"), 3), Err(PolyError::NotAPower(3)));
        assert_eq!(nth_root(&p("12"), 2), Err(PolyError::NotAPower(2)));
    }

    #[test]
    fn monomial_factor_is_handled() {
        let q = p("r*c^2 + z*c").pow(2).unwrap();
        assert_eq!(nth_root(&q, 2).unwrap(), p("r*c^2 + z*c"));
    }
}
