//! Resultants with respect to `z`.
//!
//! Two independent routes are provided: fraction-free Bareiss elimination on
//! the Sylvester matrix over `ℤ[c, r]`, and a multimodular route that
//! evaluates at integer points modulo word-size primes, interpolates, and
//! reconstructs by Chinese remaindering. Both return the Sylvester
//! determinant with `a`'s rows first, then normalized to a positive leading
//! coefficient in `(r, c, z)` lex order.

use num_bigint::BigInt;
use num_traits::Zero;

use super::modp::{self, Crt, Field};
use super::{MPoly, PolyError, Var};

/// Sylvester dimension at or below which [`resultant_z`] uses Bareiss.
const BAREISS_MAX_DIM: usize = 8;

/// A-priori bounds on the resultant used by the modular route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResultantBounds {
    pub deg_c: usize,
    pub deg_r: usize,
    /// Bound on `log2` of the largest coefficient magnitude.
    pub height_bits: u64,
}

impl ResultantBounds {
    /// Row-sum degree bounds and a Hadamard height bound from 1-norms.
    pub fn generic(a: &MPoly, b: &MPoly) -> Self {
        let m = a.degree(Var::Z).max(0) as usize;
        let n = b.degree(Var::Z).max(0) as usize;
        let dc = |p: &MPoly| p.degree(Var::C).max(0) as usize;
        let dr = |p: &MPoly| p.degree(Var::R).max(0) as usize;
        ResultantBounds {
            deg_c: n * dc(a) + m * dc(b),
            deg_r: n * dr(a) + m * dr(b),
            height_bits: n as u64 * a.norm1().bits() + m as u64 * b.norm1().bits(),
        }
    }
}

fn check_degrees(a: &MPoly, b: &MPoly) -> Result<(usize, usize), PolyError> {
    let m = a.degree(Var::Z);
    let n = b.degree(Var::Z);
    if m < 1 || n < 1 {
        return Err(PolyError::DegreeTooLow);
    }
    Ok((m as usize, n as usize))
}

/// Resultant in `z`, choosing the route by Sylvester dimension. The result
/// is determined up to sign and returned with a positive leading coefficient.
pub fn resultant_z(a: &MPoly, b: &MPoly) -> Result<MPoly, PolyError> {
    let (m, n) = check_degrees(a, b)?;
    if m + n <= BAREISS_MAX_DIM {
        resultant_z_bareiss(a, b)
    } else {
        resultant_z_modular(a, b, None)
    }
}

/// Fraction-free Bareiss elimination on the Sylvester matrix.
pub fn resultant_z_bareiss(a: &MPoly, b: &MPoly) -> Result<MPoly, PolyError> {
    let (m, n) = check_degrees(a, b)?;
    let size = m + n;
    let az: Vec<MPoly> = (0..=m).map(|k| a.z_slice(k)).collect();
    let bz: Vec<MPoly> = (0..=n).map(|k| b.z_slice(k)).collect();
    // Row i < n holds a's coefficients, highest first, shifted right by i.
    let mut mat: Vec<Vec<MPoly>> = vec![vec![MPoly::zero(); size]; size];
    for i in 0..n {
        for k in 0..=m {
            mat[i][i + k] = az[m - k].clone();
        }
    }
    for i in 0..m {
        for k in 0..=n {
            mat[n + i][i + k] = bz[n - k].clone();
        }
    }
    let mut negate = false;
    let mut prev = MPoly::one();
    for k in 0..size - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(MPoly::zero()),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let lhs = mat[k][k].multiply(&mat[i][j])?;
                let rhs = mat[i][k].multiply(&mat[k][j])?;
                mat[i][j] = (lhs - rhs).exact_divide(&prev)?;
            }
            mat[i][k] = MPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    let det = if negate { -det } else { det };
    Ok(det.normalize_sign())
}

/// Coefficients of `p` reduced mod `f.p`, laid out as `[z][c][r]`.
struct Reduced {
    dims: [usize; 3],
    vals: Vec<u64>,
}

impl Reduced {
    fn new(f: Field, p: &MPoly) -> Self {
        let dims = p.dims();
        let mut vals = vec![0u64; dims.iter().product()];
        for (e, c) in p.terms() {
            vals[(e[0] * dims[1] + e[1]) * dims[2] + e[2]] = f.from_bigint(c);
        }
        Reduced { dims, vals }
    }

    /// Substitute `c = c0`, returning a `[z][r]` table.
    fn at_c(&self, f: Field, c0: u64) -> Vec<Vec<u64>> {
        let [dz, dc, dr] = self.dims;
        let mut out = vec![vec![0u64; dr]; dz];
        for (z, row) in out.iter_mut().enumerate() {
            for (r, slot) in row.iter_mut().enumerate() {
                let mut acc = 0u64;
                for c in (0..dc).rev() {
                    acc = f.add(f.mul(acc, c0), self.vals[(z * dc + c) * dr + r]);
                }
                *slot = acc;
            }
        }
        out
    }
}

fn at_r(f: Field, table: &[Vec<u64>], r0: u64) -> Vec<u64> {
    table
        .iter()
        .map(|row| row.iter().rev().fold(0u64, |acc, &x| f.add(f.mul(acc, r0), x)))
        .collect()
}

/// Resultant of `a` and `b` modulo one prime, as a `(deg_c+1) x (deg_r+1)`
/// coefficient table in `c`-major order. Extra evaluation points confirm
/// the degree bounds.
fn resultant_mod_p(
    f: Field,
    a: &MPoly,
    b: &MPoly,
    bounds: &ResultantBounds,
) -> Result<Vec<u64>, PolyError> {
    let m = a.degree(Var::Z) as usize;
    let n = b.degree(Var::Z) as usize;
    let ra = Reduced::new(f, a);
    let rb = Reduced::new(f, b);
    let nc = bounds.deg_c + 2;
    let nr = bounds.deg_r + 2;
    // coefficient rows in r, one per c-node
    let mut by_c: Vec<Vec<u64>> = Vec::with_capacity(nc);
    for ci in 0..nc as u64 {
        let ta = ra.at_c(f, ci);
        let tb = rb.at_c(f, ci);
        let mut vals = Vec::with_capacity(nr);
        for ri in 0..nr as u64 {
            let ua = at_r(f, &ta, ri);
            let ub = at_r(f, &tb, ri);
            vals.push(modp::resultant_formal(f, &ua, m, &ub, n));
        }
        let mut coeffs = modp::interpolate_consecutive(f, &vals);
        if coeffs.len() > bounds.deg_r + 1 {
            return Err(PolyError::Reconstruction(format!(
                "r-degree exceeds bound {}",
                bounds.deg_r
            )));
        }
        coeffs.resize(bounds.deg_r + 1, 0);
        by_c.push(coeffs);
    }
    let mut table = vec![0u64; (bounds.deg_c + 1) * (bounds.deg_r + 1)];
    for k in 0..=bounds.deg_r {
        let column: Vec<u64> = by_c.iter().map(|row| row[k]).collect();
        let coeffs = modp::interpolate_consecutive(f, &column);
        if coeffs.len() > bounds.deg_c + 1 {
            return Err(PolyError::Reconstruction(format!(
                "c-degree exceeds bound {}",
                bounds.deg_c
            )));
        }
        for (j, v) in coeffs.into_iter().enumerate() {
            table[j * (bounds.deg_r + 1) + k] = v;
        }
    }
    Ok(table)
}

/// Multimodular resultant. `bounds` defaults to [`ResultantBounds::generic`];
/// callers with sharper a-priori knowledge may pass tighter bounds, which
/// are then checked by the extra interpolation nodes.
pub fn resultant_z_modular(
    a: &MPoly,
    b: &MPoly,
    bounds: Option<ResultantBounds>,
) -> Result<MPoly, PolyError> {
    check_degrees(a, b)?;
    let bounds = bounds.unwrap_or_else(|| ResultantBounds::generic(a, b));
    let len = (bounds.deg_c + 1) * (bounds.deg_r + 1);
    super::checked_len([1, bounds.deg_c + 1, bounds.deg_r + 1])?;
    let mut crt = Crt::new(len);
    let mut last: Option<Vec<BigInt>> = None;
    for p in modp::primes_below_2_59() {
        let f = Field::new(p);
        let residues = resultant_mod_p(f, a, b, &bounds)?;
        crt.absorb(f, &residues);
        // One prime beyond the height bound must leave the result unchanged.
        if crt.modulus_bits() > bounds.height_bits + 2 {
            let current = crt.symmetric();
            if last.as_ref() == Some(&current) {
                return Ok(table_to_poly(&current, &bounds).normalize_sign());
            }
            last = Some(current);
        }
    }
    Err(PolyError::Reconstruction("ran out of primes".into()))
}

pub(crate) fn table_to_poly(values: &[BigInt], bounds: &ResultantBounds) -> MPoly {
    let w = bounds.deg_r + 1;
    MPoly::from_terms(
        values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| ([0, i / w, i % w], v.clone())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn period_two_multiplier_resultant() {
        let a = p("z^2 + z + c + 1");
        let b = p("r - 4*z^3 - 4*z*c");
        let want = p("r^2 - 8*r*c - 8*r + 16*c^2 + 32*c + 16");
        assert_eq!(resultant_z_bareiss(&a, &b).unwrap(), want);
        assert_eq!(resultant_z_modular(&a, &b, None).unwrap(), want);
    }

    #[test]
    fn linear_and_hand_computed_examples() {
        assert_eq!(resultant_z(&p("z - c"), &p("z - r")).unwrap(), p("r - c"));
        let want = p("r^2 - 4*r + 4*c");
        assert_eq!(resultant_z(&p("z^2 - 2*z + c"), &p("r - 2*z")).unwrap(), want);
        assert_eq!(resultant_z_modular(&p("z^2 - 2*z + c"), &p("r - 2*z"), None).unwrap(), want);
    }

    #[test]
    fn constant_in_z_is_rejected() {
        assert_eq!(resultant_z(&p("c + 1"), &p("z")), Err(PolyError::DegreeTooLow));
    }

    #[test]
    fn common_root_gives_zero() {
        let a = p("z^2 - c^2");
        let b = p("z^3 - c*z^2 + 2*z - 2*c");
        assert!(resultant_z_bareiss(&a, &b).unwrap().is_zero());
        assert!(resultant_z_modular(&a, &b, None).unwrap().is_zero());
    }

    #[test]
    fn tight_bounds_that_are_wrong_are_caught() {
        let a = p("z^2 + c^3*z + r");
        let b = p("z^2 - r^2");
        let bad = ResultantBounds { deg_c: 1, deg_r: 1, height_bits: 8 };
        assert!(matches!(resultant_z_modular(&a, &b, Some(bad)), Err(PolyError::Reconstruction(_))));
    }
}
