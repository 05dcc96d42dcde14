//! Multimodular construction of the multiplier resultant from power sums of
//! cycle multipliers.
//!
//! For each prime and each integer node `c0`, the multipliers at the roots of
//! `Φ_n(·, c0)` are the eigenvalues of multiplication by `μ_n` in
//! `F_p[z]/(Φ_n)`. Traces of its powers follow from the Newton power sums of
//! the roots of `Φ_n`. Each cycle contributes `n` equal roots, so dividing the
//! traces by `n` gives power sums over cycles, and Newton's identities turn
//! those into the coefficients of `Π_C (ρ - ρ(C))`.

use num_bigint::BigInt;

use crate::exactpoly::modp::{self, Crt, Field};
use crate::exactpoly::{MPoly, PolyError, Var};

/// A-priori shape and height of the multiplier resultant of period `n`.
#[derive(Debug, Clone, Copy)]
pub struct PowerSumBounds {
    pub deg_c: usize,
    pub deg_r: usize,
    pub height_bits: u64,
}

/// Bound on `|z|` for every periodic point when `|c| <= 1`.
fn escape_bound() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Bounds for `Π_{roots}(ρ - μ(root))` raised over `count` factors, each of
/// degree at most `n/2` in `c`. Coefficients are bounded by the maximum on
/// the unit torus, where every multiplier has modulus at most `(2φ)^n`.
pub fn height_bits(n: u32, count: u64) -> u64 {
    let per = (1.0 + (2.0 * escape_bound()).powi(n as i32)).log2();
    (per * count as f64).ceil() as u64 + 2
}

/// Coefficient table of `R_n mod p`: row `j` holds the `c^j` coefficients of
/// `ρ^0..ρ^m`.
fn table_mod_p(f: Field, n: u32, phi: &MPoly, bounds: &PowerSumBounds) -> Result<Vec<u64>, PolyError> {
    let m = bounds.deg_r;
    let nu = phi.degree(Var::Z) as usize;
    let nodes = bounds.deg_c + 2;
    let inv_n = f.inv(n as u64);
    // Φ coefficients as [z][c] residues.
    let dz = nu + 1;
    let dc = phi.dims()[1];
    let mut red = vec![0u64; dz * dc];
    for (e, c) in phi.terms() {
        red[e[0] * dc + e[1]] = f.from_bigint(c);
    }
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(nodes);
    for c0 in 0..nodes as u64 {
        let modulus: Vec<u64> = (0..dz)
            .map(|z| (0..dc).rev().fold(0u64, |acc, c| f.add(f.mul(acc, c0), red[z * dc + c])))
            .collect();
        debug_assert_eq!(modulus[nu], 1);
        // Newton power sums s_0..s_{nu-1} of the roots of the monic modulus.
        let a = |i: usize| modulus[i];
        let mut s = vec![0u64; nu.max(1)];
        s[0] = f.from_i64(nu as i64);
        for k in 1..nu {
            let mut acc = f.mul(f.from_i64(k as i64), a(nu - k));
            for i in 1..k {
                acc = f.add(acc, f.mul(a(nu - i), s[k - i]));
            }
            s[k] = f.neg(acc);
        }
        // μ_n = Π 2 f^k(z) reduced mod Φ.
        let mut w: Vec<u64> = vec![0, 1];
        let mut mu: Vec<u64> = vec![1];
        let c0_vec = vec![c0];
        for _ in 0..n {
            let two_w: Vec<u64> = w.iter().map(|&x| f.add(x, x)).collect();
            mu = modp::mulmod(f, &mu, &two_w, &modulus);
            let sq = modp::mulmod(f, &w, &w, &modulus);
            w = add_poly(f, &sq, &c0_vec);
        }
        // Cycle power sums P_j = Tr(μ^j) / n.
        let mut p = vec![0u64; m + 1];
        let mut pw = mu.clone();
        for j in 1..=m {
            if j > 1 {
                pw = modp::mulmod(f, &pw, &mu, &modulus);
            }
            let mut acc: u128 = 0;
            for (chunk_a, chunk_s) in pw.chunks(1024).zip(s.chunks(1024)) {
                for (&x, &y) in chunk_a.iter().zip(chunk_s) {
                    acc += x as u128 * y as u128;
                }
                acc %= f.p as u128;
            }
            p[j] = f.mul(f.fold(acc), inv_n);
        }
        // Newton's identities: k e_k = Σ_{i=1..k} (-1)^{i-1} e_{k-i} P_i.
        let mut e = vec![0u64; m + 1];
        e[0] = 1;
        for k in 1..=m {
            let mut acc = 0u64;
            for i in 1..=k {
                let t = f.mul(e[k - i], p[i]);
                acc = if i % 2 == 1 { f.add(acc, t) } else { f.sub(acc, t) };
            }
            e[k] = f.mul(acc, f.inv(k as u64));
        }
        // ρ^{m-k} coefficient is (-1)^k e_k.
        let mut row = vec![0u64; m + 1];
        for k in 0..=m {
            row[m - k] = if k % 2 == 0 { e[k] } else { f.neg(e[k]) };
        }
        rows.push(row);
    }
    let mut table = vec![0u64; (bounds.deg_c + 1) * (m + 1)];
    for k in 0..=m {
        let column: Vec<u64> = rows.iter().map(|r| r[k]).collect();
        let coeffs = modp::interpolate_consecutive(f, &column);
        if coeffs.len() > bounds.deg_c + 1 {
            return Err(PolyError::Reconstruction(format!("c-degree exceeds {}", bounds.deg_c)));
        }
        for (j, v) in coeffs.into_iter().enumerate() {
            table[j * (m + 1) + k] = v;
        }
    }
    Ok(table)
}

fn add_poly(f: Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = f.add(x, y);
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// `Π_{cycles} (ρ - ρ(C))` from the dynatomic polynomial `phi = Φ_n`.
pub fn multiplier_resultant_power_sums(n: u32, phi: &MPoly) -> Result<MPoly, PolyError> {
    let nu = phi.degree(Var::Z) as u64;
    let m = (nu / n as u64) as usize;
    let bounds = PowerSumBounds {
        deg_c: (nu as usize).div_ceil(2),
        deg_r: m,
        height_bits: height_bits(n, m as u64),
    };
    let len = (bounds.deg_c + 1) * (m + 1);
    let mut crt = Crt::new(len);
    let mut last: Option<Vec<BigInt>> = None;
    for p in modp::primes_below_2_59() {
        let f = Field::new(p);
        let residues = table_mod_p(f, n, phi, &bounds)?;
        crt.absorb(f, &residues);
        if crt.modulus_bits() > bounds.height_bits + 2 {
            let current = crt.symmetric();
            if last.as_ref() == Some(&current) {
                let w = m + 1;
                return Ok(MPoly::from_terms(
                    current
                        .into_iter()
                        .enumerate()
                        .map(|(i, v)| ([0, i / w, i % w], v)),
                ));
            }
            last = Some(current);
        }
    }
    Err(PolyError::Reconstruction("ran out of primes".into()))
}
