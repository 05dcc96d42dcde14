//! Iterates of `f_c(z) = z² + c`, dynatomic polynomials, multiplier
//! polynomials, multiplier resultants and the counting sequences.

mod counting;
mod powersum;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::exactpoly::{self, nth_root, MPoly, PolyError, ResultantBounds, Var};

pub use counting::{d_n, divisors, k_n, mobius, nu_n, CountingTable};
pub use powersum::{height_bits, multiplier_resultant_power_sums};

/// Largest period for which [`multiplier_resultant`] goes through the
/// trivariate resultant and an exact n-th root.
pub const RESULTANT_ROUTE_MAX_N: u32 = 6;

type Cache = Mutex<HashMap<u32, Arc<MPoly>>>;

fn cached(cache: &'static OnceLock<Cache>, n: u32, build: impl FnOnce() -> Result<MPoly, PolyError>) -> Result<Arc<MPoly>, PolyError> {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = map.lock().expect("cache lock").get(&n) {
        return Ok(p.clone());
    }
    let p = Arc::new(build()?);
    map.lock().expect("cache lock").insert(n, p.clone());
    Ok(p)
}

fn f_c() -> MPoly {
    "z^2 + c".parse().expect("literal")
}

/// `f_c^{∘n}(z)` in the variables `(z, c)`.
pub fn iterate_map(n: u32) -> Result<MPoly, PolyError> {
    assert!(n >= 1, "period must be positive");
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, n, || {
        let mut p = f_c();
        let c = MPoly::var(Var::C);
        for _ in 1..n {
            p = &p.multiply(&p)? + &c;
        }
        Ok(p)
    })
    .map(|p| (*p).clone())
}

/// `Φ_n(z, c) = Π_{m|n} (f^{∘m}(z) - z)^{μ(n/m)}`.
pub fn dynatomic_poly(n: u32) -> Result<MPoly, PolyError> {
    assert!(n >= 1, "period must be positive");
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, n, || {
        let z = MPoly::var(Var::Z);
        let mut num = MPoly::one();
        let mut den = MPoly::one();
        for m in divisors(n) {
            let factor = &iterate_map(m)? - &z;
            match mobius(n / m) {
                1 => num = num.multiply(&factor)?,
                -1 => den = den.multiply(&factor)?,
                _ => {}
            }
        }
        num.exact_divide(&den)
    })
    .map(|p| (*p).clone())
}

/// `μ_n = ∂_z f^{∘n}(z)`.
pub fn multiplier_poly(n: u32) -> Result<MPoly, PolyError> {
    Ok(iterate_map(n)?.derivative(Var::Z))
}

/// `μ_n` by the chain rule, `Π_{k<n} 2 f^{∘k}(z)`.
pub fn multiplier_poly_chain(n: u32) -> Result<MPoly, PolyError> {
    let two = MPoly::from_i64(2);
    let mut acc = two.multiply(&MPoly::var(Var::Z))?;
    for k in 1..n {
        acc = acc.multiply(&two.multiply(&iterate_map(k)?)?)?;
    }
    Ok(acc)
}

/// `Res_z(Φ_n, ρ - μ_n)`, which equals `R_n^n` up to sign.
pub fn dynatomic_resultant(n: u32) -> Result<MPoly, PolyError> {
    assert!(n >= 1, "period must be positive");
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, n, || dynatomic_resultant_uncached(n)).map(|p| (*p).clone())
}

fn dynatomic_resultant_uncached(n: u32) -> Result<MPoly, PolyError> {
    let phi = dynatomic_poly(n)?;
    let b = &MPoly::var(Var::R) - &multiplier_poly(n)?;
    let nu = nu_n(n);
    if n <= 2 {
        return exactpoly::resultant_z(&phi, &b);
    }
    // Every root of Φ_n contributes one factor of degree 1 in ρ and at most
    // n/2 in c.
    let bounds = ResultantBounds {
        deg_c: (nu as usize * n as usize).div_ceil(2),
        deg_r: nu as usize,
        height_bits: height_bits(n, nu),
    };
    exactpoly::resultant_z_modular(&phi, &b, Some(bounds))
}

static RESULTANTS: OnceLock<Cache> = OnceLock::new();

/// `R_n(c, ρ)`, monic in `ρ`. Periods up to [`RESULTANT_ROUTE_MAX_N`] take
/// the n-th root of the dynatomic resultant; larger ones use power sums.
pub fn multiplier_resultant(n: u32) -> Result<Arc<MPoly>, PolyError> {
    assert!(n >= 1, "period must be positive");
    cached(&RESULTANTS, n, || {
        let r = if n <= RESULTANT_ROUTE_MAX_N {
            nth_root(&dynatomic_resultant(n)?, n)?
        } else {
            multiplier_resultant_power_sums(n, &dynatomic_poly(n)?)?
        };
        Ok(monic_in_r(r))
    })
}

/// The same polynomial by the power-sum route only.
pub fn multiplier_resultant_by_power_sums(n: u32) -> Result<MPoly, PolyError> {
    Ok(monic_in_r(multiplier_resultant_power_sums(n, &dynatomic_poly(n)?)?))
}

fn monic_in_r(r: MPoly) -> MPoly {
    let top = r.degree(Var::R).max(0) as usize;
    let lead = r.slice(Var::R, top);
    if lead.is_one() {
        r
    } else if (-lead).is_one() {
        -r
    } else {
        panic!("multiplier resultant is not monic in r up to sign")
    }
}

/// Counting rows for `n = 1..=n_max`. Where the exact `R_n` is already
/// cached, its degrees are checked against the table.
pub fn counting(n_max: u32) -> Vec<CountingTable> {
    (1..=n_max)
        .map(|n| {
            let row = CountingTable::new(n);
            if let Some(r) = cached_resultant(n) {
                assert_eq!(r.degree(Var::C) as u64, row.d_n, "deg_c R_{n}");
                assert_eq!(r.degree(Var::R) as u64, row.cycles_n, "deg_r R_{n}");
            }
            row
        })
        .collect()
}

fn cached_resultant(n: u32) -> Option<Arc<MPoly>> {
    RESULTANTS.get()?.lock().expect("cache lock").get(&n).cloned()
}

/// Exact-period factor of the critical orbit `f_c^{∘n}(0)` as a polynomial in `c`.
pub fn center_poly(n: u32) -> Result<MPoly, PolyError> {
    assert!(n >= 1, "period must be positive");
    let c = MPoly::var(Var::C);
    let mut orbit = vec![c.clone()];
    for _ in 1..n {
        let last = orbit.last().expect("nonempty");
        orbit.push(&last.multiply(last)? + &c);
    }
    let mut num = MPoly::one();
    let mut den = MPoly::one();
    for m in divisors(n) {
        let g = &orbit[m as usize - 1];
        match mobius(n / m) {
            1 => num = num.multiply(g)?,
            -1 => den = den.multiply(g)?,
            _ => {}
        }
    }
    num.exact_divide(&den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn small_iterates() {
        assert_eq!(iterate_map(1).unwrap(), p("z^2 + c"));
        assert_eq!(iterate_map(2).unwrap(), p("z^4 + 2*z^2*c + c^2 + c"));
    }

    #[test]
    fn small_dynatomic() {
        assert_eq!(dynatomic_poly(1).unwrap(), p("z^2 - z + c"));
        assert_eq!(dynatomic_poly(2).unwrap(), p("z^2 + z + c + 1"));
    }

    #[test]
    fn small_multipliers() {
        assert_eq!(multiplier_poly(1).unwrap(), p("2*z"));
        assert_eq!(multiplier_poly(2).unwrap(), p("4*z^3 + 4*z*c"));
        assert_eq!(multiplier_poly_chain(3).unwrap(), multiplier_poly(3).unwrap());
    }

    #[test]
    fn small_resultants_both_routes() {
        let r1 = p("r^2 - 2*r + 4*c");
        let r2 = p("r - 4*c - 4");
        assert_eq!(*multiplier_resultant(1).unwrap(), r1);
        assert_eq!(*multiplier_resultant(2).unwrap(), r2);
        assert_eq!(multiplier_resultant_by_power_sums(1).unwrap(), r1);
        assert_eq!(multiplier_resultant_by_power_sums(2).unwrap(), r2);
    }

    #[test]
    fn small_centers() {
        assert_eq!(center_poly(1).unwrap(), p("c"));
        assert_eq!(center_poly(2).unwrap(), p("c + 1"));
        assert_eq!(center_poly(3).unwrap(), p("c^3 + 2*c^2 + c + 1"));
    }
}
