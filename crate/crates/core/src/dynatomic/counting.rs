//! Counting sequences attached to period n.

use serde::Serialize;

/// Divisors of `n` in increasing order.
pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|m| n % m == 0).collect()
}

/// Möbius function by trial factorization.
pub fn mobius(mut n: u32) -> i32 {
    assert!(n >= 1);
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Degree in `c` of the multiplier resultant: `d_1 = 1`,
/// `d_n = 2^{n-1} - Σ_{m|n, m<n} d_m`.
pub fn d_n(n: u32) -> u64 {
    let mut d = vec![0u64; n as usize + 1];
    for k in 1..=n {
        d[k as usize] = if k == 1 {
            1
        } else {
            let lower: u64 = divisors(k).into_iter().filter(|&m| m < k).map(|m| d[m as usize]).sum();
            (1u64 << (k - 1)) - lower
        };
    }
    d[n as usize]
}

/// Number of points of exact period `n` counted by the dynatomic degree:
/// `Σ_{m|n} μ(n/m) 2^m`.
pub fn nu_n(n: u32) -> u64 {
    let s: i64 = divisors(n).into_iter().map(|m| mobius(n / m) as i64 * (1i64 << m)).sum();
    s as u64
}

/// The recursion `k_1 = 1`, `k_n = 2^n - Σ_{m|n, m<n} k_m`, kept verbatim.
pub fn k_n(n: u32) -> u64 {
    let mut k = vec![0u64; n as usize + 1];
    for j in 1..=n {
        k[j as usize] = if j == 1 {
            1
        } else {
            let lower: u64 = divisors(j).into_iter().filter(|&m| m < j).map(|m| k[m as usize]).sum();
            (1u64 << j) - lower
        };
    }
    k[n as usize]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingTable {
    pub n: u32,
    pub d_n: u64,
    pub nu_n: u64,
    pub cycles_n: u64,
    pub k_n: u64,
}

impl CountingTable {
    pub fn new(n: u32) -> Self {
        let nu = nu_n(n);
        CountingTable { n, d_n: d_n(n), nu_n: nu, cycles_n: nu / n as u64, k_n: k_n(n) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_values() {
        let got: Vec<i32> = (1..=12).map(mobius).collect();
        assert_eq!(got, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn table_rows() {
        let t = CountingTable::new(6);
        assert_eq!((t.d_n, t.nu_n, t.cycles_n), (27, 54, 9));
        assert_eq!(CountingTable::new(1).cycles_n, 2);
    }
}
