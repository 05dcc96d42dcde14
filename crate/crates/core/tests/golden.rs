use multequi_core::dynatomic::{counting, d_n, multiplier_resultant, nu_n, CountingTable};
use multequi_core::equidist::{eta, u_at_zero_exact};
use multequi_core::itinerary::exact_period_codes;
use multequi_core::numroots::{periodic_cycles, u_value};
use multequi_core::potential::green_m;
use multequi_core::CFloat;
use rug::{Complex, Float};

#[test]
fn printed_resultants() {
    let text: Vec<String> = (1..=3).map(|n| multiplier_resultant(n).unwrap().to_string()).collect();
    assert_eq!(text[0], "4*c + r^2 - 2*r");
    assert_eq!(text[1], "-4*c + r - 4");
    assert_eq!(text[2], "64*c^3 + 128*c^2 - 8*c*r + 64*c + r^2 - 16*r + 64");
}

/// `R_2 = ρ − 4(c + 1)`: the 2-cycle of `z² + c` has multiplier
/// `4 z₁ z₂ = 4(c + 1)`.
#[test]
fn period_two_from_first_principles() {
    for c in [-1.0f64, 0.3, 2.0] {
        let cycles = periodic_cycles(&CFloat::from_real(c, 128), 2, 128).unwrap();
        assert_eq!(cycles.len(), 1);
        assert!((cycles[0].multiplier.re_f64() - 4.0 * (c + 1.0)).abs() < 1e-25);
    }
}

/// Degrees and cycle counts against a brute-force count of primitive
/// binary necklaces.
#[test]
fn counting_tables() {
    let d = [1u64, 1, 3, 6, 15, 27, 63, 120, 252, 495, 1023, 2010];
    for (i, t) in counting(12).iter().enumerate() {
        let n = i as u32 + 1;
        assert_eq!(t.d_n, d[i]);
        let brute = (0u32..1 << n)
            .filter(|&w| (1..n).all(|s| w != ((w >> s) | (w << (n - s))) & ((1 << n) - 1)))
            .count() as u64;
        assert_eq!(t.nu_n, brute, "n = {n}");
        assert_eq!(exact_period_codes(n).len() as u64 * n as u64, brute);
    }
    assert_eq!(CountingTable::new(2).k_n, 3);
    assert_eq!(nu_n(1), 2);
}

/// `2^{−m} log|f_c^m(c)|` along the critical orbit at 512 bits.
fn green_by_orbit(re: f64, im: f64, steps: u32) -> f64 {
    let c = Complex::with_val(512, (re, im));
    let mut z = c.clone();
    for _ in 0..steps {
        z.square_mut();
        z += &c;
    }
    let modulus = Float::with_val(512, z.abs_ref());
    (modulus.ln() / Float::with_val(512, Float::u_exp(1, steps as i32))).to_f64()
}

#[test]
fn green_against_orbit_oracle() {
    for (re, im) in [(1.0, 0.0), (1e6, 0.0), (0.3, 0.6), (-2.1, 0.0), (0.0, 2.0)] {
        let oracle = green_by_orbit(re, im, 24);
        let g = green_m(&CFloat::new(re, im, 128), 1e-12);
        assert!(g.escaped);
        assert!((g.value - oracle).abs() < 1e-11, "c = {re}{im:+}i: {} vs {oracle}", g.value);
    }
    assert!((green_by_orbit(1.0, 0.0, 24) - 0.4073).abs() < 1e-3);
}

#[test]
fn level_of_the_equipotential() {
    assert_eq!(eta(std::f64::consts::LN_2), 0.0);
    assert_eq!(eta(0.0), 0.0);
    assert_eq!(eta(f64::NEG_INFINITY), 0.0);
    assert!((eta(3.0 * std::f64::consts::LN_2) - 4.0 * std::f64::consts::LN_2).abs() < 1e-15);
}

/// At `c = 0` every period-`n` cycle has multiplier `2^n`.
#[test]
fn potential_at_zero() {
    for n in [2u32, 5, 8] {
        let rho = CFloat::from_real(8f64.powi(n as i32), 128);
        let expected = (nu_n(n) / n as u64) as f64 / d_n(n) as f64 * (8f64.powi(n as i32) - 2f64.powi(n as i32)).ln();
        let closed = u_at_zero_exact(n, &rho).unwrap();
        let cycles = u_value(&CFloat::zero(128), n, &rho).unwrap();
        assert!((closed - expected).abs() < 1e-12 * expected);
        assert!((cycles - expected).abs() < 1e-10 * expected);
    }
}
