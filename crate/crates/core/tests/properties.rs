use multequi_core::acceptance::hausdorff;
use multequi_core::dynatomic::{d_n, multiplier_resultant};
use multequi_core::equidist::parameter_roots;
use multequi_core::exactpoly::{nth_root, resultant_z, Exps};
use multequi_core::itinerary::{exact_period_codes, point_by_code};
use multequi_core::numroots::u_value;
use multequi_core::potential::{green_julia, green_m};
use multequi_core::{CFloat, MPoly, Var};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn poly(max_deg: usize, max_terms: usize) -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0..=max_deg, 0..=max_deg, 0..=max_deg), -40i64..=40), 0..=max_terms).prop_map(|terms| {
        MPoly::from_terms(terms.into_iter().map(|((a, b, c), k)| ([a, b, c] as Exps, BigInt::from(k))).collect::<Vec<_>>())
    })
}

/// Polynomial in z whose leading z-coefficient is a nonzero integer.
fn z_leading(deg: usize) -> impl Strategy<Value = MPoly> {
    (poly(deg.saturating_sub(1), 5), prop_oneof![-5i64..=-1, 1i64..=5]).prop_map(move |(low, lead)| {
        let low = MPoly::from_terms(low.terms().filter(|(e, _)| e[0] < deg).map(|(e, c)| (e, c.clone())).collect::<Vec<_>>());
        &low + &MPoly::monomial(BigInt::from(lead), [deg, 0, 0])
    })
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_commutative_and_associative(a in poly(3, 6), b in poly(3, 6), c in poly(2, 4)) {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(&ab, &b.multiply(&a).unwrap());
        prop_assert_eq!(ab.multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
    }

    #[test]
    fn multiplication_distributes(a in poly(3, 6), b in poly(3, 6), c in poly(3, 6)) {
        prop_assert_eq!(a.multiply(&(&b + &c)).unwrap(), &a.multiply(&b).unwrap() + &a.multiply(&c).unwrap());
    }

    #[test]
    fn division_undoes_multiplication(a in poly(3, 6), b in poly(3, 6)) {
        prop_assume!(!b.is_zero());
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(ab.exact_divide(&b).unwrap(), a);
    }

    #[test]
    fn nth_root_inverts_power(p in poly(2, 4), n in 1u32..=4) {
        prop_assume!(!p.is_zero());
        let root = nth_root(&p.pow(n).unwrap(), n).unwrap();
        prop_assert_eq!(root, p.normalize_sign());
    }

    #[test]
    fn text_form_round_trips(p in poly(4, 8)) {
        let back: MPoly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn resultant_commutes_with_specialization(
        a in z_leading(3),
        b in z_leading(2),
        c0 in -3i64..=3,
        r0 in -3i64..=3,
    ) {
        let at = [(Var::C, int(c0)), (Var::R, int(r0))];
        let full = resultant_z(&a, &b).unwrap().specialize(&at);
        let (sa, sb) = (a.specialize(&at), b.specialize(&at));
        prop_assert!(sa.scale == BigInt::from(1) && sb.scale == BigInt::from(1));
        let direct = resultant_z(&sa.poly, &sb.poly).unwrap();
        // both sides are normalized to a positive leading coefficient
        prop_assert_eq!(full.poly.normalize_sign(), direct);
    }

    #[test]
    fn green_functional_equation(re in -2.0f64..2.0, im in -2.0f64..2.0, zr in -3.0f64..3.0, zi in -3.0f64..3.0) {
        let (c, z) = (CFloat::new(re, im, 128), CFloat::new(zr, zi, 128));
        let g = green_julia(&c, &z, 1e-12);
        prop_assume!(g.escaped && g.value > 0.0);
        let image = &z.square() + &c;
        let h = green_julia(&c, &image, 1e-12);
        prop_assert!((h.value - 2.0 * g.value).abs() <= 3e-12, "{} vs {}", h.value, 2.0 * g.value);
    }

    #[test]
    fn green_is_conjugation_symmetric(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let a = green_m(&CFloat::new(re, im, 128), 1e-12);
        let b = green_m(&CFloat::new(re, -im, 128), 1e-12);
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// `u_{n,ρ}(c)` from cycle multipliers against `(1/d_n) log|R_n(c, ρ)|`.
    #[test]
    fn potential_matches_resultant(
        n in 2u32..=6,
        radius in 0.3f64..4.0,
        angle in 0.0f64..std::f64::consts::TAU,
        rr in -20.0f64..20.0,
        ri in -20.0f64..20.0,
    ) {
        let c = CFloat::new(radius * angle.cos(), radius * angle.sin(), 256);
        let rho = CFloat::new(rr, ri, 256);
        let u = u_value(&c, n, &rho).unwrap();
        let r = multiplier_resultant(n).unwrap();
        let (value, err) = r.eval_complex(&CFloat::zero(256), &c, &rho);
        prop_assume!(value.abs_f64() > 1e6 * err);
        let direct = value.ln_abs().to_f64() / d_n(n) as f64;
        prop_assert!((u - direct).abs() <= 1e-10 * direct.abs().max(1.0), "{u} vs {direct}");
    }

    #[test]
    fn conjugate_multiplier_gives_conjugate_parameters(n in 1u32..=4, rr in -8i64..=8, ri in 1i64..=8) {
        let rho = CFloat::new(rr as f64, ri as f64, 128);
        let a = parameter_roots(n, &rho, 128).unwrap();
        let b = parameter_roots(n, &rho.conj(), 128).unwrap();
        let conj: Vec<CFloat> = a.values().iter().map(CFloat::conj).collect();
        prop_assert!(hausdorff(&conj, &b.values()) < 1e-25);
    }

    /// Rotating the code moves the starting point one step along the cycle.
    #[test]
    fn codes_are_shift_equivariant(n in 2u32..=7, pick in 0usize..64, re in 2.5f64..5.0, im in -1.0f64..1.0) {
        let c = CFloat::new(re, im, 128);
        let codes = exact_period_codes(n);
        let code = &codes[pick % codes.len()];
        let base = point_by_code(&c, code, 128).unwrap();
        let shifted = point_by_code(&c, &code.rotate(), 128).unwrap();
        let expected = base.rotated(1);
        for (p, q) in shifted.points.iter().zip(&expected.points) {
            prop_assert!(p.dist(q) < 1e-30);
        }
        prop_assert!(shifted.multiplier.dist(&base.multiplier) <= 1e-25 * base.multiplier.abs_f64());
    }

    /// For real `c` the two branches are exchanged by conjugation.
    #[test]
    fn flipped_code_is_the_conjugate_cycle(n in 1u32..=7, pick in 0usize..64, re in 2.5f64..5.0) {
        let c = CFloat::from_real(re, 128);
        let codes = exact_period_codes(n);
        let code = &codes[pick % codes.len()];
        let a = point_by_code(&c, code, 128).unwrap();
        let b = point_by_code(&c, &code.flipped(), 128).unwrap();
        for (p, q) in a.points.iter().zip(&b.points) {
            prop_assert!(p.conj().dist(q) < 1e-30);
        }
    }
}
