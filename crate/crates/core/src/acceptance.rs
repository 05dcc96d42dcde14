//! The acceptance suite: one pass/fail result per criterion.
//!
//! Detail strings contain only quantities that are reproducible run to run;
//! wall-clock times are kept in [`CriterionResult::elapsed`] and enter only
//! the pass/fail decision of criteria with a time budget.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cfloat::CFloat;
use crate::dynatomic::{
    center_poly, d_n, divisors, dynatomic_poly, dynatomic_resultant, iterate_map, multiplier_resultant,
    multiplier_resultant_by_power_sums, nu_n,
};
use crate::equidist::{eta, parameter_roots, EquiError};
use crate::exactpoly::{MPoly, Var};
use crate::itinerary::{coded_cycles, multiplier_growth};
use crate::numroots::{aberth_solve_exact, periodic_cycles, u_value, vieta_counters, RootSet};
use crate::potential::{green_julia_c64, green_m, DEFAULT_ITERATION_CAP};
use crate::tolerances as tol;

/// Reference forms of `R_1`, `R_2`, `R_3` in ASCII.
pub const REFERENCE_R1: &str = "r^2 - 2*r + 4*c";
pub const REFERENCE_R2: &str = "r + 4 + 4*c";
pub const REFERENCE_R3: &str = "r^2 - 16*r + 64 - 8*r*c + 64*c + 128*c^2 + 64*c^3";

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

fn timed(id: u8, name: &'static str, f: impl FnOnce() -> (bool, String)) -> CriterionResult {
    let start = Instant::now();
    let (pass, detail) = f();
    CriterionResult { id, name, pass, detail, elapsed: start.elapsed() }
}

fn within(r: &CriterionResult, budget_s: f64) -> bool {
    r.elapsed.as_secs_f64() < budget_s
}

fn reference(s: &str) -> MPoly {
    s.parse().expect("reference polynomial parses")
}

/// `R_1`, `R_3` exactly as printed and `R_2` up to an overall sign.
pub fn golden() -> CriterionResult {
    let mut r = timed(1, "golden polynomials", || {
        let got: Vec<MPoly> = (1..=3).map(|n| (*multiplier_resultant(n).expect("small resultant")).clone()).collect();
        let r1 = got[0] == reference(REFERENCE_R1);
        let r3 = got[2] == reference(REFERENCE_R3);
        let p2 = reference(REFERENCE_R2);
        let r2 = got[1] == p2 || got[1] == -p2.clone();
        // the printed R_2 agrees with ours after ρ ↦ −ρ
        let flipped = substitute_minus_r(&got[1]);
        let r2_flip = flipped == p2 || flipped == -p2;
        let detail = format!(
            "R_1 {}; R_3 {}; R_2 = {} vs printed {} ({}; equal after rho -> -rho: {})",
            if r1 { "exact" } else { "differs" },
            if r3 { "exact" } else { "differs" },
            got[1],
            REFERENCE_R2,
            if r2 { "equal up to sign" } else { "not equal up to overall sign" },
            if r2_flip { "yes" } else { "no" }
        );
        (r1 && r2 && r3, detail)
    });
    r.pass &= within(&r, tol::GOLDEN_RUNTIME_S);
    r
}

fn substitute_minus_r(p: &MPoly) -> MPoly {
    let terms = p.terms().map(|(e, c)| (e, if e[Var::R.index()] % 2 == 1 { -c.clone() } else { c.clone() })).collect::<Vec<_>>();
    MPoly::from_terms(terms)
}

/// `deg_c R_n = d_n` and `deg_ρ R_n = nu_n / n` for `n ≤ 8`.
pub fn degree_law() -> CriterionResult {
    let mut r = timed(2, "degree law", || {
        let expected = [1u64, 1, 3, 6, 15, 27, 63, 120];
        let mut ok = (1..=tol::DEGREE_MAX_N).all(|n| d_n(n) == expected[n as usize - 1]);
        let mut rows = Vec::new();
        for n in 1..=tol::DEGREE_MAX_N {
            let p = multiplier_resultant(n).expect("resultant");
            let (dc, dr) = (p.degree(Var::C) as u64, p.degree(Var::R) as u64);
            ok &= dc == d_n(n) && dr == nu_n(n) / n as u64;
            rows.push(format!("{dc}/{dr}"));
        }
        (ok, format!("deg_c/deg_rho for n=1..8: {}", rows.join(" ")))
    });
    r.pass &= within(&r, tol::DEGREE_RUNTIME_S);
    r
}

/// `Res_z(Φ_n, ρ − μ_n) = ±R_n^n` for `n ≤ 6`, with `R_n` from power sums.
pub fn power_identity() -> CriterionResult {
    timed(3, "n-th power identity", || {
        let mut ok = true;
        let mut signs = Vec::new();
        for n in 1..=tol::POWER_IDENTITY_MAX_N {
            let res = dynatomic_resultant(n).expect("resultant");
            let pw = multiplier_resultant_by_power_sums(n).and_then(|r| r.pow(n)).expect("power");
            if res == pw {
                signs.push("+");
            } else if res == -pw {
                signs.push("-");
            } else {
                ok = false;
                signs.push("x");
            }
        }
        (ok, format!("signs for n=1..{}: {}", tol::POWER_IDENTITY_MAX_N, signs.join("")))
    })
}

fn exact_roots_of(p: &MPoly, v: Var) -> RootSet {
    let deg = p.degree(v).max(0) as usize;
    let mut coeffs = vec![(BigInt::from(0), BigInt::from(0)); deg + 1];
    for (e, c) in p.terms() {
        coeffs[e[v.index()]].0 = c.clone();
    }
    aberth_solve_exact(&coeffs, 1e-30).expect("exact polynomial roots")
}

/// Symmetric distance between two finite point sets, matched by nearest
/// neighbour; infinite when the sizes differ.
pub fn hausdorff(a: &[CFloat], b: &[CFloat]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let one_way = |x: &[CFloat], y: &[CFloat]| {
        let ys: Vec<(f64, f64)> = y.iter().map(|p| p.to_c64()).collect();
        x.iter()
            .map(|p| {
                let (px, py) = p.to_c64();
                let j = (0..ys.len())
                    .min_by(|&i, &k| {
                        let di = (ys[i].0 - px).hypot(ys[i].1 - py);
                        let dk = (ys[k].0 - px).hypot(ys[k].1 - py);
                        di.total_cmp(&dk)
                    })
                    .expect("nonempty");
                p.dist(&y[j])
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Roots of `R_n(c, 0)` against roots of the critical-orbit polynomial.
pub fn center_oracle() -> CriterionResult {
    timed(4, "center oracle", || {
        let mut worst: f64 = 0.0;
        let mut ok = true;
        for n in 1..=tol::CENTER_MAX_N {
            let centers = exact_roots_of(&center_poly(n).expect("center polynomial"), Var::C);
            match parameter_roots(n, &CFloat::zero(128), 128) {
                Ok(set) => worst = worst.max(hausdorff(&set.values(), &centers.values())),
                Err(_) => ok = false,
            }
        }
        ok &= worst <= tol::CENTER_MATCH;
        (ok, format!("max distance over n=1..{} below {:e}: {}", tol::CENTER_MAX_N, tol::CENTER_MATCH, worst <= tol::CENTER_MATCH))
    })
}

/// `R_1(1/4, 1) = 0` exactly and the root of `R_2(c, −1)` at `−5/4`.
pub fn parabolic() -> CriterionResult {
    timed(5, "parabolic spot checks", || {
        let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        let r1 = multiplier_resultant(1).expect("R_1");
        let at = r1.specialize(&[(Var::R, q(1, 1)), (Var::C, q(1, 4))]);
        let exact_quarter = at.poly.is_zero();
        let r2 = multiplier_resultant(2).expect("R_2");
        let exact_basilica = r2.specialize(&[(Var::R, q(-1, 1)), (Var::C, q(-5, 4))]).poly.is_zero();
        let numeric = parameter_roots(2, &CFloat::from_real(-1.0, 128), 128)
            .map(|s| s.roots[0].value.dist(&CFloat::from_real(-1.25, 128)))
            .unwrap_or(f64::INFINITY);
        let ok = exact_quarter && exact_basilica && numeric <= tol::PARABOLIC_MATCH;
        (
            ok,
            format!(
                "R_1(1/4,1) = 0: {exact_quarter}; R_2(-5/4,-1) = 0: {exact_basilica}; solver distance to -5/4 below {:e}: {}",
                tol::PARABOLIC_MATCH,
                numeric <= tol::PARABOLIC_MATCH
            ),
        )
    })
}

fn pointwise_error(c: &CFloat, n: u32, rho: &CFloat) -> Result<f64, crate::numroots::NumError> {
    let u = u_value(c, n, rho)?;
    Ok((u - green_m(c, tol::GREEN_TOL).value - 2.0 * std::f64::consts::LN_2).abs())
}

/// `|u_{n,1}(c) − g_M(c) − 2 log 2|` at `n = 7` and `n = 14`.
pub fn pointwise_limit() -> CriterionResult {
    let mut r = timed(6, "pointwise potential limit", || {
        let rho = CFloat::one(128);
        let mut ok = true;
        let mut parts = Vec::new();
        for [re, im] in tol::POINTWISE_PROBES {
            let c = CFloat::new(re, im, 128);
            match (pointwise_error(&c, 7, &rho), pointwise_error(&c, 14, &rho)) {
                (Ok(e7), Ok(e14)) => {
                    ok &= e14 < tol::POINTWISE_ERROR && e14 < e7;
                    parts.push(format!("c={re}{im:+}i: n=7 {e7:.3e}, n=14 {e14:.3e}"));
                }
                _ => {
                    ok = false;
                    parts.push(format!("c={re}{im:+}i: cycles unavailable"));
                }
            }
        }
        (ok, parts.join("; "))
    });
    r.pass &= within(&r, tol::POINTWISE_RUNTIME_S);
    r
}

fn mean_green(n: u32, rho: &CFloat) -> Result<f64, EquiError> {
    let set = parameter_roots(n, rho, 128)?;
    let mut sum = crate::numroots::CompensatedSum::default();
    for e in &set.roots {
        sum.add(e.multiplicity as f64 * green_m(&e.value, tol::GREEN_TOL).value);
    }
    Ok(sum.value() / set.total_multiplicity() as f64)
}

/// `ρ_n = 8^n`: mean of `g_M` over `X_n` near `η = 4 log 2`, and `u(0)`
/// near `2L = 6 log 2`.
pub fn equipotential_drift() -> CriterionResult {
    let mut r = timed(7, "equipotential drift", || {
        let ln2 = std::f64::consts::LN_2;
        let level = eta(3.0 * ln2);
        let rho = |n: i32| CFloat::from_real(8f64.powi(n), 128);
        let (m6, m12) = match (mean_green(6, &rho(6)), mean_green(12, &rho(12))) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return (false, "root sets unavailable".to_string()),
        };
        let (d6, d12) = ((m6 - level).abs(), (m12 - level).abs());
        let u0 = u_value(&CFloat::zero(128), 12, &rho(12)).unwrap_or(f64::NAN);
        let rel = (u0 - 6.0 * ln2).abs() / (6.0 * ln2);
        let ok = d12 <= tol::DRIFT_MEAN && d12 < d6 && rel <= tol::DRIFT_U_REL;
        (ok, format!("|mean g_M - eta|: n=6 {d6:.4}, n=12 {d12:.4}; u(0) at n=12 {u0:.6} (relative error {rel:.3e})"))
    });
    r.pass &= within(&r, tol::DRIFT_RUNTIME_S);
    r
}

/// `ρ_n = 1`: roots sit on the boundary of M.
pub fn boundary_regime() -> CriterionResult {
    timed(8, "boundary regime", || match mean_green(12, &CFloat::one(128)) {
        Ok(m) => (m <= tol::BOUNDARY_MEAN, format!("mean g_M at n=12: {m:.3e}")),
        Err(e) => (false, format!("root set unavailable: {e}")),
    })
}

/// Coded cycles at `c = 3` against the dynatomic roots, and the trend of
/// the multiplier growth rates.
pub fn itinerary_consistency() -> CriterionResult {
    let mut r = timed(9, "itinerary consistency", || {
        let c = CFloat::from_real(3.0, 128);
        let mut worst: f64 = 0.0;
        for n in 1..=tol::ITINERARY_MAX_N {
            let coded: Vec<CFloat> = match coded_cycles(&c, n, 128) {
                Ok(v) => v.into_iter().flat_map(|(_, cyc)| cyc.points).collect(),
                Err(_) => return (false, format!("coded cycles failed at n={n}")),
            };
            let roots: Vec<CFloat> = match periodic_cycles(&c, n, 128) {
                Ok(v) => v.into_iter().flat_map(|cyc| cyc.points).collect(),
                Err(_) => return (false, format!("dynatomic roots failed at n={n}")),
            };
            worst = worst.max(hausdorff(&coded, &roots));
        }
        let sets_ok = worst <= tol::ITINERARY_HAUSDORFF;
        let dev = |n| multiplier_growth(&c, n).map(|g| g.max_deviation).unwrap_or(f64::NAN);
        let (d4, d14) = (dev(4), dev(14));
        let trend_ok = d14 < d4;
        (
            sets_ok && trend_ok,
            format!(
                "Hausdorff for n<=10 below {:e}: {sets_ok}; max_deviation n=4 {d4:.5}, n=14 {d14:.5} (decrease: {trend_ok})",
                tol::ITINERARY_HAUSDORFF
            ),
        )
    });
    r.pass &= within(&r, tol::ITINERARY_RUNTIME_S);
    r
}

/// Property checks: root-solver Vieta failures, the functional equation of
/// `g_c` on random escaping points, and the Möbius product of dynatomic
/// polynomials. Determinism of the whole log is judged by the caller.
pub fn property_suites() -> CriterionResult {
    timed(10, "property suites", || {
        let (_, checks, failures) = vieta_counters();
        let vieta_ok = checks > 0 && failures == 0;

        let mut rng = ChaCha8Rng::seed_from_u64(tol::FUNCTIONAL_EQ_SEED);
        let mut tested = 0usize;
        let mut worst: f64 = 0.0;
        while tested < tol::FUNCTIONAL_EQ_POINTS {
            let c = num_complex::Complex64::new(rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5));
            let z = num_complex::Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let g = green_julia_c64(c, z, tol::GREEN_TOL, DEFAULT_ITERATION_CAP);
            if !g.escaped || g.value <= 0.0 {
                continue;
            }
            let image = green_julia_c64(c, z * z + c, tol::GREEN_TOL, DEFAULT_ITERATION_CAP);
            worst = worst.max((image.value - 2.0 * g.value).abs());
            tested += 1;
        }
        let green_ok = worst <= tol::FUNCTIONAL_EQ_FACTOR * tol::GREEN_TOL;

        let mobius_ok = (1..=tol::MOBIUS_MAX_N).all(|n| {
            let mut prod = MPoly::one();
            for m in divisors(n) {
                prod = prod.multiply(&dynatomic_poly(m).expect("dynatomic")).expect("product");
            }
            prod == &iterate_map(n).expect("iterate") - &MPoly::var(Var::Z)
        });
        (
            vieta_ok && green_ok && mobius_ok,
            format!(
                "vieta failures {failures}; functional equation on {} points within {}*tol: {green_ok}; Mobius products n<=8 exact: {mobius_ok}",
                tol::FUNCTIONAL_EQ_POINTS,
                tol::FUNCTIONAL_EQ_FACTOR
            ),
        )
    })
}

/// Criteria 1–10 in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        golden(),
        degree_law(),
        power_identity(),
        center_oracle(),
        parabolic(),
        pointwise_limit(),
        equipotential_drift(),
        boundary_regime(),
        itinerary_consistency(),
        property_suites(),
    ]
}

/// The deterministic log: one line per criterion.
pub fn log(results: &[CriterionResult]) -> String {
    results.iter().map(|r| r.line() + "\n").collect()
}

/// Runs the suite `runs` times and folds byte-identity of the logs into
/// criterion 10. Returns the results of the last run.
pub fn verify(runs: usize) -> Vec<CriterionResult> {
    let mut logs = Vec::new();
    let mut results = Vec::new();
    for _ in 0..runs.max(1) {
        results = run_all();
        logs.push(log(&results));
    }
    if runs > 1 {
        let same = logs.windows(2).all(|w| w[0] == w[1]);
        if let Some(last) = results.last_mut() {
            last.pass &= same;
            last.detail.push_str(&format!("; {runs} runs byte-identical: {same}"));
        }
    }
    results
}
