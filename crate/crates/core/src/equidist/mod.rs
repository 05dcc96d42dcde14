//! Parameter root sets `X_n(ρ)` and convergence statistics of the measures
//! `ν_{n,ρ_n}` toward `μ_η`.

mod homotopy;
mod report;

use num_complex::Complex64 as C64;
use rug::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cfloat::CFloat;
use crate::dynatomic::{d_n, multiplier_resultant, nu_n};
use crate::exactpoly::{PolyError, Var};
use crate::numroots::oracle::{aberth_f64, CenterPoly, DynatomicAt};
use crate::numroots::{aberth_solve_exact, cycles_for, NumError, RootEntry, RootSet};

pub use report::{ConvergenceReport, ReportRow};

/// Largest period solved by specializing the exact `R_n`.
pub const EXACT_MAX_N: u32 = 8;
/// Relative multiplier tolerance of the membership test.
pub const MEMBERSHIP_TOL: f64 = 1e-8;
/// Probes must satisfy `g_M > η + PROBE_MARGIN`.
pub const PROBE_MARGIN: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquiError {
    #[error("roots failed validation: {0:?}")]
    ValidationFailed(Vec<String>),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
}

fn neg_inf_as_string<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if *x == f64::NEG_INFINITY {
        s.serialize_str("-inf")
    } else {
        s.serialize_f64(*x)
    }
}

fn number_or_neg_inf<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(x) => Ok(x),
        Raw::Text(t) => match t.trim().to_ascii_lowercase().as_str() {
            "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
            other => Err(serde::de::Error::custom(format!("expected a number or \"-inf\", got {other:?}"))),
        },
    }
}

fn default_precision() -> u32 {
    128
}

fn default_scale() -> f64 {
    1.0
}

/// A multiplier sequence `ρ_n = scale · e^{n(L + iθ)}` with the periods and
/// probe parameters to examine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(rename = "L", serialize_with = "neg_inf_as_string", deserialize_with = "number_or_neg_inf")]
    pub l: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default = "default_scale")]
    pub scale: f64,
    pub n_range: Vec<u32>,
    #[serde(default)]
    pub eval_points: Vec<[f64; 2]>,
    #[serde(default = "default_precision")]
    pub precision_bits: u32,
    #[serde(default)]
    pub tolerances: SweepTolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepTolerances {
    pub membership: f64,
    pub probe_margin: f64,
}

impl Default for SweepTolerances {
    fn default() -> Self {
        SweepTolerances { membership: MEMBERSHIP_TOL, probe_margin: PROBE_MARGIN }
    }
}

impl ExperimentSpec {
    pub fn new(l: f64, n_range: Vec<u32>) -> Self {
        ExperimentSpec {
            l,
            theta: 0.0,
            scale: 1.0,
            n_range,
            eval_points: Vec::new(),
            precision_bits: 128,
            tolerances: SweepTolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<(), EquiError> {
        let bad = |m: &str| Err(EquiError::InvalidSpec(m.to_string()));
        if self.n_range.is_empty() {
            return bad("n_range is empty");
        }
        if self.n_range.windows(2).any(|w| w[0] >= w[1]) || self.n_range[0] == 0 {
            return bad("n_range must be positive and strictly increasing");
        }
        if self.precision_bits < 128 {
            return bad("precision_bits must be at least 128");
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return bad("scale must be positive");
        }
        if self.l.is_nan() || self.l == f64::INFINITY || !self.theta.is_finite() {
            return bad("L must be a number or -inf and theta finite");
        }
        Ok(())
    }
}

/// `η = max(0, 2L − 2 log 2)`.
pub fn eta(l: f64) -> f64 {
    if l == f64::NEG_INFINITY {
        return 0.0;
    }
    (2.0 * l - 2.0 * std::f64::consts::LN_2).max(0.0)
}

/// `scale · e^{n(L + iθ)}`, or 0 when `L = −∞`.
///
/// `L`, `θ` and `scale` are doubles, so the result is only known to a
/// relative accuracy of a few `n·ε`; within that band it is rounded to the
/// nearest Gaussian integer, which keeps `ρ = 8^n` and `ρ = 1` exact.
pub fn rho_at(spec: &ExperimentSpec, n: u32) -> CFloat {
    let prec = spec.precision_bits.max(128);
    if spec.l == f64::NEG_INFINITY {
        return CFloat::zero(prec);
    }
    let nf = n as f64;
    let mut v = Complex::with_val(prec, (spec.l, spec.theta));
    v *= nf;
    v.exp_mut();
    v *= spec.scale;
    let rho = CFloat::from_complex(v);
    let uncertainty = 8.0 * f64::EPSILON * (1.0 + nf * (spec.l.abs() + spec.theta.abs())) * rho.abs_f64().max(1.0);
    let snapped = Complex::with_val(prec, (rho.re().clone().round(), rho.im().clone().round()));
    let snapped = CFloat::from_complex(snapped);
    if rho.dist(&snapped) <= uncertainty {
        snapped
    } else {
        rho
    }
}

/// The `d_n` parameters (with multiplicity) carrying a period-`n` cycle of
/// multiplier `rho`. Periods up to [`EXACT_MAX_N`] use the exact resultant;
/// longer ones follow paths from the centers.
pub fn parameter_roots(n: u32, rho: &CFloat, prec: u32) -> Result<RootSet, EquiError> {
    parameter_roots_with(n, rho, prec, MEMBERSHIP_TOL)
}

pub fn parameter_roots_with(n: u32, rho: &CFloat, prec: u32, tol: f64) -> Result<RootSet, EquiError> {
    if n == 0 {
        return Err(EquiError::InvalidSpec("period must be positive".into()));
    }
    let prec = prec.max(128);
    if n <= EXACT_MAX_N {
        exact_roots(n, rho, prec, tol)
    } else {
        tracked_roots(n, rho, prec, tol)
    }
}

fn target_radius(prec: u32) -> f64 {
    2f64.powi(-(prec as i32) * 3 / 4)
}

fn exact_roots(n: u32, rho: &CFloat, prec: u32, tol: f64) -> Result<RootSet, EquiError> {
    let (re, im) = rho.to_rationals().ok_or_else(|| EquiError::InvalidSpec("multiplier is not finite".into()))?;
    let r = multiplier_resultant(n)?;
    let (pr, pi) = r.specialize_gaussian(Var::R, &re, &im);
    let deg = d_n(n) as usize;
    let mut coeffs = vec![(num_bigint::BigInt::from(0), num_bigint::BigInt::from(0)); deg + 1];
    for (e, c) in pr.poly.terms() {
        coeffs[e[Var::C.index()]].0 = c.clone();
    }
    for (e, c) in pi.poly.terms() {
        coeffs[e[Var::C.index()]].1 = c.clone();
    }
    let set = aberth_solve_exact(&coeffs, target_radius(prec))?;
    let mut failed = Vec::new();
    for e in &set.roots {
        if !is_member(n, &e.value, rho, prec, tol) {
            failed.push(format!("{}", e.value));
        }
    }
    if failed.is_empty() {
        Ok(set)
    } else {
        Err(EquiError::ValidationFailed(failed))
    }
}

fn rel_close(a: &CFloat, b: &CFloat, tol: f64) -> bool {
    a.dist(b) <= tol * b.abs_f64().max(1.0)
}

/// Some period-`n` cycle of `f_c` has multiplier `rho` to relative
/// tolerance `tol`. Tried on the full cycle list first; when cycles collide
/// (parabolic parameters) the root is confirmed by solving the cycle
/// equations jointly in `(z, c)` instead.
pub fn is_member(n: u32, c: &CFloat, rho: &CFloat, prec: u32, tol: f64) -> bool {
    if let Ok((cycles, _)) = cycles_for(c, n, prec) {
        return cycles.iter().any(|cyc| rel_close(&cyc.multiplier, rho, tol));
    }
    let c64 = to_c64(c);
    let rho64 = to_c64(rho);
    let mut starts: Vec<(f64, C64)> = aberth_f64(&DynatomicAt::new(n, c))
        .into_iter()
        .map(|z| ((homotopy::orbit_multiplier(z, c64, n) - rho64).norm(), z))
        .collect();
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    starts.into_iter().take(4).any(|(_, z)| {
        homotopy::refine(n, &homotopy::CycleState::from_point(n, z, c64), rho, prec)
            .is_some_and(|sol| sol.c.dist(c) <= tol.max(1e-6) * c.abs_f64().max(1.0))
    })
}

fn to_c64(x: &CFloat) -> C64 {
    let (re, im) = x.to_c64();
    C64::new(re, im)
}

const TWISTS: [f64; 4] = [0.0, 0.5, -0.45, 1.1];

fn tracked_roots(n: u32, rho: &CFloat, prec: u32, tol: f64) -> Result<RootSet, EquiError> {
    let centers = aberth_f64(&CenterPoly::new(n));
    let target = to_c64(rho);
    let mut ends: Vec<Option<homotopy::Solution>> = vec![None; centers.len()];
    let mut pending: Vec<usize> = (0..centers.len()).collect();
    for (round, &twist) in TWISTS.iter().enumerate() {
        let max_step = 0.05 / (1 << round) as f64;
        let path = homotopy::legs(target, twist);
        for &i in &pending {
            let end = if target.norm() == 0.0 {
                homotopy::TrackEnd { state: homotopy::CycleState::at_center(n, centers[i]), complete: true }
            } else {
                homotopy::track(n, centers[i], &path, max_step)
            };
            ends[i] = if end.complete { homotopy::refine(n, &end.state, rho, prec) } else { None };
        }
        pending = unresolved(&ends);
        if pending.is_empty() {
            break;
        }
    }
    if !pending.is_empty() {
        let failed = pending.iter().map(|&i| format!("path from center {}", centers[i])).collect();
        return Err(EquiError::ValidationFailed(failed));
    }
    let mut roots = Vec::with_capacity(ends.len());
    let mut failed = Vec::new();
    for sol in ends.into_iter().flatten() {
        if !validate_solution(n, &sol, rho, tol) {
            failed.push(format!("{}", sol.c));
        }
        roots.push(RootEntry { value: sol.c, radius: sol.radius, multiplicity: 1 });
    }
    if !failed.is_empty() {
        return Err(EquiError::ValidationFailed(failed));
    }
    roots.sort_by(|a, b| {
        let (x, y) = (to_c64(&a.value), to_c64(&b.value));
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });
    Ok(RootSet { degree: roots.len(), roots, precision: prec, certified: false })
}

/// Paths that failed, plus every member of a group of endpoints that landed
/// on the same cycle. Distinct cycles may share `c` to far below double
/// precision when `|ρ|` is large, so `c` alone does not decide.
fn unresolved(ends: &[Option<homotopy::Solution>]) -> Vec<usize> {
    let mut bad: Vec<usize> = ends.iter().enumerate().filter(|(_, e)| e.is_none()).map(|(i, _)| i).collect();
    let mut found: Vec<(C64, usize)> =
        ends.iter().enumerate().filter_map(|(i, e)| e.as_ref().map(|s| (to_c64(&s.c), i))).collect();
    found.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
    for k in 0..found.len() {
        for j in k + 1..found.len() {
            if found[j].0.re - found[k].0.re > 1e-9 * (1.0 + found[k].0.norm()) {
                break;
            }
            if (found[j].0 - found[k].0).norm() > 1e-9 * (1.0 + found[k].0.norm()) {
                continue;
            }
            let (a, b) = (ends[found[k].1].as_ref().expect("found"), ends[found[j].1].as_ref().expect("found"));
            if same_cycle(a, b) {
                bad.push(found[k].1);
                bad.push(found[j].1);
            }
        }
    }
    bad.sort_unstable();
    bad.dedup();
    bad
}

fn same_cycle(a: &homotopy::Solution, b: &homotopy::Solution) -> bool {
    if a.period != b.period {
        return false;
    }
    let scale = 1.0 + a.c.abs_f64();
    if a.c.dist(&b.c) > 1e-20 * scale {
        return false;
    }
    let cyc = crate::numroots::cycle_from_point(&b.c, &b.z, b.period, 0.0);
    cyc.points.iter().any(|p| p.dist(&a.z) <= 1e-20 * scale)
}

/// The polished solution is a cycle of exact period `n` and multiplier
/// `rho`, or a satellite collapse onto a `k`-cycle when `rho = 1`.
fn validate_solution(n: u32, sol: &homotopy::Solution, rho: &CFloat, tol: f64) -> bool {
    let cyc = crate::numroots::cycle_from_point(&sol.c, &sol.z, sol.period, 0.0);
    let closes = cyc.closure_residual(&sol.c) <= 1e-6 && {
        let back = cyc.points[cyc.points.len() - 1].square() + sol.c.clone();
        back.dist(&sol.z) <= 1e-10 * (1.0 + sol.z.abs_f64())
    };
    let q = n / sol.period;
    let mult = cyc.multiplier.powu(q);
    let exact_period = (1..sol.period)
        .filter(|k| sol.period % k == 0)
        .all(|k| cyc.points[k as usize].dist(&sol.z) > 1e-12 * (1.0 + sol.z.abs_f64()));
    closes && exact_period && rel_close(&mult, rho, tol)
}

/// `(1/d_n)·(nu_n/n)·log|2^n − ρ|`, the potential at `c = 0` where every
/// period-`n` cycle of `z²` has multiplier `2^n`.
pub fn u_at_zero_exact(n: u32, rho: &CFloat) -> Result<f64, EquiError> {
    if n < 2 {
        return Err(EquiError::InvalidSpec("the closed form at c = 0 needs n >= 2".into()));
    }
    let prec = rho.prec().max(128);
    let two_n = CFloat::from_complex(Complex::with_val(prec, 1) << n);
    let diff = two_n - rho.clone();
    if diff.is_zero() {
        return Ok(f64::NEG_INFINITY);
    }
    let cycles = (nu_n(n) / n as u64) as f64;
    Ok(cycles / d_n(n) as f64 * diff.ln_abs().to_f64())
}

pub use report::convergence_report;

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(l: f64) -> ExperimentSpec {
        ExperimentSpec::new(l, vec![3])
    }

    #[test]
    fn eta_examples() {
        let ln2 = std::f64::consts::LN_2;
        assert_eq!(eta(0.0), 0.0);
        assert_eq!(eta(ln2), 0.0);
        assert_eq!(eta(f64::NEG_INFINITY), 0.0);
        assert!((eta(3.0 * ln2) - 4.0 * ln2).abs() < 1e-15);
    }

    #[test]
    fn rho_examples_are_exact() {
        let ln2 = std::f64::consts::LN_2;
        assert_eq!(rho_at(&spec(ln2), 3), CFloat::from_real(8.0, 128));
        assert_eq!(rho_at(&spec(0.0), 7), CFloat::one(128));
        assert_eq!(rho_at(&spec(3.0 * ln2), 2), CFloat::from_real(64.0, 128));
        assert_eq!(rho_at(&spec(3.0 * ln2), 12), CFloat::from_real(8f64.powi(12), 128));
        assert!(rho_at(&spec(f64::NEG_INFINITY), 4).is_zero());
    }

    #[test]
    fn spec_json_accepts_minus_infinity() {
        let s: ExperimentSpec =
            serde_json::from_str(r#"{"L": "-inf", "theta": 0, "scale": 1, "n_range": [2, 3], "eval_points": [[2, 0]], "precision_bits": 128}"#)
                .unwrap();
        assert_eq!(s.l, f64::NEG_INFINITY);
        s.validate().unwrap();
        let back = serde_json::to_string(&s).unwrap();
        assert!(back.contains("\"-inf\""));
        let bad = ExperimentSpec { n_range: vec![3, 3], ..s };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn small_root_sets() {
        let zero = CFloat::zero(128);
        let one = parameter_roots(1, &zero, 128).unwrap();
        assert!(one.roots[0].value.abs_f64() < 1e-30);
        let two = parameter_roots(2, &zero, 128).unwrap();
        assert!(two.roots[0].value.dist(&CFloat::from_real(-1.0, 128)) < 1e-30);
        let three = parameter_roots(3, &zero, 128).unwrap();
        assert_eq!(three.total_multiplicity(), 3);
        let quarter = parameter_roots(1, &CFloat::one(128), 128).unwrap();
        assert!(quarter.roots[0].value.dist(&CFloat::from_real(0.25, 128)) < 1e-30);
    }

    #[test]
    fn closed_form_at_zero() {
        let ln2 = std::f64::consts::LN_2;
        assert!((u_at_zero_exact(3, &CFloat::zero(128)).unwrap() - 2.0 * ln2).abs() < 1e-15);
        assert_eq!(u_at_zero_exact(3, &CFloat::from_real(8.0, 128)).unwrap(), f64::NEG_INFINITY);
        assert!((u_at_zero_exact(2, &CFloat::from_real(64.0, 128)).unwrap() - 60f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn tracked_and_exact_paths_agree() {
        for rho in [CFloat::new(0.3, 0.4, 128), CFloat::one(128), CFloat::from_real(64.0, 128)] {
            let exact = exact_roots(5, &rho, 128, MEMBERSHIP_TOL).unwrap();
            let tracked = tracked_roots(5, &rho, 128, MEMBERSHIP_TOL).unwrap();
            assert_eq!(tracked.total_multiplicity(), 15);
            for e in &exact.roots {
                let near = tracked.roots.iter().map(|t| t.value.dist(&e.value)).fold(f64::INFINITY, f64::min);
                assert!(near < 1e-25, "rho {rho}: {near:e}");
            }
        }
    }
}
