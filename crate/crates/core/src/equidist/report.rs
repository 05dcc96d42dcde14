use std::fmt::Write as _;

use serde::Serialize;

use super::{eta, parameter_roots_with, rho_at, EquiError, ExperimentSpec};
use crate::cfloat::CFloat;
use crate::numroots::{u_value, CompensatedSum};
use crate::potential::green_m;

const GREEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub n: u32,
    pub rho: [f64; 2],
    pub eta: f64,
    /// Mean of `g_M` over the root set, with multiplicity.
    pub mean_gm: f64,
    pub frac_escaped: f64,
    pub u_at_zero: f64,
    /// `|u_{n,ρ_n}(c) − g_M(c) − 2 log 2|` per accepted probe.
    pub u_errors: Vec<f64>,
    pub root_count: usize,
    pub certified: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub spec: ExperimentSpec,
    pub probes: Vec<[f64; 2]>,
    pub warnings: Vec<String>,
    pub rows: Vec<ReportRow>,
}

/// Runs every period of the sweep. Failures are recorded per row; only an
/// invalid spec aborts.
pub fn convergence_report(spec: &ExperimentSpec) -> Result<ConvergenceReport, EquiError> {
    spec.validate()?;
    let prec = spec.precision_bits;
    let level = eta(spec.l);
    let mut warnings = Vec::new();
    let mut probes = Vec::new();
    for &[re, im] in &spec.eval_points {
        let g = green_m(&CFloat::new(re, im, prec), GREEN_TOL);
        if g.escaped && g.value > level + spec.tolerances.probe_margin {
            probes.push([re, im]);
        } else {
            warnings.push(format!(
                "probe {re}{im:+}i rejected: g_M = {:.6} is not above eta + {}",
                g.value, spec.tolerances.probe_margin
            ));
        }
    }
    let rows = spec.n_range.iter().map(|&n| row(spec, n, level, &probes)).collect();
    Ok(ConvergenceReport { spec: spec.clone(), probes, warnings, rows })
}

fn row(spec: &ExperimentSpec, n: u32, level: f64, probes: &[[f64; 2]]) -> ReportRow {
    let prec = spec.precision_bits;
    let rho = rho_at(spec, n);
    let mut failures = Vec::new();
    let (mut mean_gm, mut frac_escaped, mut root_count, mut certified) = (f64::NAN, f64::NAN, 0, false);
    match parameter_roots_with(n, &rho, prec, spec.tolerances.membership) {
        Ok(set) => {
            let total = set.total_multiplicity() as f64;
            let mut sum = CompensatedSum::default();
            let mut escaped = 0usize;
            for e in &set.roots {
                let g = green_m(&e.value, GREEN_TOL);
                sum.add(e.multiplicity as f64 * g.value);
                if g.escaped {
                    escaped += e.multiplicity;
                }
            }
            mean_gm = sum.value() / total;
            frac_escaped = escaped as f64 / total;
            root_count = set.total_multiplicity();
            certified = set.certified;
        }
        Err(e) => failures.push(format!("roots: {e}")),
    }
    let target = |c: &CFloat| green_m(c, GREEN_TOL).value + 2.0 * std::f64::consts::LN_2;
    let u_errors = probes
        .iter()
        .map(|&[re, im]| {
            let c = CFloat::new(re, im, prec);
            match u_value(&c, n, &rho) {
                Ok(u) => (u - target(&c)).abs(),
                Err(e) => {
                    failures.push(format!("u at {re}{im:+}i: {e}"));
                    f64::NAN
                }
            }
        })
        .collect();
    let u_at_zero = u_value(&CFloat::zero(prec), n, &rho).unwrap_or_else(|e| {
        failures.push(format!("u at 0: {e}"));
        f64::NAN
    });
    ReportRow {
        n,
        rho: [rho.re_f64(), rho.im_f64()],
        eta: level,
        mean_gm,
        frac_escaped,
        u_at_zero,
        u_errors,
        root_count,
        certified,
        failures,
    }
}

/// `%a`-style hexadecimal form of a double, exact on round trip.
pub fn hex_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    match (exp, mant) {
        (0, 0) => format!("{sign}0x0p+0"),
        (0, m) => format!("{sign}0x0.{m:013x}p-1022"),
        (e, m) => format!("{sign}0x1.{m:013x}p{:+}", e - 1023),
    }
}

fn decimal(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

impl ConvergenceReport {
    /// One line per period; numbers with 17 significant digits, or in
    /// hexadecimal when `hex` is set.
    pub fn to_csv(&self, hex: bool) -> String {
        let fmt = |x: f64| if hex { hex_f64(x) } else { decimal(x) };
        let mut out = String::from("n,rho_re,rho_im,eta,mean_gM,frac_escaped,u_at_zero");
        for k in 0..self.probes.len() {
            let _ = write!(out, ",u_err_{k}");
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(
                out,
                "{},{},{},{},{},{},{}",
                r.n,
                fmt(r.rho[0]),
                fmt(r.rho[1]),
                fmt(r.eta),
                fmt(r.mean_gm),
                fmt(r.frac_escaped),
                fmt(r.u_at_zero)
            );
            for &e in &r.u_errors {
                let _ = write!(out, ",{}", fmt(e));
            }
            out.push('\n');
        }
        out
    }

    pub fn failures(&self) -> Vec<String> {
        self.rows.iter().flat_map(|r| r.failures.iter().map(move |f| format!("n={}: {f}", r.n))).collect()
    }
}
