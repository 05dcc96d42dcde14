//! The `multequi` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use multequi_core::acceptance;
use multequi_core::dynatomic::{multiplier_resultant, CountingTable};
use multequi_core::equidist::{convergence_report, eta, parameter_roots, ExperimentSpec};
use multequi_core::itinerary::coded_cycles;
use multequi_core::potential::green_m;
use multequi_core::CFloat;

pub mod render;

use render::{RenderSpec, Viewport};

pub const PRECISION_ENV: &str = "MULTEQUI_PRECISION_BITS";
const DEFAULT_PRECISION: u32 = 128;

#[derive(Debug, Parser)]
#[command(name = "multequi", version, about = "Multiplier resultants of z^2 + c and the equidistribution of their roots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print R_n(c, r) exactly.
    Exact {
        #[arg(long)]
        n: u32,
        /// Wrap the polynomial with its degree counts.
        #[arg(long)]
        json: bool,
    },
    /// Green's function of the Mandelbrot set at c.
    Green {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        c: [f64; 2],
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Period-n cycles of z^2 + c by itinerary, as CSV.
    Itinerary {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        c: [f64; 2],
        #[arg(long)]
        n: u32,
    },
    /// Convergence statistics for a multiplier sequence.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Hexadecimal floats instead of decimal.
        #[arg(long)]
        hex: bool,
    },
    /// Run the acceptance suite.
    Verify {
        /// Repetitions; with more than one the logs must agree byte for byte.
        #[arg(long, default_value_t = 2)]
        runs: usize,
    },
    /// Root set of R_n(c, rho) over an escape-time picture, as binary PPM.
    Render {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        rho: [f64; 2],
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 600)]
        height: u32,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "-0.5,0")]
        center: [f64; 2],
        /// Width of the viewport in the parameter plane.
        #[arg(long, default_value_t = 3.0)]
        span: f64,
        #[arg(long, default_value_t = 256)]
        max_iter: u32,
    },
    /// The level eta = max(0, 2L - 2 log 2).
    Eta {
        #[arg(long = "L", allow_hyphen_values = true)]
        l: f64,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Compute(_) => 1,
        }
    }
}

fn parse_complex(s: &str) -> Result<[f64; 2], String> {
    let mut parts = s.split(',');
    let mut next = |what: &str| -> Result<f64, String> {
        match parts.next() {
            Some(p) => p.trim().parse().map_err(|_| format!("bad {what} part in {s:?}")),
            None => Ok(0.0),
        }
    };
    let re = next("real")?;
    let im = next("imaginary")?;
    if parts.next().is_some() {
        return Err(format!("expected RE or RE,IM, got {s:?}"));
    }
    Ok([re, im])
}

fn precision() -> Result<Option<u32>, Failure> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => match v.trim().parse::<u32>() {
            Ok(p) if p >= multequi_core::cfloat::MIN_PRECISION => Ok(Some(p)),
            _ => Err(Failure::Usage(format!("{PRECISION_ENV} must be an integer of at least 53, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut stdout = std::io::stdout().lock();
    match execute(cli.command, &mut stdout) {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("usage error: {m}"),
                Failure::Compute(m) => eprintln!("error: {m}"),
            }
            f.code()
        }
    }
}

fn execute(command: Command, out: &mut impl std::io::Write) -> Result<(), Failure> {
    let prec = precision()?;
    let bits = prec.unwrap_or(DEFAULT_PRECISION);
    let io = |e: std::io::Error| Failure::Compute(e.to_string());
    match command {
        Command::Exact { n, json } => {
            if n == 0 {
                return Err(Failure::Usage("n must be positive".into()));
            }
            let poly = multiplier_resultant(n).map_err(|e| Failure::Compute(e.to_string()))?;
            if json {
                let mut v = serde_json::to_value(CountingTable::new(n)).map_err(|e| Failure::Compute(e.to_string()))?;
                v["polynomial"] = serde_json::Value::String(poly.to_string());
                writeln!(out, "{v}").map_err(io)?;
            } else {
                writeln!(out, "{poly}").map_err(io)?;
            }
        }
        Command::Green { c: [re, im], tol } => {
            if !(tol > 0.0) {
                return Err(Failure::Usage("tol must be positive".into()));
            }
            let g = green_m(&CFloat::new(re, im, bits), tol);
            writeln!(out, "{:.16e} {:.3e}", g.value, g.abs_error).map_err(io)?;
        }
        Command::Itinerary { c: [re, im], n } => {
            if n == 0 {
                return Err(Failure::Usage("n must be positive".into()));
            }
            let c = CFloat::new(re, im, bits);
            let cycles = coded_cycles(&c, n, bits).map_err(|e| Failure::Compute(e.to_string()))?;
            let mut text = String::from("code,points,multiplier,rate\n");
            for (code, cycle) in cycles {
                let points: Vec<String> = cycle.points.iter().map(pair).collect();
                let rate = cycle.multiplier.ln_abs().to_f64() / n as f64;
                let _ = writeln!(text, "{code},{},{},{rate:.16e}", points.join(";"), pair(&cycle.multiplier));
            }
            out.write_all(text.as_bytes()).map_err(io)?;
        }
        Command::Sweep { config, out: path, hex } => {
            let raw = std::fs::read_to_string(&config)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", config.display())))?;
            let mut value: serde_json::Value =
                serde_json::from_str(&raw).map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
            if let (Some(p), Some(obj)) = (prec, value.as_object_mut()) {
                obj.entry("precision_bits").or_insert(p.into());
            }
            let spec: ExperimentSpec =
                serde_json::from_value(value).map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
            spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let report = convergence_report(&spec).map_err(|e| Failure::Compute(e.to_string()))?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            std::fs::write(&path, report.to_csv(hex)).map_err(io)?;
            let failures = report.failures();
            if !failures.is_empty() {
                return Err(Failure::Compute(failures.join("; ")));
            }
        }
        Command::Verify { runs } => {
            let results = acceptance::verify(runs);
            out.write_all(acceptance::log(&results).as_bytes()).map_err(io)?;
            let failed: Vec<String> = results.iter().filter(|r| !r.pass).map(|r| r.id.to_string()).collect();
            if !failed.is_empty() {
                return Err(Failure::Compute(format!("failed criteria: {}", failed.join(", "))));
            }
        }
        Command::Render { n, rho: [re, im], out: path, width, height, center, span, max_iter } => {
            if n == 0 {
                return Err(Failure::Usage("n must be positive".into()));
            }
            let viewport = Viewport::new(center, span, width, height).map_err(Failure::Usage)?;
            let rho = CFloat::new(re, im, bits.max(DEFAULT_PRECISION));
            let roots = parameter_roots(n, &rho, bits.max(DEFAULT_PRECISION)).map_err(|e| Failure::Compute(e.to_string()))?;
            let spec = RenderSpec { viewport, max_iter, overlay: roots };
            let image = spec.render();
            std::fs::write(&path, image.to_ppm()).map_err(io)?;
            writeln!(out, "{}x{} {} marks", image.width, image.height, image.marks).map_err(io)?;
        }
        Command::Eta { l } => {
            if l.is_nan() || l == f64::INFINITY {
                return Err(Failure::Usage("L must be a number or -inf".into()));
            }
            writeln!(out, "{}", eta(l)).map_err(io)?;
        }
    }
    Ok(())
}

fn pair(z: &CFloat) -> String {
    let (re, im) = z.to_c64();
    format!("{re:.16e}:{im:.16e}")
}
