//! Simultaneous root finding, cycle extraction at a fixed parameter, and the
//! potential `u_{n,ρ}(c) = (1/d_n) Σ_C log|ρ − ρ(C)|`.

mod aberth;
mod cycles;
pub mod oracle;

use thiserror::Error;

use crate::cfloat::CFloat;

pub use aberth::{aberth_solve, aberth_solve_exact, vieta_counters, MAX_PRECISION, START_PRECISION};
pub use cycles::{cycle_from_point, cycles_for, periodic_cycles, u_value, u_value_from_cycles, Cycle, CycleSource};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("no convergence at {precision} bits (residual {residual:e})")]
    NoConvergence { residual: f64, precision: u32 },
    #[error("unresolved root cluster: {0}")]
    ClusterUnresolved(String),
    #[error("root sum/product disagree with the coefficients (sum {sum_error:e}, product {product_error:e})")]
    VietaMismatch { sum_error: f64, product_error: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("inverse branches do not contract: {0}")]
    NoContraction(String),
}

/// One root (or merged cluster) with a certified inclusion radius.
#[derive(Debug, Clone, PartialEq)]
pub struct RootEntry {
    pub value: CFloat,
    pub radius: f64,
    pub multiplicity: usize,
}

/// Multiset of roots. `certified` is true when every radius is a rigorous
/// inclusion bound (Weierstrass or Newton based).
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<RootEntry>,
    pub degree: usize,
    pub precision: u32,
    pub certified: bool,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|e| e.multiplicity).sum()
    }

    pub fn max_radius(&self) -> f64 {
        self.roots.iter().map(|e| e.radius).fold(0.0, f64::max)
    }

    /// Values repeated by multiplicity.
    pub fn values(&self) -> Vec<CFloat> {
        self.roots
            .iter()
            .flat_map(|e| std::iter::repeat(e.value.clone()).take(e.multiplicity))
            .collect()
    }

    /// Fails when two listed disks overlap.
    pub fn check_separated(&self) -> Result<(), NumError> {
        let pts: Vec<(f64, f64, f64)> = self
            .roots
            .iter()
            .map(|e| {
                let (x, y) = e.value.to_c64();
                (x, y, e.radius)
            })
            .collect();
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&a, &b| pts[a].0.total_cmp(&pts[b].0));
        // Sweep in x; only close candidates are compared at full precision.
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                if pts[j].0 - pts[i].0 > 1e-6 + pts[i].2 + pts[j].2 {
                    break;
                }
                let dist = self.roots[i].value.dist(&self.roots[j].value);
                if dist <= self.roots[i].radius + self.roots[j].radius {
                    return Err(NumError::ClusterUnresolved(format!(
                        "roots near {} overlap",
                        self.roots[i].value
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Compensated (Neumaier) summation in a fixed order.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}
