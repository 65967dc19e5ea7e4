//! Parameter choices driven by the noise level.
//!
//! The asymptotic orders fix the shape of each rule; the leading constants
//! `c_k`, `c_m` and `c_t` are ours to choose and are exposed on the CLI.

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sizing {
    /// Constant in front of the cGA population size `K`.
    pub c_k: f64,
    /// Constant in front of the reRLS resample count `m`.
    pub c_m: f64,
    /// Constant in front of the noise-oblivious phase budgets.
    pub c_t: f64,
}

impl Default for Sizing {
    fn default() -> Self {
        Self {
            c_k: 1.0,
            c_m: 3.0,
            c_t: 2.0,
        }
    }
}

fn check_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(invalid(format!("automatic sizing needs n >= 2, got {n}")));
    }
    Ok(n as f64)
}

fn check_sigma2(sigma2: f64) -> Result<()> {
    if sigma2 >= 0.0 && sigma2.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "variance must be finite and >= 0, got {sigma2}"
        )))
    }
}

fn ceil_positive(v: f64) -> u64 {
    (v.ceil() as u64).max(1)
}

impl Sizing {
    pub fn new(c_k: f64, c_m: f64, c_t: f64) -> Result<Self> {
        for (name, c) in [("c_k", c_k), ("c_m", c_m), ("c_t", c_t)] {
            if !(c > 0.0 && c.is_finite()) {
                return Err(invalid(format!("{name} must be finite and > 0, got {c}")));
            }
        }
        Ok(Self { c_k, c_m, c_t })
    }

    /// `K = ⌈c_k · max(σ², 1) · √n · ln n⌉`.
    pub fn default_population_size(&self, sigma2: f64, n: usize) -> Result<u64> {
        let nf = check_n(n)?;
        check_sigma2(sigma2)?;
        Ok(ceil_positive(
            self.c_k * sigma2.max(1.0) * nf.sqrt() * nf.ln(),
        ))
    }

    /// `m = ⌈c_m · (σ² + 1) · ln n⌉`.
    pub fn default_resamples(&self, sigma2: f64, n: usize) -> Result<u64> {
        let nf = check_n(n)?;
        check_sigma2(sigma2)?;
        Ok(ceil_positive(self.c_m * (sigma2 + 1.0) * nf.ln()))
    }

    /// Evaluations granted to one cGA phase at variance guess `sigma2`:
    /// `2 · ⌈c_t · K · max(σ², 1) · √n · ln(K n)⌉`.
    pub fn cga_phase_budget(&self, sigma2: f64, n: usize) -> Result<u64> {
        let k = self.default_population_size(sigma2, n)? as f64;
        let nf = n as f64;
        let iterations = ceil_positive(self.c_t * k * sigma2.max(1.0) * nf.sqrt() * (k * nf).ln());
        Ok(2 * iterations)
    }

    /// Evaluations granted to one reRLS phase: `⌈c_t · m · n · ln n⌉`, i.e.
    /// `c_t` times the coupon-collector iteration count at `m` evaluations each.
    pub fn rerls_phase_budget(&self, sigma2: f64, n: usize) -> Result<u64> {
        let m = self.default_resamples(sigma2, n)? as f64;
        let nf = n as f64;
        Ok(ceil_positive(self.c_t * m * nf * nf.ln()))
    }
}
