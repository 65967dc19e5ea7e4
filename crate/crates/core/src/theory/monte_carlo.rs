//! Sampling estimators that cross-check the closed forms.

use crate::error::{invalid, Result};
use crate::noise::GaussianNoise;
use crate::optim::{cga_iteration, FrequencyVector, Problem};
use crate::rng::RandomStream;

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

impl Estimate {
    /// Distance from `value` in standard errors; infinite when the standard
    /// error is zero and the values differ.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = (self.mean - value).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_err
        }
    }
}

fn proportion(hits: u64, trials: u64) -> Estimate {
    let p = hits as f64 / trials as f64;
    Estimate {
        mean: p,
        std_err: (p * (1.0 - p) / trials as f64).sqrt(),
    }
}

/// Frequency of `ℓ + (Z₁ - Z₂) < 0` with `Z₁, Z₂ ~ N(0, σ²)` independent.
pub fn monte_carlo_misclassify(
    ell: u64,
    sigma2: f64,
    trials: u64,
    rng: &mut RandomStream,
) -> Result<Estimate> {
    if trials < 10_000 {
        return Err(invalid(format!("need at least 10^4 trials, got {trials}")));
    }
    let noise = GaussianNoise::new(sigma2)?;
    let ell = ell as f64;
    let hits = (0..trials)
        .filter(|_| ell + (noise.sample(rng) - noise.sample(rng)) < 0.0)
        .count() as u64;
    Ok(proportion(hits, trials))
}

/// Frequency of `Z < -t` with `Z ~ N(0, σ²)`.
pub fn monte_carlo_lower_tail(
    t: f64,
    sigma2: f64,
    trials: u64,
    rng: &mut RandomStream,
) -> Result<Estimate> {
    if trials == 0 {
        return Err(invalid("need at least one trial"));
    }
    let noise = GaussianNoise::new(sigma2)?;
    let hits = (0..trials).filter(|_| noise.sample(rng) < -t).count() as u64;
    Ok(proportion(hits, trials))
}

/// Mean one-step decrease of `X_t = n - Σ p_i` under the cGA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftEstimate {
    pub mean: f64,
    pub std_err: f64,
    /// False when some frequency is 0, where the drift bound does not apply.
    pub hypothesis_holds: bool,
}

/// Simulates `trials` independent cGA iterations from the fixed state
/// `freqs` and averages `X_t - X_{t+1}`.
pub fn empirical_drift(
    freqs: &FrequencyVector,
    sigma2: f64,
    trials: u64,
    rng: &mut RandomStream,
) -> Result<DriftEstimate> {
    if trials < 1_000 {
        return Err(invalid(format!("need at least 10^3 trials, got {trials}")));
    }
    let noise = GaussianNoise::new(sigma2)?;
    let mut problem = Problem::new(freqs.len(), noise, u64::MAX, rng.clone())?;
    let start = freqs.potential();
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    let mut work = freqs.clone();
    for _ in 0..trials {
        work.clone_from(freqs);
        cga_iteration(&mut work, &mut problem).expect("unbounded budget");
        let decrease = start - work.potential();
        sum += decrease;
        sum_sq += decrease * decrease;
    }
    *rng = problem.rng().clone();
    let t = trials as f64;
    let mean = sum / t;
    let var = ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0);
    Ok(DriftEstimate {
        mean,
        std_err: (var / t).sqrt(),
        hypothesis_holds: freqs.min() > 0.0,
    })
}
