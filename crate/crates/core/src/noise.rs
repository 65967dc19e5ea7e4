//! Additive Gaussian posterior noise on OneMax and the tail quantities that
//! describe it.
//!
//! `f_σ(x) = ‖x‖₁ + Z` with a fresh `Z ~ N(0, σ²)` at every call. Comparing
//! two strings whose true values differ by `ℓ ≥ 0` goes wrong exactly when a
//! `N(0, 2σ²)` variable falls below `-ℓ`; [`misclassify_prob`] is that
//! probability, written `Φ(ℓ)`.

use std::f64::consts::{PI, SQRT_2};

use crate::bits::{BitString, EvalCounter};
use crate::error::{invalid, Result};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianNoise {
    variance: f64,
}

impl GaussianNoise {
    pub fn new(variance: f64) -> Result<Self> {
        if variance.is_nan() || variance < 0.0 || !variance.is_finite() {
            return Err(invalid(format!(
                "noise variance must be finite and >= 0, got {variance}"
            )));
        }
        Ok(Self { variance })
    }

    pub fn none() -> Self {
        Self { variance: 0.0 }
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    /// One draw of `Z`. Zero variance consumes no randomness.
    pub fn sample(&self, rng: &mut RandomStream) -> f64 {
        if self.variance == 0.0 {
            0.0
        } else {
            self.std_dev() * rng.standard_normal()
        }
    }
}

/// One call of the noisy objective: `‖x‖₁ + Z`, counted once.
pub fn noisy_eval(
    x: &BitString,
    noise: &GaussianNoise,
    rng: &mut RandomStream,
    counter: &mut EvalCounter,
) -> f64 {
    counter.tick();
    x.ones_count() as f64 + noise.sample(rng)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and > 0, got {v}")))
    }
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// `ln erfc(x)`, finite far beyond the point where `erfc` underflows.
pub fn ln_erfc(x: f64) -> f64 {
    if x < 5.0 {
        erfc(x).ln()
    } else {
        // erfc(x) = exp(-x²) / √π · 1 / (x + (1/2) / (x + 1 / (x + (3/2) / (x + ...))))
        let mut tail = x;
        for k in (1..=80).rev() {
            tail = x + (k as f64 / 2.0) / tail;
        }
        -x * x - 0.5 * PI.ln() - tail.ln()
    }
}

/// `Pr(Z < -t)` for `Z ~ N(0, σ²)`: `½ erfc(t / (σ√2))`.
pub fn gaussian_lower_tail(t: f64, sigma2: f64) -> Result<f64> {
    check_positive("t", t)?;
    check_positive("variance", sigma2)?;
    Ok(0.5 * erfc(t / (sigma2.sqrt() * SQRT_2)))
}

/// Chernoff-type bound `½ exp(-t² / (2σ²))` on [`gaussian_lower_tail`].
pub fn gaussian_tail_upper_bound(t: f64, sigma2: f64) -> Result<f64> {
    check_positive("t", t)?;
    check_positive("variance", sigma2)?;
    Ok(0.5 * (-t * t / (2.0 * sigma2)).exp())
}

/// Mills-ratio asymptote `σ / (√(2π) t) · exp(-t² / (2σ²))` of the lower tail.
pub fn gaussian_tail_asymptote(t: f64, sigma2: f64) -> Result<f64> {
    check_positive("t", t)?;
    check_positive("variance", sigma2)?;
    let sigma = sigma2.sqrt();
    Ok(sigma / ((2.0 * PI).sqrt() * t) * (-t * t / (2.0 * sigma2)).exp())
}

/// `Φ(ℓ)`: probability that noise ranks a string with `ℓ` fewer ones above the
/// better one. `ell` is the absolute difference of true values.
pub fn misclassify_prob(ell: u64, sigma2: f64) -> Result<f64> {
    check_positive("variance", sigma2)?;
    if ell == 0 {
        return Ok(0.5);
    }
    Ok(0.5 * erfc(ell as f64 / (2.0 * sigma2.sqrt())))
}

/// `ln Φ(ℓ)`; stays finite where `Φ(ℓ)` itself underflows.
pub fn ln_misclassify_prob(ell: u64, sigma2: f64) -> Result<f64> {
    check_positive("variance", sigma2)?;
    if ell == 0 {
        return Ok(0.5f64.ln());
    }
    Ok(0.5f64.ln() + ln_erfc(ell as f64 / (2.0 * sigma2.sqrt())))
}

/// `Φ(0), …, Φ(n)` for one noise level, held in log space.
#[derive(Debug, Clone)]
pub struct MisclassifyCurve {
    sigma2: f64,
    ln_values: Vec<f64>,
}

impl MisclassifyCurve {
    pub fn new(sigma2: f64, n: u64) -> Result<Self> {
        let ln_values = (0..=n)
            .map(|ell| ln_misclassify_prob(ell, sigma2))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { sigma2, ln_values })
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn max_distance(&self) -> u64 {
        self.ln_values.len() as u64 - 1
    }

    pub fn ln_prob(&self, ell: u64) -> f64 {
        self.ln_values[ell as usize]
    }

    pub fn prob(&self, ell: u64) -> f64 {
        self.ln_prob(ell).exp()
    }

    pub fn ln_values(&self) -> &[f64] {
        &self.ln_values
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.ln_values.windows(2).all(|w| w[1] < w[0])
    }
}
