//! Ground-truth computations for the analytic claims about noisy OneMax:
//! exact trinomial sums, Monte Carlo cross-checks and the drift estimator.

mod monte_carlo;
mod report;
mod trinomial;

pub use monte_carlo::{
    empirical_drift, monte_carlo_lower_tail, monte_carlo_misclassify, DriftEstimate, Estimate,
};
pub use report::{verify_theory, CheckResult, TheoryReport};
pub use trinomial::{
    central_moment_g, conditional_abs_expectation, conditional_abs_expectation_check,
    even_nonzero_prob, nonzero_count_distribution, z_abs_expectation, z_distribution_exact,
    z_zero_prob, TrinomialSpec, ZDistribution, CONDITIONAL_CAP, EXACT_CAP, G_CAP,
};

/// Upper `1 - alpha` quantile of the chi-square distribution with `dof`
/// degrees of freedom, Wilson–Hilferty approximation. `z` is the standard
/// normal quantile at `1 - alpha`.
pub fn chi_square_critical(dof: usize, z: f64) -> f64 {
    let d = dof as f64;
    let c = 2.0 / (9.0 * d);
    d * (1.0 - c + z * c.sqrt()).powi(3)
}

/// Standard normal quantile at `1 - 10^-3`.
pub const Z_999: f64 = 3.090_232_306_167_813_5;

/// Pearson statistic of `observed` counts against `expected` probabilities,
/// pooling adjacent cells until every pooled cell expects at least 5.
/// Returns `(statistic, degrees of freedom)`.
pub fn chi_square_pooled(observed: &[u64], expected: &[f64]) -> (f64, usize) {
    assert_eq!(observed.len(), expected.len());
    let total: u64 = observed.iter().sum();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(expected) {
        obs += o as f64;
        exp += p * total as f64;
        if exp >= 5.0 {
            cells.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => cells.push((obs, exp)),
        }
    }
    let stat = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    (stat, cells.len().saturating_sub(1))
}
