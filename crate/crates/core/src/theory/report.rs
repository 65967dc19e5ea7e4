//! The `verify-theory` suite: every analytic claim checked against an
//! independent computation, one line per check.

use std::fmt;

use super::monte_carlo::{empirical_drift, monte_carlo_lower_tail, monte_carlo_misclassify};
use super::trinomial::{
    central_moment_g, conditional_abs_expectation_check, even_nonzero_prob, z_distribution_exact,
    TrinomialSpec,
};
use super::{chi_square_critical, chi_square_pooled, Z_999};
use crate::error::Result;
use crate::noise::{
    gaussian_lower_tail, gaussian_tail_asymptote, gaussian_tail_upper_bound, ln_misclassify_prob,
    MisclassifyCurve,
};
use crate::optim::{sample_from_frequencies, FrequencyVector};
use crate::rng::RandomStream;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryReport {
    pub checks: Vec<CheckResult>,
}

impl TheoryReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for TheoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(5)
            .max(5);
        writeln!(f, "{:<width$}  {:<6}  detail", "check", "status")?;
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{:<width$}  {:<6}  {}", c.name, status, c.detail)?;
        }
        Ok(())
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name,
        passed,
        detail,
    }
}

/// `{0.1, 0.2, …}` style grids: `count` evenly spaced points from `lo` to `hi`.
pub(crate) fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

fn phi_monotone() -> Result<CheckResult> {
    let mut worst = String::new();
    let mut ok = true;
    for sigma2 in [1.0, 10.0, 100.0] {
        let curve = MisclassifyCurve::new(sigma2, 200)?;
        if !curve.is_strictly_decreasing() {
            ok = false;
            worst = format!("not strictly decreasing at sigma2={sigma2}");
        }
    }
    Ok(check(
        "phi_strictly_decreasing",
        ok,
        if ok {
            "sigma2 in {1,10,100}, l = 0..200".into()
        } else {
            worst
        },
    ))
}

fn phi_upper_bound() -> Result<CheckResult> {
    let mut ok = true;
    let mut max_margin = f64::NEG_INFINITY;
    for sigma2 in [0.25, 1.0, 10.0, 100.0, 1000.0] {
        let ln_bound = 0.5f64.ln() - 1.0 / (4.0 * sigma2);
        for ell in 1..=200 {
            let d = ln_misclassify_prob(ell, sigma2)? - ln_bound;
            max_margin = max_margin.max(d);
            ok &= d <= 0.0;
        }
    }
    Ok(check(
        "phi_below_half_exp_bound",
        ok,
        format!("max ln(phi / bound) = {max_margin:.3e}"),
    ))
}

fn tail_dominance() -> Result<CheckResult> {
    let ts = linear_grid(0.1, 10.0, 20);
    let sigmas = linear_grid(0.5, 10.0, 20);
    let mut violations = 0;
    for &t in &ts {
        for &s in &sigmas {
            if gaussian_lower_tail(t, s * s)? > gaussian_tail_upper_bound(t, s * s)? {
                violations += 1;
            }
        }
    }
    Ok(check(
        "tail_below_chernoff_bound",
        violations == 0,
        format!("{violations} violations on 20x20 grid"),
    ))
}

/// Spot points `(t, σ)` for Monte Carlo checks of the lower tail.
pub(crate) const TAIL_SPOTS: [(f64, f64); 10] = [
    (0.1, 0.5),
    (0.5, 0.5),
    (1.0, 1.0),
    (2.0, 1.0),
    (0.6, 2.0),
    (3.0, 2.0),
    (2.0, 5.0),
    (8.0, 5.0),
    (5.0, 10.0),
    (10.0, 10.0),
];

fn tail_monte_carlo(rng: &mut RandomStream) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for &(t, s) in &TAIL_SPOTS {
        let est = monte_carlo_lower_tail(t, s * s, 1_000_000, rng)?;
        worst = worst.max(est.z_score(gaussian_lower_tail(t, s * s)?));
    }
    Ok(check(
        "tail_monte_carlo",
        worst <= 4.0,
        format!("max |z| = {worst:.2} over 10 points, 1e6 trials"),
    ))
}

fn tail_asymptote() -> Result<CheckResult> {
    let mut ok = true;
    let mut ratios = Vec::new();
    for t in [5.0, 6.0, 7.0] {
        let r = gaussian_lower_tail(t, 1.0)? / gaussian_tail_asymptote(t, 1.0)?;
        ok &= (0.9..=1.0).contains(&r);
        ratios.push(format!("{r:.4}"));
    }
    Ok(check(
        "tail_mills_ratio",
        ok,
        format!("ratios {}", ratios.join(" ")),
    ))
}

fn misclassify_monte_carlo(rng: &mut RandomStream) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for (ell, sigma2) in [(1, 1.0), (2, 1.0), (3, 4.0), (5, 10.0), (10, 100.0)] {
        let est = monte_carlo_misclassify(ell, sigma2, 1_000_000, rng)?;
        let exact = crate::noise::misclassify_prob(ell, sigma2)?;
        worst = worst.max(est.z_score(exact));
    }
    Ok(check(
        "phi_monte_carlo",
        worst <= 4.0,
        format!("max |z| = {worst:.2} over 5 points, 1e6 trials"),
    ))
}

/// Random marginals for the bound sweep: `n ∈ {2..=12}`, `p_i ∈ [a, 1]`.
pub(crate) fn random_marginals(rng: &mut RandomStream, a: f64) -> Vec<f64> {
    let n = 2 + rng.index(11);
    (0..n).map(|_| a + (1.0 - a) * rng.uniform()).collect()
}

fn lemma_bounds(rng: &mut RandomStream) -> Result<Vec<CheckResult>> {
    let a = 0.3;
    let (mut zero_ok, mut abs_ok, mut even_ok) = (true, true, true);
    let (mut zero_slack, mut abs_slack, mut even_slack) =
        (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for _ in 0..500 {
        let p = random_marginals(rng, a);
        let n = p.len() as f64;
        let spec = TrinomialSpec::from_frequencies(&p)?;
        let dist = z_distribution_exact(&spec)?;
        let zero_gap = dist.zero_prob() - 1.0 / (4.0 * n.sqrt());
        let abs_gap = dist.abs_expectation() - a * (2.0 / n).sqrt() * (n - p.iter().sum::<f64>());
        let even_gap = even_nonzero_prob(&spec) - 0.5;
        zero_ok &= zero_gap >= -1e-9;
        abs_ok &= abs_gap >= -1e-9;
        even_ok &= even_gap >= -1e-9;
        zero_slack = zero_slack.min(zero_gap);
        abs_slack = abs_slack.min(abs_gap);
        even_slack = even_slack.min(even_gap);
    }
    Ok(vec![
        check(
            "z_zero_prob_bound",
            zero_ok,
            format!("min slack {zero_slack:.3e} over 500 vectors"),
        ),
        check(
            "z_abs_expectation_bound",
            abs_ok,
            format!("min slack {abs_slack:.3e} over 500 vectors"),
        ),
        check(
            "nonzero_count_even_bound",
            even_ok,
            format!("min slack {even_slack:.3e} over 500 vectors"),
        ),
    ])
}

fn g_identity(rng: &mut RandomStream) -> Result<Vec<CheckResult>> {
    let mut ok = true;
    for _ in 0..20 {
        let n = 12 + rng.index(9);
        let p: Vec<f64> = (0..n).map(|_| 0.05 + 0.9 * rng.uniform()).collect();
        let spec = TrinomialSpec::from_frequencies(&p)?;
        let sizes: Vec<usize> = (0..=12).collect();
        ok &= conditional_abs_expectation_check(&sizes, &spec)?;
    }
    let mut lower_ok = true;
    for k in 0..=60 {
        lower_ok &= central_moment_g(k)? >= (k as f64 / 2.0).sqrt();
    }
    Ok(vec![
        check(
            "g_conditional_identity",
            ok,
            "k = 0..12, 20 random specs, tol 1e-9".into(),
        ),
        check(
            "g_lower_bound",
            lower_ok,
            "g(k) >= sqrt(k/2), k = 0..60".into(),
        ),
    ])
}

fn sampler_histogram(rng: &mut RandomStream) -> Result<CheckResult> {
    let n = 8;
    let probs = [0.5, 0.25, 0.75, 0.625, 0.375, 0.875, 0.5, 1.0];
    let freqs = FrequencyVector::from_probabilities(8, &probs)?;
    let spec = TrinomialSpec::from_frequencies(&probs)?;
    let exact = z_distribution_exact(&spec)?;
    let mut counts = vec![0u64; 2 * n + 1];
    for _ in 0..1_000_000 {
        let x = sample_from_frequencies(&freqs, rng);
        let y = sample_from_frequencies(&freqs, rng);
        let z = x.ones_count() as i64 - y.ones_count() as i64;
        counts[(z + n as i64) as usize] += 1;
    }
    let expected: Vec<f64> = exact.iter().map(|(_, m)| m).collect();
    let (stat, dof) = chi_square_pooled(&counts, &expected);
    let critical = chi_square_critical(dof, Z_999);
    Ok(check(
        "sampler_matches_exact_z",
        stat <= critical,
        format!("chi2 = {stat:.2} <= {critical:.2} ({dof} dof)"),
    ))
}

fn drift(rng: &mut RandomStream) -> Result<Vec<CheckResult>> {
    let freqs = FrequencyVector::uniform(16, 32)?;
    let mut means = Vec::new();
    let mut positive = true;
    let mut detail = Vec::new();
    for sigma2 in [0.0, 4.0, 16.0] {
        let mut stream = rng.child(sigma2 as u64);
        let d = empirical_drift(&freqs, sigma2, 100_000, &mut stream)?;
        if sigma2 < 16.0 {
            positive &= d.mean >= 5.0 * d.std_err && d.std_err > 0.0;
        }
        detail.push(format!("{sigma2}: {:.5}±{:.5}", d.mean, d.std_err));
        means.push(d.mean);
    }
    let ordered = means.windows(2).all(|w| w[1] < w[0]);
    Ok(vec![
        check("drift_positive", positive, detail.join(", ")),
        check(
            "drift_shrinks_with_noise",
            ordered,
            "sigma2 in {0, 4, 16}".into(),
        ),
    ])
}

/// Runs every check. Monte Carlo parts draw from substreams of `seed`.
pub fn verify_theory(seed: u64) -> Result<TheoryReport> {
    let root = RandomStream::new(seed);
    let mut checks = vec![phi_monotone()?, phi_upper_bound()?, tail_dominance()?];
    checks.push(tail_monte_carlo(&mut root.child(1))?);
    checks.push(tail_asymptote()?);
    checks.push(misclassify_monte_carlo(&mut root.child(2))?);
    checks.extend(lemma_bounds(&mut root.child(3))?);
    checks.extend(g_identity(&mut root.child(4))?);
    checks.push(sampler_histogram(&mut root.child(5))?);
    checks.extend(drift(&mut root.child(6))?);
    Ok(TheoryReport { checks })
}
