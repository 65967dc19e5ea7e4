//! Resampling randomized local search.

use super::{BudgetExhausted, Problem, Stepper};
use crate::bits::BitString;

/// Mean of `m` fresh noisy evaluations of `x`.
pub fn resample_estimate(
    x: &BitString,
    m: u64,
    problem: &mut Problem,
) -> Result<f64, BudgetExhausted> {
    assert!(m >= 1, "resample count must be positive");
    problem.reserve(m)?;
    let total: f64 = (0..m).map(|_| problem.eval(x)).sum();
    Ok(total / m as f64)
}

/// Current point of the local search with its cached estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Incumbent {
    pub point: BitString,
    pub estimate: f64,
}

/// Result of one reRLS iteration.
#[derive(Debug, Clone)]
pub struct RerlsStep {
    pub candidate: BitString,
    pub candidate_estimate: f64,
    pub accepted: bool,
}

/// Flip one bit, estimate the candidate with `m` resamples, accept on an
/// equal or better estimate. The incumbent is never re-estimated.
pub fn rerls_iteration(
    current: &mut Incumbent,
    m: u64,
    problem: &mut Problem,
) -> Result<RerlsStep, BudgetExhausted> {
    problem.reserve(m)?;
    let candidate = current.point.flip_one_bit(problem.rng());
    let estimate = resample_estimate(&candidate, m, problem)?;
    let accepted = estimate >= current.estimate;
    if accepted {
        current.point = candidate.clone();
        current.estimate = estimate;
    }
    Ok(RerlsStep {
        candidate,
        candidate_estimate: estimate,
        accepted,
    })
}

pub(crate) struct Rerls {
    m: u64,
    current: Option<Incumbent>,
}

impl Rerls {
    pub(crate) fn new(m: u64) -> Self {
        Self { m, current: None }
    }
}

impl Stepper for Rerls {
    fn init(&mut self, problem: &mut Problem) -> Result<bool, BudgetExhausted> {
        problem.reserve(self.m)?;
        let point = BitString::new_uniform(problem.n(), problem.rng()).expect("n >= 1");
        let estimate = resample_estimate(&point, self.m, problem)?;
        let hit = point.is_all_ones();
        self.current = Some(Incumbent { point, estimate });
        Ok(hit)
    }

    fn step(&mut self, problem: &mut Problem) -> Result<bool, BudgetExhausted> {
        let current = self.current.as_mut().expect("initialized");
        let step = rerls_iteration(current, self.m, problem)?;
        Ok(step.candidate.is_all_ones())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::GaussianNoise;
    use crate::optim::{run_optimizer, OptimizerKind};
    use crate::rng::RandomStream;

    fn problem(n: usize, sigma2: f64, seed: u64) -> Problem {
        Problem::new(
            n,
            GaussianNoise::new(sigma2).unwrap(),
            u64::MAX,
            RandomStream::new(seed),
        )
        .unwrap()
    }

    #[test]
    fn zero_noise_estimate_is_exact() {
        let mut p = problem(8, 0.0, 0);
        let x = BitString::parse("11111000").unwrap();
        assert_eq!(resample_estimate(&x, 37, &mut p).unwrap(), 5.0);
        assert_eq!(p.evaluations(), 37);
    }

    #[test]
    fn single_resample_is_one_draw() {
        let x = BitString::parse("1010").unwrap();
        let mut a = problem(4, 2.0, 77);
        let mut b = problem(4, 2.0, 77);
        let est = resample_estimate(&x, 1, &mut a).unwrap();
        let single = b.eval(&x);
        assert_eq!(est.to_bits(), single.to_bits());
    }

    #[test]
    fn estimate_variance_shrinks_with_m() {
        let x = BitString::parse("1100").unwrap();
        let mut p = problem(4, 9.0, 5);
        let m = 8;
        let reps = 10_000;
        let ests: Vec<f64> = (0..reps)
            .map(|_| resample_estimate(&x, m, &mut p).unwrap())
            .collect();
        let mean = ests.iter().sum::<f64>() / reps as f64;
        let var = ests.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
        let expected = 9.0 / m as f64;
        assert!(
            (var / expected - 1.0).abs() < 0.1,
            "var {var} vs {expected}"
        );
    }

    #[test]
    fn zero_noise_acceptance_rules() {
        let n = 10;
        let mut p = problem(n, 0.0, 1);
        for _ in 0..50 {
            let mut cur = Incumbent {
                point: BitString::zeros(n).unwrap(),
                estimate: 0.0,
            };
            let step = rerls_iteration(&mut cur, 3, &mut p).unwrap();
            assert!(step.accepted);
            assert_eq!(cur.estimate, 1.0);
        }
        let almost = BitString::parse("1111111110").unwrap();
        for _ in 0..50 {
            let mut cur = Incumbent {
                point: almost.clone(),
                estimate: (n - 1) as f64,
            };
            let step = rerls_iteration(&mut cur, 3, &mut p).unwrap();
            if step.candidate.ones_count() < n - 1 {
                assert!(!step.accepted);
                assert_eq!(cur.point, almost);
            } else {
                assert!(step.accepted);
                assert!(cur.point.is_all_ones());
            }
        }
    }

    #[test]
    fn accounting_is_m_per_point() {
        let mut p = Problem::new(
            40,
            GaussianNoise::new(1.0).unwrap(),
            1_000_000,
            RandomStream::new(2),
        )
        .unwrap();
        let out = run_optimizer(OptimizerKind::Rerls { m: 9 }, &mut p).unwrap();
        assert!(out.hit);
        assert_eq!(out.evals_total, 9 * (out.iterations + 1));
    }
}
