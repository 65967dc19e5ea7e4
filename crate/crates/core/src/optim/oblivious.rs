//! Noise-oblivious doubling wrapper.
//!
//! Phase `i` restarts the wrapped algorithm sized for variance `2^i` and lets
//! it spend at most `T(2^i)` evaluations. The true variance is never read.

use super::{
    drive, make_stepper, OptimizerKind, OptimizerOutcome, Param, ParamsUsed, Problem, Sizing,
};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObliviousKind {
    Cga { margin: bool },
    Rerls,
}

impl ObliviousKind {
    fn instantiate(&self, guess: f64, n: usize, sizing: &Sizing) -> Result<OptimizerKind> {
        Ok(match *self {
            ObliviousKind::Cga { margin } => OptimizerKind::Cga {
                k: sizing.default_population_size(guess, n)?,
                margin,
            },
            ObliviousKind::Rerls => OptimizerKind::Rerls {
                m: sizing.default_resamples(guess, n)?,
            },
        })
    }

    /// The phase budget this crate pairs with each wrapped algorithm.
    pub fn default_phase_budget(&self, guess: f64, n: usize, sizing: &Sizing) -> Result<u64> {
        match self {
            ObliviousKind::Cga { .. } => sizing.cga_phase_budget(guess, n),
            ObliviousKind::Rerls => sizing.rerls_phase_budget(guess, n),
        }
    }
}

/// Longest phase sequence tried; `2^62` is far past any feasible budget.
const MAX_PHASES: u32 = 63;

/// Runs the doubling scheme. `phase_budget(v)` is the number of evaluations
/// granted to the phase with variance guess `v` and must increase with `v`.
pub fn noise_oblivious_run(
    kind: ObliviousKind,
    problem: &mut Problem,
    sizing: &Sizing,
    phase_budget: &dyn Fn(f64) -> Result<u64>,
) -> Result<OptimizerOutcome> {
    let n = problem.n();
    let mut iterations = 0;
    let mut last = None;
    let mut prev_budget = 0;

    for i in 0..MAX_PHASES {
        let guess = (1u64 << i) as f64;
        let algo = kind.instantiate(guess, n, sizing)?;
        algo.validate(n)?;
        let budget = phase_budget(guess)?;
        if budget <= prev_budget {
            return Err(invalid(format!(
                "phase budgets must increase: T({guess}) = {budget} after {prev_budget}"
            )));
        }
        prev_budget = budget;

        problem.set_phase_cap(budget);
        let mut stepper = make_stepper(algo, n);
        let progress = drive(stepper.as_mut(), problem);
        iterations += progress.iterations;
        let params_used = ParamsUsed {
            param: algo_param(algo),
            variance_guess: Some(guess),
        };
        last = Some((params_used, stepper.min_frequency()));

        if let Some(at) = progress.hit_at {
            problem.clear_phase_cap();
            return Ok(OptimizerOutcome {
                hit: true,
                evals_at_hit: Some(at),
                evals_total: problem.evaluations(),
                iterations,
                params_used,
                min_frequency_seen: stepper.min_frequency(),
            });
        }
        if problem.at_global_budget() {
            break;
        }
    }

    problem.clear_phase_cap();
    let (params_used, min_frequency_seen) = last.expect("at least one phase runs");
    Ok(OptimizerOutcome {
        hit: false,
        evals_at_hit: None,
        evals_total: problem.evaluations(),
        iterations,
        params_used,
        min_frequency_seen,
    })
}

fn algo_param(kind: OptimizerKind) -> Param {
    match kind {
        OptimizerKind::Cga { k, .. } => Param::PopulationSize(k),
        OptimizerKind::Ea { mu } => Param::Mu(mu),
        OptimizerKind::Rerls { m } => Param::Resamples(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::GaussianNoise;
    use crate::rng::RandomStream;

    fn problem(n: usize, sigma2: f64, budget: u64, seed: u64) -> Problem {
        Problem::new(
            n,
            GaussianNoise::new(sigma2).unwrap(),
            budget,
            RandomStream::new(seed),
        )
        .unwrap()
    }

    #[test]
    fn zero_noise_first_phase_suffices() {
        let sizing = Sizing::default();
        let n = 20;
        for kind in [ObliviousKind::Cga { margin: false }, ObliviousKind::Rerls] {
            let t1 = kind.default_phase_budget(1.0, n, &sizing).unwrap();
            for seed in 0..10 {
                let mut p = problem(n, 0.0, 10_000_000, seed);
                let budget = |v: f64| kind.default_phase_budget(v, n, &sizing);
                let out = noise_oblivious_run(kind, &mut p, &sizing, &budget).unwrap();
                assert!(out.hit);
                if out.params_used.variance_guess == Some(1.0) {
                    assert!(out.evals_total <= t1);
                }
            }
        }
    }

    #[test]
    fn guesses_double_and_cost_is_bounded_by_geometric_sum() {
        // Phase budget so small that early phases must fail.
        let sizing = Sizing::default();
        let n = 30;
        let t = |v: f64| Ok((200.0 * v) as u64);
        for seed in 0..10 {
            let mut p = problem(n, 4.0, 50_000_000, seed);
            let out =
                noise_oblivious_run(ObliviousKind::Cga { margin: false }, &mut p, &sizing, &t)
                    .unwrap();
            assert!(out.hit);
            let guess = out.params_used.variance_guess.unwrap();
            let j = guess.log2() as u32;
            assert_eq!((1u64 << j) as f64, guess);
            let spent: u64 = (0..=j).map(|i| t((1u64 << i) as f64).unwrap()).sum();
            assert!(out.evals_total <= spent);
            assert!(spent <= t((1u64 << (j + 1)) as f64).unwrap());
        }
    }

    #[test]
    fn global_budget_stops_the_scheme() {
        let sizing = Sizing::default();
        let mut p = problem(50, 1000.0, 5_000, 3);
        let t = |v: f64| Ok((100.0 * v) as u64);
        let out = noise_oblivious_run(ObliviousKind::Rerls, &mut p, &sizing, &t).unwrap();
        assert!(!out.hit);
        assert!(out.evals_total <= 5_000);
    }

    #[test]
    fn non_increasing_phase_budget_rejected() {
        let sizing = Sizing::default();
        let mut p = problem(10, 1.0, 5_000, 3);
        let t = |_: f64| Ok(100);
        assert!(noise_oblivious_run(ObliviousKind::Rerls, &mut p, &sizing, &t).is_err());
    }
}
