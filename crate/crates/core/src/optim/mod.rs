//! The optimizers under study and the budgeted problem they run on.
//!
//! Every optimizer is driven to the same stopping rule: stop the first time
//! the algorithm itself produces `1ⁿ` (checked noiselessly, not counted as an
//! evaluation) or when the next iteration no longer fits in the budget.
//! Iterations are all-or-nothing: one that would overrun the budget is never
//! started, and the one that produces the optimum is completed before the
//! run stops.

mod cga;
mod ea;
mod oblivious;
mod rerls;
mod sizing;

pub use cga::{cga_iteration, cga_update, sample_from_frequencies, Cga, FrequencyVector};
pub use ea::{ea_iteration, Population};
pub use oblivious::{noise_oblivious_run, ObliviousKind};
pub use rerls::{rerls_iteration, resample_estimate, Incumbent};
pub use sizing::Sizing;

use crate::bits::{BitString, EvalCounter};
use crate::error::{invalid, Result};
use crate::noise::{noisy_eval, GaussianNoise};
use crate::rng::RandomStream;

/// Returned by a step that did not fit in the remaining budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExhausted;

/// Noisy OneMax with an evaluation budget, plus the run's random stream and
/// evaluation counter.
#[derive(Debug, Clone)]
pub struct Problem {
    n: usize,
    noise: GaussianNoise,
    budget: u64,
    cap: u64,
    rng: RandomStream,
    counter: EvalCounter,
}

impl Problem {
    pub fn new(n: usize, noise: GaussianNoise, budget: u64, rng: RandomStream) -> Result<Self> {
        if n == 0 {
            return Err(crate::error::Error::InvalidSize(0));
        }
        if budget == 0 {
            return Err(invalid("budget must be at least 1 evaluation"));
        }
        Ok(Self {
            n,
            noise,
            budget,
            cap: budget,
            rng,
            counter: EvalCounter::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn noise(&self) -> GaussianNoise {
        self.noise
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn evaluations(&self) -> u64 {
        self.counter.count()
    }

    pub fn counter(&self) -> &EvalCounter {
        &self.counter
    }

    pub fn rng(&mut self) -> &mut RandomStream {
        &mut self.rng
    }

    /// Evaluations left before the current cap.
    pub fn remaining(&self) -> u64 {
        self.cap - self.counter.count()
    }

    /// Fails unless `cost` more evaluations fit under the current cap.
    pub fn reserve(&self, cost: u64) -> std::result::Result<(), BudgetExhausted> {
        if cost <= self.remaining() {
            Ok(())
        } else {
            Err(BudgetExhausted)
        }
    }

    pub fn eval(&mut self, x: &BitString) -> f64 {
        debug_assert!(self.counter.count() < self.cap);
        noisy_eval(x, &self.noise, &mut self.rng, &mut self.counter)
    }

    /// Narrows the cap to at most `extra` evaluations from now, never past
    /// the global budget.
    pub(crate) fn set_phase_cap(&mut self, extra: u64) {
        self.cap = self.counter.count().saturating_add(extra).min(self.budget);
    }

    pub(crate) fn clear_phase_cap(&mut self) {
        self.cap = self.budget;
    }

    pub(crate) fn at_global_budget(&self) -> bool {
        self.cap == self.budget
    }
}

/// The tuning knob a run actually used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    PopulationSize(u64),
    Mu(usize),
    Resamples(u64),
}

impl Param {
    pub fn value(&self) -> f64 {
        match *self {
            Param::PopulationSize(k) => k as f64,
            Param::Mu(mu) => mu as f64,
            Param::Resamples(m) => m as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamsUsed {
    pub param: Param,
    /// Last variance guess of a noise-oblivious run.
    pub variance_guess: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerOutcome {
    pub hit: bool,
    pub evals_at_hit: Option<u64>,
    pub evals_total: u64,
    pub iterations: u64,
    pub params_used: ParamsUsed,
    /// Smallest frequency held by any cGA coordinate up to the end of the run.
    pub min_frequency_seen: Option<f64>,
}

/// Optimizer selection with explicit parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimizerKind {
    /// Compact GA with population size `k`; `margin` clamps frequencies to
    /// `[1/n, 1 - 1/n]`.
    Cga { k: u64, margin: bool },
    /// (μ+1) EA.
    Ea { mu: usize },
    /// Resampling randomized local search with `m` evaluations per point.
    Rerls { m: u64 },
}

impl OptimizerKind {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            OptimizerKind::Cga { k, margin } => {
                if k == 0 {
                    return Err(invalid("cGA population size K must be >= 1"));
                }
                if margin && n < 2 {
                    return Err(invalid("cGA margins need n >= 2"));
                }
            }
            OptimizerKind::Ea { mu: 0 } => {
                return Err(invalid("EA population size mu must be >= 1"))
            }
            OptimizerKind::Rerls { m: 0 } => return Err(invalid("resample count must be >= 1")),
            _ => {}
        }
        Ok(())
    }

    fn param(&self) -> Param {
        match *self {
            OptimizerKind::Cga { k, .. } => Param::PopulationSize(k),
            OptimizerKind::Ea { mu } => Param::Mu(mu),
            OptimizerKind::Rerls { m } => Param::Resamples(m),
        }
    }
}

/// Common shape of a run: initialize, then step until a hit or the budget
/// refuses the next step.
pub(crate) trait Stepper {
    /// Creates the initial state. Returns `Ok(true)` when the optimum was
    /// produced during initialization.
    fn init(&mut self, problem: &mut Problem) -> std::result::Result<bool, BudgetExhausted>;

    /// One full iteration. `Ok(true)` when it produced the optimum.
    fn step(&mut self, problem: &mut Problem) -> std::result::Result<bool, BudgetExhausted>;

    fn min_frequency(&self) -> Option<f64> {
        None
    }
}

pub(crate) struct Progress {
    pub hit_at: Option<u64>,
    pub iterations: u64,
}

pub(crate) fn drive(stepper: &mut dyn Stepper, problem: &mut Problem) -> Progress {
    let mut iterations = 0;
    let hit_at = match stepper.init(problem) {
        Ok(true) => Some(problem.evaluations()),
        Err(BudgetExhausted) => None,
        Ok(false) => loop {
            match stepper.step(problem) {
                Ok(hit) => {
                    iterations += 1;
                    if hit {
                        break Some(problem.evaluations());
                    }
                }
                Err(BudgetExhausted) => break None,
            }
        },
    };
    Progress { hit_at, iterations }
}

pub(crate) fn make_stepper(kind: OptimizerKind, n: usize) -> Box<dyn Stepper> {
    match kind {
        OptimizerKind::Cga { k, margin } => Box::new(Cga::new(n, k, margin)),
        OptimizerKind::Ea { mu } => Box::new(ea::Ea::new(mu)),
        OptimizerKind::Rerls { m } => Box::new(rerls::Rerls::new(m)),
    }
}

/// Runs one optimizer on `problem` until it produces `1ⁿ` or the budget is
/// spent.
pub fn run_optimizer(kind: OptimizerKind, problem: &mut Problem) -> Result<OptimizerOutcome> {
    kind.validate(problem.n())?;
    let mut stepper = make_stepper(kind, problem.n());
    let progress = drive(stepper.as_mut(), problem);
    Ok(OptimizerOutcome {
        hit: progress.hit_at.is_some(),
        evals_at_hit: progress.hit_at,
        evals_total: problem.evaluations(),
        iterations: progress.iterations,
        params_used: ParamsUsed {
            param: kind.param(),
            variance_guess: None,
        },
        min_frequency_seen: stepper.min_frequency(),
    })
}
