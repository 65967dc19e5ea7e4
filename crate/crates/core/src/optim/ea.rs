//! (μ+1) EA with reevaluated noise.

use super::{BudgetExhausted, Problem, Stepper};
use crate::bits::BitString;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    members: Vec<BitString>,
}

impl Population {
    pub fn new(members: Vec<BitString>) -> Self {
        assert!(!members.is_empty(), "population must not be empty");
        Self { members }
    }

    pub fn members(&self) -> &[BitString] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn best_ones(&self) -> usize {
        self.members
            .iter()
            .map(BitString::ones_count)
            .max()
            .unwrap_or(0)
    }
}

/// Outcome of one EA iteration, for inspection.
#[derive(Debug, Clone)]
pub struct EaStep {
    pub offspring: BitString,
    /// The discarded individual.
    pub removed: BitString,
}

/// One iteration: mutate a uniformly chosen parent at rate `1/n`, evaluate
/// all μ+1 individuals with fresh noise, drop one with the smallest noisy
/// value (ties uniformly).
pub fn ea_iteration(
    pop: &mut Population,
    problem: &mut Problem,
) -> Result<EaStep, BudgetExhausted> {
    let mu = pop.members.len();
    problem.reserve(mu as u64 + 1)?;
    let n = problem.n();
    let parent = problem.rng().index(mu);
    let offspring = pop.members[parent]
        .flip_each_bit(1.0 / n as f64, problem.rng())
        .expect("1/n is a valid rate");
    pop.members.push(offspring.clone());

    let values: Vec<f64> = pop.members.iter().map(|x| problem.eval(x)).collect();
    let worst = values.iter().copied().fold(f64::INFINITY, f64::min);
    let ties: Vec<usize> = (0..values.len()).filter(|&i| values[i] == worst).collect();
    let doomed = if ties.len() == 1 {
        ties[0]
    } else {
        ties[problem.rng().index(ties.len())]
    };
    let removed = pop.members.swap_remove(doomed);
    Ok(EaStep { offspring, removed })
}

pub(crate) struct Ea {
    mu: usize,
    pop: Option<Population>,
}

impl Ea {
    pub(crate) fn new(mu: usize) -> Self {
        Self { mu, pop: None }
    }
}

impl Stepper for Ea {
    fn init(&mut self, problem: &mut Problem) -> Result<bool, BudgetExhausted> {
        let n = problem.n();
        let members: Vec<BitString> = (0..self.mu)
            .map(|_| BitString::new_uniform(n, problem.rng()).expect("n >= 1"))
            .collect();
        let hit = members.iter().any(BitString::is_all_ones);
        self.pop = Some(Population::new(members));
        Ok(hit)
    }

    fn step(&mut self, problem: &mut Problem) -> Result<bool, BudgetExhausted> {
        let pop = self.pop.as_mut().expect("initialized");
        let step = ea_iteration(pop, problem)?;
        Ok(step.offspring.is_all_ones())
    }
}
