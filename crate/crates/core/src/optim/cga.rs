//! Compact genetic algorithm.

use super::{BudgetExhausted, Problem, Stepper};
use crate::bits::BitString;
use crate::error::{invalid, Result};
use crate::rng::RandomStream;

/// Marginal frequencies `p_1, …, p_n` of the cGA.
///
/// Stored exactly as integer numerators over the common denominator `2Kn`:
/// the initial `1/2`, the step `1/K` and the optional margin `1/n` are all
/// whole multiples of it, so repeated updates never accumulate rounding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyVector {
    k: u64,
    denom: u64,
    step: u64,
    lo: u64,
    hi: u64,
    numer: Vec<u64>,
}

impl FrequencyVector {
    /// All frequencies at `1/2`, borders at 0 and 1.
    pub fn uniform(n: usize, k: u64) -> Result<Self> {
        Self::with_bounds(n, k, false)
    }

    /// All frequencies at `1/2`, clamped to `[1/n, 1 - 1/n]`.
    pub fn uniform_with_margin(n: usize, k: u64) -> Result<Self> {
        Self::with_bounds(n, k, true)
    }

    fn with_bounds(n: usize, k: u64, margin: bool) -> Result<Self> {
        if n == 0 {
            return Err(crate::error::Error::InvalidSize(0));
        }
        if k == 0 {
            return Err(invalid("K must be >= 1"));
        }
        if margin && n < 2 {
            return Err(invalid("margins need n >= 2"));
        }
        let nn = n as u64;
        let denom = 2 * k * nn;
        let (lo, hi) = if margin {
            (2 * k, denom - 2 * k)
        } else {
            (0, denom)
        };
        Ok(Self {
            k,
            denom,
            step: 2 * nn,
            lo,
            hi,
            numer: vec![k * nn; n],
        })
    }

    /// Border-free frequencies at the given values. Each value must sit on
    /// the grid `1/2 + j/(2K)` reachable by the update rule.
    pub fn from_probabilities(k: u64, probs: &[f64]) -> Result<Self> {
        let mut v = Self::uniform(probs.len(), k)?;
        let half_steps = 2 * k;
        for (slot, &p) in v.numer.iter_mut().zip(probs) {
            if !(0.0..=1.0).contains(&p) {
                return Err(crate::error::Error::InvalidProbability(p));
            }
            let units = p * half_steps as f64;
            let rounded = units.round();
            if (units - rounded).abs() > 1e-9 {
                return Err(invalid(format!(
                    "frequency {p} is not a multiple of 1/(2K) with K = {k}"
                )));
            }
            *slot = rounded as u64 * (probs.len() as u64);
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.numer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numer.is_empty()
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn get(&self, i: usize) -> f64 {
        self.numer[i] as f64 / self.denom as f64
    }

    pub fn to_vec(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// `p_i` in units of `1/(2K)`, when it lies on that grid.
    pub fn half_steps(&self, i: usize) -> Option<u64> {
        let n = self.len() as u64;
        self.numer[i].is_multiple_of(n).then(|| self.numer[i] / n)
    }

    pub fn min(&self) -> f64 {
        self.numer.iter().copied().min().unwrap_or(0) as f64 / self.denom as f64
    }

    /// `n - Σ p_i`.
    pub fn potential(&self) -> f64 {
        let missing: u64 = self.numer.iter().map(|&h| self.denom - h).sum();
        missing as f64 / self.denom as f64
    }

    pub fn is_all_ones(&self) -> bool {
        self.numer.iter().all(|&h| h == self.denom)
    }

    fn sample_bit(&self, i: usize, rng: &mut RandomStream) -> bool {
        let h = self.numer[i];
        if h == 0 {
            false
        } else if h == self.denom {
            true
        } else {
            rng.below(self.denom) < h
        }
    }

    fn raise(&mut self, i: usize) {
        self.numer[i] = (self.numer[i] + self.step).min(self.hi);
    }

    fn lower(&mut self, i: usize) {
        self.numer[i] = self.numer[i].saturating_sub(self.step).max(self.lo);
    }
}

/// Draws one string from the product distribution given by `freqs`.
pub fn sample_from_frequencies(freqs: &FrequencyVector, rng: &mut RandomStream) -> BitString {
    let bits = (0..freqs.len()).map(|i| freqs.sample_bit(i, rng)).collect();
    BitString::from_bits_unchecked(bits)
}

/// Moves every coordinate where `winner` and `loser` differ one step of `1/K`
/// toward the winner's bit.
pub fn cga_update(freqs: &mut FrequencyVector, winner: &BitString, loser: &BitString) {
    for i in 0..freqs.len() {
        match (winner.get(i), loser.get(i)) {
            (true, false) => freqs.raise(i),
            (false, true) => freqs.lower(i),
            _ => {}
        }
    }
}

/// One cGA iteration: sample two strings, evaluate each once, update toward
/// the noisy winner. Returns `(winner, loser)`. `x` keeps the winner role on
/// ties.
pub fn cga_iteration(
    freqs: &mut FrequencyVector,
    problem: &mut Problem,
) -> std::result::Result<(BitString, BitString), BudgetExhausted> {
    problem.reserve(2)?;
    let x = sample_from_frequencies(freqs, problem.rng());
    let y = sample_from_frequencies(freqs, problem.rng());
    let fx = problem.eval(&x);
    let fy = problem.eval(&y);
    let (winner, loser) = if fx < fy { (y, x) } else { (x, y) };
    cga_update(freqs, &winner, &loser);
    Ok((winner, loser))
}

/// Run state of the cGA.
#[derive(Debug, Clone)]
pub struct Cga {
    freqs: FrequencyVector,
    min_seen: f64,
}

impl Cga {
    pub fn new(n: usize, k: u64, margin: bool) -> Self {
        let freqs = if margin {
            FrequencyVector::uniform_with_margin(n, k)
        } else {
            FrequencyVector::uniform(n, k)
        }
        .expect("cGA parameters are validated before construction");
        Self {
            min_seen: freqs.min(),
            freqs,
        }
    }

    pub fn frequencies(&self) -> &FrequencyVector {
        &self.freqs
    }
}

impl Stepper for Cga {
    fn init(&mut self, _problem: &mut Problem) -> std::result::Result<bool, BudgetExhausted> {
        Ok(false)
    }

    fn step(&mut self, problem: &mut Problem) -> std::result::Result<bool, BudgetExhausted> {
        let (winner, loser) = cga_iteration(&mut self.freqs, problem)?;
        self.min_seen = self.min_seen.min(self.freqs.min());
        Ok(winner.is_all_ones() || loser.is_all_ones())
    }

    fn min_frequency(&self) -> Option<f64> {
        Some(self.min_seen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::GaussianNoise;
    use crate::optim::{run_optimizer, OptimizerKind};

    fn bits(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn degenerate_frequencies_sample_deterministically() {
        let mut rng = RandomStream::new(1);
        let ones = FrequencyVector::from_probabilities(4, &[1.0; 9]).unwrap();
        let zeros = FrequencyVector::from_probabilities(4, &[0.0; 9]).unwrap();
        for _ in 0..50 {
            assert!(sample_from_frequencies(&ones, &mut rng).is_all_ones());
            assert_eq!(sample_from_frequencies(&zeros, &mut rng).ones_count(), 0);
        }
    }

    #[test]
    fn uniform_frequencies_sample_half_ones() {
        let mut rng = RandomStream::new(2);
        let f = FrequencyVector::uniform(100, 10).unwrap();
        let draws = 100_000;
        let total: usize = (0..draws)
            .map(|_| sample_from_frequencies(&f, &mut rng).ones_count())
            .sum();
        let mean = total as f64 / draws as f64;
        assert!((mean - 50.0).abs() < 0.5, "{mean}");
    }

    #[test]
    fn update_moves_one_step_toward_winner() {
        let mut f = FrequencyVector::uniform(1, 10).unwrap();
        cga_update(&mut f, &bits("1"), &bits("0"));
        assert!((f.get(0) - 0.6).abs() < 1e-15);
        assert_eq!(f.half_steps(0), Some(12));
    }

    #[test]
    fn equal_bits_leave_frequencies_alone() {
        let mut f = FrequencyVector::uniform(5, 7).unwrap();
        let before = f.clone();
        cga_update(&mut f, &bits("10110"), &bits("10110"));
        assert_eq!(f, before);
    }

    #[test]
    fn noiseless_comparison_updates_only_differing_position() {
        let mut f = FrequencyVector::uniform(3, 10).unwrap();
        let x = bits("110");
        let y = bits("100");
        assert!(x.ones_count() > y.ones_count());
        cga_update(&mut f, &x, &y);
        assert_eq!(f.to_vec(), vec![0.5, 0.6, 0.5]);
    }

    #[test]
    fn borders_clamp() {
        let mut f = FrequencyVector::from_probabilities(3, &[1.0, 0.0]).unwrap();
        cga_update(&mut f, &bits("10"), &bits("01"));
        assert_eq!(f.to_vec(), vec![1.0, 0.0]);
        // K = 3: 1/2 + 1/3 = 5/6, next step would reach 7/6.
        let mut g = FrequencyVector::uniform(1, 3).unwrap();
        cga_update(&mut g, &bits("1"), &bits("0"));
        cga_update(&mut g, &bits("1"), &bits("0"));
        assert_eq!(g.get(0), 1.0);
        cga_update(&mut g, &bits("0"), &bits("1"));
        assert_eq!(g.half_steps(0), Some(4));
    }

    #[test]
    fn margin_mode_stays_inside() {
        let mut f = FrequencyVector::uniform_with_margin(4, 2).unwrap();
        for _ in 0..5 {
            cga_update(&mut f, &bits("0000"), &bits("1111"));
        }
        assert_eq!(f.get(0), 0.25);
        for _ in 0..10 {
            cga_update(&mut f, &bits("1111"), &bits("0000"));
        }
        assert_eq!(f.get(0), 0.75);
    }

    #[test]
    fn off_grid_probabilities_rejected() {
        assert!(FrequencyVector::from_probabilities(10, &[0.33]).is_err());
        assert!(FrequencyVector::from_probabilities(10, &[1.2]).is_err());
        assert!(FrequencyVector::from_probabilities(10, &[0.35, 0.05]).is_ok());
    }

    #[test]
    fn potential_counts_missing_mass() {
        let f = FrequencyVector::from_probabilities(4, &[1.0, 0.5, 0.25]).unwrap();
        assert!((f.potential() - 1.25).abs() < 1e-15);
        assert_eq!(
            FrequencyVector::from_probabilities(4, &[1.0; 3])
                .unwrap()
                .potential(),
            0.0
        );
    }

    #[test]
    fn zero_noise_winner_is_never_worse() {
        let mut p = Problem::new(20, GaussianNoise::none(), 1 << 20, RandomStream::new(3)).unwrap();
        let mut f = FrequencyVector::uniform(20, 12).unwrap();
        for _ in 0..2000 {
            let (w, l) = cga_iteration(&mut f, &mut p).unwrap();
            assert!(w.ones_count() >= l.ones_count());
        }
        assert_eq!(p.evaluations(), 4000);
    }

    #[test]
    fn absorbed_zero_frequency_is_a_miss() {
        // K = 1 drives a coordinate to 0 or 1 in one step; a coordinate at 0
        // can never produce a one again.
        let mut misses = 0;
        for seed in 0..50 {
            let mut p = Problem::new(
                30,
                GaussianNoise::new(1.0).unwrap(),
                2000,
                RandomStream::new(seed),
            )
            .unwrap();
            let out = run_optimizer(
                OptimizerKind::Cga {
                    k: 1,
                    margin: false,
                },
                &mut p,
            )
            .unwrap();
            if !out.hit {
                misses += 1;
                assert_eq!(out.min_frequency_seen, Some(0.0));
                assert_eq!(out.evals_total, 2000);
            }
        }
        assert!(misses > 40);
    }
}
