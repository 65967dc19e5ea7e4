//! Genotypes and the evaluation counter.

use std::fmt;

use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// A point of `{0,1}^n`. The length is fixed at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidSize(0));
        }
        Ok(Self { bits })
    }

    /// Parses a string of `0`/`1` characters, e.g. `"10110"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidInput(format!("not a bit: {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(bits)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_bits(vec![false; n])
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::from_bits(vec![true; n])
    }

    /// Each bit independently 1 with probability 1/2.
    pub fn new_uniform(n: usize, rng: &mut RandomStream) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize(0));
        }
        let mut bits = Vec::with_capacity(n);
        let mut word = 0u64;
        for i in 0..n {
            if i % 64 == 0 {
                word = rand::RngCore::next_u64(rng);
            }
            bits.push(word & 1 == 1);
            word >>= 1;
        }
        Ok(Self { bits })
    }

    pub(crate) fn from_bits_unchecked(bits: Vec<bool>) -> Self {
        debug_assert!(!bits.is_empty());
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// `‖x‖₁`, the OneMax value.
    pub fn ones_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_all_ones(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn hamming(&self, other: &BitString) -> usize {
        assert_eq!(
            self.len(),
            other.len(),
            "hamming distance needs equal lengths"
        );
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Standard bit mutation: every position toggles independently with
    /// probability `rate`.
    pub fn flip_each_bit(&self, rate: f64, rng: &mut RandomStream) -> Result<BitString> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::InvalidProbability(rate));
        }
        let bits = self.bits.iter().map(|&b| b ^ rng.bernoulli(rate)).collect();
        Ok(Self { bits })
    }

    /// Toggles exactly one position chosen uniformly at random.
    pub fn flip_one_bit(&self, rng: &mut RandomStream) -> BitString {
        let mut bits = self.bits.clone();
        let i = rng.index(bits.len());
        bits[i] = !bits[i];
        Self { bits }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Number of noisy fitness calls made so far in one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounter {
    count: u64,
}

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub(crate) fn tick(&mut self) {
        self.count += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_count_examples() {
        assert_eq!(BitString::parse("10110").unwrap().ones_count(), 3);
        assert_eq!(BitString::zeros(17).unwrap().ones_count(), 0);
        assert_eq!(BitString::ones(17).unwrap().ones_count(), 17);
    }

    #[test]
    fn zero_length_rejected() {
        let mut rng = RandomStream::new(0);
        assert!(matches!(
            BitString::new_uniform(0, &mut rng),
            Err(Error::InvalidSize(0))
        ));
        assert!(BitString::parse("").is_err());
        assert!(BitString::parse("10a").is_err());
    }

    #[test]
    fn uniform_has_requested_length() {
        let mut rng = RandomStream::new(5);
        assert_eq!(BitString::new_uniform(5, &mut rng).unwrap().len(), 5);
        for _ in 0..20 {
            let x = BitString::new_uniform(1, &mut rng).unwrap();
            assert!(x.ones_count() <= 1);
        }
        assert_eq!(BitString::new_uniform(130, &mut rng).unwrap().len(), 130);
    }

    #[test]
    fn uniform_mean_is_half_n() {
        // Sum of 10^5 Binomial(100, 1/2) draws: mean 50, SE = 5 / sqrt(1e5) ~ 0.016.
        let mut rng = RandomStream::new(11);
        let draws = 100_000;
        let total: usize = (0..draws)
            .map(|_| BitString::new_uniform(100, &mut rng).unwrap().ones_count())
            .sum();
        let mean = total as f64 / draws as f64;
        assert!((mean - 50.0).abs() < 0.5, "mean = {mean}");
    }

    #[test]
    fn flip_rate_edges() {
        let mut rng = RandomStream::new(3);
        let x = BitString::parse("1100101").unwrap();
        assert_eq!(x.flip_each_bit(0.0, &mut rng).unwrap(), x);
        assert_eq!(
            x.flip_each_bit(1.0, &mut rng).unwrap(),
            BitString::parse("0011010").unwrap()
        );
        assert!(x.flip_each_bit(-0.1, &mut rng).is_err());
        assert!(x.flip_each_bit(1.5, &mut rng).is_err());
        assert!(x.flip_each_bit(f64::NAN, &mut rng).is_err());
    }

    #[test]
    fn flip_each_bit_mean_flips() {
        // Binomial(100, 0.01): mean 1, sd ~0.995, SE over 1e5 trials ~0.0031.
        let mut rng = RandomStream::new(8);
        let x = BitString::zeros(100).unwrap();
        let trials = 100_000;
        let total: usize = (0..trials)
            .map(|_| x.flip_each_bit(0.01, &mut rng).unwrap().ones_count())
            .sum();
        let mean = total as f64 / trials as f64;
        let se = (100.0f64 * 0.01 * 0.99).sqrt() / (trials as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * se, "mean = {mean}");
    }

    #[test]
    fn flip_one_bit_single_position() {
        let mut rng = RandomStream::new(4);
        assert_eq!(
            BitString::parse("0").unwrap().flip_one_bit(&mut rng),
            BitString::parse("1").unwrap()
        );
        let x = BitString::new_uniform(37, &mut rng).unwrap();
        for _ in 0..1000 {
            assert_eq!(x.flip_one_bit(&mut rng).hamming(&x), 1);
        }
    }

    #[test]
    fn flip_one_bit_position_is_uniform() {
        let mut rng = RandomStream::new(21);
        let x = BitString::zeros(10).unwrap();
        let trials = 100_000;
        let mut hist = [0u32; 10];
        for _ in 0..trials {
            let y = x.flip_one_bit(&mut rng);
            let pos = y.as_slice().iter().position(|&b| b).unwrap();
            hist[pos] += 1;
        }
        let se = (0.1f64 * 0.9 / trials as f64).sqrt();
        for (i, &c) in hist.iter().enumerate() {
            let freq = c as f64 / trials as f64;
            assert!((freq - 0.1).abs() < 3.0 * se, "position {i}: {freq}");
        }
    }

    #[test]
    fn counter_ticks() {
        let mut c = EvalCounter::new();
        assert_eq!(c.count(), 0);
        c.tick();
        c.tick();
        assert_eq!(c.count(), 2);
    }
}
