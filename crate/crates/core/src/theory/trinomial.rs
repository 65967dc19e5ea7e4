//! Exact distribution of `Z = Σ Z_i` where each `Z_i ∈ {-1, 0, +1}` takes
//! `±1` with probability `q_i = p_i (1 - p_i)` each.
//!
//! `Z` is the OneMax difference `‖x‖₁ - ‖y‖₁` of two independent samples
//! from a product distribution with marginals `p_i`.

use crate::error::{invalid, Error, Result};
use crate::stats::CompensatedSum;

/// Largest `n` for which the exact PMF is computed.
pub const EXACT_CAP: usize = 25;
/// Largest `n` for the conditional-expectation check.
pub const CONDITIONAL_CAP: usize = 20;
/// Largest `k` accepted by [`central_moment_g`].
pub const G_CAP: u64 = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct TrinomialSpec {
    q: Vec<f64>,
}

impl TrinomialSpec {
    /// From marginal frequencies `p_i ∈ [0, 1]`.
    pub fn from_frequencies(p: &[f64]) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidSize(0));
        }
        let q = p
            .iter()
            .map(|&pi| {
                if (0.0..=1.0).contains(&pi) {
                    Ok(pi * (1.0 - pi))
                } else {
                    Err(Error::InvalidProbability(pi))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { q })
    }

    /// From the per-sign probabilities directly; each must be in `[0, 1/4]`.
    pub fn from_q(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidSize(0));
        }
        if let Some(&bad) = q.iter().find(|&&qi| !(0.0..=0.25).contains(&qi)) {
            return Err(invalid(format!("q_i must lie in [0, 1/4], got {bad}")));
        }
        Ok(Self { q })
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }
}

/// Probability mass of `Z` on `{-n, …, n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZDistribution {
    n: usize,
    mass: Vec<f64>,
}

impl ZDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pmf(&self, k: i64) -> f64 {
        let idx = k + self.n as i64;
        if idx < 0 || idx as usize >= self.mass.len() {
            0.0
        } else {
            self.mass[idx as usize]
        }
    }

    /// `(k, Pr(Z = k))` for `k = -n..=n`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.n as i64;
        self.mass
            .iter()
            .enumerate()
            .map(move |(i, &m)| (i as i64 - n, m))
    }

    pub fn total_mass(&self) -> f64 {
        self.mass
            .iter()
            .copied()
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn zero_prob(&self) -> f64 {
        self.pmf(0)
    }

    pub fn abs_expectation(&self) -> f64 {
        self.iter()
            .map(|(k, m)| k.unsigned_abs() as f64 * m)
            .collect::<CompensatedSum>()
            .value()
    }
}

/// One coordinate's law as masses on `(-1, 0, +1)`.
type Step = (f64, f64, f64);

fn convolve(steps: impl ExactSizeIterator<Item = Step>) -> Vec<f64> {
    let n = steps.len();
    let mut mass = vec![0.0; 2 * n + 1];
    mass[n] = 1.0;
    // After j steps the support is n-j..=n+j.
    for (j, (minus, zero, plus)) in steps.enumerate() {
        let lo = n - j;
        let hi = n + j;
        let mut next = vec![0.0; 2 * n + 1];
        for idx in lo..=hi {
            let m = mass[idx];
            if m == 0.0 {
                continue;
            }
            next[idx - 1] += minus * m;
            next[idx] += zero * m;
            next[idx + 1] += plus * m;
        }
        mass = next;
    }
    mass
}

/// Exact PMF of `Z` by iterated convolution.
pub fn z_distribution_exact(spec: &TrinomialSpec) -> Result<ZDistribution> {
    let n = spec.n();
    if n > EXACT_CAP {
        return Err(Error::OverCap {
            what: "n",
            value: n,
            cap: EXACT_CAP,
        });
    }
    let mass = convolve(spec.q.iter().map(|&q| (q, 1.0 - 2.0 * q, q)));
    Ok(ZDistribution { n, mass })
}

pub fn z_zero_prob(spec: &TrinomialSpec) -> Result<f64> {
    Ok(z_distribution_exact(spec)?.zero_prob())
}

pub fn z_abs_expectation(spec: &TrinomialSpec) -> Result<f64> {
    Ok(z_distribution_exact(spec)?.abs_expectation())
}

/// `g(k) = 2⌈k/2⌉ · C(2⌈k/2⌉, ⌈k/2⌉) · 2^{-2⌈k/2⌉}`, the mean absolute value
/// of a sum of `k` fair signs.
pub fn central_moment_g(k: u64) -> Result<f64> {
    if k > G_CAP {
        return Err(Error::OverCap {
            what: "k",
            value: k as usize,
            cap: G_CAP as usize,
        });
    }
    let half = k.div_ceil(2);
    // C(2h, h) / 4^h = Π_{j=1..h} (2j - 1) / (2j)
    let central = (1..=half).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 / (2 * j) as f64);
    Ok(2.0 * half as f64 * central)
}

/// `E(|Z| | exactly the coordinates in `subset` are nonzero)`, from the
/// exact joint law of `Z` and the conditioning event.
pub fn conditional_abs_expectation(spec: &TrinomialSpec, subset: &[usize]) -> Result<f64> {
    let n = spec.n();
    let mut inside = vec![false; n];
    for &i in subset {
        if i >= n {
            return Err(invalid(format!("coordinate {i} out of range for n = {n}")));
        }
        inside[i] = true;
    }
    let steps = (0..n).map(|i| {
        let q = spec.q[i];
        if inside[i] {
            (q, 0.0, q)
        } else {
            (0.0, 1.0 - 2.0 * q, 0.0)
        }
    });
    let joint = convolve(steps.collect::<Vec<_>>().into_iter());
    let event: f64 = joint.iter().copied().collect::<CompensatedSum>().value();
    if event <= 0.0 {
        return Err(invalid("conditioning event has probability zero"));
    }
    let weighted = joint
        .iter()
        .enumerate()
        .map(|(idx, &m)| (idx as i64 - n as i64).unsigned_abs() as f64 * m)
        .collect::<CompensatedSum>()
        .value();
    Ok(weighted / event)
}

/// For every `k` in `sizes`, conditions on a size-`k` set of nonzero
/// coordinates (the first `k` and the last `k`) and compares the exact
/// conditional `E|Z|` with `g(k)` at tolerance `1e-9`.
pub fn conditional_abs_expectation_check(sizes: &[usize], spec: &TrinomialSpec) -> Result<bool> {
    let n = spec.n();
    if n > CONDITIONAL_CAP {
        return Err(Error::OverCap {
            what: "n",
            value: n,
            cap: CONDITIONAL_CAP,
        });
    }
    for &k in sizes {
        if k > n {
            return Err(invalid(format!("subset size {k} exceeds n = {n}")));
        }
        let g = central_moment_g(k as u64)?;
        let first: Vec<usize> = (0..k).collect();
        let last: Vec<usize> = (n - k..n).collect();
        for subset in [first, last] {
            let e = conditional_abs_expectation(spec, &subset)?;
            if (e - g).abs() > 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Poisson-binomial law of `ξ`, the number of nonzero `Z_i`.
pub fn nonzero_count_distribution(spec: &TrinomialSpec) -> Vec<f64> {
    let mut mass = vec![1.0];
    for &q in &spec.q {
        let r = 2.0 * q;
        let mut next = vec![0.0; mass.len() + 1];
        for (c, &m) in mass.iter().enumerate() {
            next[c] += (1.0 - r) * m;
            next[c + 1] += r * m;
        }
        mass = next;
    }
    mass
}

/// `Pr(ξ is even)`.
pub fn even_nonzero_prob(spec: &TrinomialSpec) -> f64 {
    nonzero_count_distribution(spec)
        .iter()
        .step_by(2)
        .copied()
        .collect::<CompensatedSum>()
        .value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_fair_coordinate() {
        let spec = TrinomialSpec::from_frequencies(&[0.5]).unwrap();
        let d = z_distribution_exact(&spec).unwrap();
        assert_eq!(d.pmf(-1), 0.25);
        assert_eq!(d.pmf(0), 0.5);
        assert_eq!(d.pmf(1), 0.25);
        assert_eq!(d.abs_expectation(), 0.5);
        // a √(2/n)(n - Σp) with a = 1/2, n = 1: 0.5 · √2 · 0.5
        let bound = 0.5 * 2f64.sqrt() * 0.5;
        assert!((bound - 0.353_553_390_593_273_8).abs() < 1e-12);
        assert!(bound <= 0.5);
    }

    #[test]
    fn two_fair_coordinates() {
        // 9 outcomes: Z = 0 from (0,0) w.p. 1/4 and (+1,-1), (-1,+1) w.p. 1/16 each.
        let spec = TrinomialSpec::from_frequencies(&[0.5, 0.5]).unwrap();
        let p0 = z_zero_prob(&spec).unwrap();
        assert!((p0 - 0.375).abs() < 1e-15);
        assert!(p0 >= 1.0 / (4.0 * 2f64.sqrt()));
    }

    #[test]
    fn degenerate_frequencies() {
        let spec = TrinomialSpec::from_frequencies(&[1.0; 6]).unwrap();
        assert_eq!(z_zero_prob(&spec).unwrap(), 1.0);
        assert_eq!(z_abs_expectation(&spec).unwrap(), 0.0);
    }

    #[test]
    fn symmetric_and_normalized() {
        let p: Vec<f64> = (0..25).map(|i| 0.3 + 0.027 * i as f64).collect();
        let spec = TrinomialSpec::from_frequencies(&p).unwrap();
        let d = z_distribution_exact(&spec).unwrap();
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
        for k in 0..=25 {
            assert!((d.pmf(k) - d.pmf(-k)).abs() < 1e-15);
        }
    }

    #[test]
    fn caps_enforced() {
        let spec = TrinomialSpec::from_frequencies(&[0.5; 26]).unwrap();
        assert!(matches!(
            z_distribution_exact(&spec),
            Err(Error::OverCap { .. })
        ));
        let spec = TrinomialSpec::from_frequencies(&[0.5; 21]).unwrap();
        assert!(conditional_abs_expectation_check(&[1], &spec).is_err());
        assert!(central_moment_g(61).is_err());
        assert!(TrinomialSpec::from_q(vec![0.3]).is_err());
        assert!(TrinomialSpec::from_frequencies(&[1.5]).is_err());
    }

    #[test]
    fn g_values() {
        assert_eq!(central_moment_g(0).unwrap(), 0.0);
        assert_eq!(central_moment_g(1).unwrap(), 1.0);
        assert_eq!(central_moment_g(2).unwrap(), 1.0);
        assert_eq!(central_moment_g(4).unwrap(), 1.5);
        for k in 0..=60 {
            let g = central_moment_g(k).unwrap();
            assert!(g >= (k as f64 / 2.0).sqrt() - 1e-12, "k={k}");
        }
    }

    /// Brute force over all 2^k sign patterns.
    fn mean_abs_signs(k: u32) -> f64 {
        let total: i64 = (0..1u64 << k)
            .map(|mask| {
                let ones = mask.count_ones() as i64;
                (2 * ones - k as i64).abs()
            })
            .sum();
        total as f64 / (1u64 << k) as f64
    }

    #[test]
    fn g_matches_sign_enumeration() {
        for k in 0..=16 {
            assert!((central_moment_g(k as u64).unwrap() - mean_abs_signs(k)).abs() < 1e-12);
        }
    }

    #[test]
    fn conditional_expectation_small_cases() {
        let spec = TrinomialSpec::from_frequencies(&[0.4, 0.7, 0.5, 0.9]).unwrap();
        assert_eq!(conditional_abs_expectation(&spec, &[]).unwrap(), 0.0);
        assert!((conditional_abs_expectation(&spec, &[2]).unwrap() - 1.0).abs() < 1e-12);
        assert!((conditional_abs_expectation(&spec, &[0, 3]).unwrap() - 1.0).abs() < 1e-12);
        assert!(conditional_abs_expectation_check(&[0, 1, 2, 3, 4], &spec).unwrap());
    }

    #[test]
    fn parity_matches_product_formula() {
        // Pr(ξ even) = (1 + Π(1 - 2 r_i)) / 2 with r_i = 2 q_i.
        let p = [0.3, 0.45, 0.8, 0.99, 0.5, 0.61];
        let spec = TrinomialSpec::from_frequencies(&p).unwrap();
        let closed = 0.5 * (1.0 + spec.q().iter().map(|q| 1.0 - 4.0 * q).product::<f64>());
        assert!((even_nonzero_prob(&spec) - closed).abs() < 1e-14);
        let dist = nonzero_count_distribution(&spec);
        assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }
}
