//! Seeded synthetic populations drawn from a known Weibull age structure.

use eevl::demography::AgeDistribution;
use eevl::weibull::WeibullParams;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Binomial, Distribution};

/// Exact bin probabilities for ages 0..=max, the last bin open-ended.
pub fn bin_probabilities(p: &WeibullParams, max: usize) -> Vec<f64> {
    (0..=max)
        .map(|x| {
            let hi = if x == max { 1.0 } else { p.cdf(x as f64 + 1.0) };
            hi - p.cdf(x as f64)
        })
        .collect()
}

/// Multinomial sample of `n` people over single-year bins, drawn as a chain
/// of conditional binomials.
pub fn binned_population(p: &WeibullParams, n: u64, max: usize, seed: u64) -> AgeDistribution {
    let mut rng = StdRng::seed_from_u64(seed);
    let probs = bin_probabilities(p, max);
    let mut remaining = n;
    let mut left = 1.0;
    let mut counts = Vec::with_capacity(probs.len());
    for (i, &pr) in probs.iter().enumerate() {
        let k = if i + 1 == probs.len() || remaining == 0 {
            remaining
        } else {
            let q = (pr / left).clamp(0.0, 1.0);
            Binomial::new(remaining, q).unwrap().sample(&mut rng)
        };
        counts.push(k as f64);
        remaining -= k;
        left -= pr;
    }
    AgeDistribution::with_open_end(counts, true).unwrap()
}

/// Noise-free population: expected counts for `n` people.
pub fn exact_population(p: &WeibullParams, n: f64, max: usize) -> AgeDistribution {
    let counts = bin_probabilities(p, max)
        .into_iter()
        .map(|q| q * n)
        .collect();
    AgeDistribution::with_open_end(counts, true).unwrap()
}
