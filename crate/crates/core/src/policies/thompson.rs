//! Beta-Bernoulli Thompson sampling on base arms.
//!
//! The environment needs a strategy, not just a pulled arm, so each round the
//! policy also announces the probability that each arm wins the posterior
//! draw, estimated from independent posterior samples.

use rand::Rng;
use rand_distr::{Beta, Distribution};

use super::{Decision, Policy};
use crate::environment::Observation;
use crate::rng::StreamRng;
use crate::simplex::MetaArm;

/// Floor applied to announced probabilities before renormalizing.
pub const PROB_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Thompson {
    successes: Vec<u64>,
    failures: Vec<u64>,
    prob_samples: usize,
    rng: StreamRng,
    pulled: usize,
}

impl Thompson {
    pub fn new(arms: usize, prob_samples: usize, rng: StreamRng) -> Self {
        Self { successes: vec![0; arms], failures: vec![0; arms], prob_samples: prob_samples.max(1), rng, pulled: 0 }
    }

    pub fn successes(&self) -> &[u64] {
        &self.successes
    }

    pub fn failures(&self) -> &[u64] {
        &self.failures
    }

    pub fn set_counts(&mut self, arm: usize, successes: u64, failures: u64) {
        self.successes[arm] = successes;
        self.failures[arm] = failures;
    }

    fn posteriors(&self) -> Vec<Beta<f64>> {
        self.successes
            .iter()
            .zip(&self.failures)
            .map(|(&s, &f)| Beta::new(s as f64 + 1.0, f as f64 + 1.0).expect("positive parameters"))
            .collect()
    }

    fn draw_winner<R: Rng>(posteriors: &[Beta<f64>], rng: &mut R) -> usize {
        let mut best = 0;
        let mut best_theta = f64::NEG_INFINITY;
        for (i, b) in posteriors.iter().enumerate() {
            let theta = b.sample(rng);
            if theta > best_theta {
                best = i;
                best_theta = theta;
            }
        }
        best
    }

    /// Estimated probability of each arm being pulled, floored and renormalized.
    pub fn announced_strategy(&mut self) -> MetaArm {
        let posteriors = self.posteriors();
        let mut wins = vec![0u64; posteriors.len()];
        for _ in 0..self.prob_samples {
            wins[Self::draw_winner(&posteriors, &mut self.rng)] += 1;
        }
        let floored: Vec<f64> = wins.iter().map(|&w| (w as f64 / self.prob_samples as f64).max(PROB_FLOOR)).collect();
        let total: f64 = floored.iter().sum();
        MetaArm::new(floored.iter().map(|p| p / total).collect()).expect("normalized")
    }
}

impl Policy for Thompson {
    fn name(&self) -> &str {
        "ts"
    }

    fn select(&mut self, _round: u64) -> Decision {
        let announced = self.announced_strategy();
        let posteriors = self.posteriors();
        self.pulled = Self::draw_winner(&posteriors, &mut self.rng);
        Decision::dense(announced)
    }

    /// Updates the pulled arm when its reward was realized this round.
    fn observe(&mut self, observation: &Observation) {
        match observation.reward(self.pulled) {
            Some(r) if r > 0.5 => self.successes[self.pulled] += 1,
            Some(_) => self.failures[self.pulled] += 1,
            None => {}
        }
    }
}
