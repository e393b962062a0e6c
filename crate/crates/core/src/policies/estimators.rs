use rand::Rng;

use crate::environment::Observation;
use crate::error::{Error, Result};
use crate::rng::StreamRng;
use crate::simplex::{DiscretizedArm, GridPoint, SimplexGrid};

/// Inverse-propensity reward: `reward / p` when the arm was activated, else 0.
pub fn iw_reward(observation: &Observation, arm: usize, deployed_prob: f64) -> Result<f64> {
    match observation.reward(arm) {
        None => Ok(0.0),
        Some(_) if deployed_prob <= 0.0 => {
            Err(Error::InternalInconsistency(format!("arm {arm} activated with deployed probability {deployed_prob}")))
        }
        Some(r) => Ok(r / deployed_prob),
    }
}

/// Per-discretized-arm counts and sums of importance-weighted rewards.
#[derive(Debug, Clone)]
pub struct PolicyStats {
    grid: SimplexGrid,
    counts: Vec<u64>,
    sums: Vec<f64>,
    rounds: u64,
}

impl PolicyStats {
    pub fn new(grid: SimplexGrid) -> Self {
        let slots = grid.discretized_arm_count();
        Self { grid, counts: vec![0; slots], sums: vec![0.0; slots], rounds: 0 }
    }

    pub fn grid(&self) -> &SimplexGrid {
        &self.grid
    }

    /// Rounds recorded so far.
    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn count(&self, d: DiscretizedArm) -> u64 {
        self.counts[self.grid.slot(d)]
    }

    pub fn sum(&self, d: DiscretizedArm) -> f64 {
        self.sums[self.grid.slot(d)]
    }

    /// Empirical mean; `None` until the discretized arm has been deployed.
    pub fn mean(&self, d: DiscretizedArm) -> Option<f64> {
        let slot = self.grid.slot(d);
        (self.counts[slot] > 0).then(|| self.sums[slot] / self.counts[slot] as f64)
    }

    /// Adds one round in which `point` was deployed: every contained
    /// discretized arm gets one more count and its importance-weighted reward.
    pub fn record(&mut self, point: &GridPoint, observation: &Observation) -> Result<()> {
        for d in point.discretized_arms() {
            let r = iw_reward(observation, d.arm, point.prob(d.arm))?;
            let slot = self.grid.slot(d);
            self.counts[slot] += 1;
            self.sums[slot] += r;
        }
        self.rounds += 1;
        Ok(())
    }

    /// Sets a count and sum directly.
    pub fn set(&mut self, d: DiscretizedArm, count: u64, sum: f64) {
        let slot = self.grid.slot(d);
        self.counts[slot] = count;
        self.sums[slot] = sum;
    }

    /// `(min_k n(p_k), sum_k p_k * mean(p_k))` for a meta arm; the sum is
    /// meaningless when the minimum count is zero.
    pub fn summarize(&self, point: &GridPoint) -> (u64, f64) {
        let mut min_count = u64::MAX;
        let mut value = 0.0;
        for d in point.discretized_arms() {
            let slot = self.grid.slot(d);
            let n = self.counts[slot];
            min_count = min_count.min(n);
            if n > 0 {
                value += point.prob(d.arm) * self.sums[slot] / n as f64;
            }
        }
        (min_count, value)
    }
}

/// How ties between equal index values are broken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// First candidate in enumeration order.
    #[default]
    Lexicographic,
    /// Uniformly among the tied candidates, using the policy's stream.
    Random,
}

/// Index of the largest score. `+inf` scores are legal and tie with each other.
pub(crate) fn argmax<I>(scores: I, tie: TieBreak, rng: &mut StreamRng) -> usize
where
    I: IntoIterator<Item = f64>,
{
    let mut best = f64::NEG_INFINITY;
    let mut winners: Vec<usize> = Vec::new();
    for (i, s) in scores.into_iter().enumerate() {
        if s > best || winners.is_empty() {
            best = s;
            winners.clear();
            winners.push(i);
        } else if s == best && tie == TieBreak::Random {
            winners.push(i);
        }
    }
    match winners.len() {
        0 => 0,
        1 => winners[0],
        n => winners[rng.gen_range(0..n)],
    }
}
