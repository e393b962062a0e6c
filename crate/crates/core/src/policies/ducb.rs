//! Single-arm index policies for non-stationary rewards: discounted UCB,
//! sliding-window UCB and plain UCB1. Each pulls one base arm per round and
//! announces the point mass on it.

use std::collections::VecDeque;

use super::{Decision, Policy};
use crate::environment::Observation;
use crate::simplex::MetaArm;

fn first_max(scores: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (i, s) in scores.into_iter().enumerate() {
        if s > best_score {
            best = i;
            best_score = s;
        }
    }
    best
}

fn pull(arms: usize, arm: usize) -> Decision {
    Decision::dense(MetaArm::one_hot(arms, arm))
}

/// Discounted UCB with index `mean + 2 sqrt(xi ln(n_t) / N_t(k))`, where
/// `N_t(k)` is the discounted pull count and `n_t = sum_k N_t(k)`.
#[derive(Debug, Clone)]
pub struct Ducb {
    discount: f64,
    xi: f64,
    counts: Vec<f64>,
    sums: Vec<f64>,
    current: usize,
}

impl Ducb {
    pub fn new(arms: usize, discount: f64, xi: f64) -> Self {
        Self { discount, xi, counts: vec![0.0; arms], sums: vec![0.0; arms], current: 0 }
    }

    pub fn discounted_counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn index(&self, arm: usize) -> f64 {
        let n = self.counts[arm];
        if n <= f64::MIN_POSITIVE {
            return f64::INFINITY;
        }
        let total: f64 = self.counts.iter().sum();
        let bonus = 2.0 * (self.xi * total.ln().max(0.0) / n).sqrt();
        self.sums[arm] / n + bonus
    }
}

impl Policy for Ducb {
    fn name(&self) -> &str {
        "ducb"
    }

    fn select(&mut self, _round: u64) -> Decision {
        self.current = first_max((0..self.counts.len()).map(|k| self.index(k)));
        pull(self.counts.len(), self.current)
    }

    fn observe(&mut self, observation: &Observation) {
        for (n, s) in self.counts.iter_mut().zip(self.sums.iter_mut()) {
            *n *= self.discount;
            *s *= self.discount;
        }
        self.counts[self.current] += 1.0;
        self.sums[self.current] += observation.reward(self.current).unwrap_or(0.0);
    }
}

/// Sliding-window UCB over the last `window` pulls, with index
/// `mean + 2 sqrt(xi ln(min(t, window)) / N_t(k, window))`.
#[derive(Debug, Clone)]
pub struct Swucb {
    window: usize,
    xi: f64,
    history: VecDeque<(usize, f64)>,
    counts: Vec<u64>,
    sums: Vec<f64>,
    current: usize,
}

impl Swucb {
    pub fn new(arms: usize, window: usize, xi: f64) -> Self {
        Self {
            window: window.max(1),
            xi,
            history: VecDeque::with_capacity(window + 1),
            counts: vec![0; arms],
            sums: vec![0.0; arms],
            current: 0,
        }
    }

    pub fn window_counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn index(&self, arm: usize, t: u64) -> f64 {
        let n = self.counts[arm];
        if n == 0 {
            return f64::INFINITY;
        }
        let horizon = t.min(self.window as u64).max(1) as f64;
        self.sums[arm] / n as f64 + 2.0 * (self.xi * horizon.ln() / n as f64).sqrt()
    }
}

impl Policy for Swucb {
    fn name(&self) -> &str {
        "swucb"
    }

    fn select(&mut self, round: u64) -> Decision {
        self.current = first_max((0..self.counts.len()).map(|k| self.index(k, round)));
        pull(self.counts.len(), self.current)
    }

    fn observe(&mut self, observation: &Observation) {
        let r = observation.reward(self.current).unwrap_or(0.0);
        self.history.push_back((self.current, r));
        self.counts[self.current] += 1;
        self.sums[self.current] += r;
        if self.history.len() > self.window {
            let (arm, old) = self.history.pop_front().expect("non-empty");
            self.counts[arm] -= 1;
            self.sums[arm] -= old;
            if self.counts[arm] == 0 {
                self.sums[arm] = 0.0;
            }
        }
    }
}

/// UCB1 on base arms, ignoring that the strategy moves the means.
#[derive(Debug, Clone)]
pub struct Ucb1 {
    counts: Vec<u64>,
    sums: Vec<f64>,
    current: usize,
}

impl Ucb1 {
    pub fn new(arms: usize) -> Self {
        Self { counts: vec![0; arms], sums: vec![0.0; arms], current: 0 }
    }

    pub fn index(&self, arm: usize, t: u64) -> f64 {
        let n = self.counts[arm];
        if n == 0 {
            return f64::INFINITY;
        }
        self.sums[arm] / n as f64 + (2.0 * (t.max(1) as f64).ln() / n as f64).sqrt()
    }
}

impl Policy for Ucb1 {
    fn name(&self) -> &str {
        "ucb1"
    }

    fn select(&mut self, round: u64) -> Decision {
        self.current = first_max((0..self.counts.len()).map(|k| self.index(k, round)));
        pull(self.counts.len(), self.current)
    }

    fn observe(&mut self, observation: &Observation) {
        self.counts[self.current] += 1;
        self.sums[self.current] += observation.reward(self.current).unwrap_or(0.0);
    }
}
