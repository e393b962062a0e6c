//! UCB1 with every enumerated meta arm treated as an independent arm.

use super::estimators::{argmax, TieBreak};
use super::{Decision, Policy};
use crate::environment::Observation;
use crate::error::Result;
use crate::rng::StreamRng;
use crate::simplex::{enumerate_meta_arms, GridPoint, SimplexGrid};

#[derive(Debug, Clone)]
pub struct NaiveMetaUcb {
    points: Vec<GridPoint>,
    plays: Vec<u64>,
    sums: Vec<f64>,
    tie: TieBreak,
    rng: StreamRng,
    current: usize,
}

impl NaiveMetaUcb {
    pub fn new(grid: SimplexGrid, tie: TieBreak, rng: StreamRng) -> Result<Self> {
        let points = enumerate_meta_arms(&grid)?;
        let m = points.len();
        Ok(Self { points, plays: vec![0; m], sums: vec![0.0; m], tie, rng, current: 0 })
    }

    pub fn set(&mut self, i: usize, plays: u64, sum: f64) {
        self.plays[i] = plays;
        self.sums[i] = sum;
    }

    /// Mean total reward plus `sqrt(2 ln t / plays)`; `+inf` when unplayed.
    pub fn index(&self, i: usize, t: u64) -> f64 {
        let n = self.plays[i];
        if n == 0 {
            return f64::INFINITY;
        }
        self.sums[i] / n as f64 + (2.0 * (t.max(1) as f64).ln() / n as f64).sqrt()
    }
}

impl Policy for NaiveMetaUcb {
    fn name(&self) -> &str {
        "naive_ucb1"
    }

    fn select(&mut self, round: u64) -> Decision {
        let scores: Vec<f64> = (0..self.points.len()).map(|i| self.index(i, round)).collect();
        self.current = argmax(scores, self.tie, &mut self.rng);
        Decision::on_grid(&self.points[self.current], self.current)
    }

    fn observe(&mut self, observation: &Observation) {
        self.plays[self.current] += 1;
        self.sums[self.current] += observation.total_reward();
    }
}
