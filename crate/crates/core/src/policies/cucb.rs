//! Combinatorial UCB over discretized arms, without importance weighting.

use super::estimators::{argmax, TieBreak};
use super::{Decision, Policy};
use crate::environment::Observation;
use crate::error::Result;
use crate::rng::StreamRng;
use crate::simplex::{enumerate_meta_arms, GridPoint, SimplexGrid};

#[derive(Debug, Clone)]
pub struct Cucb {
    grid: SimplexGrid,
    points: Vec<GridPoint>,
    counts: Vec<u64>,
    sums: Vec<f64>,
    tie: TieBreak,
    rng: StreamRng,
    current: usize,
}

impl Cucb {
    pub fn new(grid: SimplexGrid, tie: TieBreak, rng: StreamRng) -> Result<Self> {
        let points = enumerate_meta_arms(&grid)?;
        let slots = grid.discretized_arm_count();
        Ok(Self { grid, points, counts: vec![0; slots], sums: vec![0.0; slots], tie, rng, current: 0 })
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    /// Sets the statistics of one discretized arm slot.
    pub fn set_slot(&mut self, slot: usize, count: u64, sum: f64) {
        self.counts[slot] = count;
        self.sums[slot] = sum;
    }

    /// `mean + sqrt(3 ln t / (2 n))`, `+inf` when never observed.
    pub fn slot_index(&self, slot: usize, t: u64) -> f64 {
        let n = self.counts[slot];
        if n == 0 {
            return f64::INFINITY;
        }
        let n = n as f64;
        self.sums[slot] / n + (3.0 * (t.max(1) as f64).ln() / (2.0 * n)).sqrt()
    }

    /// Oracle value `sum_k p_k index(p_k)` of a meta arm.
    pub fn score(&self, point: &GridPoint, t: u64) -> f64 {
        point.discretized_arms().map(|d| point.prob(d.arm) * self.slot_index(self.grid.slot(d), t)).sum()
    }
}

impl Policy for Cucb {
    fn name(&self) -> &str {
        "cucb"
    }

    fn select(&mut self, round: u64) -> Decision {
        let scores: Vec<f64> = self.points.iter().map(|p| self.score(p, round)).collect();
        self.current = argmax(scores, self.tie, &mut self.rng);
        Decision::on_grid(&self.points[self.current], self.current)
    }

    fn observe(&mut self, observation: &Observation) {
        let point = &self.points[self.current];
        for d in point.discretized_arms() {
            if let Some(r) = observation.reward(d.arm) {
                let slot = self.grid.slot(d);
                self.counts[slot] += 1;
                self.sums[slot] += r;
            }
        }
    }
}
