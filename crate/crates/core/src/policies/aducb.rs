//! UCB over meta arms with importance-weighted, per-discretized-arm estimates.

use super::estimators::{argmax, PolicyStats, TieBreak};
use super::{Decision, Policy};
use crate::environment::Observation;
use crate::error::Result;
use crate::rng::StreamRng;
use crate::simplex::{enumerate_meta_arms, GridPoint, SimplexGrid};

/// `sqrt(K ln t / min_k n(p_k)) + sum_k p_k mean(p_k)`, or `+inf` if some
/// contained discretized arm has never been deployed.
pub fn aducb_index(stats: &PolicyStats, point: &GridPoint, t: u64) -> f64 {
    let (min_count, value) = stats.summarize(point);
    if min_count == 0 {
        return f64::INFINITY;
    }
    let k = point.arms() as f64;
    let log_t = (t.max(1) as f64).ln();
    (k * log_t / min_count as f64).sqrt() + value
}

/// Position of the maximizing meta arm in `points`.
pub fn aducb_select(stats: &PolicyStats, points: &[GridPoint], t: u64, tie: TieBreak, rng: &mut StreamRng) -> usize {
    argmax(points.iter().map(|p| aducb_index(stats, p, t)), tie, rng)
}

/// A deterministic sequence of meta arms that contains every discretized arm.
///
/// Walks the discretized arms in order; each one not yet covered pulls in the
/// meta arm containing it that covers the most new discretized arms (first in
/// lexicographic order on ties).
pub fn covering_schedule(grid: &SimplexGrid) -> Result<Vec<GridPoint>> {
    let points = enumerate_meta_arms(grid)?;
    Ok(covering_indices(grid, &points).into_iter().map(|i| points[i].clone()).collect())
}

/// [`covering_schedule`] as positions into an existing enumeration.
pub fn covering_indices(grid: &SimplexGrid, points: &[GridPoint]) -> Vec<usize> {
    let mut covered = vec![false; grid.discretized_arm_count()];
    let mut schedule = Vec::new();
    for arm in 0..grid.arms() {
        for level in 1..=grid.max_level() {
            let slot = grid.slot(crate::simplex::DiscretizedArm { arm, level });
            if covered[slot] {
                continue;
            }
            let mut best: Option<(usize, usize)> = None;
            for (i, p) in points.iter().enumerate() {
                if p.levels()[arm] != level {
                    continue;
                }
                let gain = p.discretized_arms().filter(|d| !covered[grid.slot(*d)]).count();
                if best.map_or(true, |(_, g)| gain > g) {
                    best = Some((i, gain));
                }
            }
            // with a single arm only level n is reachable
            let Some((i, _)) = best else { continue };
            for d in points[i].discretized_arms() {
                covered[grid.slot(d)] = true;
            }
            schedule.push(i);
        }
    }
    schedule
}

/// Action-dependent UCB: plays the covering schedule once, then the meta arm
/// with the largest index every round.
#[derive(Debug, Clone)]
pub struct ActionDependentUcb {
    points: Vec<GridPoint>,
    init: Vec<usize>,
    stats: PolicyStats,
    tie: TieBreak,
    rng: StreamRng,
    current: usize,
}

impl ActionDependentUcb {
    pub fn new(grid: SimplexGrid, tie: TieBreak, rng: StreamRng) -> Result<Self> {
        let points = enumerate_meta_arms(&grid)?;
        let init = covering_indices(&grid, &points);
        Ok(Self { points, init, stats: PolicyStats::new(grid), tie, rng, current: 0 })
    }

    pub fn stats(&self) -> &PolicyStats {
        &self.stats
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }
}

impl Policy for ActionDependentUcb {
    fn name(&self) -> &str {
        "aducb"
    }

    fn init_len(&self) -> u64 {
        self.init.len() as u64
    }

    fn select(&mut self, round: u64) -> Decision {
        let played = self.stats.rounds() as usize;
        self.current = match self.init.get(played) {
            Some(&i) => i,
            None => aducb_select(&self.stats, &self.points, round, self.tie, &mut self.rng),
        };
        Decision::on_grid(&self.points[self.current], self.current)
    }

    fn observe(&mut self, observation: &Observation) {
        self.stats.record(&self.points[self.current], observation).expect("grid points have positive probabilities");
    }
}
