//! Phased UCB for history-dependent rewards.
//!
//! Rounds are grouped into phases of `L` rounds that deploy one meta arm. The
//! first `s_a` rounds of a phase let the impact state approach the meta arm;
//! only the remaining `L - s_a` estimation rounds feed the statistics. Indices
//! are recomputed once per phase.

use super::aducb::covering_indices;
use super::estimators::{argmax, PolicyStats, TieBreak};
use super::schedule::bias_bound;
use super::{Decision, Policy};
use crate::environment::Observation;
use crate::error::{Error, Result};
use crate::rng::StreamRng;
use crate::simplex::{enumerate_meta_arms, GridPoint, SimplexGrid};

/// Argument of the logarithm in the exploration bonus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogArgument {
    /// `ln(L * rho * m)`: estimation rounds per phase times phases completed.
    #[default]
    PhaseScaled,
    /// `ln(L * rho)`, constant across phases.
    PerPhase,
}

/// Phase geometry and estimation-stage statistics.
#[derive(Debug, Clone)]
pub struct PhaseState {
    phase_len: u32,
    approach: u32,
    err: f64,
    phases_done: u64,
    stats: PolicyStats,
}

impl PhaseState {
    pub fn new(grid: SimplexGrid, phase_len: u32, approach: u32, gamma: f64, max_lipschitz: f64) -> Result<Self> {
        if approach == 0 || phase_len <= approach {
            return Err(Error::Config(format!(
                "phase length {phase_len} must exceed approaching length {approach} >= 1"
            )));
        }
        let err = bias_bound(grid.arms(), gamma, approach, max_lipschitz);
        Ok(Self { phase_len, approach, err, phases_done: 0, stats: PolicyStats::new(grid) })
    }

    pub fn phase_len(&self) -> u32 {
        self.phase_len
    }

    pub fn approach(&self) -> u32 {
        self.approach
    }

    pub fn estimation_len(&self) -> u32 {
        self.phase_len - self.approach
    }

    /// Realized estimation ratio `(L - s_a) / L`.
    pub fn rho(&self) -> f64 {
        f64::from(self.estimation_len()) / f64::from(self.phase_len)
    }

    pub fn err(&self) -> f64 {
        self.err
    }

    pub fn phases_done(&self) -> u64 {
        self.phases_done
    }

    pub fn stats(&self) -> &PolicyStats {
        &self.stats
    }

    pub fn stats_mut(&mut self) -> &mut PolicyStats {
        &mut self.stats
    }

    /// 1-based position of `round` inside its phase.
    pub fn position(&self, round: u64) -> u32 {
        ((round - 1) % u64::from(self.phase_len)) as u32 + 1
    }

    /// 0-based phase containing `round`.
    pub fn phase_of(&self, round: u64) -> u64 {
        (round - 1) / u64::from(self.phase_len)
    }

    pub fn is_estimation_round(&self, round: u64) -> bool {
        self.position(round) > self.approach
    }

    /// `U_est(p) + err + 3 sqrt(K ln(arg) / min_k n_est(p_k))`; `+inf` while
    /// any contained discretized arm lacks estimation samples.
    pub fn index(&self, point: &GridPoint, log_arg: LogArgument) -> f64 {
        let (min_count, value) = self.stats.summarize(point);
        if min_count == 0 {
            return f64::INFINITY;
        }
        let per_phase = f64::from(self.estimation_len());
        let arg = match log_arg {
            LogArgument::PhaseScaled => per_phase * self.phases_done.max(1) as f64,
            LogArgument::PerPhase => per_phase,
        };
        let k = point.arms() as f64;
        value + self.err + 3.0 * (k * arg.ln().max(0.0) / min_count as f64).sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct HistoryDependentUcb {
    points: Vec<GridPoint>,
    init: Vec<usize>,
    phase: PhaseState,
    log_arg: LogArgument,
    tie: TieBreak,
    rng: StreamRng,
    current: usize,
    round: u64,
}

impl HistoryDependentUcb {
    pub fn new(
        grid: SimplexGrid,
        phase: PhaseState,
        log_arg: LogArgument,
        tie: TieBreak,
        rng: StreamRng,
    ) -> Result<Self> {
        let points = enumerate_meta_arms(&grid)?;
        let init = covering_indices(&grid, &points);
        Ok(Self { points, init, phase, log_arg, tie, rng, current: 0, round: 0 })
    }

    pub fn phase(&self) -> &PhaseState {
        &self.phase
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    fn choose_phase_arm(&mut self, phase: u64) -> usize {
        if let Some(&i) = self.init.get(phase as usize) {
            return i;
        }
        let state = &self.phase;
        let log_arg = self.log_arg;
        argmax(self.points.iter().map(|p| state.index(p, log_arg)), self.tie, &mut self.rng)
    }
}

impl Policy for HistoryDependentUcb {
    fn name(&self) -> &str {
        "hducb"
    }

    /// Covering phases, one full phase per covering meta arm.
    fn init_len(&self) -> u64 {
        self.init.len() as u64 * u64::from(self.phase.phase_len)
    }

    fn select(&mut self, round: u64) -> Decision {
        self.round = round;
        if self.phase.position(round) == 1 {
            let phase = self.phase.phase_of(round);
            self.phase.phases_done = phase;
            self.current = self.choose_phase_arm(phase);
        }
        Decision::on_grid(&self.points[self.current], self.current)
    }

    fn observe(&mut self, observation: &Observation) {
        if self.phase.is_estimation_round(self.round) {
            self.phase
                .stats
                .record(&self.points[self.current], observation)
                .expect("grid points have positive probabilities");
        }
    }
}
