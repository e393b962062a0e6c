//! Decision policies.
//!
//! Every policy announces a mixed strategy each round through
//! [`Policy::select`] and learns from the resulting [`Observation`] through
//! [`Policy::observe`]. Grid-based policies also report the index of the
//! announced meta arm so run logs can store it compactly.

mod aducb;
mod cucb;
mod ducb;
mod estimators;
mod exp3;
mod hducb;
mod naive;
mod schedule;
mod thompson;

pub use aducb::{aducb_index, aducb_select, covering_indices, covering_schedule, ActionDependentUcb};
pub use cucb::Cucb;
pub use ducb::{Ducb, Swucb, Ucb1};
pub use estimators::{iw_reward, PolicyStats, TieBreak};
pub use exp3::{exp3_rate, Exp3, Exp3Deploy, MetaExp3};
pub use hducb::{HistoryDependentUcb, LogArgument, PhaseState};
pub use naive::NaiveMetaUcb;
pub use schedule::{approach_len, bias_bound, grid_levels, phase_len, schedule_params, Schedule, ScheduleOptions};
pub use thompson::{Thompson, PROB_FLOOR};

use crate::environment::Observation;
use crate::error::{Error, Result};
use crate::rng::StreamRng;
use crate::simplex::{enumerate_meta_arms, GridPoint, MetaArm, SimplexGrid};

/// One round's announced strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub arm: MetaArm,
    /// Position in the enumerated grid when the strategy is a grid point.
    pub grid_index: Option<usize>,
}

impl Decision {
    pub fn on_grid(point: &GridPoint, index: usize) -> Self {
        Self { arm: point.to_meta_arm(), grid_index: Some(index) }
    }

    pub fn dense(arm: MetaArm) -> Self {
        Self { arm, grid_index: None }
    }
}

pub trait Policy: Send {
    fn name(&self) -> &str;

    /// Rounds spent in a fixed initialization schedule before adaptive play.
    fn init_len(&self) -> u64 {
        0
    }

    /// Strategy for round `round` (1-based).
    fn select(&mut self, round: u64) -> Decision;

    fn observe(&mut self, observation: &Observation);
}

/// How a grid-based policy picks its denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    /// Derived from the horizon by [`schedule_params`].
    Auto(ScheduleOptions),
    /// Fixed denominator `n` (step `1/n`).
    Levels(u32),
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Auto(ScheduleOptions::default())
    }
}

impl GridSpec {
    pub fn levels(&self, horizon: u64, arms: usize) -> Result<u32> {
        match *self {
            GridSpec::Auto(options) => grid_levels(horizon, arms, &options),
            GridSpec::Levels(n) => Ok(n),
        }
    }

    pub fn grid(&self, horizon: u64, arms: usize) -> Result<SimplexGrid> {
        let grid = SimplexGrid::new(arms, self.levels(horizon, arms)?)?;
        if !grid.is_feasible() {
            return Err(Error::EmptyActionSpace { arms, levels: grid.levels() });
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolicyKind {
    ActionUcb { grid: GridSpec },
    HistoryUcb { grid: GridSpec, rho: f64, approach: Option<u32>, log_arg: LogArgument },
    Exp3 { deploy: Exp3Deploy },
    MetaExp3 { grid: GridSpec },
    Cucb { grid: GridSpec },
    Ducb { discount: f64, xi: f64 },
    Swucb { window: usize, xi: f64 },
    Thompson { prob_samples: usize },
    NaiveMetaUcb { grid: GridSpec },
    Ucb1,
}

impl PolicyKind {
    /// Canonical policy name, also used in configs and output files.
    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::ActionUcb { .. } => "aducb",
            PolicyKind::HistoryUcb { .. } => "hducb",
            PolicyKind::Exp3 { .. } => "exp3",
            PolicyKind::MetaExp3 { .. } => "mexp3",
            PolicyKind::Cucb { .. } => "cucb",
            PolicyKind::Ducb { .. } => "ducb",
            PolicyKind::Swucb { .. } => "swucb",
            PolicyKind::Thompson { .. } => "ts",
            PolicyKind::NaiveMetaUcb { .. } => "naive_ucb1",
            PolicyKind::Ucb1 => "ucb1",
        }
    }

    /// Default parameters for a policy name.
    pub fn from_name(name: &str) -> Option<Self> {
        let grid = GridSpec::default();
        Some(match name {
            "aducb" => PolicyKind::ActionUcb { grid },
            "hducb" => PolicyKind::HistoryUcb { grid, rho: 0.2, approach: None, log_arg: LogArgument::default() },
            "exp3" => PolicyKind::Exp3 { deploy: Exp3Deploy::default() },
            "mexp3" => PolicyKind::MetaExp3 { grid },
            "cucb" => PolicyKind::Cucb { grid },
            "ducb" => PolicyKind::Ducb { discount: 0.8, xi: 1.0 },
            "swucb" => PolicyKind::Swucb { window: 200, xi: 1.0 },
            "ts" => PolicyKind::Thompson { prob_samples: 10_000 },
            "naive_ucb1" => PolicyKind::NaiveMetaUcb { grid },
            "ucb1" => PolicyKind::Ucb1,
            _ => return None,
        })
    }

    pub fn grid_spec(&self) -> Option<GridSpec> {
        match self {
            PolicyKind::ActionUcb { grid }
            | PolicyKind::HistoryUcb { grid, .. }
            | PolicyKind::MetaExp3 { grid }
            | PolicyKind::Cucb { grid }
            | PolicyKind::NaiveMetaUcb { grid } => Some(*grid),
            _ => None,
        }
    }
}

pub const POLICY_NAMES: [&str; 10] =
    ["aducb", "hducb", "exp3", "mexp3", "cucb", "ducb", "swucb", "ts", "naive_ucb1", "ucb1"];

/// What a policy may know about the problem before round one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyContext {
    pub horizon: u64,
    pub arms: usize,
    pub gamma: f64,
    pub max_lipschitz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicySpec {
    /// Output label; defaults to the policy name.
    pub label: Option<String>,
    pub kind: PolicyKind,
    pub tie_break: TieBreak,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind) -> Self {
        Self { label: None, kind, tie_break: TieBreak::default() }
    }

    pub fn named(name: &str) -> Result<Self> {
        PolicyKind::from_name(name).map(Self::new).ok_or_else(|| Error::Config(format!("unknown policy `{name}`")))
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(self.kind.name())
    }

    /// Grid denominator this policy would use, if grid-based.
    pub fn levels(&self, ctx: &PolicyContext) -> Result<Option<u32>> {
        self.kind.grid_spec().map(|g| g.levels(ctx.horizon, ctx.arms)).transpose()
    }

    pub fn build(&self, ctx: &PolicyContext, rng: StreamRng) -> Result<Box<dyn Policy>> {
        let tie = self.tie_break;
        let policy: Box<dyn Policy> = match &self.kind {
            PolicyKind::ActionUcb { grid } => {
                Box::new(ActionDependentUcb::new(grid.grid(ctx.horizon, ctx.arms)?, tie, rng)?)
            }
            PolicyKind::HistoryUcb { grid, rho, approach, log_arg } => {
                let grid = grid.grid(ctx.horizon, ctx.arms)?;
                let s_a = approach.unwrap_or_else(|| approach_len(grid.epsilon(), ctx.arms, ctx.gamma));
                let len = phase_len(s_a, *rho)?;
                let phase = PhaseState::new(grid.clone(), len, s_a, ctx.gamma, ctx.max_lipschitz)?;
                Box::new(HistoryDependentUcb::new(grid, phase, *log_arg, tie, rng)?)
            }
            PolicyKind::Exp3 { deploy: Exp3Deploy::Distribution } => Box::new(Exp3::new(ctx.arms, ctx.horizon)),
            PolicyKind::Exp3 { deploy: Exp3Deploy::Sample } => Box::new(Exp3::sampled(ctx.arms, ctx.horizon, rng)),
            PolicyKind::MetaExp3 { grid } => {
                let points = enumerate_meta_arms(&grid.grid(ctx.horizon, ctx.arms)?)?;
                Box::new(MetaExp3::new(points, ctx.horizon, rng))
            }
            PolicyKind::Cucb { grid } => Box::new(Cucb::new(grid.grid(ctx.horizon, ctx.arms)?, tie, rng)?),
            PolicyKind::Ducb { discount, xi } => {
                if !(*discount > 0.0 && *discount < 1.0) {
                    return Err(Error::Config(format!("ducb discount {discount} outside (0, 1)")));
                }
                Box::new(Ducb::new(ctx.arms, *discount, *xi))
            }
            PolicyKind::Swucb { window, xi } => {
                if *window == 0 {
                    return Err(Error::Config("swucb window must be positive".into()));
                }
                Box::new(Swucb::new(ctx.arms, *window, *xi))
            }
            PolicyKind::Thompson { prob_samples } => Box::new(Thompson::new(ctx.arms, *prob_samples, rng)),
            PolicyKind::NaiveMetaUcb { grid } => {
                Box::new(NaiveMetaUcb::new(grid.grid(ctx.horizon, ctx.arms)?, tie, rng)?)
            }
            PolicyKind::Ucb1 => Box::new(Ucb1::new(ctx.arms)),
        };
        Ok(policy)
    }
}
