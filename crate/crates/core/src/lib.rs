//! Bandits with delayed impact.
//!
//! Arm rewards depend on a discounted average of the strategies the learner
//! deployed in the past. The crate provides the environment dynamics, the
//! simplex machinery for discretized strategies, UCB-style learners for the
//! action-dependent (`gamma = 0`) and history-dependent settings, the usual
//! baselines, and a seeded harness that turns runs into regret curves.
//!
//! ```
//! use impactbandit::{EnvSpec, PolicySpec, RewardModel, Scenario, replicate, run_seeds};
//!
//! let env = EnvSpec::new(RewardModel::scaled_gaussian(vec![0.5, 0.5])?, 0.0)?;
//! let scenario = Scenario::for_policy_grid(env, Some(8))?;
//! let spec = PolicySpec::named("exp3")?;
//! let curve = replicate(&scenario, &spec, 200, &run_seeds(7, 2), &[100, 200])?;
//! assert_eq!(curve.runs, 2);
//! # Ok::<(), impactbandit::Error>(())
//! ```

pub mod environment;
pub mod error;
pub mod harness;
pub mod policies;
pub mod rng;
pub mod simplex;

pub use environment::{
    env_step, instantaneous_utility, ActionDependentEnvironment, EnvSpec, Environment, ImpactFunction, ImpactState,
    ModelKind, Observation, RewardModel,
};
pub use error::{Error, Result};
pub use harness::{
    default_checkpoints, replicate, run_checkpoints, run_episode, sublinearity_slope, AggregateCurve, Deployed,
    RunRecord, Scenario,
};
pub use policies::{
    Decision, Exp3Deploy, GridSpec, LogArgument, Policy, PolicyContext, PolicyKind, PolicySpec, ScheduleOptions,
    TieBreak,
};
pub use rng::{run_seed, run_seeds, Stream};
pub use simplex::{
    best_fixed_strategy, enumerate_meta_arms, make_grid, Benchmark, DiscretizedArm, GridPoint, MetaArm, SimplexGrid,
};
