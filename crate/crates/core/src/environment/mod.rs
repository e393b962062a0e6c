//! Reward environments whose arm means depend on a discounted history of the
//! learner's strategies.
//!
//! Each round the deployed strategy is folded into the impact state first, so
//! round-`t` rewards are drawn with means `r_k(f_k(t))` where `f(t)` already
//! includes `p(t)`. With `gamma = 0` this reduces to `f_k(t) = p_k(t)`.
//!
//! Every arm consumes one activation draw and one reward draw per round, from
//! two separate streams, whether or not it is activated. Two environments fed
//! the same seeds therefore see the same uniforms round by round.

mod impact;
mod instances;
mod model;

pub use impact::{discount_mass, ImpactFunction, ImpactState};
pub use instances::{bump_optima, draw_gaussian, make_bump_instance, GAUSSIAN_CENTER_RANGE};
pub use model::{ModelKind, RewardModel};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{stream, Stream, StreamRng};
use crate::simplex::MetaArm;

/// What happened in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub round: u64,
    pub deployed: MetaArm,
    /// `Some(reward)` for activated arms, `None` otherwise. Rewards are 0 or 1.
    pub rewards: Vec<Option<f64>>,
    /// Reward-function inputs `f_k(t)` used this round.
    pub impact: Vec<f64>,
}

impl Observation {
    pub fn activated(&self, arm: usize) -> bool {
        self.rewards[arm].is_some()
    }

    pub fn reward(&self, arm: usize) -> Option<f64> {
        self.rewards[arm]
    }

    /// Sum of realized rewards over activated arms.
    pub fn total_reward(&self) -> f64 {
        self.rewards.iter().flatten().sum()
    }
}

/// Random streams consumed by an environment.
#[derive(Debug, Clone)]
pub struct EnvRngs {
    pub activation: StreamRng,
    pub reward: StreamRng,
}

impl EnvRngs {
    pub fn from_seed(seed: u64) -> Self {
        Self { activation: stream(seed, Stream::Activation), reward: stream(seed, Stream::Reward) }
    }
}

/// Reward model plus impact discount: everything needed to instantiate runs.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvSpec {
    pub model: RewardModel,
    pub gamma: f64,
}

impl EnvSpec {
    pub fn new(model: RewardModel, gamma: f64) -> Result<Self> {
        ImpactState::new(model.arms(), gamma)?;
        Ok(Self { model, gamma })
    }

    pub fn arms(&self) -> usize {
        self.model.arms()
    }
}

/// A history-dependent environment driven by the impact dynamics `I`.
#[derive(Debug, Clone)]
pub struct Environment<I: ImpactFunction = ImpactState> {
    model: RewardModel,
    state: I,
    rngs: EnvRngs,
}

impl Environment<ImpactState> {
    pub fn new(spec: &EnvSpec, seed: u64) -> Result<Self> {
        let state = ImpactState::new(spec.arms(), spec.gamma)?;
        Ok(Self { model: spec.model.clone(), state, rngs: EnvRngs::from_seed(seed) })
    }
}

impl<I: ImpactFunction> Environment<I> {
    pub fn with_impact(model: RewardModel, state: I, rngs: EnvRngs) -> Result<Self> {
        if state.arms() != model.arms() {
            return Err(Error::DimensionMismatch { expected: model.arms(), got: state.arms() });
        }
        Ok(Self { model, state, rngs })
    }

    pub fn model(&self) -> &RewardModel {
        &self.model
    }

    pub fn state(&self) -> &I {
        &self.state
    }

    /// Deploys `deployed` for one round and returns what was observed.
    pub fn step(&mut self, deployed: &MetaArm) -> Result<Observation> {
        let (obs, next) = env_step(&self.model, &self.state, deployed, &mut self.rngs)?;
        self.state = next;
        Ok(obs)
    }

    /// Expected utility of `deployed` against the current (post-update) state.
    pub fn utility(&self, deployed: &MetaArm) -> f64 {
        instantaneous_utility(&self.model, &self.state, deployed)
    }
}

/// One round of interaction: update the impact state with `deployed`, then
/// activate each arm with probability `deployed[k]` and draw a Bernoulli
/// reward with mean `r_k(f_k(t))` for each activated arm.
pub fn env_step<I: ImpactFunction>(
    model: &RewardModel,
    state: &I,
    deployed: &MetaArm,
    rngs: &mut EnvRngs,
) -> Result<(Observation, I)> {
    if deployed.arms() != model.arms() {
        return Err(Error::DimensionMismatch { expected: model.arms(), got: deployed.arms() });
    }
    let mut next = state.clone();
    next.update(deployed)?;
    let impact = next.impacts();
    let means: Vec<f64> = impact.iter().enumerate().map(|(k, &x)| model.mean_unchecked(k, x)).collect();
    let obs = realize(next.round(), deployed, &means, impact, rngs);
    Ok((obs, next))
}

/// Expected utility `sum_k p_k r_k(f_k)` against an already-updated state.
pub fn instantaneous_utility<I: ImpactFunction>(model: &RewardModel, state: &I, deployed: &MetaArm) -> f64 {
    model.utility(deployed.probs(), &state.impacts())
}

/// Environment whose means depend only on the current strategy: `r_k(p_k(t))`.
#[derive(Debug, Clone)]
pub struct ActionDependentEnvironment {
    model: RewardModel,
    rngs: EnvRngs,
    round: u64,
}

impl ActionDependentEnvironment {
    pub fn new(model: RewardModel, seed: u64) -> Self {
        Self { model, rngs: EnvRngs::from_seed(seed), round: 0 }
    }

    pub fn step(&mut self, deployed: &MetaArm) -> Result<Observation> {
        if deployed.arms() != self.model.arms() {
            return Err(Error::DimensionMismatch { expected: self.model.arms(), got: deployed.arms() });
        }
        self.round += 1;
        let probs = deployed.probs();
        let means: Vec<f64> = probs.iter().enumerate().map(|(k, &p)| self.model.mean_unchecked(k, p)).collect();
        Ok(realize(self.round, deployed, &means, probs.to_vec(), &mut self.rngs))
    }
}

fn realize(round: u64, deployed: &MetaArm, means: &[f64], impact: Vec<f64>, rngs: &mut EnvRngs) -> Observation {
    let rewards = deployed
        .probs()
        .iter()
        .zip(means)
        .map(|(&p, &mean)| {
            let u_act: f64 = rngs.activation.gen();
            let u_rew: f64 = rngs.reward.gen();
            (u_act < p).then(|| if u_rew < mean { 1.0 } else { 0.0 })
        })
        .collect();
    Observation { round, deployed: deployed.clone(), rewards, impact }
}
