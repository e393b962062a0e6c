//! Shared fixtures for the criterion benchmarks.

use impactbandit::{EnvSpec, RewardModel, Scenario};

/// Two-arm scaled-Gaussian scenario centred at 0.5.
pub fn gaussian_scenario(gamma: f64, policy_levels: u32) -> Scenario {
    let model = RewardModel::scaled_gaussian(vec![0.48, 0.53]).expect("valid centres");
    let env = EnvSpec::new(model, gamma).expect("valid discount");
    Scenario::for_policy_grid(env, Some(policy_levels)).expect("feasible grid")
}
