//! Seeded experiment execution and pseudo-regret accounting.
//!
//! Regret is measured against the best fixed strategy on a benchmark grid.
//! Deploying `p` from round one keeps `f(t) = p` exactly, so the benchmark
//! earns `U(p*)` every round and `lambda(t) = t U(p*) - sum_s U_s`.
//!
//! A run seed feeds three independent streams: activation and reward draws for
//! the environment and one stream for the policy. Seeds for replicated runs
//! come from [`run_seeds`](crate::rng::run_seeds).

use rayon::prelude::*;

use crate::environment::{EnvSpec, Environment};
use crate::error::{Error, Result};
use crate::policies::{Decision, Policy, PolicyContext, PolicySpec};
use crate::rng::{stream, Stream};
use crate::simplex::{benchmark_levels, best_fixed_strategy_on, Benchmark, SimplexGrid};

/// Default benchmark denominator when no policy grid constrains it.
pub const DEFAULT_BENCHMARK_LEVELS: u32 = 200;

/// An environment and the benchmark its regret is measured against.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub env: EnvSpec,
    pub benchmark: Benchmark,
}

impl Scenario {
    /// Benchmark computed on the grid with denominator `levels`.
    pub fn new(env: EnvSpec, levels: u32) -> Result<Self> {
        let grid = SimplexGrid::new(env.arms(), levels)?;
        let benchmark = best_fixed_strategy_on(&env.model, &grid)?;
        Ok(Self { env, benchmark })
    }

    /// Benchmark fine enough to dominate a policy grid of `policy_levels`.
    pub fn for_policy_grid(env: EnvSpec, policy_levels: Option<u32>) -> Result<Self> {
        let levels = policy_levels.map_or(DEFAULT_BENCHMARK_LEVELS, benchmark_levels);
        Self::new(env, levels)
    }

    pub fn context(&self, horizon: u64) -> PolicyContext {
        PolicyContext {
            horizon,
            arms: self.env.arms(),
            gamma: self.env.gamma,
            max_lipschitz: self.env.model.max_lipschitz(),
        }
    }
}

/// Deployed strategy of one round, compressed when it is a grid point.
#[derive(Debug, Clone, PartialEq)]
pub enum Deployed {
    Grid(u32),
    Dense(Box<[f64]>),
}

impl From<&Decision> for Deployed {
    fn from(d: &Decision) -> Self {
        match d.grid_index {
            Some(i) => Deployed::Grid(i as u32),
            None => Deployed::Dense(d.arm.probs().into()),
        }
    }
}

/// Full per-round log of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    pub policy: String,
    pub deployed: Vec<Deployed>,
    /// Expected utility `U_t` of each round.
    pub utilities: Vec<f64>,
    /// Cumulative pseudo-regret after each round.
    pub regret: Vec<f64>,
}

fn check_horizon(policy: &dyn Policy, horizon: u64) -> Result<()> {
    if horizon < policy.init_len() {
        return Err(Error::Config(format!(
            "horizon {horizon} shorter than the {} initialization rounds of `{}`",
            policy.init_len(),
            policy.name()
        )));
    }
    Ok(())
}

/// Runs `policy` for `horizon` rounds, calling `on_round(t, decision, U_t,
/// lambda(t))` after every round.
pub fn drive<F>(scenario: &Scenario, policy: &mut dyn Policy, horizon: u64, seed: u64, mut on_round: F) -> Result<()>
where
    F: FnMut(u64, &Decision, f64, f64),
{
    check_horizon(policy, horizon)?;
    let mut env = Environment::new(&scenario.env, seed)?;
    let best = scenario.benchmark.utility;
    let mut regret = 0.0;
    for t in 1..=horizon {
        let decision = policy.select(t);
        let obs = env.step(&decision.arm)?;
        let utility = env.utility(&decision.arm);
        regret += best - utility;
        policy.observe(&obs);
        on_round(t, &decision, utility, regret);
    }
    Ok(())
}

/// One seeded run with the full per-round log.
pub fn run_episode(scenario: &Scenario, spec: &PolicySpec, horizon: u64, seed: u64) -> Result<RunRecord> {
    let mut policy = spec.build(&scenario.context(horizon), stream(seed, Stream::Policy))?;
    let cap = horizon as usize;
    let mut record = RunRecord {
        seed,
        policy: spec.label().to_string(),
        deployed: Vec::with_capacity(cap),
        utilities: Vec::with_capacity(cap),
        regret: Vec::with_capacity(cap),
    };
    drive(scenario, policy.as_mut(), horizon, seed, |_, d, u, r| {
        record.deployed.push(d.into());
        record.utilities.push(u);
        record.regret.push(r);
    })?;
    Ok(record)
}

/// One seeded run, keeping only the regret at `checkpoints` (ascending, each
/// in `1..=horizon`).
pub fn run_checkpoints(
    scenario: &Scenario,
    spec: &PolicySpec,
    horizon: u64,
    seed: u64,
    checkpoints: &[u64],
) -> Result<Vec<f64>> {
    validate_checkpoints(checkpoints, horizon)?;
    let mut policy = spec.build(&scenario.context(horizon), stream(seed, Stream::Policy))?;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = 0;
    drive(scenario, policy.as_mut(), horizon, seed, |t, _, _, r| {
        if next < checkpoints.len() && checkpoints[next] == t {
            out.push(r);
            next += 1;
        }
    })?;
    Ok(out)
}

fn validate_checkpoints(checkpoints: &[u64], horizon: u64) -> Result<()> {
    if checkpoints.is_empty() {
        return Err(Error::Config("no checkpoints".into()));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1])
        || checkpoints[0] == 0
        || checkpoints[checkpoints.len() - 1] > horizon
    {
        return Err(Error::Config(format!("checkpoints must be strictly increasing within 1..={horizon}")));
    }
    Ok(())
}

/// Mean and sample standard deviation of regret across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve {
    pub checkpoints: Vec<u64>,
    pub mean: Vec<f64>,
    /// Sample standard deviation (divisor `R - 1`); zero for a single run.
    pub std: Vec<f64>,
    pub runs: usize,
    /// Per-run regret at each checkpoint, in run order.
    pub samples: Vec<Vec<f64>>,
}

impl AggregateCurve {
    pub fn from_runs(checkpoints: Vec<u64>, samples: Vec<Vec<f64>>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Config("no runs to aggregate".into()));
        }
        if let Some(bad) = samples.iter().find(|s| s.len() != checkpoints.len()) {
            return Err(Error::DimensionMismatch { expected: checkpoints.len(), got: bad.len() });
        }
        let r = samples.len();
        let mut mean = Vec::with_capacity(checkpoints.len());
        let mut std = Vec::with_capacity(checkpoints.len());
        for c in 0..checkpoints.len() {
            let m = samples.iter().map(|s| s[c]).sum::<f64>() / r as f64;
            let s = if r > 1 {
                let ss: f64 = samples.iter().map(|s| (s[c] - m).powi(2)).sum();
                (ss / (r - 1) as f64).sqrt()
            } else {
                0.0
            };
            mean.push(m);
            std.push(s);
        }
        Ok(Self { checkpoints, mean, std, runs: r, samples })
    }

    /// Concatenates the runs of several curves sharing the same checkpoints.
    pub fn pool(curves: &[AggregateCurve]) -> Result<Self> {
        let first = curves.first().ok_or_else(|| Error::Config("no curves to pool".into()))?;
        let mut samples = Vec::new();
        for c in curves {
            if c.checkpoints != first.checkpoints {
                return Err(Error::Config("pooled curves need identical checkpoints".into()));
            }
            samples.extend(c.samples.iter().cloned());
        }
        Self::from_runs(first.checkpoints.clone(), samples)
    }

    pub fn final_mean(&self) -> f64 {
        *self.mean.last().expect("non-empty")
    }

    pub fn final_std(&self) -> f64 {
        *self.std.last().expect("non-empty")
    }

    /// Mean regret at checkpoint `t`, if `t` is a checkpoint.
    pub fn mean_at(&self, t: u64) -> Option<f64> {
        self.checkpoints.iter().position(|&c| c == t).map(|i| self.mean[i])
    }
}

/// Runs every seed and aggregates the regret at `checkpoints`. Runs execute on
/// the current rayon pool; the result does not depend on scheduling.
pub fn replicate(
    scenario: &Scenario,
    spec: &PolicySpec,
    horizon: u64,
    seeds: &[u64],
    checkpoints: &[u64],
) -> Result<AggregateCurve> {
    if seeds.is_empty() {
        return Err(Error::Config("empty seed list".into()));
    }
    validate_checkpoints(checkpoints, horizon)?;
    let samples = seeds
        .par_iter()
        .map(|&seed| run_checkpoints(scenario, spec, horizon, seed, checkpoints))
        .collect::<Result<Vec<_>>>()?;
    AggregateCurve::from_runs(checkpoints.to_vec(), samples)
}

/// About `count` log-spaced rounds in `[10, horizon]`, deduplicated and
/// always ending at `horizon`.
pub fn default_checkpoints(horizon: u64, count: usize) -> Vec<u64> {
    let lo = horizon.min(10).max(1);
    if count <= 1 || lo == horizon {
        return vec![horizon];
    }
    let (a, b) = ((lo as f64).ln(), (horizon as f64).ln());
    let mut out: Vec<u64> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp().round() as u64)
        .map(|t| t.clamp(lo, horizon))
        .collect();
    out.dedup();
    if out.last() != Some(&horizon) {
        out.push(horizon);
    }
    out
}

/// Least-squares slope of `ln lambda(t)` against `ln t` over the last `window`
/// fraction of checkpoints.
pub fn sublinearity_slope(curve: &AggregateCurve, window: f64) -> Result<f64> {
    slope_of(&curve.checkpoints, &curve.mean, window)
}

/// [`sublinearity_slope`] on raw `(t, lambda)` columns.
pub fn slope_of(checkpoints: &[u64], regret: &[f64], window: f64) -> Result<f64> {
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::Config(format!("slope window {window} outside (0, 1]")));
    }
    let n = checkpoints.len().min(regret.len());
    let take = ((n as f64 * window).round() as usize).clamp(2.min(n), n);
    let start = n - take;
    let pts: Vec<(f64, f64)> = checkpoints[start..n]
        .iter()
        .zip(&regret[start..n])
        .map(|(&t, &l)| {
            if l > 0.0 {
                Ok(((t as f64).ln(), l.ln()))
            } else {
                Err(Error::SlopeUndefined(format!("regret {l} at t = {t} is not positive")))
            }
        })
        .collect::<Result<_>>()?;
    if pts.len() < 2 {
        return Err(Error::SlopeUndefined("need at least two checkpoints".into()));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::SlopeUndefined("checkpoints do not vary".into()));
    }
    Ok(sxy / sxx)
}
