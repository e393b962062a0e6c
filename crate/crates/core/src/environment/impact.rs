use crate::error::{Error, Result};
use crate::simplex::MetaArm;

/// Dynamics that turn the stream of deployed strategies into the per-arm
/// inputs of the reward functions.
///
/// Implementations must converge under constant deployment: after `s`
/// consecutive rounds of `p`, `|f_k - g(p_k)| <= gamma^s` for some fixed
/// monotone `g`. [`ImpactState`] is the discounted-frequency case `g(x) = x`.
pub trait ImpactFunction: Clone + Send + Sync {
    fn arms(&self) -> usize;
    fn round(&self) -> u64;
    fn update(&mut self, deployed: &MetaArm) -> Result<()>;
    /// Current input of arm `k`'s reward function. Zero before the first update.
    fn impact(&self, arm: usize) -> f64;

    fn impacts(&self) -> Vec<f64> {
        (0..self.arms()).map(|k| self.impact(k)).collect()
    }
}

/// Time-discounted frequency of past strategies:
/// `f_k(t) = sum_{s<=t} p_k(s) gamma^(t-s) / sum_{s<=t} gamma^(t-s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactState {
    gamma: f64,
    numerators: Vec<f64>,
    round: u64,
}

impl ImpactState {
    pub fn new(arms: usize, gamma: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&gamma) {
            return Err(Error::Config(format!("discount {gamma} outside [0, 1)")));
        }
        if arms == 0 {
            return Err(Error::Config("impact state needs at least one arm".into()));
        }
        Ok(Self { gamma, numerators: vec![0.0; arms], round: 0 })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn numerators(&self) -> &[f64] {
        &self.numerators
    }

    /// `D(t) = (1 - gamma^t) / (1 - gamma)`, with `D(t) = 1` for `gamma = 0, t >= 1`.
    pub fn denominator(&self) -> f64 {
        discount_mass(self.gamma, self.round)
    }

    /// Functional form of [`ImpactFunction::update`].
    pub fn updated(&self, deployed: &MetaArm) -> Result<Self> {
        let mut next = self.clone();
        next.update(deployed)?;
        Ok(next)
    }
}

/// Total weight `sum_{s=1}^{t} gamma^(t-s)` in closed form.
pub fn discount_mass(gamma: f64, t: u64) -> f64 {
    if t == 0 {
        0.0
    } else if gamma == 0.0 {
        1.0
    } else {
        (1.0 - gamma.powf(t as f64)) / (1.0 - gamma)
    }
}

impl ImpactFunction for ImpactState {
    fn arms(&self) -> usize {
        self.numerators.len()
    }

    fn round(&self) -> u64 {
        self.round
    }

    fn update(&mut self, deployed: &MetaArm) -> Result<()> {
        if deployed.arms() != self.numerators.len() {
            return Err(Error::DimensionMismatch { expected: self.numerators.len(), got: deployed.arms() });
        }
        for (n, &p) in self.numerators.iter_mut().zip(deployed.probs()) {
            *n = p + self.gamma * *n;
        }
        self.round += 1;
        Ok(())
    }

    fn impact(&self, arm: usize) -> f64 {
        if self.round == 0 {
            return 0.0;
        }
        (self.numerators[arm] / self.denominator()).clamp(0.0, 1.0)
    }
}
