//! Exponential weights over base arms (EXP3) and over meta arms (mEXP3).

use rand::Rng;

use super::{Decision, Policy};
use crate::environment::Observation;
use crate::rng::StreamRng;
use crate::simplex::{GridPoint, MetaArm};

/// `min(1, sqrt(M ln M / ((e - 1) T)))` for `M` actions over `T` rounds.
pub fn exp3_rate(actions: usize, horizon: u64) -> f64 {
    let m = actions as f64;
    (m * m.ln() / ((std::f64::consts::E - 1.0) * horizon.max(1) as f64)).sqrt().min(1.0)
}

/// Mixed exponential weights: `(1 - eta) w / sum(w) + eta / M`.
fn mixed_distribution(log_weights: &[f64], eta: f64) -> Vec<f64> {
    let top = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_weights.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    let uniform = eta / log_weights.len() as f64;
    w.iter().map(|x| (1.0 - eta) * x / total + uniform).collect()
}

/// What EXP3 on base arms deploys each round.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Exp3Deploy {
    /// The sampling distribution itself; activated arms are credited
    /// `reward / p_k`.
    #[default]
    Distribution,
    /// A point mass on one arm drawn from the distribution, credited
    /// `reward / q_arm` as in classic EXP3.
    Sample,
}

/// Inverse-CDF draw from `q` with uniform `u`.
fn sample_index(q: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &qi) in q.iter().enumerate() {
        acc += qi;
        if u < acc {
            return i;
        }
    }
    q.len() - 1
}

/// EXP3 on base arms.
#[derive(Debug, Clone)]
pub struct Exp3 {
    eta: f64,
    log_weights: Vec<f64>,
    deploy: Exp3Deploy,
    rng: Option<StreamRng>,
    pulled: Option<(usize, f64)>,
}

impl Exp3 {
    pub fn new(arms: usize, horizon: u64) -> Self {
        Self::with_rate(arms, exp3_rate(arms, horizon))
    }

    pub fn with_rate(arms: usize, eta: f64) -> Self {
        Self { eta, log_weights: vec![0.0; arms], deploy: Exp3Deploy::Distribution, rng: None, pulled: None }
    }

    /// Classic EXP3 that deploys one sampled arm per round.
    pub fn sampled(arms: usize, horizon: u64, rng: StreamRng) -> Self {
        Self { deploy: Exp3Deploy::Sample, rng: Some(rng), ..Self::new(arms, horizon) }
    }

    pub fn deploy(&self) -> Exp3Deploy {
        self.deploy
    }

    pub fn rate(&self) -> f64 {
        self.eta
    }

    /// Weights normalized so the largest is one.
    pub fn weights(&self) -> Vec<f64> {
        let top = self.log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.log_weights.iter().map(|l| (l - top).exp()).collect()
    }

    pub fn distribution(&self) -> Vec<f64> {
        mixed_distribution(&self.log_weights, self.eta)
    }
}

impl Policy for Exp3 {
    fn name(&self) -> &str {
        "exp3"
    }

    fn select(&mut self, _round: u64) -> Decision {
        let probs = self.distribution();
        match self.rng.as_mut() {
            Some(rng) if self.deploy == Exp3Deploy::Sample => {
                let arm = sample_index(&probs, rng.gen());
                self.pulled = Some((arm, probs[arm]));
                Decision::dense(MetaArm::one_hot(probs.len(), arm))
            }
            _ => Decision::dense(MetaArm::new(probs).expect("mixture of distributions is a distribution")),
        }
    }

    fn observe(&mut self, observation: &Observation) {
        let k = self.log_weights.len() as f64;
        if let Some((arm, q)) = self.pulled.take() {
            let r = observation.reward(arm).unwrap_or(0.0);
            self.log_weights[arm] += self.eta * (r / q) / k;
            return;
        }
        for (arm, lw) in self.log_weights.iter_mut().enumerate() {
            if let Some(r) = observation.reward(arm) {
                let p = observation.deployed.prob(arm);
                *lw += self.eta * (r / p) / k;
            }
        }
    }
}

/// EXP3 over the enumerated meta arms: draws one meta arm per round, announces
/// it, and credits it with `total reward / selection probability`.
#[derive(Debug, Clone)]
pub struct MetaExp3 {
    points: Vec<GridPoint>,
    eta: f64,
    log_weights: Vec<f64>,
    rng: StreamRng,
    current: usize,
    current_prob: f64,
}

impl MetaExp3 {
    pub fn new(points: Vec<GridPoint>, horizon: u64, rng: StreamRng) -> Self {
        let eta = exp3_rate(points.len(), horizon);
        let log_weights = vec![0.0; points.len()];
        Self { points, eta, log_weights, rng, current: 0, current_prob: 1.0 }
    }

    pub fn distribution(&self) -> Vec<f64> {
        mixed_distribution(&self.log_weights, self.eta)
    }
}

impl Policy for MetaExp3 {
    fn name(&self) -> &str {
        "mexp3"
    }

    fn select(&mut self, _round: u64) -> Decision {
        let q = self.distribution();
        let pick = sample_index(&q, self.rng.gen());
        self.current = pick;
        self.current_prob = q[pick];
        Decision::on_grid(&self.points[pick], pick)
    }

    fn observe(&mut self, observation: &Observation) {
        let m = self.log_weights.len() as f64;
        let estimate = observation.total_reward() / self.current_prob;
        self.log_weights[self.current] += self.eta * estimate / m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{enumerate_meta_arms, SimplexGrid};
    use rand::SeedableRng;

    #[test]
    fn starts_uniform() {
        let mut e = Exp3::new(3, 1000);
        let d = e.select(1);
        for &p in d.arm.probs() {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn single_unit_reward_update() {
        let eta = 0.1;
        let mut e = Exp3::with_rate(2, eta);
        let d = e.select(1);
        let obs =
            Observation { round: 1, deployed: d.arm.clone(), rewards: vec![Some(1.0), None], impact: vec![0.5, 0.5] };
        e.observe(&obs);
        // hand trace: r_hat = 1 / 0.5 = 2, log w_1 += eta * 2 / 2
        let w = e.weights();
        assert!((w[0] / w[1] - (eta * 2.0 / 2.0).exp()).abs() < 1e-12);
        let p = e.distribution();
        let expected = (1.0 - eta) * eta.exp() / (eta.exp() + 1.0) + eta / 2.0;
        assert!((p[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn sampled_variant_pulls_one_arm() {
        let mut e = Exp3::sampled(2, 1000, StreamRng::seed_from_u64(5));
        let d = e.select(1);
        let arm = d.arm.probs().iter().position(|&p| p == 1.0).unwrap();
        let mut rewards = vec![None; 2];
        rewards[arm] = Some(1.0);
        e.observe(&Observation { round: 1, deployed: d.arm, rewards, impact: vec![0.0; 2] });
        // q = 1/2 for both arms at the start: log w += eta * 2 / 2
        let w = e.weights();
        assert!((w[arm] / w[1 - arm] - e.rate().exp()).abs() < 1e-12);
    }

    #[test]
    fn rate_formula() {
        let t = 50_000u64;
        let expected = (2.0 * 2f64.ln() / ((std::f64::consts::E - 1.0) * t as f64)).sqrt();
        assert!((exp3_rate(2, t) - expected).abs() < 1e-15);
        assert_eq!(exp3_rate(1, t), 0.0);
        assert_eq!(exp3_rate(50, 1), 1.0);
    }

    #[test]
    fn single_meta_arm_always_chosen() {
        let grid = SimplexGrid::new(2, 2).unwrap();
        let mut m = MetaExp3::new(enumerate_meta_arms(&grid).unwrap(), 100, StreamRng::seed_from_u64(3));
        for t in 1..50 {
            let d = m.select(t);
            assert_eq!(d.grid_index, Some(0));
            let obs = Observation {
                round: t,
                deployed: d.arm.clone(),
                rewards: vec![Some(1.0), Some(0.0)],
                impact: vec![0.5, 0.5],
            };
            m.observe(&obs);
        }
    }

    #[test]
    fn meta_weights_follow_reward() {
        let grid = SimplexGrid::new(2, 4).unwrap();
        let mut m = MetaExp3::new(enumerate_meta_arms(&grid).unwrap(), 2000, StreamRng::seed_from_u64(3));
        for t in 1..=2000 {
            let d = m.select(t);
            let good = d.grid_index == Some(2);
            let obs = Observation {
                round: t,
                deployed: d.arm.clone(),
                rewards: vec![Some(if good { 1.0 } else { 0.0 }), None],
                impact: vec![0.5, 0.5],
            };
            m.observe(&obs);
        }
        let q = m.distribution();
        assert!(q[2] > q[0] && q[2] > q[1]);
    }
}
