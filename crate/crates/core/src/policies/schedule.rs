use crate::error::{Error, Result};

/// Tuning of the grid and phase lengths from the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleOptions {
    /// Multiplier on `(T / ln T)^(1/3)` when choosing the grid denominator.
    pub grid_scale: f64,
    /// Upper bound on the grid denominator.
    pub max_levels: u32,
}

impl Default for ScheduleOptions {
    fn default() -> Self {
        Self { grid_scale: 1.0, max_levels: 100 }
    }
}

/// Derived grid and phase parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    /// Grid denominator `n`; the step is `1/n`.
    pub levels: u32,
    /// Approaching-stage length `s_a`.
    pub approach: u32,
    /// Phase length `L`.
    pub phase_len: u32,
}

impl Schedule {
    pub fn epsilon(&self) -> f64 {
        1.0 / f64::from(self.levels)
    }
}

/// Grid denominator `clamp(round(c * (T / ln T)^(1/3)), K, n_max)`.
pub fn grid_levels(horizon: u64, arms: usize, options: &ScheduleOptions) -> Result<u32> {
    if horizon < 2 {
        return Err(Error::InvalidHorizon(horizon));
    }
    let t = horizon as f64;
    let raw = ((t / t.ln()).cbrt() * options.grid_scale).round();
    let lo = arms as f64;
    let hi = f64::from(options.max_levels).max(lo);
    Ok(raw.clamp(lo, hi) as u32)
}

/// `s_a = max(1, ceil(ln(epsilon^(1/3) / K) / ln gamma))`, and 1 when `gamma = 0`.
pub fn approach_len(epsilon: f64, arms: usize, gamma: f64) -> u32 {
    if gamma <= 0.0 {
        return 1;
    }
    let s = ((epsilon.cbrt() / arms as f64).ln() / gamma.ln()).ceil();
    if s.is_finite() && s > 1.0 {
        s as u32
    } else {
        1
    }
}

/// `L = ceil(s_a / (1 - rho))`, at least `s_a + 1` so every phase estimates.
pub fn phase_len(approach: u32, rho: f64) -> Result<u32> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Config(format!("estimation ratio {rho} outside (0, 1)")));
    }
    let l = (f64::from(approach) / (1.0 - rho)).ceil() as u32;
    Ok(l.max(approach + 1))
}

/// Full parameter schedule for a horizon. Deterministic.
///
/// `_max_lipschitz` enters only the bias bound; see [`bias_bound`].
pub fn schedule_params(
    horizon: u64,
    arms: usize,
    gamma: f64,
    rho: f64,
    _max_lipschitz: f64,
    options: &ScheduleOptions,
) -> Result<Schedule> {
    let levels = grid_levels(horizon, arms, options)?;
    let approach = approach_len(1.0 / f64::from(levels), arms, gamma);
    let phase_len = phase_len(approach, rho)?;
    Ok(Schedule { levels, approach, phase_len })
}

/// Bias bound `K * gamma^(s_a) * (max_k L_k + 1)` of phase estimates.
pub fn bias_bound(arms: usize, gamma: f64, approach: u32, max_lipschitz: f64) -> f64 {
    arms as f64 * gamma.powi(approach as i32) * (max_lipschitz + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_for_hundred_thousand_rounds() {
        // (1e5 / ln 1e5)^(1/3) = 20.56...
        let t = 1e5f64;
        let oracle = (t / t.ln()).powf(1.0 / 3.0);
        assert!((oracle - 20.56).abs() < 0.01);
        assert_eq!(grid_levels(100_000, 2, &ScheduleOptions::default()).unwrap(), 21);
    }

    #[test]
    fn grid_is_clamped() {
        let o = ScheduleOptions { grid_scale: 1.0, max_levels: 10 };
        assert_eq!(grid_levels(100_000, 2, &o).unwrap(), 10);
        assert_eq!(grid_levels(3, 5, &ScheduleOptions::default()).unwrap(), 5);
        assert_eq!(grid_levels(1, 2, &o), Err(Error::InvalidHorizon(1)));
    }

    #[test]
    fn approach_lengths() {
        assert_eq!(approach_len(1.0 / 21.0, 2, 0.0), 1);
        // ln((1/21)^(1/3) / 2) / ln 0.5 = 2.46...
        let raw = ((1.0f64 / 21.0).cbrt() / 2.0).ln() / 0.5f64.ln();
        assert!(raw > 2.0 && raw < 3.0);
        assert_eq!(approach_len(1.0 / 21.0, 2, 0.5), 3);
        assert!(approach_len(1.0 / 21.0, 2, 0.9) > approach_len(1.0 / 21.0, 2, 0.5));
    }

    #[test]
    fn phase_lengths() {
        assert_eq!(phase_len(8, 0.2).unwrap(), 10);
        assert_eq!(phase_len(1, 0.2).unwrap(), 2);
        assert_eq!(phase_len(2, 0.2).unwrap(), 3);
        assert!(phase_len(2, 1.0).is_err());
        assert!(phase_len(2, 0.0).is_err());
    }

    #[test]
    fn bias_examples() {
        assert!((bias_bound(2, 0.5, 3, 1.0) - 0.5).abs() < 1e-15);
        assert_eq!(bias_bound(2, 0.0, 1, 1.0), 0.0);
        for s in 1..30 {
            assert!(bias_bound(3, 0.7, s + 1, 0.8) < bias_bound(3, 0.7, s, 0.8));
        }
    }

    #[test]
    fn full_schedule() {
        let s = schedule_params(100_000, 2, 0.0, 0.2, 1.0, &ScheduleOptions::default()).unwrap();
        assert_eq!(s, Schedule { levels: 21, approach: 1, phase_len: 2 });
        assert!(schedule_params(1, 2, 0.0, 0.2, 1.0, &ScheduleOptions::default()).is_err());
    }
}
