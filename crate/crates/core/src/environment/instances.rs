//! Generators for the experiment and lower-bound instance families.

use rand::seq::index;
use rand::Rng;

use super::model::RewardModel;
use crate::error::{Error, Result};
use crate::simplex::levels_for_step;

/// Range the scaled-Gaussian centers are drawn from.
pub const GAUSSIAN_CENTER_RANGE: (f64, f64) = (0.45, 0.55);

/// Scaled-Gaussian model with centers drawn uniformly from [0.45, 0.55].
pub fn draw_gaussian<R: Rng + ?Sized>(arms: usize, rng: &mut R) -> Result<RewardModel> {
    let (lo, hi) = GAUSSIAN_CENTER_RANGE;
    let centers = (0..arms).map(|_| rng.gen_range(lo..hi)).collect();
    RewardModel::scaled_gaussian(centers)
}

/// Bump instance with a hidden optimum drawn uniformly from all compositions of
/// one into odd multiples of `height`. Every bump has slope one.
pub fn make_bump_instance<R: Rng + ?Sized>(arms: usize, height: f64, rng: &mut R) -> Result<RewardModel> {
    let layout = BumpLayout::new(arms, height)?;
    let odd = layout.sample(rng);
    let peaks = odd.iter().map(|&o| f64::from(o) / f64::from(layout.n)).collect();
    RewardModel::bump(peaks, height, vec![1.0; arms])
}

/// All feasible bump optima for `(arms, height)`, as odd numerators over `1/height`.
pub fn bump_optima(arms: usize, height: f64) -> Result<Vec<Vec<u32>>> {
    let layout = BumpLayout::new(arms, height)?;
    let grid = crate::simplex::SimplexGrid::new(arms, layout.half_sum)?;
    Ok(grid.compositions()?.map(|c| c.levels().iter().map(|&j| 2 * j - 1).collect()).collect())
}

/// `sum_k (2 j_k - 1) = n` with `j_k >= 1` is equivalent to
/// `sum_k j_k = (n + K) / 2`, which needs `n >= K` and `n - K` even.
struct BumpLayout {
    arms: usize,
    n: u32,
    half_sum: u32,
}

impl BumpLayout {
    fn new(arms: usize, height: f64) -> Result<Self> {
        if arms < 2 {
            return Err(Error::InfeasibleInstance("bump instances need at least two arms".into()));
        }
        if height > 0.5 {
            return Err(Error::InfeasibleInstance(format!("bump height {height} exceeds 1/2")));
        }
        let n = levels_for_step(height)?;
        let k = arms as u32;
        if n < k || (n - k) % 2 != 0 {
            return Err(Error::InfeasibleInstance(format!("no {arms} odd multiples of {height} sum to one")));
        }
        Ok(Self { arms, n, half_sum: (n + k) / 2 })
    }

    /// Uniform composition via uniformly chosen cut points (stars and bars).
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        let k = self.arms;
        let mut cuts: Vec<u32> =
            index::sample(rng, self.half_sum as usize - 1, k - 1).into_iter().map(|c| c as u32 + 1).collect();
        cuts.sort_unstable();
        let mut parts = Vec::with_capacity(k);
        let mut prev = 0;
        for c in cuts.into_iter().chain(std::iter::once(self.half_sum)) {
            parts.push(2 * (c - prev) - 1);
            prev = c;
        }
        parts
    }
}
