//! Meta arms on the discretized probability simplex.
//!
//! Grid points are stored as integer level counts over a common denominator
//! `n`, so membership and the sum-to-one constraint are exact. Conversion to
//! floating point only happens when a point is handed to an environment.

use crate::environment::RewardModel;
use crate::error::{Error, Result};

/// Absolute tolerance on `sum(probs) == 1`.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A mixed strategy over `K` base arms.
#[derive(Debug, Clone, PartialEq)]
pub struct MetaArm {
    probs: Vec<f64>,
}

impl MetaArm {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidMetaArm("no arms".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0 && **p <= 1.0)) {
            return Err(Error::InvalidMetaArm(format!("entry {p} outside [0, 1]")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidMetaArm(format!("entries sum to {sum}")));
        }
        Ok(Self { probs })
    }

    /// The point mass on `arm`.
    pub fn one_hot(arms: usize, arm: usize) -> Self {
        let mut probs = vec![0.0; arms];
        probs[arm] = 1.0;
        Self { probs }
    }

    pub fn uniform(arms: usize) -> Self {
        Self { probs: vec![1.0 / arms as f64; arms] }
    }

    pub fn arms(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, arm: usize) -> f64 {
        self.probs[arm]
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }
}

/// A point of the `1/n` grid, stored as integer levels summing to `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPoint {
    levels: Vec<u32>,
    denominator: u32,
}

impl GridPoint {
    pub fn new(levels: Vec<u32>, denominator: u32) -> Result<Self> {
        if levels.is_empty() || denominator == 0 {
            return Err(Error::InvalidMetaArm("empty grid point".into()));
        }
        if levels.iter().any(|&l| l == 0) {
            return Err(Error::InvalidMetaArm("grid levels must be positive".into()));
        }
        let sum: u64 = levels.iter().map(|&l| u64::from(l)).sum();
        if sum != u64::from(denominator) {
            return Err(Error::InvalidMetaArm(format!("levels sum to {sum}, expected {denominator}")));
        }
        Ok(Self { levels, denominator })
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    pub fn arms(&self) -> usize {
        self.levels.len()
    }

    pub fn prob(&self, arm: usize) -> f64 {
        f64::from(self.levels[arm]) / f64::from(self.denominator)
    }

    pub fn to_meta_arm(&self) -> MetaArm {
        let n = f64::from(self.denominator);
        MetaArm { probs: self.levels.iter().map(|&l| f64::from(l) / n).collect() }
    }

    /// The discretized arms contained in this point, one per base arm.
    pub fn discretized_arms(&self) -> impl Iterator<Item = DiscretizedArm> + '_ {
        self.levels.iter().enumerate().map(|(arm, &level)| DiscretizedArm { arm, level })
    }
}

/// A base arm paired with a grid probability `level / n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiscretizedArm {
    pub arm: usize,
    pub level: u32,
}

/// The `1/n` grid over the `K`-arm simplex, levels restricted to `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplexGrid {
    arms: usize,
    levels: u32,
}

/// Builds a grid from a step `epsilon`, which must equal `1/n` for an integer `n`.
///
/// The grid is returned even when `K * epsilon > 1`; such a grid is flagged
/// infeasible and refuses enumeration.
pub fn make_grid(arms: usize, epsilon: f64) -> Result<SimplexGrid> {
    let levels = levels_for_step(epsilon)?;
    SimplexGrid::new(arms, levels)
}

/// Returns `n` when `epsilon == 1/n` within `1e-9`.
pub fn levels_for_step(epsilon: f64) -> Result<u32> {
    if !(epsilon.is_finite() && epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidDiscretization(epsilon));
    }
    let n = (1.0 / epsilon).round();
    if n < 1.0 || n > f64::from(u32::MAX) || (n * epsilon - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDiscretization(epsilon));
    }
    Ok(n as u32)
}

impl SimplexGrid {
    pub fn new(arms: usize, levels: u32) -> Result<Self> {
        if arms == 0 {
            return Err(Error::Config("grid needs at least one arm".into()));
        }
        if levels == 0 {
            return Err(Error::InvalidDiscretization(f64::INFINITY));
        }
        Ok(Self { arms, levels })
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    /// The denominator `n = 1/epsilon`.
    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn epsilon(&self) -> f64 {
        1.0 / f64::from(self.levels)
    }

    pub fn is_feasible(&self) -> bool {
        self.arms as u64 <= u64::from(self.levels)
    }

    /// Number of meta arms, `C(n-1, K-1)`.
    pub fn meta_arm_count(&self) -> u128 {
        if !self.is_feasible() {
            return 0;
        }
        binomial(u64::from(self.levels) - 1, self.arms as u64 - 1)
    }

    /// Highest level a single base arm can take while the others stay at one.
    pub fn max_level(&self) -> u32 {
        self.levels + 1 - self.arms as u32
    }

    /// Number of discretized arms that occur in at least one meta arm.
    pub fn discretized_arm_count(&self) -> usize {
        if self.is_feasible() {
            self.arms * self.max_level() as usize
        } else {
            0
        }
    }

    /// Dense index of a discretized arm, in `0..discretized_arm_count()`.
    pub fn slot(&self, d: DiscretizedArm) -> usize {
        d.arm * self.max_level() as usize + (d.level as usize - 1)
    }

    pub fn compositions(&self) -> Result<Compositions> {
        if !self.is_feasible() {
            return Err(Error::EmptyActionSpace { arms: self.arms, levels: self.levels });
        }
        Ok(Compositions::new(self.arms, self.levels))
    }
}

/// Lexicographically ordered iterator over positive integer vectors of a
/// fixed length summing to `n`.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
    total: u32,
}

impl Compositions {
    fn new(arms: usize, total: u32) -> Self {
        let mut first = vec![1; arms];
        first[arms - 1] = total - (arms as u32 - 1);
        Self { current: Some(first), total }
    }
}

impl Iterator for Compositions {
    type Item = GridPoint;

    fn next(&mut self) -> Option<GridPoint> {
        let current = self.current.take()?;
        let k = current.len();
        let mut next = current.clone();
        let mut suffix: u32 = current[k - 1];
        let mut advanced = false;
        for i in (0..k.saturating_sub(1)).rev() {
            // positions i+1..k hold `suffix`; each needs at least one
            let tail = (k - 1 - i) as u32;
            if suffix > tail {
                next[i] += 1;
                for slot in next.iter_mut().take(k - 1).skip(i + 1) {
                    *slot = 1;
                }
                next[k - 1] = suffix - 1 - (tail - 1);
                advanced = true;
                break;
            }
            suffix += current[i];
        }
        if advanced {
            self.current = Some(next);
        }
        Some(GridPoint { levels: current, denominator: self.total })
    }
}

/// All meta arms of a feasible grid, in lexicographic order.
pub fn enumerate_meta_arms(grid: &SimplexGrid) -> Result<Vec<GridPoint>> {
    Ok(grid.compositions()?.collect())
}

/// `C(n, k)` in exact integer arithmetic.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// The best fixed strategy on a grid and its utility.
#[derive(Debug, Clone, PartialEq)]
pub struct Benchmark {
    pub point: GridPoint,
    pub utility: f64,
}

impl Benchmark {
    pub fn arm(&self) -> MetaArm {
        self.point.to_meta_arm()
    }
}

/// Exhaustive search for `argmax_p sum_k p_k r_k(p_k)` over the grid of step
/// `resolution`; the lexicographically first maximizer wins ties.
pub fn best_fixed_strategy(model: &RewardModel, resolution: f64) -> Result<Benchmark> {
    let grid = make_grid(model.arms(), resolution)?;
    best_fixed_strategy_on(model, &grid)
}

pub fn best_fixed_strategy_on(model: &RewardModel, grid: &SimplexGrid) -> Result<Benchmark> {
    if grid.arms() != model.arms() {
        return Err(Error::DimensionMismatch { expected: model.arms(), got: grid.arms() });
    }
    let n = grid.levels();
    let top = grid.max_level();
    // weighted[k][j-1] = (j/n) * r_k(j/n)
    let weighted: Vec<Vec<f64>> = (0..grid.arms())
        .map(|k| {
            (1..=top)
                .map(|j| {
                    let x = f64::from(j) / f64::from(n);
                    x * model.mean_unchecked(k, x)
                })
                .collect()
        })
        .collect();
    let mut best: Option<Benchmark> = None;
    for point in grid.compositions()? {
        let utility: f64 = point.levels().iter().zip(&weighted).map(|(&j, row)| row[j as usize - 1]).sum();
        if best.as_ref().map_or(true, |b| utility > b.utility) {
            best = Some(Benchmark { point, utility });
        }
    }
    best.ok_or(Error::EmptyActionSpace { arms: grid.arms(), levels: n })
}

/// Benchmark grid denominator for a policy grid with `policy_levels` levels.
///
/// Targets a step of `min(epsilon/4, 1/200)` and rounds the denominator up to
/// a multiple of `policy_levels`, so every policy grid point is also a
/// benchmark grid point.
pub fn benchmark_levels(policy_levels: u32) -> u32 {
    let n = policy_levels.max(1);
    let target = (4 * n).max(200);
    target.div_ceil(n) * n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn levels(points: &[GridPoint]) -> Vec<Vec<u32>> {
        points.iter().map(|p| p.levels().to_vec()).collect()
    }

    #[test]
    fn grid_from_quarter_step() {
        let g = make_grid(2, 0.25).unwrap();
        assert_eq!(g.levels(), 4);
        assert!(g.is_feasible());
    }

    #[test]
    fn non_reciprocal_step_rejected() {
        assert_eq!(make_grid(2, 0.3), Err(Error::InvalidDiscretization(0.3)));
        assert!(make_grid(2, 0.0).is_err());
        assert!(make_grid(2, 1.5).is_err());
    }

    #[test]
    fn infeasible_grid_is_constructible_but_not_enumerable() {
        let g = make_grid(3, 0.5).unwrap();
        assert!(!g.is_feasible());
        assert_eq!(enumerate_meta_arms(&g), Err(Error::EmptyActionSpace { arms: 3, levels: 2 }));
    }

    #[test]
    fn two_arms_quarter_grid() {
        let g = make_grid(2, 0.25).unwrap();
        let arms = enumerate_meta_arms(&g).unwrap();
        assert_eq!(levels(&arms), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        let probs: Vec<Vec<f64>> = arms.iter().map(|p| p.to_meta_arm().into_probs()).collect();
        assert_eq!(probs, vec![vec![0.25, 0.75], vec![0.5, 0.5], vec![0.75, 0.25]]);
    }

    #[test]
    fn single_arm_grid() {
        let g = make_grid(1, 0.25).unwrap();
        let arms = enumerate_meta_arms(&g).unwrap();
        assert_eq!(levels(&arms), vec![vec![4]]);
        assert_eq!(arms[0].to_meta_arm().probs(), &[1.0]);
    }

    #[test]
    fn three_arms_quarter_grid() {
        let g = make_grid(3, 0.25).unwrap();
        let arms = enumerate_meta_arms(&g).unwrap();
        assert_eq!(levels(&arms), vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
    }

    #[test]
    fn enumeration_is_strictly_increasing() {
        let g = SimplexGrid::new(4, 9).unwrap();
        let arms = enumerate_meta_arms(&g).unwrap();
        assert!(arms.windows(2).all(|w| w[0].levels() < w[1].levels()));
        assert_eq!(arms.len() as u128, g.meta_arm_count());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn meta_arm_validation() {
        assert!(MetaArm::new(vec![0.3, 0.7]).is_ok());
        assert!(MetaArm::new(vec![0.3, 0.6]).is_err());
        assert!(MetaArm::new(vec![-0.1, 1.1]).is_err());
        assert!(MetaArm::new(vec![]).is_err());
        assert!(GridPoint::new(vec![0, 4], 4).is_err());
        assert!(GridPoint::new(vec![1, 2], 4).is_err());
    }

    #[test]
    fn slots_are_dense() {
        let g = SimplexGrid::new(3, 6).unwrap();
        let mut seen = vec![false; g.discretized_arm_count()];
        for arm in 0..3 {
            for level in 1..=g.max_level() {
                seen[g.slot(DiscretizedArm { arm, level })] = true;
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn benchmark_grid_contains_policy_grid() {
        for n in 1..80 {
            let m = benchmark_levels(n);
            assert_eq!(m % n, 0);
            assert!(m >= 200 && m >= 4 * n);
        }
        assert_eq!(benchmark_levels(21), 210);
        assert_eq!(benchmark_levels(100), 400);
    }
}
