use crate::error::{Error, Result};

/// Mean-reward curves `r_k : [0, 1] -> [0, 1]`, one per base arm.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardModel {
    kind: ModelKind,
    lipschitz: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    /// `r_k(x) = exp(-(x - tau_k)^2)`: a Gaussian pdf with variance 0.5
    /// divided by its peak value.
    ScaledGaussian { centers: Vec<f64> },
    /// Two-arm piecewise-linear instance on which mean-following learners
    /// lock onto the wrong strategy. Optimum at `(1 - epsilon, epsilon)`.
    Example1 { epsilon: f64 },
    /// Flat at 1/2 except a tent of height `height` and slope `slopes[k]`
    /// centered at `peaks[k]`.
    Bump { peaks: Vec<f64>, height: f64, slopes: Vec<f64> },
    /// Piecewise-linear interpolation through `(x, y)` knots covering `[0, 1]`.
    Table { knots: Vec<Vec<(f64, f64)>> },
}

impl RewardModel {
    pub fn scaled_gaussian(centers: Vec<f64>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::InvalidModel("no arms".into()));
        }
        if centers.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::InvalidModel("gaussian centers must lie in [0, 1]".into()));
        }
        let lipschitz = centers.iter().map(|&c| gaussian_lipschitz(c)).collect();
        Ok(Self { kind: ModelKind::ScaledGaussian { centers }, lipschitz })
    }

    pub fn example1(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::InvalidModel(format!("example1 epsilon {epsilon} outside (0, 1/2)")));
        }
        let lipschitz = vec![1.0 / (1.0 - epsilon), (0.5 / epsilon).max(0.5)];
        Ok(Self { kind: ModelKind::Example1 { epsilon }, lipschitz })
    }

    pub fn bump(peaks: Vec<f64>, height: f64, slopes: Vec<f64>) -> Result<Self> {
        if peaks.is_empty() || peaks.len() != slopes.len() {
            return Err(Error::InvalidModel("bump peaks and slopes must match".into()));
        }
        if !(height > 0.0 && height <= 0.5) {
            return Err(Error::InvalidModel(format!("bump height {height} outside (0, 1/2]")));
        }
        if peaks.iter().any(|p| !(0.0..=1.0).contains(p)) || slopes.iter().any(|l| *l <= 0.0) {
            return Err(Error::InvalidModel("bump peaks must lie in [0, 1], slopes > 0".into()));
        }
        let lipschitz = slopes.clone();
        Ok(Self { kind: ModelKind::Bump { peaks, height, slopes }, lipschitz })
    }

    pub fn table(knots: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidModel("no arms".into()));
        }
        let mut lipschitz = Vec::with_capacity(knots.len());
        for (k, arm) in knots.iter().enumerate() {
            if arm.len() < 2 {
                return Err(Error::InvalidModel(format!("arm {k}: need at least two knots")));
            }
            if arm[0].0 != 0.0 || arm[arm.len() - 1].0 != 1.0 {
                return Err(Error::InvalidModel(format!("arm {k}: knots must span [0, 1]")));
            }
            if arm.iter().any(|&(_, y)| !(0.0..=1.0).contains(&y)) {
                return Err(Error::InvalidModel(format!("arm {k}: means must lie in [0, 1]")));
            }
            let mut slope: f64 = 0.0;
            for w in arm.windows(2) {
                let dx = w[1].0 - w[0].0;
                if dx <= 0.0 {
                    return Err(Error::InvalidModel(format!("arm {k}: knots not increasing")));
                }
                slope = slope.max((w[1].1 - w[0].1).abs() / dx);
            }
            lipschitz.push(slope);
        }
        Ok(Self { kind: ModelKind::Table { knots }, lipschitz })
    }

    /// Every arm has mean `c` regardless of its input.
    pub fn constant(arms: usize, c: f64) -> Result<Self> {
        Self::table(vec![vec![(0.0, c), (1.0, c)]; arms])
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn arms(&self) -> usize {
        match &self.kind {
            ModelKind::ScaledGaussian { centers } => centers.len(),
            ModelKind::Example1 { .. } => 2,
            ModelKind::Bump { peaks, .. } => peaks.len(),
            ModelKind::Table { knots } => knots.len(),
        }
    }

    /// Declared Lipschitz constant of each arm's mean curve.
    pub fn lipschitz(&self) -> &[f64] {
        &self.lipschitz
    }

    pub fn max_lipschitz(&self) -> f64 {
        self.lipschitz.iter().copied().fold(0.0, f64::max)
    }

    pub fn mean(&self, arm: usize, x: f64) -> Result<f64> {
        if arm >= self.arms() {
            return Err(Error::DimensionMismatch { expected: self.arms(), got: arm + 1 });
        }
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        Ok(self.mean_unchecked(arm, x))
    }

    /// [`mean`](Self::mean) without validation; `x` is clamped into `[0, 1]`.
    pub fn mean_unchecked(&self, arm: usize, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let r = match &self.kind {
            ModelKind::ScaledGaussian { centers } => {
                let d = x - centers[arm];
                (-d * d).exp()
            }
            ModelKind::Example1 { epsilon } => {
                let e = *epsilon;
                if arm == 0 {
                    if x <= 1.0 - e {
                        x / (1.0 - e)
                    } else {
                        2.0 - e - x
                    }
                } else if x <= e {
                    x / (2.0 * e)
                } else {
                    -0.5 * x + 0.5 * (1.0 + e)
                }
            }
            ModelKind::Bump { peaks, height, slopes } => 0.5 + (height - slopes[arm] * (x - peaks[arm]).abs()).max(0.0),
            ModelKind::Table { knots } => interpolate(&knots[arm], x),
        };
        r.clamp(0.0, 1.0)
    }

    /// Expected utility of deploying `probs` when the arms' inputs are `inputs`.
    pub fn utility(&self, probs: &[f64], inputs: &[f64]) -> f64 {
        probs.iter().zip(inputs).enumerate().map(|(k, (&p, &x))| p * self.mean_unchecked(k, x)).sum()
    }
}

fn interpolate(knots: &[(f64, f64)], x: f64) -> f64 {
    let i = knots.partition_point(|&(kx, _)| kx <= x);
    if i == 0 {
        return knots[0].1;
    }
    if i == knots.len() {
        return knots[knots.len() - 1].1;
    }
    let (x0, y0) = knots[i - 1];
    let (x1, y1) = knots[i];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// `sup |d/dx exp(-(x - c)^2)|` over `x` in `[0, 1]`.
fn gaussian_lipschitz(center: f64) -> f64 {
    let reach = center.max(1.0 - center);
    let u = reach.min(std::f64::consts::FRAC_1_SQRT_2);
    2.0 * u * (-u * u).exp()
}
