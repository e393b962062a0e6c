//! Subcommand implementations. Each returns what it would print so the
//! binary and the tests share one code path.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use impactbandit::environment::{draw_gaussian, make_bump_instance};
use impactbandit::harness::slope_of;
use impactbandit::policies::{GridSpec, PolicyKind, PolicySpec};
use impactbandit::rng::{mix, run_seed, stream, Stream};
use impactbandit::simplex::{benchmark_levels, enumerate_meta_arms, SimplexGrid};
use impactbandit::{
    default_checkpoints, replicate, run_seeds, sublinearity_slope, AggregateCurve, EnvSpec, RewardModel, Scenario,
};

use crate::config::{build_fixed_model, read_model_file, serialize_model, ExperimentConfig, ModelSource};
use crate::error::{CliError, Result};
use crate::format::{csv, dat, g9, CurveRow};

/// Horizon below which the negative demo refuses to draw asymptotic
/// conclusions.
pub const DEMO_MIN_HORIZON: u64 = 1_000;

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// A finished curve of one policy at one discount value.
#[derive(Debug, Clone)]
pub struct CurveResult {
    pub policy: String,
    pub gamma: f64,
    pub curve: AggregateCurve,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub curves: Vec<CurveResult>,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// Model for instance `i` of an experiment.
pub fn instance_model(source: &ModelSource, instance_seed: u64, i: usize) -> Result<RewardModel> {
    let mut rng = stream(run_seed(instance_seed, i as u64), Stream::Instance);
    Ok(match source {
        ModelSource::Gaussian { arms, centers: None } => draw_gaussian(*arms, &mut rng)?,
        ModelSource::Bump { arms, height, peaks: None, slopes: None } => make_bump_instance(*arms, *height, &mut rng)?,
        ModelSource::Bump { peaks: None, .. } => {
            return Err(CliError::config("bump `slopes` need explicit `peaks`"));
        }
        ModelSource::File(path) => read_model_file(path)?,
        fixed => build_fixed_model(fixed)?,
    })
}

/// Seeds of the runs on instance `i`.
pub fn instance_run_seeds(master: u64, i: usize, runs: usize) -> Vec<u64> {
    if i == 0 {
        run_seeds(master, runs)
    } else {
        run_seeds(mix(master, i as u64), runs)
    }
}

/// Benchmark grid shared by every policy of an experiment.
pub fn experiment_benchmark_levels(config: &ExperimentConfig, arms: usize) -> Result<u32> {
    if let Some(b) = config.benchmark_levels {
        return Ok(b);
    }
    let n = match config.grid {
        GridSpec::Auto(o) => impactbandit::policies::grid_levels(config.horizon, arms, &o)?,
        GridSpec::Levels(n) => n,
    };
    Ok(benchmark_levels(n))
}

/// Executes every (discount, policy) pair of an experiment on the current
/// rayon pool and writes `<label>.csv`, `regret.csv` and `regret.dat` into
/// `out_dir`.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput> {
    let env = &config.environment;
    if env.instances > 1 && !env.model.is_random() {
        return Err(CliError::config("`instances` > 1 needs a randomly drawn model (omit centers / peaks)"));
    }
    let checkpoints = config.checkpoint_list();
    let models: Vec<RewardModel> =
        (0..env.instances).map(|i| instance_model(&env.model, env.instance_seed, i)).collect::<Result<_>>()?;
    let arms = models[0].arms();
    let bench = experiment_benchmark_levels(config, arms)?;

    let mut curves = Vec::new();
    for &gamma in &env.gammas {
        let scenarios: Vec<Scenario> = models
            .iter()
            .map(|m| Scenario::new(EnvSpec::new(m.clone(), gamma)?, bench))
            .collect::<impactbandit::Result<_>>()?;
        for spec in &config.policies {
            let per_instance = scenarios
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let seeds = instance_run_seeds(config.master_seed, i, config.runs);
                    replicate(s, spec, config.horizon, &seeds, &checkpoints)
                })
                .collect::<impactbandit::Result<Vec<_>>>()?;
            let curve = AggregateCurve::pool(&per_instance)?;
            curves.push(CurveResult { policy: spec.label().to_string(), gamma, curve });
        }
    }

    create_dir(out_dir)?;
    let rows: Vec<CurveRow> =
        curves.iter().map(|c| CurveRow { policy: &c.policy, gamma: c.gamma, curve: &c.curve }).collect();
    let mut files = Vec::new();
    for spec in &config.policies {
        let label = spec.label();
        let path = out_dir.join(format!("{label}.csv"));
        write(&path, &csv(rows.iter().filter(|r| r.policy == label)))?;
        files.push(path);
    }
    for (name, text) in [("regret.csv", csv(&rows)), ("regret.dat", dat(&rows))] {
        let path = out_dir.join(name);
        write(&path, &text)?;
        files.push(path);
    }

    let mut summary = String::new();
    for c in &curves {
        let slope = sublinearity_slope(&c.curve, 0.5).map(g9).unwrap_or_else(|_| "undefined".into());
        let _ = writeln!(
            summary,
            "{:<12} gamma={:<6} final_regret={} std={} runs={} slope={}",
            c.policy,
            g9(c.gamma),
            g9(c.curve.final_mean()),
            g9(c.curve.final_std()),
            c.curve.runs,
            slope
        );
    }
    Ok(RunOutput { curves, files, summary })
}

/// Lists the meta arms of the grid with step `1/levels`, one per line,
/// followed by the count.
pub fn enumerate(arms: usize, levels: u32, count_only: bool) -> Result<String> {
    let grid = SimplexGrid::new(arms, levels)?;
    let mut out = String::new();
    if count_only {
        if !grid.is_feasible() {
            return Err(impactbandit::Error::EmptyActionSpace { arms, levels }.into());
        }
    } else {
        for p in enumerate_meta_arms(&grid)? {
            let probs: Vec<String> = (0..arms).map(|k| g9(p.prob(k))).collect();
            let _ = writeln!(out, "({})", probs.join(", "));
        }
    }
    let _ = writeln!(out, "count {}", grid.meta_arm_count());
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InstanceKind {
    Bump { arms: usize, height: f64 },
    Example1 { epsilon: f64 },
    Gaussian { arms: usize },
}

/// Model file text for a generated instance. `example1` consumes no
/// randomness.
pub fn gen_instance(kind: InstanceKind, seed: u64) -> Result<String> {
    let mut rng = stream(seed, Stream::Instance);
    let model = match kind {
        InstanceKind::Bump { arms, height } => make_bump_instance(arms, height, &mut rng)?,
        InstanceKind::Example1 { epsilon } => RewardModel::example1(epsilon)?,
        InstanceKind::Gaussian { arms } => draw_gaussian(arms, &mut rng)?,
    };
    Ok(serialize_model(&model))
}

#[derive(Debug, Clone)]
pub struct DemoOptions {
    pub horizon: u64,
    pub epsilon_inst: f64,
    pub seed: u64,
    pub runs: usize,
    pub prob_samples: usize,
}

#[derive(Debug, Clone)]
pub struct DemoLine {
    pub policy: String,
    /// `lambda(T) / T`.
    pub final_rate: f64,
    /// Mean per-round regret over rounds `(T/2, T]`.
    pub late_rate: f64,
    pub slope: Option<f64>,
    pub curve: AggregateCurve,
}

#[derive(Debug, Clone)]
pub struct DemoOutput {
    pub lines: Vec<DemoLine>,
    pub short_horizon: bool,
    pub summary: String,
}

pub fn demo_policies(prob_samples: usize) -> Vec<PolicySpec> {
    vec![
        PolicySpec::new(PolicyKind::Thompson { prob_samples }),
        PolicySpec::named("ucb1").expect("known"),
        PolicySpec::named("aducb").expect("known"),
        PolicySpec::named("hducb").expect("known"),
    ]
}

/// Checkpoints for the demo: the default grid plus `T/2`.
pub fn demo_checkpoints(horizon: u64) -> Vec<u64> {
    let mut cps = default_checkpoints(horizon, 100);
    let half = horizon / 2;
    if half >= 1 && !cps.contains(&half) {
        cps.push(half);
        cps.sort_unstable();
    }
    cps
}

/// Mean per-round regret over `(from, T]` from a curve with `from` among its
/// checkpoints.
pub fn late_rate(curve: &AggregateCurve, from: u64) -> Option<f64> {
    let t = *curve.checkpoints.last()?;
    let start = if from == 0 { 0.0 } else { curve.mean_at(from)? };
    (t > from).then(|| (curve.final_mean() - start) / (t - from) as f64)
}

/// Runs the mean-following learners and the UCB learners on the two-arm
/// piecewise-linear instance with `gamma = 0`.
pub fn negative_demo(opts: &DemoOptions) -> Result<DemoOutput> {
    if opts.horizon < 2 {
        return Err(impactbandit::Error::InvalidHorizon(opts.horizon).into());
    }
    let model = RewardModel::example1(opts.epsilon_inst)?;
    let grid = impactbandit::policies::grid_levels(opts.horizon, 2, &Default::default())?;
    let scenario = Scenario::new(EnvSpec::new(model, 0.0)?, benchmark_levels(grid))?;
    let cps = demo_checkpoints(opts.horizon);
    let seeds = run_seeds(opts.seed, opts.runs);
    let short_horizon = opts.horizon < DEMO_MIN_HORIZON;
    let mut lines = Vec::new();
    for spec in demo_policies(opts.prob_samples) {
        let curve = replicate(&scenario, &spec, opts.horizon, &seeds, &cps)?;
        let final_rate = curve.final_mean() / opts.horizon as f64;
        let late_rate = late_rate(&curve, opts.horizon / 2).unwrap_or(final_rate);
        let slope = slope_of(&curve.checkpoints, &curve.mean, 0.5).ok();
        lines.push(DemoLine { policy: spec.label().to_string(), final_rate, late_rate, slope, curve });
    }
    let mut summary = String::new();
    for l in &lines {
        let slope = l.slope.map(g9).unwrap_or_else(|| "undefined".into());
        let _ = write!(
            summary,
            "{:<6} final_rate={} late_rate={} slope={}",
            l.policy,
            g9(l.final_rate),
            g9(l.late_rate),
            slope
        );
        if short_horizon {
            summary.push_str(" [horizon too short for asymptotic claim]");
        }
        summary.push('\n');
    }
    Ok(DemoOutput { lines, short_horizon, summary })
}

/// Writes `negative_demo.csv` and `negative_demo.dat`.
pub fn write_demo(out: &DemoOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let rows: Vec<CurveRow> =
        out.lines.iter().map(|l| CurveRow { policy: &l.policy, gamma: 0.0, curve: &l.curve }).collect();
    let csv_path = dir.join("negative_demo.csv");
    let dat_path = dir.join("negative_demo.dat");
    write(&csv_path, &csv(&rows))?;
    write(&dat_path, &dat(&rows))?;
    Ok(vec![csv_path, dat_path])
}
