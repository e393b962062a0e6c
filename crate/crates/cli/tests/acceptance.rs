//! Acceptance suite. Prints one verdict line per criterion and exits non-zero
//! if any criterion fails. Thresholds are fixed; a failure is reported, not
//! relaxed.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::Rng;

use impactbandit::environment::discount_mass;
use impactbandit::policies::{grid_levels, iw_reward};
use impactbandit::rng::{stream, Stream};
use impactbandit::simplex::binomial;
use impactbandit::{
    enumerate_meta_arms, replicate, run_seeds, sublinearity_slope, ActionDependentEnvironment, AggregateCurve, EnvSpec,
    Environment, Exp3Deploy, GridSpec, ImpactFunction, ImpactState, LogArgument, MetaArm, PolicyKind, PolicySpec,
    RewardModel, Scenario, ScheduleOptions, SimplexGrid,
};
use impactbandit_cli::commands::{demo_checkpoints, instance_model, late_rate};
use impactbandit_cli::config::ModelSource;

const RUNS: usize = 20;
const MASTER_SEED: u64 = 42;
const INSTANCE_SEED: u64 = 1;
/// Absolute floating-point slack on quantities of order one.
const ROUNDING: f64 = 4.0 * f64::EPSILON;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn timed(limit: Duration, pass: bool, elapsed: Duration, detail: String) -> Verdict {
    let within = elapsed <= limit;
    Verdict::new(pass && within, format!("{detail}; {:.1}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()))
}

fn gaussian_instance() -> RewardModel {
    instance_model(&ModelSource::Gaussian { arms: 2, centers: None }, INSTANCE_SEED, 0).unwrap()
}

fn scenario(model: &RewardModel, gamma: f64, horizon: u64) -> Scenario {
    let n = grid_levels(horizon, model.arms(), &ScheduleOptions::default()).unwrap();
    Scenario::for_policy_grid(EnvSpec::new(model.clone(), gamma).unwrap(), Some(n)).unwrap()
}

fn curve(scenario: &Scenario, spec: &PolicySpec, horizon: u64) -> AggregateCurve {
    replicate(scenario, spec, horizon, &run_seeds(MASTER_SEED, RUNS), &demo_checkpoints(horizon)).unwrap()
}

fn named(name: &str) -> PolicySpec {
    PolicySpec::named(name).unwrap()
}

fn hducb(rho: f64) -> PolicySpec {
    PolicySpec::new(PolicyKind::HistoryUcb {
        grid: GridSpec::default(),
        rho,
        approach: None,
        log_arg: LogArgument::default(),
    })
}

fn stats(c: &AggregateCurve) -> String {
    format!("{:.1}±{:.1}", c.final_mean(), c.final_std())
}

fn random_meta_arm<R: Rng>(arms: usize, rng: &mut R) -> MetaArm {
    let w: Vec<f64> = (0..arms).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = w.iter().sum();
    MetaArm::new(w.iter().map(|x| x / total).collect()).unwrap()
}

fn impact_convergence() -> Verdict {
    let start = Instant::now();
    let mut rng = stream(1, Stream::Policy);
    let gammas = [0.2, 0.4, 0.6, 0.9];
    let (mut loose, mut identity, mut tight) = (0usize, 0usize, 0usize);
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let gamma = gammas[case % gammas.len()];
        let arms = rng.gen_range(2..=4);
        let t = rng.gen_range(1..=500u64);
        let s = rng.gen_range(1..=50u64);
        // every tenth history is the extreme one whose arms 0 and 1 attain the bound
        let extreme = case % 10 == 0;
        let mut state = ImpactState::new(arms, gamma).unwrap();
        for _ in 0..t {
            let p = if extreme { MetaArm::one_hot(arms, 1) } else { random_meta_arm(arms, &mut rng) };
            state.update(&p).unwrap();
        }
        let before = state.impacts();
        let target = if extreme { MetaArm::one_hot(arms, 0) } else { random_meta_arm(arms, &mut rng) };
        for _ in 0..s {
            state.update(&target).unwrap();
        }
        let bound = gamma.powi(s as i32);
        // f(t+s) - p = (f(t) - p) * gamma^s D(t) / D(t+s)
        let factor = bound * discount_mass(gamma, t) / discount_mass(gamma, t + s);
        let closed = bound * (1.0 - gamma.powi(t as i32)) / (1.0 - gamma.powi((t + s) as i32));
        for k in 0..arms {
            let dev = state.impact(k) - target.prob(k);
            // impacts carry rounding error of a few ulps of 1, which swamps
            // gamma^s once it falls below ~1e-15
            if dev.abs() >= bound + ROUNDING {
                loose += 1;
            }
            let predicted = (before[k] - target.prob(k)) * closed;
            worst = worst.max((dev - predicted).abs()).max((factor - closed).abs());
            if (dev - predicted).abs() > 1e-10 {
                identity += 1;
            }
            if extreme && k < 2 && (dev.abs() - closed).abs() > 1e-10 {
                tight += 1;
            }
        }
    }
    let pass = loose == 0 && identity == 0 && tight == 0;
    timed(
        Duration::from_secs(5),
        pass,
        start.elapsed(),
        format!("gamma^s violations {loose}, closed-form mismatches {identity}, tight-bound misses {tight}, max error {worst:.1e}"),
    )
}

fn unbiasedness() -> Verdict {
    let start = Instant::now();
    let model = gaussian_instance();
    let p = MetaArm::new(vec![0.3, 0.7]).unwrap();
    let mut env = Environment::new(&EnvSpec::new(model.clone(), 0.0).unwrap(), 2024).unwrap();
    let steps = 100_000;
    let mut sum = [0.0f64; 2];
    let mut sq = [0.0f64; 2];
    for _ in 0..steps {
        let obs = env.step(&p).unwrap();
        for k in 0..2 {
            let x = iw_reward(&obs, k, p.prob(k)).unwrap();
            sum[k] += x;
            sq[k] += x * x;
        }
    }
    let n = steps as f64;
    let mut pass = true;
    let mut parts = Vec::new();
    for k in 0..2 {
        let mean = sum[k] / n;
        let var = (sq[k] / n - mean * mean) * n / (n - 1.0);
        let se = (var / n).sqrt();
        let truth = model.mean(k, p.prob(k)).unwrap();
        let z = (mean - truth) / se;
        pass &= z.abs() <= 4.0;
        parts.push(format!("arm {k}: {mean:.4} vs {truth:.4} ({z:+.2} se)"));
    }
    timed(Duration::from_secs(10), pass, start.elapsed(), parts.join(", "))
}

/// Compositions of `n` into `k` positive parts by dynamic programming.
fn count_compositions(n: usize, k: usize) -> u128 {
    // ways[j][m]: j parts summing to m
    let mut ways = vec![vec![0u128; n + 1]; k + 1];
    ways[0][0] = 1;
    for j in 1..=k {
        for m in 1..=n {
            ways[j][m] = (1..=m).map(|first| ways[j - 1][m - first]).sum();
        }
    }
    ways[k][n]
}

fn enumeration() -> Verdict {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for k in 1..=5usize {
        for n in 1..=12u32 {
            let oracle = count_compositions(n as usize, k);
            let grid = SimplexGrid::new(k, n).unwrap();
            let listed = if grid.is_feasible() { enumerate_meta_arms(&grid).unwrap().len() as u128 } else { 0 };
            let formula = if n as usize >= k { binomial(u64::from(n) - 1, k as u64 - 1) } else { 0 };
            if listed != oracle || formula != oracle || grid.meta_arm_count() != oracle {
                mismatches.push(format!("K={k} n={n}"));
            }
        }
    }
    timed(
        Duration::from_secs(1),
        mismatches.is_empty(),
        start.elapsed(),
        format!(
            "60 (K, n) pairs, mismatches: {}",
            if mismatches.is_empty() { "none".into() } else { mismatches.join(" ") }
        ),
    )
}

fn zero_discount_reduction() -> Verdict {
    let start = Instant::now();
    let model = RewardModel::example1(0.2).unwrap();
    let seed = 99;
    let mut history = Environment::new(&EnvSpec::new(model.clone(), 0.0).unwrap(), seed).unwrap();
    let mut direct = ActionDependentEnvironment::new(model, seed);
    let mut rng = stream(seed, Stream::Policy);
    let mut first_diff = None;
    for t in 0..10_000u64 {
        let p = random_meta_arm(2, &mut rng);
        let a = history.step(&p).unwrap();
        let b = direct.step(&p).unwrap();
        let same_bits = a.round == b.round
            && a.rewards.iter().zip(&b.rewards).all(|(x, y)| x.map(f64::to_bits) == y.map(f64::to_bits))
            && a.impact.iter().zip(&b.impact).all(|(x, y)| x.to_bits() == y.to_bits());
        if !same_bits {
            first_diff = Some(t + 1);
            break;
        }
    }
    timed(
        Duration::from_secs(5),
        first_diff.is_none(),
        start.elapsed(),
        match first_diff {
            None => "10000 rounds bit-identical".into(),
            Some(t) => format!("streams diverge at round {t}"),
        },
    )
}

fn sublinearity() -> Verdict {
    let start = Instant::now();
    let horizon = 100_000;
    let c = curve(&scenario(&gaussian_instance(), 0.0, horizon), &named("aducb"), horizon);
    let slope = sublinearity_slope(&c, 0.5).unwrap();
    timed(
        Duration::from_secs(300),
        (0.3..=0.85).contains(&slope),
        start.elapsed(),
        format!("aducb slope {slope:.3} (need [0.3, 0.85]), final regret {}", stats(&c)),
    )
}

fn action_dependent_ordering() -> Verdict {
    let start = Instant::now();
    let horizon = 50_000;
    let s = scenario(&gaussian_instance(), 0.0, horizon);
    let ours = curve(&s, &named("aducb"), horizon);
    let baselines: Vec<(&str, AggregateCurve)> =
        ["cucb", "mexp3", "exp3"].into_iter().map(|n| (n, curve(&s, &named(n), horizon))).collect();
    let upper = ours.final_mean() + 2.0 * ours.final_std();
    let separated = baselines.iter().all(|(_, b)| upper < b.final_mean() - 2.0 * b.final_std());
    let lowest = baselines.iter().all(|(_, b)| ours.final_mean() < b.final_mean());
    let cucb = baselines[0].1.final_mean();
    let full = lowest && baselines[1..].iter().any(|(_, b)| cucb < b.final_mean());
    let sampled = curve(&s, &PolicySpec::new(PolicyKind::Exp3 { deploy: Exp3Deploy::Sample }), horizon);
    let listing: Vec<String> = baselines.iter().map(|(n, b)| format!("{n} {}", stats(b))).collect();
    timed(
        Duration::from_secs(900),
        lowest && separated,
        start.elapsed(),
        format!(
            "aducb {} | {} | 2-std separated: {separated}, full ordering: {full} | info: sampled exp3 {}",
            stats(&ours),
            listing.join(", "),
            stats(&sampled)
        ),
    )
}

fn history_dependent_ordering() -> Verdict {
    let start = Instant::now();
    let horizon = 50_000;
    let model = gaussian_instance();
    let mut below_all = true;
    let mut margins = Vec::new();
    let mut parts = Vec::new();
    for gamma in [0.2, 0.4, 0.6] {
        let s = scenario(&model, gamma, horizon);
        let ours = curve(&s, &hducb(0.2), horizon);
        let others: Vec<(&str, AggregateCurve)> =
            ["exp3", "ducb", "swucb"].into_iter().map(|n| (n, curve(&s, &named(n), horizon))).collect();
        let best_other = others.iter().map(|(_, c)| c.final_mean()).fold(f64::INFINITY, f64::min);
        below_all &= ours.final_mean() < best_other;
        margins.push(best_other - ours.final_mean());
        let listing: Vec<String> = others.iter().map(|(n, c)| format!("{n} {}", stats(c))).collect();
        parts.push(format!("gamma {gamma}: hducb {} vs {}", stats(&ours), listing.join(", ")));
    }
    let widest_first = margins[0] >= margins[1] && margins[0] >= margins[2];
    timed(
        Duration::from_secs(1800),
        below_all && widest_first,
        start.elapsed(),
        format!(
            "{} | below all: {below_all}, margins {:.1}/{:.1}/{:.1}, widest at 0.2: {widest_first}",
            parts.join("; "),
            margins[0],
            margins[1],
            margins[2]
        ),
    )
}

fn negative_result() -> Verdict {
    let start = Instant::now();
    let horizon = 50_000;
    let s = scenario(&RewardModel::example1(0.2).unwrap(), 0.0, horizon);
    // 1000 posterior draws: the announced probabilities carry binomial error
    // below 0.016, far under the 0.2 gap the instance is built around.
    let ts = curve(&s, &PolicySpec::new(PolicyKind::Thompson { prob_samples: 1_000 }), horizon);
    let ucb = curve(&s, &named("aducb"), horizon);
    let late = late_rate(&ts, horizon / 2).unwrap();
    let ts_slope = sublinearity_slope(&ts, 0.5).unwrap();
    let ucb_slope = sublinearity_slope(&ucb, 0.5).unwrap();
    timed(
        Duration::from_secs(600),
        late >= 0.025 && ts_slope >= 0.95 && ucb_slope <= 0.85,
        start.elapsed(),
        format!(
            "ts late rate {late:.4} (>= 0.025), ts slope {ts_slope:.3} (>= 0.95), aducb slope {ucb_slope:.3} (<= 0.85)"
        ),
    )
}

fn rho_insensitivity() -> Verdict {
    let start = Instant::now();
    let horizon = 50_000;
    let s = scenario(&gaussian_instance(), 0.2, horizon);
    let curves: Vec<(f64, AggregateCurve)> =
        [0.1, 0.2, 0.4].into_iter().map(|rho| (rho, curve(&s, &hducb(rho), horizon))).collect();
    let means: Vec<f64> = curves.iter().map(|(_, c)| c.final_mean()).collect();
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = means.iter().copied().fold(0.0, f64::max);
    let within_two = hi <= 2.0 * lo;
    let nonincreasing = curves.windows(2).all(|w| {
        let (a, b) = (&w[0].1, &w[1].1);
        let pooled = ((a.final_std().powi(2) + b.final_std().powi(2)) / 2.0).sqrt();
        b.final_mean() <= a.final_mean() + pooled
    });
    let listing: Vec<String> = curves.iter().map(|(r, c)| format!("rho {r}: {}", stats(c))).collect();
    timed(
        Duration::from_secs(1800),
        within_two && nonincreasing,
        start.elapsed(),
        format!("{} | factor 2: {within_two}, nonincreasing: {nonincreasing}", listing.join(", ")),
    )
}

const DETERMINISM_CONFIG: &str = "\
horizon = 2000
master_seed = 5
runs = 6
checkpoint_count = 20

[environment]
kind = gaussian
arms = 2
gamma = 0, 0.4
instances = 2

[policy]
name = aducb

[policy]
name = hducb

[policy]
name = exp3

[policy]
name = ts
prob_samples = 200
";

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism() -> Verdict {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("experiment.cfg");
    fs::write(&config, DETERMINISM_CONFIG).unwrap();
    let run = |jobs: &str, out: &str| {
        Command::new(env!("CARGO_BIN_EXE_impactbandit"))
            .arg("run")
            .arg("--config")
            .arg(&config)
            .args(["--jobs", jobs, "--out"])
            .arg(dir.path().join(out))
            .output()
            .unwrap()
    };
    let a = run("1", "serial");
    let b = run("8", "parallel");
    if !a.status.success() || !b.status.success() {
        return Verdict::new(false, format!("cli failed: {}", String::from_utf8_lossy(&a.stderr)));
    }
    let serial = csv_files(&dir.path().join("serial"));
    let parallel = csv_files(&dir.path().join("parallel"));
    timed(
        Duration::from_secs(120),
        !serial.is_empty() && serial == parallel,
        start.elapsed(),
        format!("{} csv files compared, identical: {}", serial.len(), serial == parallel),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("impact convergence", impact_convergence),
        ("importance-weight unbiasedness", unbiasedness),
        ("meta-arm enumeration", enumeration),
        ("gamma = 0 reduction", zero_discount_reduction),
        ("action-dependent UCB sublinearity", sublinearity),
        ("action-dependent ordering", action_dependent_ordering),
        ("history-dependent ordering", history_dependent_ordering),
        ("mean-following negative result", negative_result),
        ("rho insensitivity", rho_insensitivity),
        ("determinism across thread counts", determinism),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!("criterion {id:>2} [{}] {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
