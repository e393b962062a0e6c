//! Experiment and model files.
//!
//! Both use the same line-oriented dialect:
//!
//! ```text
//! # comment
//! key = value
//! [section]
//! key = value, value, value
//! ```
//!
//! Keys before the first header belong to the top level. `[policy]` may repeat;
//! every other section may appear once. Unknown keys are errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use impactbandit::policies::{Exp3Deploy, GridSpec, LogArgument, PolicyKind, PolicySpec, ScheduleOptions, TieBreak};
use impactbandit::{ModelKind, RewardModel};

use crate::error::{CliError, Result};

/// A `[section]` with its `key = value` lines in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// Splits a file into sections. The top level is a section named `""`.
pub fn parse_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections = vec![Section { name: String::new(), line: 0, entries: Vec::new() }];
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| CliError::config(format!("line {line_no}: unterminated section header")))?
                .trim();
            if name.is_empty() {
                return Err(CliError::config(format!("line {line_no}: empty section name")));
            }
            sections.push(Section { name: name.to_string(), line: line_no, entries: Vec::new() });
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| CliError::config(format!("line {line_no}: expected `key = value`")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::config(format!("line {line_no}: missing key")));
        }
        let section = sections.last_mut().expect("top level exists");
        if section.entries.iter().any(|e| e.key == key) {
            return Err(CliError::config(format!("line {line_no}: duplicate key `{key}`")));
        }
        section.entries.push(Entry { key: key.to_string(), value: value.trim().to_string(), line: line_no });
    }
    Ok(sections)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Typed access to one section; tracks which keys were consumed so leftovers
/// can be reported.
struct Reader<'a> {
    section: &'a Section,
    used: Vec<bool>,
}

impl<'a> Reader<'a> {
    fn new(section: &'a Section) -> Self {
        Self { section, used: vec![false; section.entries.len()] }
    }

    fn where_(&self) -> String {
        if self.section.name.is_empty() {
            "top level".to_string()
        } else {
            format!("[{}]", self.section.name)
        }
    }

    fn raw(&mut self, key: &str) -> Option<&'a Entry> {
        let i = self.section.entries.iter().position(|e| e.key == key)?;
        self.used[i] = true;
        Some(&self.section.entries[i])
    }

    fn bad(&self, entry: &Entry, what: &str) -> CliError {
        CliError::config(format!(
            "line {}: key `{}` in {}: {what} (got `{}`)",
            entry.line,
            entry.key,
            self.where_(),
            entry.value
        ))
    }

    fn get<T>(&mut self, key: &str, what: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(e) => parse(&e.value).map(Some).ok_or_else(|| self.bad(e, what)),
        }
    }

    fn require<T>(&mut self, key: &str, what: &str, parse: impl Fn(&str) -> Option<T>) -> Result<T> {
        self.get(key, what, parse)?.ok_or_else(|| CliError::config(format!("missing key `{key}` in {}", self.where_())))
    }

    fn f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.get(key, "expected a number", parse_f64)
    }

    fn u64(&mut self, key: &str) -> Result<Option<u64>> {
        self.get(key, "expected a non-negative integer", |s| s.parse().ok())
    }

    fn usize(&mut self, key: &str) -> Result<Option<usize>> {
        self.get(key, "expected a non-negative integer", |s| s.parse().ok())
    }

    fn list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key, "expected a comma-separated list of numbers", parse_f64_list)
    }

    /// Errors on the first key nobody asked for.
    fn finish(self) -> Result<()> {
        match self.used.iter().position(|u| !u) {
            None => Ok(()),
            Some(i) => {
                let e = &self.section.entries[i];
                Err(CliError::config(format!("line {}: unknown key `{}` in {}", e.line, e.key, self.where_())))
            }
        }
    }
}

fn parse_f64(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn parse_f64_list(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|p| parse_f64(p.trim())).collect()
}

/// `1/n` or a decimal equal to `1/n`.
pub fn parse_step(s: &str) -> Option<u32> {
    if let Some((num, den)) = s.split_once('/') {
        let (num, den): (u32, u32) = (num.trim().parse().ok()?, den.trim().parse().ok()?);
        return (num == 1 && den >= 1).then_some(den);
    }
    impactbandit::simplex::levels_for_step(parse_f64(s)?).ok()
}

/// Grid choice: `auto` or a step `1/n`.
fn parse_grid(s: &str, auto: ScheduleOptions) -> Option<GridSpec> {
    if s == "auto" {
        Some(GridSpec::Auto(auto))
    } else {
        parse_step(s).map(GridSpec::Levels)
    }
}

fn fmt_grid(g: &GridSpec) -> String {
    match g {
        GridSpec::Auto(_) => "auto".into(),
        GridSpec::Levels(n) => format!("1/{n}"),
    }
}

/// Shortest decimal that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn num_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")
}

// ---------------------------------------------------------------------------
// Reward models

/// Where the reward model of an experiment comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSource {
    /// Centers given, or drawn from the instance seed when absent.
    Gaussian {
        arms: usize,
        centers: Option<Vec<f64>>,
    },
    Example1 {
        epsilon: f64,
    },
    /// Peaks given, or drawn from the instance seed when absent.
    Bump {
        arms: usize,
        height: f64,
        peaks: Option<Vec<f64>>,
        slopes: Option<Vec<f64>>,
    },
    Table {
        knots: Vec<Vec<(f64, f64)>>,
    },
    /// Model file in the same dialect, relative to the experiment file.
    File(PathBuf),
}

impl ModelSource {
    /// Whether building the model consumes the instance stream.
    pub fn is_random(&self) -> bool {
        matches!(self, ModelSource::Gaussian { centers: None, .. } | ModelSource::Bump { peaks: None, .. })
    }
}

const MODEL_KEYS: &str = "kind, arms, centers, epsilon_inst, height, peaks, slopes, knots.<arm>";

fn read_model(r: &mut Reader) -> Result<ModelSource> {
    let kind = r.require("kind", "expected a model kind", |s| Some(s.to_string()))?;
    let source = match kind.as_str() {
        "gaussian" | "scaled_gaussian" => {
            let centers = r.list("centers")?;
            let arms = r.usize("arms")?;
            let arms = match (&centers, arms) {
                (Some(c), Some(a)) if c.len() != a => {
                    return Err(CliError::config(format!("`arms = {a}` but {} centers given", c.len())))
                }
                (Some(c), _) => c.len(),
                (None, Some(a)) => a,
                (None, None) => 2,
            };
            ModelSource::Gaussian { arms, centers }
        }
        "example1" => ModelSource::Example1 { epsilon: r.f64("epsilon_inst")?.unwrap_or(0.2) },
        "bump" => {
            let peaks = r.list("peaks")?;
            let slopes = r.list("slopes")?;
            let height = r.require("height", "expected a number", parse_f64)?;
            let arms = r.usize("arms")?;
            let arms = match (&peaks, arms) {
                (Some(p), Some(a)) if p.len() != a => {
                    return Err(CliError::config(format!("`arms = {a}` but {} peaks given", p.len())))
                }
                (Some(p), _) => p.len(),
                (None, Some(a)) => a,
                (None, None) => 2,
            };
            ModelSource::Bump { arms, height, peaks, slopes }
        }
        "table" => {
            let arms = r.require("arms", "expected a positive integer", |s| s.parse::<usize>().ok())?;
            let mut knots = Vec::with_capacity(arms);
            for k in 0..arms {
                let key = format!("knots.{k}");
                knots.push(r.require(&key, "expected `x:y, x:y, ...`", parse_knots)?);
            }
            ModelSource::Table { knots }
        }
        other => {
            return Err(CliError::config(format!(
                "unknown model kind `{other}` (key `kind`); expected gaussian, example1, bump or table"
            )))
        }
    };
    Ok(source)
}

fn parse_knots(s: &str) -> Option<Vec<(f64, f64)>> {
    s.split(',')
        .map(|p| {
            let (x, y) = p.trim().split_once(':')?;
            Some((parse_f64(x.trim())?, parse_f64(y.trim())?))
        })
        .collect()
}

fn write_model_source(out: &mut String, source: &ModelSource) {
    match source {
        ModelSource::Gaussian { arms, centers } => {
            let _ = writeln!(out, "kind = gaussian");
            match centers {
                Some(c) => {
                    let _ = writeln!(out, "centers = {}", num_list(c));
                }
                None => {
                    let _ = writeln!(out, "arms = {arms}");
                }
            }
        }
        ModelSource::Example1 { epsilon } => {
            let _ = writeln!(out, "kind = example1\nepsilon_inst = {}", num(*epsilon));
        }
        ModelSource::Bump { arms, height, peaks, slopes } => {
            let _ = writeln!(out, "kind = bump\narms = {arms}\nheight = {}", num(*height));
            if let Some(p) = peaks {
                let _ = writeln!(out, "peaks = {}", num_list(p));
            }
            if let Some(s) = slopes {
                let _ = writeln!(out, "slopes = {}", num_list(s));
            }
        }
        ModelSource::Table { knots } => {
            let _ = writeln!(out, "kind = table\narms = {}", knots.len());
            for (k, arm) in knots.iter().enumerate() {
                let pairs: Vec<String> = arm.iter().map(|&(x, y)| format!("{}:{}", num(x), num(y))).collect();
                let _ = writeln!(out, "knots.{k} = {}", pairs.join(", "));
            }
        }
        ModelSource::File(path) => {
            let _ = writeln!(out, "model_file = {}", path.display());
        }
    }
}

/// Model file text for a concrete model.
pub fn serialize_model(model: &RewardModel) -> String {
    let source = match model.kind() {
        ModelKind::ScaledGaussian { centers } => {
            ModelSource::Gaussian { arms: centers.len(), centers: Some(centers.clone()) }
        }
        ModelKind::Example1 { epsilon } => ModelSource::Example1 { epsilon: *epsilon },
        ModelKind::Bump { peaks, height, slopes } => ModelSource::Bump {
            arms: peaks.len(),
            height: *height,
            peaks: Some(peaks.clone()),
            slopes: Some(slopes.clone()),
        },
        ModelKind::Table { knots } => ModelSource::Table { knots: knots.clone() },
    };
    let mut out = String::from("[model]\n");
    write_model_source(&mut out, &source);
    out
}

/// Parses a model file with a single `[model]` section describing a concrete
/// (non-random) model.
pub fn parse_model(text: &str) -> Result<RewardModel> {
    let sections = parse_sections(text)?;
    if let Some(e) = sections[0].entries.first() {
        return Err(CliError::config(format!("line {}: key `{}` outside [model]", e.line, e.key)));
    }
    let model_sections: Vec<&Section> = sections.iter().skip(1).collect();
    let [section] = model_sections.as_slice() else {
        return Err(CliError::config("a model file needs exactly one [model] section"));
    };
    if section.name != "model" {
        return Err(CliError::config(format!("line {}: unknown section [{}]", section.line, section.name)));
    }
    let mut r = Reader::new(section);
    let source = read_model(&mut r)?;
    r.finish()?;
    if source.is_random() {
        return Err(CliError::config("model file must fix every parameter (centers / peaks)"));
    }
    Ok(build_fixed_model(&source)?)
}

/// Builds a model whose parameters are all given.
pub fn build_fixed_model(source: &ModelSource) -> impactbandit::Result<RewardModel> {
    match source {
        ModelSource::Gaussian { centers: Some(c), .. } => RewardModel::scaled_gaussian(c.clone()),
        ModelSource::Example1 { epsilon } => RewardModel::example1(*epsilon),
        ModelSource::Bump { arms, height, peaks: Some(p), slopes } => {
            RewardModel::bump(p.clone(), *height, slopes.clone().unwrap_or_else(|| vec![1.0; *arms]))
        }
        ModelSource::Table { knots } => RewardModel::table(knots.clone()),
        _ => Err(impactbandit::Error::Config("model parameters must be drawn or loaded first".into())),
    }
}

pub fn read_model_file(path: &Path) -> Result<RewardModel> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_model(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

// ---------------------------------------------------------------------------
// Experiments

#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentConfig {
    pub model: ModelSource,
    /// One experiment per discount value.
    pub gammas: Vec<f64>,
    pub instance_seed: u64,
    /// Number of model instances drawn from the instance seed; their runs are
    /// pooled. Only meaningful for randomly drawn models.
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Checkpoints {
    /// About this many log-spaced rounds in `[10, T]`.
    Count(usize),
    List(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub horizon: u64,
    pub master_seed: u64,
    pub runs: usize,
    /// Default grid of grid-based policies.
    pub grid: GridSpec,
    pub schedule: ScheduleOptions,
    /// Default estimation ratio of `hducb`.
    pub rho: f64,
    pub checkpoints: Checkpoints,
    /// Benchmark grid denominator; derived from the default grid when absent.
    pub benchmark_levels: Option<u32>,
    pub output: PathBuf,
    pub environment: EnvironmentConfig,
    pub policies: Vec<PolicySpec>,
}

impl ExperimentConfig {
    pub fn checkpoint_list(&self) -> Vec<u64> {
        match &self.checkpoints {
            Checkpoints::Count(n) => impactbandit::default_checkpoints(self.horizon, *n),
            Checkpoints::List(l) => l.clone(),
        }
    }
}

pub fn parse_experiment(text: &str) -> Result<ExperimentConfig> {
    let sections = parse_sections(text)?;
    let mut top = Reader::new(&sections[0]);

    let horizon = top.require("horizon", "expected an integer >= 2", |s| s.parse::<u64>().ok().filter(|&t| t >= 2))?;
    let master_seed = top.u64("master_seed")?.unwrap_or(0);
    let runs =
        top.get("runs", "expected an integer >= 1", |s| s.parse::<usize>().ok().filter(|&r| r >= 1))?.unwrap_or(1);
    let grid_scale =
        top.get("grid_scale", "expected a positive number", |s| parse_f64(s).filter(|&c| c > 0.0))?.unwrap_or(1.0);
    let max_levels = top
        .get("max_levels", "expected a positive integer", |s| s.parse::<u32>().ok().filter(|&n| n >= 1))?
        .unwrap_or(ScheduleOptions::default().max_levels);
    let schedule = ScheduleOptions { grid_scale, max_levels };
    let grid = top
        .get("epsilon", "expected `auto` or a step 1/n", |s| parse_grid(s, schedule))?
        .unwrap_or(GridSpec::Auto(schedule));
    let rho = top.get("rho", "expected a number in (0, 1)", parse_rho)?.unwrap_or(0.2);
    let count =
        top.get("checkpoint_count", "expected an integer >= 1", |s| s.parse::<usize>().ok().filter(|&n| n >= 1))?;
    let list = top.get("checkpoints", "expected increasing round numbers", |s| parse_checkpoints(s, horizon))?;
    let checkpoints = match (count, list) {
        (Some(_), Some(_)) => {
            return Err(CliError::config("give either `checkpoints` or `checkpoint_count`, not both"))
        }
        (None, Some(l)) => Checkpoints::List(l),
        (c, None) => Checkpoints::Count(c.unwrap_or(100)),
    };
    let benchmark_levels =
        top.get("benchmark_levels", "expected a positive integer", |s| s.parse::<u32>().ok().filter(|&n| n >= 1))?;
    let output =
        top.get("output", "expected a path", |s| Some(PathBuf::from(s)))?.unwrap_or_else(|| PathBuf::from("results"));
    top.finish()?;

    let mut environment = None;
    let mut policies = Vec::new();
    for section in &sections[1..] {
        match section.name.as_str() {
            "environment" => {
                if environment.is_some() {
                    return Err(CliError::config(format!("line {}: duplicate [environment]", section.line)));
                }
                environment = Some(read_environment(section)?);
            }
            "policy" => policies.push(read_policy(section, grid, rho)?),
            other => return Err(CliError::config(format!("line {}: unknown section [{other}]", section.line))),
        }
    }
    let environment = environment.ok_or_else(|| CliError::config("missing [environment] section"))?;
    if policies.is_empty() {
        return Err(CliError::config("no [policy] sections"));
    }
    for (i, p) in policies.iter().enumerate() {
        if policies[..i].iter().any(|q| q.label() == p.label()) {
            return Err(CliError::config(format!("duplicate policy label `{}`; set `label`", p.label())));
        }
    }
    Ok(ExperimentConfig {
        horizon,
        master_seed,
        runs,
        grid,
        schedule,
        rho,
        checkpoints,
        benchmark_levels,
        output,
        environment,
        policies,
    })
}

fn parse_rho(s: &str) -> Option<f64> {
    parse_f64(s).filter(|&r| r > 0.0 && r < 1.0)
}

fn parse_checkpoints(s: &str, horizon: u64) -> Option<Vec<u64>> {
    let list: Vec<u64> = s.split(',').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
    let ok = !list.is_empty() && list[0] >= 1 && list.windows(2).all(|w| w[0] < w[1]) && *list.last()? <= horizon;
    ok.then_some(list)
}

fn read_environment(section: &Section) -> Result<EnvironmentConfig> {
    let mut r = Reader::new(section);
    let gammas = r
        .get("gamma", "expected discounts in [0, 1)", |s| {
            parse_f64_list(s).filter(|g| !g.is_empty() && g.iter().all(|x| (0.0..1.0).contains(x)))
        })?
        .unwrap_or_else(|| vec![0.0]);
    let instance_seed = r.u64("instance_seed")?.unwrap_or(0);
    let instances =
        r.get("instances", "expected an integer >= 1", |s| s.parse::<usize>().ok().filter(|&n| n >= 1))?.unwrap_or(1);
    let model = match r.raw("model_file") {
        Some(e) => {
            if section.entries.iter().any(|x| x.key == "kind") {
                return Err(CliError::config(format!(
                    "line {}: give either `model_file` or inline model keys ({MODEL_KEYS})",
                    e.line
                )));
            }
            ModelSource::File(PathBuf::from(&e.value))
        }
        None => read_model(&mut r)?,
    };
    r.finish()?;
    Ok(EnvironmentConfig { model, gammas, instance_seed, instances })
}

fn read_policy(section: &Section, default_grid: GridSpec, default_rho: f64) -> Result<PolicySpec> {
    let mut r = Reader::new(section);
    let name_entry =
        r.raw("name").ok_or_else(|| CliError::config(format!("line {}: [policy] needs `name`", section.line)))?;
    let name = name_entry.value.as_str();
    let mut kind = PolicyKind::from_name(name).ok_or_else(|| {
        CliError::config(format!(
            "line {}: unknown policy `{name}` (key `name` in [policy]); expected one of {}",
            name_entry.line,
            impactbandit::policies::POLICY_NAMES.join(", ")
        ))
    })?;
    let label = r.get("label", "expected a label without commas", |s| {
        (!s.is_empty() && !s.contains(',') && !s.contains(char::is_whitespace)).then(|| s.to_string())
    })?;
    let tie_break = r
        .get("tie_break", "expected `lexicographic` or `random`", |s| match s {
            "lexicographic" => Some(TieBreak::Lexicographic),
            "random" => Some(TieBreak::Random),
            _ => None,
        })?
        .unwrap_or_default();
    let schedule = match default_grid {
        GridSpec::Auto(o) => o,
        GridSpec::Levels(_) => ScheduleOptions::default(),
    };
    let read_grid = |r: &mut Reader| -> Result<GridSpec> {
        Ok(r.get("epsilon", "expected `auto` or a step 1/n", |s| parse_grid(s, schedule))?.unwrap_or(default_grid))
    };
    match &mut kind {
        PolicyKind::ActionUcb { grid: g }
        | PolicyKind::MetaExp3 { grid: g }
        | PolicyKind::Cucb { grid: g }
        | PolicyKind::NaiveMetaUcb { grid: g } => *g = read_grid(&mut r)?,
        PolicyKind::HistoryUcb { grid: g, rho, approach, log_arg } => {
            *g = read_grid(&mut r)?;
            *rho = r.get("rho", "expected a number in (0, 1)", parse_rho)?.unwrap_or(default_rho);
            *approach = r
                .get("approach", "expected `auto` or an integer >= 1", |s| match s {
                    "auto" => Some(None),
                    _ => s.parse::<u32>().ok().filter(|&a| a >= 1).map(Some),
                })?
                .flatten();
            *log_arg = r
                .get("log_arg", "expected `phase_scaled` or `per_phase`", |s| match s {
                    "phase_scaled" => Some(LogArgument::PhaseScaled),
                    "per_phase" => Some(LogArgument::PerPhase),
                    _ => None,
                })?
                .unwrap_or_default();
        }
        PolicyKind::Exp3 { deploy } => {
            *deploy = r
                .get("deploy", "expected `distribution` or `sample`", |s| match s {
                    "distribution" => Some(Exp3Deploy::Distribution),
                    "sample" => Some(Exp3Deploy::Sample),
                    _ => None,
                })?
                .unwrap_or_default();
        }
        PolicyKind::Ducb { discount, xi } => {
            if let Some(d) = r.get("discount", "expected a number in (0, 1)", parse_rho)? {
                *discount = d;
            }
            if let Some(x) = r.get("xi", "expected a positive number", |s| parse_f64(s).filter(|&x| x > 0.0))? {
                *xi = x;
            }
        }
        PolicyKind::Swucb { window, xi } => {
            if let Some(w) =
                r.get("window", "expected an integer >= 1", |s| s.parse::<usize>().ok().filter(|&w| w >= 1))?
            {
                *window = w;
            }
            if let Some(x) = r.get("xi", "expected a positive number", |s| parse_f64(s).filter(|&x| x > 0.0))? {
                *xi = x;
            }
        }
        PolicyKind::Thompson { prob_samples } => {
            if let Some(n) =
                r.get("prob_samples", "expected an integer >= 1", |s| s.parse::<usize>().ok().filter(|&n| n >= 1))?
            {
                *prob_samples = n;
            }
        }
        PolicyKind::Ucb1 => {}
    }
    r.finish()?;
    Ok(PolicySpec { label, kind, tie_break })
}

/// Canonical text of a configuration; `parse_experiment` of the result gives
/// back an equal configuration.
pub fn serialize_experiment(c: &ExperimentConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "horizon = {}", c.horizon);
    let _ = writeln!(out, "master_seed = {}", c.master_seed);
    let _ = writeln!(out, "runs = {}", c.runs);
    let _ = writeln!(out, "epsilon = {}", fmt_grid(&c.grid));
    let _ = writeln!(out, "grid_scale = {}", num(c.schedule.grid_scale));
    let _ = writeln!(out, "max_levels = {}", c.schedule.max_levels);
    let _ = writeln!(out, "rho = {}", num(c.rho));
    match &c.checkpoints {
        Checkpoints::Count(n) => {
            let _ = writeln!(out, "checkpoint_count = {n}");
        }
        Checkpoints::List(l) => {
            let l: Vec<String> = l.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "checkpoints = {}", l.join(", "));
        }
    }
    if let Some(b) = c.benchmark_levels {
        let _ = writeln!(out, "benchmark_levels = {b}");
    }
    let _ = writeln!(out, "output = {}", c.output.display());

    let env = &c.environment;
    let _ = writeln!(out, "\n[environment]");
    let _ = writeln!(out, "gamma = {}", num_list(&env.gammas));
    let _ = writeln!(out, "instance_seed = {}", env.instance_seed);
    let _ = writeln!(out, "instances = {}", env.instances);
    write_model_source(&mut out, &env.model);

    for p in &c.policies {
        let _ = writeln!(out, "\n[policy]");
        let _ = writeln!(out, "name = {}", p.kind.name());
        if let Some(l) = &p.label {
            let _ = writeln!(out, "label = {l}");
        }
        let tie = match p.tie_break {
            TieBreak::Lexicographic => "lexicographic",
            TieBreak::Random => "random",
        };
        let _ = writeln!(out, "tie_break = {tie}");
        if let Some(g) = p.kind.grid_spec() {
            let _ = writeln!(out, "epsilon = {}", fmt_grid(&g));
        }
        match &p.kind {
            PolicyKind::HistoryUcb { rho, approach, log_arg, .. } => {
                let _ = writeln!(out, "rho = {}", num(*rho));
                match approach {
                    Some(a) => {
                        let _ = writeln!(out, "approach = {a}");
                    }
                    None => {
                        let _ = writeln!(out, "approach = auto");
                    }
                }
                let l = match log_arg {
                    LogArgument::PhaseScaled => "phase_scaled",
                    LogArgument::PerPhase => "per_phase",
                };
                let _ = writeln!(out, "log_arg = {l}");
            }
            PolicyKind::Exp3 { deploy } => {
                let d = match deploy {
                    Exp3Deploy::Distribution => "distribution",
                    Exp3Deploy::Sample => "sample",
                };
                let _ = writeln!(out, "deploy = {d}");
            }
            PolicyKind::Ducb { discount, xi } => {
                let _ = writeln!(out, "discount = {}\nxi = {}", num(*discount), num(*xi));
            }
            PolicyKind::Swucb { window, xi } => {
                let _ = writeln!(out, "window = {window}\nxi = {}", num(*xi));
            }
            PolicyKind::Thompson { prob_samples } => {
                let _ = writeln!(out, "prob_samples = {prob_samples}");
            }
            _ => {}
        }
    }
    out
}

pub fn read_experiment(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut config = parse_experiment(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    if let ModelSource::File(p) = &mut config.environment.model {
        if p.is_relative() {
            if let Some(dir) = path.parent() {
                *p = dir.join(&*p);
            }
        }
    }
    Ok(config)
}
