use proptest::prelude::*;
use rand::SeedableRng;

use impactbandit::environment::discount_mass;
use impactbandit::policies::{aducb_select, bias_bound, Cucb, NaiveMetaUcb, PhaseState, PolicyStats, Thompson};
use impactbandit::rng::{stream, Stream};
use impactbandit::simplex::{benchmark_levels, best_fixed_strategy_on, binomial};
use impactbandit::{
    enumerate_meta_arms, run_episode, DiscretizedArm, EnvSpec, ImpactFunction, ImpactState, LogArgument, MetaArm,
    PolicySpec, RewardModel, Scenario, SimplexGrid, TieBreak,
};

fn meta_arm(weights: &[f64]) -> MetaArm {
    let total: f64 = weights.iter().sum();
    MetaArm::new(weights.iter().map(|w| w / total).collect()).unwrap()
}

fn weights(arms: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, arms)
}

/// Fills every discretized arm of `grid` with arbitrary statistics.
fn random_stats(grid: &SimplexGrid, seed: u64) -> PolicyStats {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut stats = PolicyStats::new(grid.clone());
    for arm in 0..grid.arms() {
        for level in 1..=grid.max_level() {
            let count = rand::Rng::gen_range(&mut rng, 1..50u64);
            let mean: f64 = rand::Rng::gen_range(&mut rng, 0.0..2.0);
            stats.set(DiscretizedArm { arm, level }, count, mean * count as f64);
        }
    }
    stats
}

/// Index of the first maximum, recomputed without the crate's argmax.
fn first_argmax(scores: &[f64]) -> usize {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    scores.iter().position(|&s| s == best).unwrap()
}

/// `min_k n(p_k)` and `sum_k p_k mean(p_k)` straight from the stored counts.
fn summary(stats: &PolicyStats, levels: &[u32], n: u32) -> (u64, f64) {
    let mut min = u64::MAX;
    let mut value = 0.0;
    for (arm, &level) in levels.iter().enumerate() {
        let d = DiscretizedArm { arm, level };
        min = min.min(stats.count(d));
        value += f64::from(level) / f64::from(n) * stats.sum(d) / stats.count(d) as f64;
    }
    (min, value)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn enumeration_matches_stars_and_bars(k in 1usize..6, n in 1u32..14) {
        let grid = SimplexGrid::new(k, n).unwrap();
        prop_assume!(grid.is_feasible());
        let points = enumerate_meta_arms(&grid).unwrap();
        prop_assert_eq!(points.len() as u128, binomial(u64::from(n) - 1, k as u64 - 1));
        for w in points.windows(2) {
            prop_assert!(w[0].levels() < w[1].levels());
        }
        for p in &points {
            prop_assert_eq!(p.levels().iter().sum::<u32>(), n);
            prop_assert!(p.levels().iter().all(|&l| l >= 1));
        }
    }

    #[test]
    fn impact_is_a_distribution_and_matches_direct_sum(
        gamma in 0.0f64..0.99,
        history in prop::collection::vec(weights(3), 1..60),
    ) {
        let mut state = ImpactState::new(3, gamma).unwrap();
        let arms: Vec<MetaArm> = history.iter().map(|w| meta_arm(w)).collect();
        for a in &arms {
            state.update(a).unwrap();
        }
        let t = arms.len();
        let f = state.impacts();
        prop_assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for k in 0..3 {
            let num: f64 = arms.iter().enumerate().map(|(s, a)| a.prob(k) * gamma.powi((t - 1 - s) as i32)).sum();
            let den: f64 = (0..t).map(|s| gamma.powi(s as i32)).sum();
            prop_assert!((f[k] - num / den).abs() < 1e-10);
            prop_assert!((state.denominator() - den).abs() < 1e-9 * den);
        }
        prop_assert!((discount_mass(gamma, t as u64) - state.denominator()).abs() < 1e-12);
    }

    #[test]
    fn constant_deployment_converges_geometrically(
        gamma in 0.05f64..0.95,
        history in prop::collection::vec(weights(2), 1..100),
        target in weights(2),
        s in 1u32..40,
    ) {
        let mut state = ImpactState::new(2, gamma).unwrap();
        for w in &history {
            state.update(&meta_arm(w)).unwrap();
        }
        let p = meta_arm(&target);
        for _ in 0..s {
            state.update(&p).unwrap();
        }
        for k in 0..2 {
            prop_assert!((state.impact(k) - p.prob(k)).abs() <= gamma.powi(s as i32) + 1e-15);
        }
    }

    #[test]
    fn aducb_picks_brute_force_maximum(k in 2usize..4, n in 3u32..8, seed in any::<u64>(), t in 2u64..10_000) {
        let grid = SimplexGrid::new(k, n).unwrap();
        prop_assume!(grid.is_feasible());
        let stats = random_stats(&grid, seed);
        let points = enumerate_meta_arms(&grid).unwrap();
        let scores: Vec<f64> = points
            .iter()
            .map(|p| {
                let (min, value) = summary(&stats, p.levels(), n);
                (k as f64 * (t as f64).ln() / min as f64).sqrt() + value
            })
            .collect();
        let mut rng = stream(seed, Stream::Policy);
        let chosen = aducb_select(&stats, &points, t, TieBreak::Lexicographic, &mut rng);
        prop_assert_eq!(chosen, first_argmax(&scores));
    }

    #[test]
    fn hducb_index_matches_formula(seed in any::<u64>(), gamma in 0.0f64..0.9) {
        let (k, n) = (2usize, 6u32);
        let grid = SimplexGrid::new(k, n).unwrap();
        let approach = 3;
        let mut phase = PhaseState::new(grid.clone(), 5, approach, gamma, 1.0).unwrap();
        *phase.stats_mut() = random_stats(&grid, seed);
        let err = k as f64 * gamma.powi(approach as i32) * 2.0;
        prop_assert!((phase.err() - err).abs() < 1e-12);
        for p in enumerate_meta_arms(&grid).unwrap() {
            let (min, value) = summary(phase.stats(), p.levels(), n);
            // phases_done is 0 here, so the phase-scaled log argument is L - s_a
            let expected = value + err + 3.0 * (k as f64 * 2f64.ln() / min as f64).sqrt();
            prop_assert!((phase.index(&p, LogArgument::PhaseScaled) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn err_decreases_with_approach(gamma in 0.01f64..0.99, s in 1u32..30) {
        prop_assert!(bias_bound(2, gamma, s + 1, 1.0) <= bias_bound(2, gamma, s, 1.0));
    }

    #[test]
    fn phase_bookkeeping(len in 2u32..20, approach_frac in 0.0f64..1.0, round in 1u64..100_000) {
        let approach = 1 + ((f64::from(len - 2)) * approach_frac) as u32;
        let phase = PhaseState::new(SimplexGrid::new(2, 4).unwrap(), len, approach, 0.5, 1.0).unwrap();
        let pos = phase.position(round);
        prop_assert!((1..=len).contains(&pos));
        prop_assert_eq!(phase.phase_of(round) * u64::from(len) + u64::from(pos), round);
        prop_assert_eq!(phase.is_estimation_round(round), pos > approach);
        prop_assert_eq!(phase.estimation_len(), len - approach);
    }

    #[test]
    fn cucb_score_matches_independent_oracle(seed in any::<u64>(), t in 2u64..10_000) {
        let grid = SimplexGrid::new(3, 6).unwrap();
        let mut cucb = Cucb::new(grid.clone(), TieBreak::Lexicographic, stream(seed, Stream::Policy)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut table = vec![(0u64, 0.0f64); grid.discretized_arm_count()];
        for (slot, entry) in table.iter_mut().enumerate() {
            let count = rand::Rng::gen_range(&mut rng, 1..30u64);
            let sum = rand::Rng::gen_range(&mut rng, 0.0..count as f64);
            cucb.set_slot(slot, count, sum);
            *entry = (count, sum);
        }
        for p in cucb.points().to_vec() {
            let expected: f64 = (0..3)
                .map(|arm| {
                    let (c, s) = table[grid.slot(DiscretizedArm { arm, level: p.levels()[arm] })];
                    p.prob(arm) * (s / c as f64 + (3.0 * (t as f64).ln() / (2.0 * c as f64)).sqrt())
                })
                .sum();
            prop_assert!((cucb.score(&p, t) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn naive_index_matches_ucb1(plays in 1u64..1000, mean in 0.0f64..2.0, t in 2u64..100_000) {
        let grid = SimplexGrid::new(2, 4).unwrap();
        let mut naive = NaiveMetaUcb::new(grid, TieBreak::Lexicographic, stream(0, Stream::Policy)).unwrap();
        naive.set(1, plays, mean * plays as f64);
        let expected = mean + (2.0 * (t as f64).ln() / plays as f64).sqrt();
        prop_assert!((naive.index(1, t) - expected).abs() < 1e-12);
        prop_assert_eq!(naive.index(0, t), f64::INFINITY);
    }

    #[test]
    fn thompson_strategy_is_a_distribution(
        counts in prop::collection::vec((0u64..200, 0u64..200), 2..5),
        seed in any::<u64>(),
    ) {
        let mut ts = Thompson::new(counts.len(), 500, stream(seed, Stream::Policy));
        for (arm, &(s, f)) in counts.iter().enumerate() {
            ts.set_counts(arm, s, f);
        }
        let p = ts.announced_strategy();
        prop_assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.probs().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn benchmark_dominates_every_grid_point(centers in prop::collection::vec(0.3f64..0.7, 2..4), n in 3u32..9) {
        let model = RewardModel::scaled_gaussian(centers.clone()).unwrap();
        let grid = SimplexGrid::new(centers.len(), n).unwrap();
        prop_assume!(grid.is_feasible());
        let best = best_fixed_strategy_on(&model, &grid).unwrap();
        let fine = best_fixed_strategy_on(&model, &SimplexGrid::new(centers.len(), benchmark_levels(n)).unwrap()).unwrap();
        for p in enumerate_meta_arms(&grid).unwrap() {
            let u = model.utility(&p.to_meta_arm().into_probs(), &p.to_meta_arm().into_probs());
            prop_assert!(u <= best.utility + 1e-12);
            prop_assert!(u <= fine.utility + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn regret_is_cumulative_gap_and_runs_are_reproducible(
        seed in any::<u64>(),
        gamma in 0.0f64..0.8,
        name in prop::sample::select(vec!["aducb", "hducb", "cucb", "exp3", "mexp3", "ducb", "swucb", "ts", "naive_ucb1", "ucb1"]),
    ) {
        let model = RewardModel::example1(0.2).unwrap();
        let scenario = Scenario::for_policy_grid(EnvSpec::new(model, gamma).unwrap(), Some(5)).unwrap();
        let spec = if name == "ts" {
            PolicySpec::new(impactbandit::PolicyKind::Thompson { prob_samples: 50 })
        } else {
            PolicySpec::named(name).unwrap()
        };
        let a = run_episode(&scenario, &spec, 300, seed).unwrap();
        let b = run_episode(&scenario, &spec, 300, seed).unwrap();
        prop_assert_eq!(&a, &b);
        let mut total = 0.0;
        for (u, r) in a.utilities.iter().zip(&a.regret) {
            total += scenario.benchmark.utility - u;
            prop_assert!((total - r).abs() < 1e-9);
        }
    }
}
