use infodyn::electorate::{
    candidate_score, poll, preferred_candidate, sample_voters, winning_probability, FactorBeliefs, MixtureComponent,
    VoterProfile, WeightDistributionSpec,
};
use infodyn::montecarlo::with_workers;
use infodyn::rng::derive_stream;
use infodyn::stats::mean_and_stderr;
use proptest::prelude::*;

fn normal_spec(mean: f64, sd: f64) -> WeightDistributionSpec {
    WeightDistributionSpec {
        factors: vec![vec![MixtureComponent { mean, sd, weight: 1.0 }]],
    }
}

#[test]
fn sampled_weights_have_the_right_mean() {
    let voters = sample_voters(&normal_spec(0.0, 1.0), 10_000, &mut derive_stream(4, 0)).unwrap();
    let w: Vec<f64> = voters.iter().map(|v| v.weights[0]).collect();
    let (m, se) = mean_and_stderr(&w);
    assert!(m.abs() <= 3.0 * se, "{m} +- {se}");
}

#[test]
fn mixtures_pick_components_by_weight() {
    let spec = WeightDistributionSpec {
        factors: vec![vec![
            MixtureComponent {
                mean: -1.0,
                sd: 0.0,
                weight: 0.25,
            },
            MixtureComponent {
                mean: 1.0,
                sd: 0.0,
                weight: 0.75,
            },
        ]],
    };
    let voters = sample_voters(&spec, 10_000, &mut derive_stream(4, 1)).unwrap();
    let plus = voters.iter().filter(|v| v.weights[0] == 1.0).count() as f64 / 10_000.0;
    let se = (0.75f64 * 0.25 / 10_000.0).sqrt();
    assert!((plus - 0.75).abs() <= 3.0 * se, "{plus}");
    assert!(voters.iter().all(|v| v.weights[0].abs() == 1.0));
}

#[test]
fn zero_spread_gives_identical_voters() {
    let voters = sample_voters(&normal_spec(0.3, 0.0), 500, &mut derive_stream(1, 1)).unwrap();
    assert!(voters.iter().all(|v| v.weights == [0.3]));
}

#[test]
fn same_seed_same_electorate() {
    let spec = normal_spec(0.0, 2.0);
    let a = sample_voters(&spec, 1000, &mut derive_stream(9, 9)).unwrap();
    let b = sample_voters(&spec, 1000, &mut derive_stream(9, 9)).unwrap();
    assert_eq!(a, b);
    assert!(sample_voters(&spec, 0, &mut derive_stream(9, 9)).is_err());
}

#[test]
fn better_candidate_wins_a_symmetric_electorate() {
    // w ~ N(0, 1): voters with w > 0 prefer A when m_A > m_B; ties (w = 0) go to A.
    let voters = sample_voters(&normal_spec(0.0, 1.0), 10_000, &mut derive_stream(5, 5)).unwrap();
    let beliefs = FactorBeliefs::new(vec![vec![0.7], vec![0.2]]).unwrap();
    let shares = poll(&voters, &beliefs).unwrap();
    assert!((shares.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    let positive = voters.iter().filter(|v| v.weights[0] >= 0.0).count() as f64 / 10_000.0;
    assert_eq!(shares[0], positive);
    // A voter indifferent in sign alone would split 50-50; shift the weights to favour A.
    let leaning = sample_voters(&normal_spec(0.2, 1.0), 10_000, &mut derive_stream(5, 6)).unwrap();
    assert!(poll(&leaning, &beliefs).unwrap()[0] > 0.5);
}

proptest! {
    #[test]
    fn scaling_weights_keeps_the_choice(w in prop::collection::vec(-5.0f64..5.0, 3), c in 0.01f64..100.0,
                                        m in prop::collection::vec(0.0f64..1.0, 6)) {
        let beliefs = FactorBeliefs::new(vec![m[0..3].to_vec(), m[3..6].to_vec()]).unwrap();
        let v = VoterProfile::new(w.clone()).unwrap();
        let scaled = VoterProfile::new(w.iter().map(|x| x * c).collect()).unwrap();
        let pick = |p: &VoterProfile| {
            let s: Vec<f64> = (0..2).map(|l| candidate_score(p, &beliefs, l).unwrap()).collect();
            (preferred_candidate(&s).unwrap(), (s[0] - s[1]).abs())
        };
        let (a, gap) = pick(&v);
        let (b, _) = pick(&scaled);
        // Away from exact ties, rounding cannot flip the order.
        if gap > 1e-12 {
            prop_assert_eq!(a, b);
        }
    }
}

#[test]
fn even_race_is_a_coin_flip() {
    for sigma in [0.15, 0.95] {
        let w = winning_probability(0.5, sigma, 1.0, 10_000, 21).unwrap();
        assert!((w.estimate - 0.5).abs() <= 3.0 * w.stderr, "{w:?}");
    }
}

#[test]
fn leader_is_favoured_and_slow_news_favours_them_more() {
    let grid: Vec<f64> = (1..=19).map(|k| k as f64 * 0.05).collect();
    for sigma in [0.15, 0.95] {
        for &s in &grid {
            let w = winning_probability(s, sigma, 1.0, 4000, 31).unwrap();
            if s > 0.5 {
                assert!(w.estimate >= s - 3.0 * w.stderr, "s={s} sigma={sigma}: {w:?}");
            } else if s < 0.5 {
                assert!(w.estimate <= s + 3.0 * w.stderr, "s={s} sigma={sigma}: {w:?}");
            }
            let c = winning_probability(1.0 - s, sigma, 1.0, 4000, 32).unwrap();
            let se = (w.stderr.powi(2) + c.stderr.powi(2)).sqrt();
            assert!((w.estimate + c.estimate - 1.0).abs() <= 3.0 * se, "s={s}: {w:?} {c:?}");
        }
    }
    for &s in grid.iter().filter(|s| **s > 0.5) {
        let slow = winning_probability(s, 0.15, 1.0, 4000, 33).unwrap();
        let fast = winning_probability(s, 0.95, 1.0, 4000, 33).unwrap();
        let se = (slow.stderr.powi(2) + fast.stderr.powi(2)).sqrt();
        assert!(slow.estimate >= fast.estimate - 3.0 * se, "s={s}");
    }
}

#[test]
fn fast_information_reveals_the_truth() {
    let w = winning_probability(0.52, 20.0, 1.0, 10_000, 41).unwrap();
    assert!((w.estimate - 0.52).abs() <= 3.0 * w.stderr, "{w:?}");
}

#[test]
fn estimate_does_not_depend_on_worker_count() {
    let one = with_workers(1, || winning_probability(0.6, 0.5, 1.0, 5000, 3)).unwrap();
    let many = with_workers(8, || winning_probability(0.6, 0.5, 1.0, 5000, 3)).unwrap();
    assert_eq!(one, many);
}
