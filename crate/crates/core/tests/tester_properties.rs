use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stochlang::mass::{l1_distance_truncated, EmpiricalDistribution, EmpiricalNormalization, FiniteSupport};
use stochlang::sre::random::{random_sre, RandomSreConfig};
use stochlang::sre::{mass_up_to, parse_sre, truncation_threshold};
use stochlang::testing::harness::run_trials;
use stochlang::testing::{
    conservative_sample_count, finite_tolerant_test, l1_identity_test, l1_plan, linf_identity_test,
    planted_alternative, ReplaySource, SampleSource, SreSource, TestMode, TesterConfig, TruncatedSource, Verdict,
};
use stochlang::{Alphabet, Error, Word};

fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

#[test]
fn l1_splits_at_theta() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = RandomSreConfig::new(ab(), 3);
    for _ in 0..10 {
        let p = random_sre(&cfg, &mut rng);
        let q = random_sre(&cfg, &mut rng);
        let theta = 3;
        let total = l1_distance_truncated(&p, &q, &ab(), 9, 1 << 12).unwrap();
        let head = l1_distance_truncated(&p, &q, &ab(), theta, 1 << 12).unwrap();
        let mut tail = 0.0;
        for len in theta + 1..=9 {
            for w in ab().words_of_length(len) {
                tail += (p.eval(&w) - q.eval(&w)).abs();
            }
        }
        assert!((head + tail - total).abs() < 1e-12);
    }
}

#[test]
fn tail_beyond_theta_is_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = RandomSreConfig::new(ab(), 3);
    for _ in 0..20 {
        let q = random_sre(&cfg, &mut rng);
        let theta = truncation_threshold(&q, 0.3).theta;
        if ab().count_words_up_to(theta).unwrap() > 1 << 16 {
            continue;
        }
        assert!(1.0 - mass_up_to(&q, theta, 1 << 16).unwrap() < 0.1);
    }
}

#[test]
fn self_samples_accept_on_uniform_eight() {
    let words: Vec<Word> = ab().words_of_length(3);
    let q = FiniteSupport::new(words.iter().map(|w| (w.clone(), 0.125))).unwrap();
    let n = conservative_sample_count(8, 0.1, 0.3).unwrap();
    let mut accepts = 0;
    for seed in 11..61 {
        let expr = parse_sre("('a' +[0.5] 'b') . ('a' +[0.5] 'b') . ('a' +[0.5] 'b')", &ab()).unwrap();
        let mut src = SreSource::new(expr, ab(), seed).unwrap();
        let mut e = EmpiricalDistribution::new(Some(3));
        for _ in 0..n {
            e.record(src.draw().unwrap());
        }
        let out = finite_tolerant_test(&q, 1.0, &e, 0.1, 0.3, EmpiricalNormalization::Retained).unwrap();
        accepts += (out.verdict == Verdict::Accept) as usize;
    }
    assert!(accepts >= 40, "{accepts}/50");
}

#[test]
fn two_point_tilt_rejects() {
    let q = FiniteSupport::new([(Word::parse("a", &ab()).unwrap(), 0.5), (Word::parse("b", &ab()).unwrap(), 0.5)])
        .unwrap();
    // P(a) = 0.65: ℓ1 distance exactly 0.3
    let p = parse_sre("'a' +[0.65] 'b'", &ab()).unwrap();
    let n = conservative_sample_count(2, 0.1, 0.3).unwrap();
    let mut rejects = 0;
    for seed in 0..50 {
        let mut src = SreSource::new(p.clone(), ab(), seed).unwrap();
        let mut e = EmpiricalDistribution::new(Some(1));
        for _ in 0..n {
            e.record(src.draw().unwrap());
        }
        let out = finite_tolerant_test(&q, 1.0, &e, 0.1, 0.3, EmpiricalNormalization::Retained).unwrap();
        rejects += (out.verdict == Verdict::Reject) as usize;
    }
    assert!(rejects >= 40, "{rejects}/50");
}

#[test]
fn completeness_and_soundness_on_star_of_choice() {
    let q = parse_sre("('a' +[0.5] 'b') *[0.5]", &ab()).unwrap();
    let cfg = TesterConfig::new(0.3, 0.2, 100);
    let same = run_trials(&q, TestMode::L1, &cfg, 50, |s| SreSource::new(q.clone(), ab(), s)).unwrap();
    assert!(same.accept_rate() >= 0.8);
    let theta = l1_plan(&q, &ab(), &cfg).unwrap().theta;
    let far = planted_alternative(&q, &ab(), theta, 0.5, 1 << 16).unwrap();
    let rej = run_trials(&q, TestMode::L1, &cfg, 50, |s| SreSource::new(far.expr.clone(), ab(), s)).unwrap();
    assert!(rej.reject_rate() >= 0.8);
}

#[test]
fn truncated_source_accepts_like_the_original() {
    let q = parse_sre("('a' +[0.5] 'b') *[0.5]", &ab()).unwrap();
    let cfg = TesterConfig::new(0.3, 0.2, 300);
    let theta = l1_plan(&q, &ab(), &cfg).unwrap().theta;
    let plain = run_trials(&q, TestMode::L1, &cfg, 50, |s| SreSource::new(q.clone(), ab(), s)).unwrap();
    let cut = run_trials(&q, TestMode::L1, &cfg, 50, |s| {
        Ok(TruncatedSource::new(SreSource::new(q.clone(), ab(), s)?, theta))
    })
    .unwrap();
    assert!((plain.accept_rate() - cut.accept_rate()).abs() <= 0.15);
}

#[test]
fn linf_identical_pair_accepts() {
    let a = Alphabet::parse("a").unwrap();
    let q = parse_sre("'a' *[0.5]", &a).unwrap();
    let cfg = TesterConfig::new(0.2, 0.2, 0);
    let s = run_trials(&q, TestMode::Linf, &cfg, 50, |seed| SreSource::new(q.clone(), a.clone(), seed + 1000)).unwrap();
    assert!(s.accept_rate() >= 0.8);
    let mut src = SreSource::new(q.clone(), a.clone(), 77).unwrap();
    assert_eq!(linf_identity_test(&q, &mut src, &cfg).unwrap().verdict, Verdict::Accept);
}

#[test]
fn identical_configs_give_identical_outcomes() {
    let q = parse_sre("'a' . 'b' *[0.6]", &ab()).unwrap();
    for mode in [TestMode::L1, TestMode::Linf] {
        let run = || {
            let cfg = TesterConfig::new(0.3, 0.2, 42);
            let mut src = SreSource::new(q.clone(), ab(), 42).unwrap();
            stochlang::testing::harness::run_test(&q, &mut src, mode, &cfg).unwrap()
        };
        assert_eq!(run(), run());
        assert_eq!(run().to_record(42), run().to_record(42));
    }
}

#[test]
fn larger_budgets_do_not_hurt() {
    let corpus = ["('a' +[0.5] 'b') *[0.5]", "'a' +[0.3] 'b' . 'b'", "'a' . 'b' *[0.6]"];
    for text in corpus {
        let q = parse_sre(text, &ab()).unwrap();
        let base = TesterConfig::new(0.3, 0.2, 500);
        let n = l1_plan(&q, &ab(), &base).unwrap().samples;
        let theta = l1_plan(&q, &ab(), &base).unwrap().theta;
        let far = planted_alternative(&q, &ab(), theta, 0.3, 1 << 16).unwrap();
        let rates = |cfg: &TesterConfig| {
            let same = run_trials(&q, TestMode::L1, cfg, 40, |s| SreSource::new(q.clone(), ab(), s)).unwrap();
            let diff = run_trials(&q, TestMode::L1, cfg, 40, |s| SreSource::new(far.expr.clone(), ab(), s)).unwrap();
            (same.reject_rate(), diff.accept_rate())
        };
        let big = TesterConfig { sample_budget_override: Some(4 * n), ..base.clone() };
        let (e1, e2) = rates(&base);
        let (f1, f2) = rates(&big);
        assert!(f1 <= e1 + 0.05 && f2 <= e2 + 0.05, "{text}: ({e1},{e2}) → ({f1},{f2})");
    }
}

#[test]
fn short_replay_is_exhausted() {
    let q = parse_sre("'a' *[0.5]", &ab()).unwrap();
    let words = vec![Word::parse("a", &ab()).unwrap(); 10];
    let mut src = ReplaySource::new(ab(), words).unwrap();
    let cfg = TesterConfig::new(0.3, 0.2, 0);
    assert_eq!(l1_identity_test(&q, &mut src, &cfg).unwrap_err(), Error::ExhaustedSource { drawn: 10 });
}
