//! Identity testers: is an unknown, sampled distribution `P` equal to a
//! known expression `Q`, or far from it?
//!
//! The ℓ1 tester truncates to words of length at most `θ`, where `Q` has
//! less than `ε/3` of its mass beyond, and runs a tolerant plug-in test on
//! the finite domain. The ℓ∞ tester collects heavy words first and then
//! estimates their probabilities.

mod counts;
pub mod harness;
mod planted;
mod source;

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::mass::{EmpiricalDistribution, EmpiricalNormalization, MassFunction};
use crate::numfmt::g17;
use crate::sre::{length_masses, truncation_threshold, SreExpr};
use crate::DEFAULT_ENUMERATION_BUDGET;

pub use counts::{
    conservative_sample_count, domain_size, heavy_hitter_sample_count, hoeffding_sample_count, sample_count,
    DomainSize, DEFAULT_SAMPLE_CONSTANTS,
};
pub use planted::{planted_alternative, PlantedAlternative};
pub use source::{format_replay, ReplaySource, SampleSource, SreSource, TruncatedSource};

#[derive(Debug, Clone, PartialEq)]
pub struct TesterConfig {
    pub epsilon: f64,
    /// Target failure probability.
    pub delta: f64,
    /// Reported with the outcome; sources are seeded by the caller.
    pub seed: u64,
    pub sample_budget_override: Option<u64>,
    /// `(ε₁, ε₂)` of the tolerant core; `None` means `(ε/3, ε)`.
    pub inner_thresholds: Option<(f64, f64)>,
    /// `(C₁, C₂)` of [`sample_count`].
    pub sample_constants: (f64, f64),
    pub normalization: EmpiricalNormalization,
    /// Largest truncated domain the ℓ1 tester accepts.
    pub enumeration_budget: u64,
}

impl TesterConfig {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Self {
        TesterConfig {
            epsilon,
            delta,
            seed,
            sample_budget_override: None,
            inner_thresholds: None,
            sample_constants: DEFAULT_SAMPLE_CONSTANTS,
            normalization: EmpiricalNormalization::Retained,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }

    pub fn thresholds(&self) -> (f64, f64) {
        self.inner_thresholds.unwrap_or((self.epsilon / 3.0, self.epsilon))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad(format!("ε = {} must lie in (0,1)", self.epsilon));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("δ = {} must lie in (0,1)", self.delta));
        }
        let (e1, e2) = self.thresholds();
        if !(0.0 < e1 && e1 < e2) {
            return bad(format!("inner thresholds need 0 < ε₁ < ε₂, got ({e1}, {e2})"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestMode {
    L1,
    Linf,
}

impl fmt::Display for TestMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestMode::L1 => "l1",
            TestMode::Linf => "linf",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestOutcome {
    pub mode: TestMode,
    pub verdict: Verdict,
    pub statistic: f64,
    pub threshold_used: f64,
    pub samples_drawn: u64,
    pub samples_discarded: u64,
    /// Truncation length; `None` for the ℓ∞ tester.
    pub theta: Option<usize>,
    /// Domain size (ℓ1) or number of heavy candidates (ℓ∞).
    pub domain_size_k: u64,
    /// `|Σ|^{θ+1}`, logged alongside the exact count.
    pub domain_size_bound: Option<u64>,
    /// Short kebab-case codes.
    pub warnings: Vec<String>,
}

impl TestOutcome {
    /// Line-oriented `key=value` record; values contain no spaces.
    pub fn to_record(&self, seed: u64) -> String {
        let mut out = String::new();
        let opt = |x: Option<u64>| x.map_or("none".to_string(), |v| v.to_string());
        writeln!(out, "mode={}", self.mode).unwrap();
        writeln!(out, "verdict={}", self.verdict).unwrap();
        writeln!(out, "statistic={}", g17(self.statistic)).unwrap();
        writeln!(out, "threshold={}", g17(self.threshold_used)).unwrap();
        writeln!(out, "theta={}", opt(self.theta.map(|t| t as u64))).unwrap();
        writeln!(out, "k={}", self.domain_size_k).unwrap();
        writeln!(out, "k_bound={}", opt(self.domain_size_bound)).unwrap();
        writeln!(out, "N={}", self.samples_drawn).unwrap();
        writeln!(out, "discarded={}", self.samples_discarded).unwrap();
        writeln!(out, "seed={seed}").unwrap();
        for w in &self.warnings {
            writeln!(out, "warning={w}").unwrap();
        }
        out
    }
}

/// Plug-in tolerant test on the truncated domain.
///
/// The statistic is `Σ_{|w|≤θ} |p̂(w) − q(w)|`. Words never observed
/// contribute `q(w)` each, so it is computed from the observed words and
/// `q_head_mass = Σ_{|w|≤θ} q(w)` without enumerating the domain. Accepts iff
/// the statistic is at most `(ε₁ + ε₂)/2`.
pub fn finite_tolerant_test(
    q: &impl MassFunction,
    q_head_mass: f64,
    samples: &EmpiricalDistribution,
    eps1: f64,
    eps2: f64,
    normalization: EmpiricalNormalization,
) -> Result<TestOutcome> {
    if !(0.0 < eps1 && eps1 < eps2) {
        return Err(Error::InvalidParameter(format!("need 0 < ε₁ < ε₂, got ({eps1}, {eps2})")));
    }
    if samples.retained() == 0 {
        return Err(Error::EmptySample);
    }
    let freqs = samples.frequencies(normalization);
    let mut statistic = 0.0;
    let mut q_observed = 0.0;
    for (w, f) in freqs.iter() {
        let qw = q.mass(w);
        statistic += (f - qw).abs();
        q_observed += qw;
    }
    statistic += (q_head_mass - q_observed).max(0.0);
    let threshold_used = (eps1 + eps2) / 2.0;
    Ok(TestOutcome {
        mode: TestMode::L1,
        verdict: if statistic <= threshold_used {
            Verdict::Accept
        } else {
            Verdict::Reject
        },
        statistic,
        threshold_used,
        samples_drawn: samples.total_drawn(),
        samples_discarded: samples.discarded(),
        theta: samples.threshold(),
        domain_size_k: 0,
        domain_size_bound: None,
        warnings: Vec::new(),
    })
}

/// Sample budget, truncation and domain of an ℓ1 run, before any draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Plan {
    pub theta: usize,
    pub domain: DomainSize,
    pub samples: u64,
}

pub fn l1_plan(q: &SreExpr, alphabet: &crate::Alphabet, cfg: &TesterConfig) -> Result<L1Plan> {
    cfg.validate()?;
    let theta = truncation_threshold(q, cfg.epsilon).theta;
    let domain = domain_size(alphabet, theta)?;
    if domain.exact > cfg.enumeration_budget {
        return Err(Error::BudgetExceeded {
            needed: domain.exact as u128,
            budget: cfg.enumeration_budget,
        });
    }
    let samples = match cfg.sample_budget_override {
        Some(n) => n,
        None => sample_count(domain.exact.max(2), cfg.epsilon, cfg.sample_constants)?,
    };
    Ok(L1Plan { theta, domain, samples })
}

/// ℓ1 identity test of the source against `q`.
///
/// Draws `N` words, discarding those longer than `θ` (they still count
/// toward `N`), and compares the rest against the unnormalized restriction
/// of `q` to lengths `≤ θ`.
pub fn l1_identity_test(q: &SreExpr, source: &mut impl SampleSource, cfg: &TesterConfig) -> Result<TestOutcome> {
    q.check_alphabet(source.alphabet())?;
    let plan = l1_plan(q, source.alphabet(), cfg)?;
    let mut samples = EmpiricalDistribution::new(Some(plan.theta));
    for _ in 0..plan.samples {
        samples.record(source.draw()?);
    }
    let head: f64 = length_masses(q, plan.theta)[1..].iter().sum();
    let (e1, e2) = cfg.thresholds();
    let mut out = finite_tolerant_test(q, head, &samples, e1, e2, cfg.normalization)?;
    out.domain_size_k = plan.domain.exact;
    out.domain_size_bound = plan.domain.power_bound;
    Ok(out)
}

/// ℓ∞ identity test of the source against `q`.
///
/// Stage 1 draws enough words to see every word of mass `≥ ε`; stage 2
/// estimates the probabilities of those candidates from fresh draws and
/// accepts iff every estimate is within `ε` of `q`.
pub fn linf_identity_test(q: &SreExpr, source: &mut impl SampleSource, cfg: &TesterConfig) -> Result<TestOutcome> {
    cfg.validate()?;
    q.check_alphabet(source.alphabet())?;
    let eps = cfg.epsilon;
    let n1 = heavy_hitter_sample_count(eps, cfg.delta / 2.0)?;
    let mut heavy = EmpiricalDistribution::new(None);
    for _ in 0..n1 {
        heavy.record(source.draw()?);
    }
    let candidates: Vec<_> = heavy.counts().map(|(w, _)| w.clone()).collect();
    let mut out = TestOutcome {
        mode: TestMode::Linf,
        verdict: Verdict::Accept,
        statistic: 0.0,
        threshold_used: eps,
        samples_drawn: n1,
        samples_discarded: 0,
        theta: None,
        domain_size_k: candidates.len() as u64,
        domain_size_bound: None,
        warnings: Vec::new(),
    };
    if candidates.is_empty() {
        out.warnings.push("no-heavy-candidates".into());
        return Ok(out);
    }
    let n2 = match cfg.sample_budget_override {
        Some(n) => n,
        None => hoeffding_sample_count(candidates.len() as u64, eps / 2.0, cfg.delta / 2.0)?,
    };
    let mut fresh = EmpiricalDistribution::new(None);
    for _ in 0..n2 {
        fresh.record(source.draw()?);
    }
    out.samples_drawn += n2;
    out.statistic = candidates
        .iter()
        .map(|w| (fresh.count(w) as f64 / n2.max(1) as f64 - q.eval(w)).abs())
        .fold(0.0, f64::max);
    if out.statistic > eps {
        out.verdict = Verdict::Reject;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{Alphabet, Word};
    use crate::mass::{l1_distance_empirical, FiniteSupport};

    fn w(s: &str) -> Word {
        Word::new(s.chars().collect()).unwrap()
    }

    #[test]
    fn maximal_discrepancy_rejects() {
        let q = FiniteSupport::new([(w("a"), 0.5), (w("b"), 0.5)]).unwrap();
        let all_a: Vec<Word> = (0..1000).map(|_| w("a")).collect();
        let e = EmpiricalDistribution::from_words(Some(1), &all_a);
        let out = finite_tolerant_test(&q, 1.0, &e, 0.3, 0.9, EmpiricalNormalization::Retained).unwrap();
        assert!((out.statistic - 1.0).abs() < 1e-12);
        assert_eq!(out.verdict, Verdict::Reject);
    }

    #[test]
    fn sparse_statistic_matches_enumeration() {
        let r = SreExpr::star(SreExpr::choice(0.3, SreExpr::atom('a'), SreExpr::atom('b')).unwrap(), 0.4)
            .unwrap();
        let ab = Alphabet::parse("ab").unwrap();
        let mut src = SreSource::new(r.clone(), ab.clone(), 9).unwrap();
        let mut e = EmpiricalDistribution::new(Some(5));
        for _ in 0..300 {
            e.record(src.draw().unwrap());
        }
        let head: f64 = length_masses(&r, 5)[1..].iter().sum();
        for norm in [EmpiricalNormalization::Retained, EmpiricalNormalization::Drawn] {
            let out = finite_tolerant_test(&r, head, &e, 0.1, 0.3, norm).unwrap();
            let oracle = l1_distance_empirical(&e, &r, &ab, 5, 1 << 20, norm).unwrap();
            assert!((out.statistic - oracle).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_sample_is_an_error() {
        let q = FiniteSupport::new([(w("a"), 1.0)]).unwrap();
        let e = EmpiricalDistribution::from_words(Some(1), &[w("aa")]);
        assert_eq!(
            finite_tolerant_test(&q, 1.0, &e, 0.1, 0.3, EmpiricalNormalization::Retained).unwrap_err(),
            Error::EmptySample
        );
    }

    #[test]
    fn records_are_deterministic() {
        let r = SreExpr::star(SreExpr::atom('a'), 0.5).unwrap();
        let a = Alphabet::parse("a").unwrap();
        let run = |seed| {
            let cfg = TesterConfig::new(0.3, 0.2, seed);
            let mut src = SreSource::new(r.clone(), a.clone(), seed).unwrap();
            l1_identity_test(&r, &mut src, &cfg).unwrap().to_record(seed)
        };
        assert_eq!(run(5), run(5));
        assert!(run(5).contains("theta=4\n"));
    }

    #[test]
    fn linf_far_pair_rejects() {
        let a = Alphabet::parse("a").unwrap();
        let q = SreExpr::star(SreExpr::atom('a'), 0.5).unwrap();
        let p = SreExpr::star(SreExpr::atom('a'), 0.9).unwrap();
        let cfg = TesterConfig::new(0.2, 0.2, 1);
        let mut src = SreSource::new(p, a, 1).unwrap();
        let out = linf_identity_test(&q, &mut src, &cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Reject);
        assert_eq!(out.samples_drawn, heavy_hitter_sample_count(0.2, 0.1).unwrap() + {
            hoeffding_sample_count(out.domain_size_k, 0.1, 0.1).unwrap()
        });
    }

    #[test]
    fn budget_guard() {
        let r = SreExpr::star(SreExpr::choice(0.5, SreExpr::atom('a'), SreExpr::atom('b')).unwrap(), 0.05)
            .unwrap();
        let ab = Alphabet::parse("ab").unwrap();
        let mut cfg = TesterConfig::new(0.1, 0.2, 0);
        cfg.enumeration_budget = 1000;
        let mut src = SreSource::new(r.clone(), ab, 0).unwrap();
        assert!(matches!(l1_identity_test(&r, &mut src, &cfg), Err(Error::BudgetExceeded { .. })));
    }
}
