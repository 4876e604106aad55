//! Mass functions over `Σ⁺`, normalization, empirical tables, and ℓ1 distances.

use std::collections::BTreeMap;

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};

/// A non-negative function on non-empty words.
pub trait MassFunction {
    fn mass(&self, word: &Word) -> f64;

    /// Total mass over `Σ⁺`, when known analytically.
    fn declared_total(&self) -> Option<f64> {
        None
    }
}

impl<M: MassFunction + ?Sized> MassFunction for &M {
    fn mass(&self, word: &Word) -> f64 {
        (**self).mass(word)
    }
    fn declared_total(&self) -> Option<f64> {
        (**self).declared_total()
    }
}

/// Point mass on a single word.
#[derive(Debug, Clone, PartialEq)]
pub struct Dirac(pub Word);

impl MassFunction for Dirac {
    fn mass(&self, word: &Word) -> f64 {
        if *word == self.0 {
            1.0
        } else {
            0.0
        }
    }
    fn declared_total(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// A mass function given by an explicit finite table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FiniteSupport {
    masses: BTreeMap<Word, f64>,
}

impl FiniteSupport {
    pub fn new(entries: impl IntoIterator<Item = (Word, f64)>) -> Result<Self> {
        let mut masses = BTreeMap::new();
        for (w, m) in entries {
            if !(m.is_finite() && m >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "mass of {w} must be finite and non-negative, got {m}"
                )));
            }
            *masses.entry(w).or_insert(0.0) += m;
        }
        Ok(FiniteSupport { masses })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, f64)> {
        self.masses.iter().map(|(w, &m)| (w, m))
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.masses.values().sum()
    }

    pub fn max_len(&self) -> usize {
        self.masses.keys().map(Word::len).max().unwrap_or(0)
    }
}

impl MassFunction for FiniteSupport {
    fn mass(&self, word: &Word) -> f64 {
        self.masses.get(word).copied().unwrap_or(0.0)
    }
    fn declared_total(&self) -> Option<f64> {
        Some(self.total())
    }
}

/// Wraps a closure as a mass function.
pub struct FnMass<F> {
    f: F,
    total: Option<f64>,
}

impl<F: Fn(&Word) -> f64> FnMass<F> {
    pub fn new(f: F, declared_total: Option<f64>) -> Self {
        FnMass {
            f,
            total: declared_total,
        }
    }
}

impl<F: Fn(&Word) -> f64> MassFunction for FnMass<F> {
    fn mass(&self, word: &Word) -> f64 {
        (self.f)(word)
    }
    fn declared_total(&self) -> Option<f64> {
        self.total
    }
}

/// `m / T`, where `T` is the declared total of `m`.
#[derive(Debug, Clone)]
pub struct Normalized<M> {
    inner: M,
    total: f64,
}

impl<M> Normalized<M> {
    pub fn source_total(&self) -> f64 {
        self.total
    }

    pub fn into_inner(self) -> M {
        self.inner
    }
}

impl<M: MassFunction> MassFunction for Normalized<M> {
    fn mass(&self, word: &Word) -> f64 {
        self.inner.mass(word) / self.total
    }
    fn declared_total(&self) -> Option<f64> {
        Some(1.0)
    }
}

pub fn normalize<M: MassFunction>(m: M) -> Result<Normalized<M>> {
    let total = m.declared_total().unwrap_or(f64::NAN);
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::Normalization { total });
    }
    Ok(Normalized { inner: m, total })
}

/// `Σ_{|w|≤θ} m(w)` by exhaustive enumeration.
pub fn truncated_mass(
    m: &impl MassFunction,
    alphabet: &Alphabet,
    theta: usize,
    budget: u64,
) -> Result<f64> {
    let mut sum = 0.0;
    alphabet.for_each_word_up_to(theta, budget, |w| {
        sum += m.mass(&Word::from_nonempty(w));
    })?;
    Ok(sum)
}

/// `Σ_{|w|≤θ} |p(w) − q(w)|` by exhaustive enumeration of `Σ^{≤θ}`.
pub fn l1_distance_truncated(
    p: &impl MassFunction,
    q: &impl MassFunction,
    alphabet: &Alphabet,
    theta: usize,
    budget: u64,
) -> Result<f64> {
    if theta == 0 {
        return Err(Error::InvalidParameter("θ must be at least 1".into()));
    }
    let mut sum = 0.0;
    alphabet.for_each_word_up_to(theta, budget, |w| {
        let w = Word::from_nonempty(w);
        sum += (p.mass(&w) - q.mass(&w)).abs();
    })?;
    Ok(sum)
}

/// ℓ1 distance restricted to an explicit word set; exact whenever both
/// functions vanish outside `support`.
pub fn l1_distance_on<'a>(
    p: &impl MassFunction,
    q: &impl MassFunction,
    support: impl IntoIterator<Item = &'a Word>,
) -> f64 {
    support
        .into_iter()
        .map(|w| (p.mass(w) - q.mass(w)).abs())
        .sum()
}

/// `Σ_{|w|≤θ} p(w) ln(p(w)/q(w))`, a diagnostic only; `+∞` when `q`
/// vanishes where `p` does not.
pub fn kl_divergence_truncated(
    p: &impl MassFunction,
    q: &impl MassFunction,
    alphabet: &Alphabet,
    theta: usize,
    budget: u64,
) -> Result<f64> {
    let mut sum = 0.0;
    alphabet.for_each_word_up_to(theta, budget, |w| {
        let w = Word::from_nonempty(w);
        let pw = p.mass(&w);
        if pw > 0.0 {
            let qw = q.mass(&w);
            sum += if qw > 0.0 {
                pw * (pw / qw).ln()
            } else {
                f64::INFINITY
            };
        }
    })?;
    Ok(sum)
}

/// How empirical frequencies are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmpiricalNormalization {
    /// Divide by the number of retained (non-discarded) draws.
    #[default]
    Retained,
    /// Divide by every draw, including those discarded by truncation.
    Drawn,
}

/// Frequency table of observed words, with truncation bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EmpiricalDistribution {
    counts: BTreeMap<Word, u64>,
    total_drawn: u64,
    discarded: u64,
    threshold: Option<usize>,
}

impl EmpiricalDistribution {
    pub fn new(threshold: Option<usize>) -> Self {
        EmpiricalDistribution {
            threshold,
            ..Default::default()
        }
    }

    pub fn from_words<'a>(
        threshold: Option<usize>,
        words: impl IntoIterator<Item = &'a Word>,
    ) -> Self {
        let mut e = EmpiricalDistribution::new(threshold);
        for w in words {
            e.record(w.clone());
        }
        e
    }

    /// Counts one draw; words longer than the threshold are discarded.
    pub fn record(&mut self, word: Word) {
        self.total_drawn += 1;
        match self.threshold {
            Some(theta) if word.len() > theta => self.discarded += 1,
            _ => *self.counts.entry(word).or_insert(0) += 1,
        }
    }

    /// Pointwise sum of two tables with the same threshold.
    pub fn merge(&mut self, other: &EmpiricalDistribution) -> Result<()> {
        if self.threshold != other.threshold {
            return Err(Error::InvalidParameter(
                "cannot merge empirical tables with different thresholds".into(),
            ));
        }
        for (w, &c) in &other.counts {
            *self.counts.entry(w.clone()).or_insert(0) += c;
        }
        self.total_drawn += other.total_drawn;
        self.discarded += other.discarded;
        Ok(())
    }

    pub fn count(&self, word: &Word) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> impl Iterator<Item = (&Word, u64)> {
        self.counts.iter().map(|(w, &c)| (w, c))
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn retained(&self) -> u64 {
        self.total_drawn - self.discarded
    }

    pub fn total_drawn(&self) -> u64 {
        self.total_drawn
    }

    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    pub fn threshold(&self) -> Option<usize> {
        self.threshold
    }

    fn denominator(&self, norm: EmpiricalNormalization) -> f64 {
        let d = match norm {
            EmpiricalNormalization::Retained => self.retained(),
            EmpiricalNormalization::Drawn => self.total_drawn,
        };
        d.max(1) as f64
    }

    pub fn frequency(&self, word: &Word, norm: EmpiricalNormalization) -> f64 {
        self.count(word) as f64 / self.denominator(norm)
    }

    /// A frozen view usable as a [`MassFunction`].
    pub fn frequencies(&self, norm: EmpiricalNormalization) -> FiniteSupport {
        let d = self.denominator(norm);
        FiniteSupport {
            masses: self
                .counts
                .iter()
                .map(|(w, &c)| (w.clone(), c as f64 / d))
                .collect(),
        }
    }
}

/// `Σ_{|w|≤θ} |ê(w) − q(w)|` over every word of `Σ^{≤θ}`, where `ê` are the
/// empirical frequencies under `norm`.
pub fn l1_distance_empirical(
    e: &EmpiricalDistribution,
    q: &impl MassFunction,
    alphabet: &Alphabet,
    theta: usize,
    budget: u64,
    norm: EmpiricalNormalization,
) -> Result<f64> {
    if e.retained() == 0 {
        return Err(Error::EmptySample);
    }
    if let Some(t) = e.threshold() {
        if t != theta {
            return Err(Error::InvalidParameter(format!(
                "empirical table truncated at {t}, distance requested at {theta}"
            )));
        }
    }
    l1_distance_truncated(&e.frequencies(norm), q, alphabet, theta, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::new(s.chars().collect()).unwrap()
    }

    #[test]
    fn normalize_finite_support() {
        let m = FiniteSupport::new([(w("a"), 0.2), (w("ab"), 0.6)]).unwrap();
        let n = normalize(m).unwrap();
        assert!((n.mass(&w("a")) - 0.25).abs() < 1e-12);
        assert!((n.mass(&w("ab")) - 0.75).abs() < 1e-12);
        assert_eq!(n.declared_total(), Some(1.0));
    }

    #[test]
    fn normalize_identity_when_total_is_one() {
        let m = FiniteSupport::new([(w("a"), 0.5), (w("b"), 0.5)]).unwrap();
        let n = normalize(m.clone()).unwrap();
        for word in [w("a"), w("b"), w("aa")] {
            assert_eq!(n.mass(&word), m.mass(&word));
        }
    }

    #[test]
    fn normalize_rejects_bad_totals() {
        let zero = FiniteSupport::new([(w("a"), 0.0)]).unwrap();
        assert!(matches!(normalize(zero), Err(Error::Normalization { .. })));
        let inf = FnMass::new(|_| 1.0, Some(f64::INFINITY));
        assert!(matches!(normalize(inf), Err(Error::Normalization { .. })));
        let unknown = FnMass::new(|_| 1.0, None);
        assert!(matches!(normalize(unknown), Err(Error::Normalization { .. })));
    }

    #[test]
    fn poisson_series_normalizes() {
        // λ^n / (n! 3^n) over |Σ| = 3 with λ = 1; total e − 1.
        let lambda: f64 = 1.0;
        let series = FnMass::new(
            move |w: &Word| {
                let n = w.len() as i32;
                let fact: f64 = (1..=n).map(f64::from).product();
                lambda.powi(n) / (fact * 3f64.powi(n))
            },
            Some(lambda.exp() - 1.0),
        );
        let abc = Alphabet::parse("abc").unwrap();
        let head = truncated_mass(&series, &abc, 9, DEFAULT_BUDGET).unwrap();
        assert!((head - (lambda.exp() - 1.0)).abs() < 1e-6);
        let n = normalize(series).unwrap();
        assert!((n.source_total() - 1.718281828459045).abs() < 1e-12);
        let expected = 1.0 / ((std::f64::consts::E - 1.0) * 3.0);
        assert!((n.mass(&w("b")) - expected).abs() < 1e-12);
        assert!((n.mass(&w("b")) - 0.193_992).abs() < 1e-6);
    }

    const DEFAULT_BUDGET: u64 = crate::alphabet::DEFAULT_ENUMERATION_BUDGET;

    #[test]
    fn l1_truncated_basic_cases() {
        let ab = Alphabet::parse("ab").unwrap();
        let da = Dirac(w("a"));
        let db = Dirac(w("b"));
        assert_eq!(l1_distance_truncated(&da, &da, &ab, 3, DEFAULT_BUDGET).unwrap(), 0.0);
        assert_eq!(l1_distance_truncated(&da, &db, &ab, 1, DEFAULT_BUDGET).unwrap(), 2.0);
        assert!(matches!(
            l1_distance_truncated(&da, &db, &ab, 30, DEFAULT_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn empirical_bookkeeping_and_merge() {
        let mut e = EmpiricalDistribution::new(Some(2));
        for s in ["a", "ab", "abb", "a"] {
            e.record(w(s));
        }
        assert_eq!((e.total_drawn(), e.discarded(), e.retained()), (4, 1, 3));
        let mut f = EmpiricalDistribution::new(Some(2));
        f.record(w("b"));
        e.merge(&f).unwrap();
        assert_eq!(e.count(&w("a")), 2);
        assert_eq!(e.count(&w("b")), 1);
        let sum: u64 = e.counts().map(|(_, c)| c).sum();
        assert_eq!(sum + e.discarded(), e.total_drawn());
        assert!(e.merge(&EmpiricalDistribution::new(None)).is_err());
    }

    #[test]
    fn l1_empirical_cases() {
        let ab = Alphabet::parse("ab").unwrap();
        let uniform = FiniteSupport::new([(w("a"), 0.5), (w("b"), 0.5)]).unwrap();
        let all_a = EmpiricalDistribution::from_words(Some(1), &vec![w("a"); 10]);
        let d = l1_distance_empirical(
            &all_a,
            &uniform,
            &ab,
            1,
            DEFAULT_BUDGET,
            EmpiricalNormalization::Retained,
        )
        .unwrap();
        assert!((d - 1.0).abs() < 1e-12);

        let matching = EmpiricalDistribution::from_words(Some(1), &[w("a"), w("b")]);
        let d = l1_distance_empirical(
            &matching,
            &uniform,
            &ab,
            1,
            DEFAULT_BUDGET,
            EmpiricalNormalization::Retained,
        )
        .unwrap();
        assert_eq!(d, 0.0);

        let empty = EmpiricalDistribution::new(Some(1));
        assert_eq!(
            l1_distance_empirical(&empty, &uniform, &ab, 1, 10, EmpiricalNormalization::Retained),
            Err(Error::EmptySample)
        );
    }
}
