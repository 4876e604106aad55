//! Geometric string distributions and their convex mixtures.
//!
//! `P_w^α` puts mass `α(1−α)^{k−1}` on `w^k` for `k ≥ 1`. Mixtures of these
//! approximate any distribution over `Σ⁺` in ℓ1: put each word of a large
//! enough finite support under a geometric with `α` close to 1.

use std::fmt;

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::mass::{FiniteSupport, MassFunction};
use crate::numfmt::g17;
use crate::sre::{SreExpr, Weight};

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricDistribution {
    base: Word,
    alpha: Weight,
}

impl GeometricDistribution {
    pub fn new(base: Word, alpha: f64) -> Result<Self> {
        Ok(GeometricDistribution {
            base,
            alpha: Weight::new(alpha)?,
        })
    }

    pub fn base(&self) -> &Word {
        &self.base
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.get()
    }

    /// `k` with `u = base^k`, if any.
    pub fn repetitions(&self, u: &Word) -> Option<usize> {
        let b = self.base.symbols();
        let s = u.symbols();
        if !s.len().is_multiple_of(b.len()) || !s.chunks(b.len()).all(|c| c == b) {
            return None;
        }
        Some(s.len() / b.len())
    }

    pub fn pmf(&self, u: &Word) -> f64 {
        match self.repetitions(u) {
            Some(k) => self.pmf_repetitions(k),
            None => 0.0,
        }
    }

    /// Mass of `base^k`.
    pub fn pmf_repetitions(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let a = self.alpha.get();
        a * (1.0 - a).powi((k - 1).min(i32::MAX as usize) as i32)
    }

    /// Exact ℓ1 distance to the point mass on the base word: `2(1−α)`.
    pub fn distance_to_dirac(&self) -> f64 {
        2.0 * self.alpha.complement()
    }

    /// `(base) *[α]`.
    pub fn to_sre(&self) -> SreExpr {
        SreExpr::Star {
            inner: Box::new(SreExpr::word(&self.base)),
            weight: self.alpha,
        }
    }
}

impl MassFunction for GeometricDistribution {
    fn mass(&self, word: &Word) -> f64 {
        self.pmf(word)
    }
    fn declared_total(&self) -> Option<f64> {
        Some(1.0)
    }
}

pub fn geometric_pmf(g: &GeometricDistribution, u: &Word) -> f64 {
    g.pmf(u)
}

/// Safety margin keeping the ℓ1 distance strictly below the request.
const DIRAC_MARGIN: f64 = 1e-12;

/// Geometric distribution within ℓ1 distance `epsilon` of `δ_w`.
///
/// The distance is `(1−α) + Σ_{k≥2} α(1−α)^{k−1} = 2(1−α)`, so
/// `α = 1 − ε/2` (plus a tiny margin) suffices.
pub fn dirac_approx(w: Word, epsilon: f64) -> Result<GeometricDistribution> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must lie in (0,1)")));
    }
    let alpha = (1.0 - epsilon / 2.0 + DIRAC_MARGIN).min(1.0 - f64::EPSILON);
    GeometricDistribution::new(w, alpha)
}

/// Tolerance on `Σ λ_i = 1`.
pub const MIXTURE_WEIGHT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricMixture {
    components: Vec<(f64, GeometricDistribution)>,
}

impl GeometricMixture {
    pub fn new(components: Vec<(f64, GeometricDistribution)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("a mixture needs at least one component".into()));
        }
        if let Some((l, _)) = components.iter().find(|(l, _)| !(0.0..=1.0).contains(l)) {
            return Err(Error::Weight(format!("mixture weight {l} outside [0,1]")));
        }
        let total: f64 = components.iter().map(|(l, _)| l).sum();
        if (total - 1.0).abs() > MIXTURE_WEIGHT_TOLERANCE {
            return Err(Error::Weight(format!("mixture weights sum to {total}, not 1")));
        }
        Ok(GeometricMixture { components })
    }

    /// Scales positive weights to sum to 1.
    pub fn renormalized(components: Vec<(f64, GeometricDistribution)>) -> Result<Self> {
        let total: f64 = components.iter().map(|(l, _)| l).sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::Normalization { total });
        }
        GeometricMixture::new(components.into_iter().map(|(l, g)| (l / total, g)).collect())
    }

    pub fn components(&self) -> &[(f64, GeometricDistribution)] {
        &self.components
    }

    pub fn pmf(&self, u: &Word) -> f64 {
        self.components.iter().map(|(l, g)| l * g.pmf(u)).sum()
    }

    /// Exact ℓ1 distance to a finitely supported `p`.
    ///
    /// Sums `|p − m|` over `supp(p)` and the first `max_repetitions` powers
    /// of every base word; the mixture mass outside that set is added as is.
    pub fn l1_distance_to(&self, p: &FiniteSupport, max_repetitions: usize) -> f64 {
        let mut words: Vec<Word> = p.iter().map(|(w, _)| w.clone()).collect();
        for (_, g) in &self.components {
            words.extend((1..=max_repetitions).map(|k| g.base().repeat(k)));
        }
        words.sort();
        words.dedup();
        let mut covered = 0.0;
        let mut dist = 0.0;
        for w in &words {
            let m = self.pmf(w);
            covered += m;
            dist += (p.mass(w) - m).abs();
        }
        dist + (1.0 - covered).max(0.0)
    }

    /// Parses lines `component <λ> <α> <word>`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut components = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: String| Error::format("mixture", i + 1, m);
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "component" {
                return Err(err("expected 'component <λ> <α> <word>'".into()));
            }
            let lambda: f64 = toks[1].parse().map_err(|_| err(format!("invalid weight '{}'", toks[1])))?;
            let alpha: f64 = toks[2].parse().map_err(|_| err(format!("invalid alpha '{}'", toks[2])))?;
            let word = Word::new(toks[3].chars().collect()).map_err(|e| err(e.to_string()))?;
            let g = GeometricDistribution::new(word, alpha).map_err(|e| err(e.to_string()))?;
            components.push((lambda, g));
        }
        GeometricMixture::new(components)
    }
}

impl MassFunction for GeometricMixture {
    fn mass(&self, word: &Word) -> f64 {
        self.pmf(word)
    }
    fn declared_total(&self) -> Option<f64> {
        Some(1.0)
    }
}

impl fmt::Display for GeometricMixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, g) in &self.components {
            writeln!(f, "component {} {} {}", g17(*l), g17(g.alpha()), g.base())?;
        }
        Ok(())
    }
}

/// `Σ_w p(w)·dirac_approx(w, ε)`; ℓ1 error at most `ε` by convexity.
pub fn approximate_finite_support(p: &FiniteSupport, epsilon: f64) -> Result<GeometricMixture> {
    if p.is_empty() {
        return Err(Error::InvalidParameter("support must be non-empty".into()));
    }
    let total = p.total();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("masses sum to {total}, not 1")));
    }
    let components = p
        .iter()
        .filter(|(_, m)| *m > 0.0)
        .map(|(w, m)| Ok((m, dirac_approx(w.clone(), epsilon)?)))
        .collect::<Result<Vec<_>>>()?;
    GeometricMixture::renormalized(components)
}

/// Geometric mixture within ℓ1 distance `epsilon` of `r`.
///
/// Words are enumerated by increasing length until the collected mass
/// exceeds `1 − ε/4`; the restriction is renormalized and approximated with
/// budget `ε/2`. At most `budget` words are examined.
pub fn universal_approx(
    r: &impl MassFunction,
    alphabet: &Alphabet,
    epsilon: f64,
    budget: u64,
) -> Result<GeometricMixture> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must lie in (0,1)")));
    }
    let target = 1.0 - epsilon / 4.0;
    let mut support = Vec::new();
    let mut mass = 0.0;
    let mut examined: u128 = 0;
    let mut len = 1;
    'lengths: loop {
        let count = (alphabet.len() as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
        if examined.saturating_add(count) > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: examined.saturating_add(count),
                budget,
            });
        }
        for w in alphabet.words_of_length(len) {
            examined += 1;
            let m = r.mass(&w);
            if m > 0.0 {
                mass += m;
                support.push((w, m));
                if mass > target {
                    break 'lengths;
                }
            }
        }
        len += 1;
    }
    let restricted = FiniteSupport::new(support.into_iter().map(|(w, m)| (w, m / mass)))?;
    approximate_finite_support(&restricted, epsilon / 2.0)
}

/// Sequentially conditioned Choice chain realizing the mixture weights.
///
/// Zero-weight components are dropped. Component `i` gets
/// `λ_i / Σ_{j≥i} λ_j` in a right-nested chain.
pub fn mixture_to_sre(m: &GeometricMixture) -> Result<SreExpr> {
    let parts: Vec<&(f64, GeometricDistribution)> = m.components.iter().filter(|(l, _)| *l > 0.0).collect();
    let (last_weight, last) = parts.last().copied().expect("mixtures have a positive weight");
    let mut expr = last.to_sre();
    let mut rest = *last_weight;
    for &(l, g) in parts.iter().rev().skip(1) {
        rest += l;
        expr = SreExpr::choice(l / rest, g.to_sre(), expr)?;
    }
    Ok(expr)
}

/// Experimental constructor with `α_w = 1 − exp(−p(w)/|w|)`.
///
/// No ℓ1 guarantee is claimed; compare truncated KL divergences to judge it.
pub fn heuristic_kl_mixture(p: &FiniteSupport) -> Result<GeometricMixture> {
    let components = p
        .iter()
        .filter(|(_, m)| *m > 0.0)
        .map(|(w, m)| {
            let alpha = -(-m / w.len() as f64).exp_m1();
            Ok((m, GeometricDistribution::new(w.clone(), alpha)?))
        })
        .collect::<Result<Vec<_>>>()?;
    GeometricMixture::renormalized(components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::{l1_distance_truncated, FnMass};

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    fn w(s: &str) -> Word {
        Word::new(s.chars().collect()).unwrap()
    }

    #[test]
    fn pmf_detects_powers() {
        let g = GeometricDistribution::new(w("ab"), 0.5).unwrap();
        assert_eq!(g.pmf(&w("abab")), 0.25);
        assert_eq!(g.pmf(&w("aba")), 0.0);
        assert_eq!(g.pmf(&w("ba")), 0.0);
    }

    #[test]
    fn partial_sums_leave_geometric_tail() {
        let g = GeometricDistribution::new(w("a"), 0.3).unwrap();
        let mut s = 0.0;
        for k in 1..=60 {
            s += g.pmf_repetitions(k);
            assert!((1.0 - s - 0.7f64.powi(k as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn dirac_alpha() {
        let g = dirac_approx(w("ab"), 0.2).unwrap();
        assert!((g.alpha() - 0.9).abs() < 1e-11);
        let brute: f64 = (1.0 - g.pmf_repetitions(1))
            + (2..=400).map(|k| g.pmf_repetitions(k)).sum::<f64>();
        assert!((brute - 0.2).abs() < 1e-9);
        assert!(g.distance_to_dirac() <= 0.2);
        let tiny = dirac_approx(w("a"), 1e-6).unwrap();
        assert!((tiny.alpha() - (1.0 - 5e-7)).abs() < 1e-11);
        assert!(tiny.distance_to_dirac() <= 1e-6);
    }

    #[test]
    fn two_point_support() {
        let p = FiniteSupport::new([(w("a"), 0.5), (w("b"), 0.5)]).unwrap();
        let m = approximate_finite_support(&p, 0.2).unwrap();
        let d = l1_distance_truncated(&p, &m, &ab(), 20, 1 << 22).unwrap();
        assert!(d <= 0.2);
        assert!((m.l1_distance_to(&p, 200) - d).abs() < 1e-9);
    }

    #[test]
    fn universal_on_geometric_input() {
        let r = GeometricDistribution::new(w("a"), 0.5).unwrap();
        let m = universal_approx(&r, &Alphabet::parse("a").unwrap(), 0.2, 1000).unwrap();
        let d = l1_distance_truncated(&r, &m, &Alphabet::parse("a").unwrap(), 30, 1000).unwrap();
        // the tail beyond 30 is below 2·10⁻⁹ on both sides
        assert!(d <= 0.2, "{d}");
    }

    #[test]
    fn heavy_tail_exhausts_budget() {
        let zeta = FnMass::new(
            |u: &Word| 6.0 / (std::f64::consts::PI.powi(2) * (u.len() as f64).powi(2)),
            Some(1.0),
        );
        let a = Alphabet::parse("a").unwrap();
        assert!(matches!(
            universal_approx(&zeta, &a, 0.01, 100),
            Err(Error::BudgetExceeded { budget: 100, .. })
        ));
        assert!(universal_approx(&zeta, &a, 0.2, 100).is_ok());
    }

    #[test]
    fn chain_weights() {
        let g = |s: &str, a: f64| GeometricDistribution::new(w(s), a).unwrap();
        let m = GeometricMixture::new(vec![(0.5, g("a", 0.3)), (0.5, g("b", 0.6))]).unwrap();
        let r = mixture_to_sre(&m).unwrap();
        assert!(matches!(&r, SreExpr::Choice { weight, .. } if weight.get() == 0.5));
        let single = GeometricMixture::new(vec![(1.0, g("ab", 0.4)), (0.0, g("b", 0.6))]).unwrap();
        assert_eq!(mixture_to_sre(&single).unwrap(), g("ab", 0.4).to_sre());
    }

    #[test]
    fn text_round_trip() {
        let g = |s: &str, a: f64| GeometricDistribution::new(w(s), a).unwrap();
        let m = GeometricMixture::new(vec![(0.1, g("a", 0.3)), (0.9, g("ba", 0.6))]).unwrap();
        let text = m.to_string();
        assert_eq!(GeometricMixture::parse(&text).unwrap(), m);
        assert!(GeometricMixture::parse("component 0.5 0.5 a\n").is_err());
    }

    #[test]
    fn heuristic_alphas_are_valid() {
        let p = FiniteSupport::new([(w("a"), 0.7), (w("ab"), 0.3)]).unwrap();
        let m = heuristic_kl_mixture(&p).unwrap();
        for (_, g) in m.components() {
            assert!(g.alpha() > 0.0 && g.alpha() < 1.0);
        }
    }
}
