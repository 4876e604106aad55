//! Sample-size formulas. Logarithms are natural.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// Default constants `(C₁, C₂)` of [`sample_count`].
pub const DEFAULT_SAMPLE_CONSTANTS: (f64, f64) = (4.0, 4.0);

/// Sizes of the truncated domain `Σ^{1..θ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DomainSize {
    /// `Σ_{i=1}^{θ} |Σ|^i`.
    pub exact: u64,
    /// `|Σ|^{θ+1}`, `None` if it does not fit in 63 bits.
    pub power_bound: Option<u64>,
}

const LIMIT: u128 = i64::MAX as u128;

pub fn domain_size(alphabet: &Alphabet, theta: usize) -> Result<DomainSize> {
    if theta == 0 {
        return Err(Error::InvalidParameter("θ must be at least 1".into()));
    }
    let exact = alphabet.count_words_up_to(theta).filter(|&n| n <= LIMIT).ok_or(
        Error::BudgetExceeded {
            needed: u128::MAX,
            budget: LIMIT as u64,
        },
    )?;
    let power_bound = u32::try_from(theta + 1)
        .ok()
        .and_then(|e| (alphabet.len() as u128).checked_pow(e))
        .filter(|&n| n <= LIMIT)
        .map(|n| n as u64);
    Ok(DomainSize {
        exact: exact as u64,
        power_bound,
    })
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {x} must lie in (0,1)")))
    }
}

/// `⌈x⌉`, ignoring rounding noise of a few ulps so that e.g.
/// `8·30/(0.3 − 0.1)²` gives 6000 rather than 6001.
fn ceil_count(x: f64) -> u64 {
    let x = x * (1.0 - 4.0 * f64::EPSILON);
    if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x.ceil() as u64
    }
}

/// `⌈C₁·√k·ln(k+1)/ε² + C₂·k/ln k⌉` for `k ≥ 2`.
pub fn sample_count(k: u64, epsilon: f64, constants: (f64, f64)) -> Result<u64> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("domain size k = {k} must be at least 2")));
    }
    check_unit("ε", epsilon)?;
    let k = k as f64;
    let (c1, c2) = constants;
    Ok(ceil_count(c1 * k.sqrt() * (k + 1.0).ln() / (epsilon * epsilon) + c2 * k / k.ln()))
}

/// `⌈8k/(ε₂ − ε₁)²⌉`, enough for the plug-in ℓ1 statistic.
pub fn conservative_sample_count(k: u64, eps1: f64, eps2: f64) -> Result<u64> {
    if !(0.0 < eps1 && eps1 < eps2) {
        return Err(Error::InvalidParameter(format!("need 0 < ε₁ < ε₂, got ({eps1}, {eps2})")));
    }
    let gap = eps2 - eps1;
    Ok(ceil_count(8.0 * k as f64 / (gap * gap)))
}

/// `⌈(1/ε)·ln(1/(εδ))⌉` draws see every word of mass at least `ε` with
/// probability `1 − δ`.
pub fn heavy_hitter_sample_count(epsilon: f64, delta: f64) -> Result<u64> {
    check_unit("ε", epsilon)?;
    check_unit("δ", delta)?;
    Ok(ceil_count((1.0 / (epsilon * delta)).ln() / epsilon))
}

/// `⌈ln(2k/δ)/(2ε²)⌉` draws estimate `k` probabilities to within `ε`
/// simultaneously with probability `1 − δ`.
pub fn hoeffding_sample_count(k: u64, epsilon: f64, delta: f64) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if !(epsilon > 0.0) || !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("need ε > 0 and δ ∈ (0,1], got ({epsilon}, {delta})")));
    }
    Ok(ceil_count((2.0 * k as f64 / delta).ln() / (2.0 * epsilon * epsilon)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_sizes() {
        let ab = Alphabet::parse("ab").unwrap();
        assert_eq!(domain_size(&ab, 3).unwrap(), DomainSize { exact: 14, power_bound: Some(16) });
        let a = Alphabet::parse("a").unwrap();
        assert_eq!(domain_size(&a, 5).unwrap(), DomainSize { exact: 5, power_bound: Some(1) });
        let abc = Alphabet::parse("abc").unwrap();
        assert_eq!(domain_size(&abc, 2).unwrap(), DomainSize { exact: 12, power_bound: Some(27) });
        assert!(matches!(domain_size(&ab, 70), Err(Error::BudgetExceeded { .. })));
        assert_eq!(domain_size(&ab, 62).unwrap().power_bound, None);
    }

    #[test]
    fn asymptotic_count() {
        assert_eq!(sample_count(16, 0.25, DEFAULT_SAMPLE_CONSTANTS).unwrap(), 749);
        let n1 = sample_count(100, 0.2, (4.0, 0.0)).unwrap();
        let n2 = sample_count(100, 0.1, (4.0, 0.0)).unwrap();
        assert!(n2 >= 4 * n1 - 4);
        assert!(sample_count(2, 0.5, DEFAULT_SAMPLE_CONSTANTS).unwrap() > 0);
        assert!(sample_count(1, 0.5, DEFAULT_SAMPLE_CONSTANTS).is_err());
    }

    #[test]
    fn lemma_counts() {
        assert_eq!(heavy_hitter_sample_count(0.1, 0.1).unwrap(), 47);
        assert_eq!(heavy_hitter_sample_count(0.5, 0.5).unwrap(), 3);
        assert_eq!(hoeffding_sample_count(10, 0.1, 0.05).unwrap(), 300);
        assert_eq!(hoeffding_sample_count(1, 0.5, 1.0).unwrap(), 2);
        let mut prev = u64::MAX;
        for d in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            let n = heavy_hitter_sample_count(0.2, d).unwrap();
            assert!(n <= prev);
            prev = n;
        }
        for k in [1, 5, 40] {
            let step = (2f64.ln() / (2.0 * 0.01)).ceil() as u64;
            let (a, b) = (hoeffding_sample_count(k, 0.1, 0.1).unwrap(), hoeffding_sample_count(2 * k, 0.1, 0.1).unwrap());
            assert!(b >= a && b - a <= step);
        }
    }

    #[test]
    fn conservative() {
        assert_eq!(conservative_sample_count(30, 0.1, 0.3).unwrap(), 6000);
        assert!(conservative_sample_count(30, 0.3, 0.1).is_err());
    }
}
