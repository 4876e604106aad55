use super::SreExpr;

/// A length `θ` past which the expression's mass is meant to be below `ε/3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationThreshold {
    pub theta: usize,
    pub epsilon: f64,
}

/// Structural length bound: `θ(σ) = 1`, `θ(r₁ + r₂) = max`,
/// `θ(r₁ · r₂) = θ(r₁) + θ(r₂)`, and
/// `θ(r*_α) = θ(r) · K` with `K` the least integer such that
/// `(1 − α)^K < ε/3` (that is `⌈ln(ε/3) / ln(1 − α)⌉`, one more when the
/// ratio is integral).
///
/// Saturates at `usize::MAX` instead of overflowing.
///
/// # Panics
/// If `epsilon` is not in `(0, 1)`.
pub fn truncation_threshold(r: &SreExpr, epsilon: f64) -> TruncationThreshold {
    assert!(
        epsilon > 0.0 && epsilon < 1.0,
        "ε must lie in (0,1), got {epsilon}"
    );
    let log_target = (epsilon / 3.0).ln();
    TruncationThreshold {
        theta: theta_of(r, log_target),
        epsilon,
    }
}

/// Number of star iterations `K` with `(1 − α)^K < ε/3`: the ceiling of
/// the log ratio, plus one when the ratio is an integer.
pub(crate) fn star_repetitions(alpha: f64, log_target: f64) -> usize {
    let k = (log_target / (-alpha).ln_1p()).floor() + 1.0;
    if k >= usize::MAX as f64 {
        usize::MAX
    } else {
        (k as usize).max(1)
    }
}

fn theta_of(r: &SreExpr, log_target: f64) -> usize {
    match r {
        SreExpr::Atom(_) => 1,
        SreExpr::Choice { left, right, .. } => {
            theta_of(left, log_target).max(theta_of(right, log_target))
        }
        SreExpr::Concat(left, right) => {
            theta_of(left, log_target).saturating_add(theta_of(right, log_target))
        }
        SreExpr::Star { inner, weight } => theta_of(inner, log_target)
            .saturating_mul(star_repetitions(weight.get(), log_target)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sre::mass_up_to;

    #[test]
    fn rule_cases() {
        assert_eq!(truncation_threshold(&SreExpr::atom('a'), 0.1).theta, 1);
        let ab = SreExpr::concat(SreExpr::atom('a'), SreExpr::atom('b'));
        assert_eq!(truncation_threshold(&ab, 0.25).theta, 2);
        let s = SreExpr::star(SreExpr::atom('a'), 0.5).unwrap();
        assert_eq!(truncation_threshold(&s, 0.3).theta, 4);
        let c = SreExpr::choice(0.5, ab, SreExpr::atom('a')).unwrap();
        assert_eq!(truncation_threshold(&c, 0.3).theta, 2);
    }

    #[test]
    fn geometric_tail_below_third_of_epsilon() {
        let s = SreExpr::star(SreExpr::atom('a'), 0.5).unwrap();
        for eps in [0.1, 0.2, 0.3] {
            let t = truncation_threshold(&s, eps);
            let m = mass_up_to(&s, t.theta, 1_000).unwrap();
            assert!(m >= 1.0 - eps / 3.0, "ε={eps}: θ={} mass={m}", t.theta);
        }
    }

    #[test]
    fn integer_log_ratio_gets_one_more_iteration() {
        // (1 − 0.5)² equals ε/3 = 0.25 exactly, so two iterations are not enough
        let h = SreExpr::star(SreExpr::atom('a'), 0.5).unwrap();
        assert_eq!(truncation_threshold(&h, 0.75).theta, 3);
        let tail = 1.0 - mass_up_to(&h, 3, 100).unwrap();
        assert!(tail < 0.25);
    }

    #[test]
    fn tiny_alpha_saturates_instead_of_overflowing() {
        let s = SreExpr::star(SreExpr::atom('a'), 1e-300).unwrap();
        let nested = SreExpr::star(s, 1e-300).unwrap();
        assert_eq!(truncation_threshold(&nested, 0.1).theta, usize::MAX);
    }
}
