//! Stochastic regular expressions.
//!
//! An expression denotes a probability distribution over `Σ⁺` built from four
//! constructors:
//!
//! * `'σ'`: the point mass on the one-symbol word `σ`;
//! * `r₁ +[α] r₂`: the convex combination `α·r₁ + (1−α)·r₂`;
//! * `r₁ . r₂`: the Cauchy product, splitting a word into two non-empty parts;
//! * `r *[α]`: the discounted star, `Σ_{k≥1} α(1−α)^{k−1} r^k`.
//!
//! Postfix star binds tightest, then concatenation, then choice; both infix
//! operators associate to the left.

mod eval;
mod parse;
pub mod random;
mod sample;
mod truncation;

use std::fmt;

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::mass::MassFunction;

pub use eval::{length_masses, mass_up_to, IncrementalEval};
pub use parse::{parse_sre, SreFile};
pub use sample::sample_sre;
pub use truncation::{truncation_threshold, TruncationThreshold};

/// A probability strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Weight(f64);

impl Weight {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Weight(value))
        } else {
            Err(Error::Weight(format!("weight {value} must lie in (0,1)")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 − α`.
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

impl TryFrom<f64> for Weight {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Weight::new(value)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Shortest representation that parses back to the same f64.
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SreExpr {
    Atom(char),
    Choice {
        weight: Weight,
        left: Box<SreExpr>,
        right: Box<SreExpr>,
    },
    Concat(Box<SreExpr>, Box<SreExpr>),
    Star {
        inner: Box<SreExpr>,
        weight: Weight,
    },
}

impl SreExpr {
    pub fn atom(symbol: char) -> Self {
        SreExpr::Atom(symbol)
    }

    pub fn choice(alpha: f64, left: SreExpr, right: SreExpr) -> Result<Self> {
        Ok(SreExpr::Choice {
            weight: Weight::new(alpha)?,
            left: Box::new(left),
            right: Box::new(right),
        })
    }

    pub fn concat(left: SreExpr, right: SreExpr) -> Self {
        SreExpr::Concat(Box::new(left), Box::new(right))
    }

    pub fn star(inner: SreExpr, alpha: f64) -> Result<Self> {
        Ok(SreExpr::Star {
            inner: Box::new(inner),
            weight: Weight::new(alpha)?,
        })
    }

    /// Left-nested concatenation of the atoms of `word`.
    pub fn word(word: &Word) -> Self {
        let mut symbols = word.symbols().iter();
        let first = SreExpr::Atom(*symbols.next().expect("words are non-empty"));
        symbols.fold(first, |acc, &c| SreExpr::concat(acc, SreExpr::Atom(c)))
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            SreExpr::Atom(_) => 1,
            SreExpr::Choice { left, right, .. } | SreExpr::Concat(left, right) => {
                1 + left.size() + right.size()
            }
            SreExpr::Star { inner, .. } => 1 + inner.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SreExpr::Atom(_) => 1,
            SreExpr::Choice { left, right, .. } | SreExpr::Concat(left, right) => {
                1 + left.depth().max(right.depth())
            }
            SreExpr::Star { inner, .. } => 1 + inner.depth(),
        }
    }

    pub fn atom_count(&self) -> usize {
        match self {
            SreExpr::Atom(_) => 1,
            SreExpr::Choice { left, right, .. } | SreExpr::Concat(left, right) => {
                left.atom_count() + right.atom_count()
            }
            SreExpr::Star { inner, .. } => inner.atom_count(),
        }
    }

    pub fn has_star(&self) -> bool {
        match self {
            SreExpr::Atom(_) => false,
            SreExpr::Choice { left, right, .. } | SreExpr::Concat(left, right) => {
                left.has_star() || right.has_star()
            }
            SreExpr::Star { .. } => true,
        }
    }

    /// Distinct symbols in order of first (leftmost) occurrence.
    pub fn symbols(&self) -> Vec<char> {
        fn go(e: &SreExpr, out: &mut Vec<char>) {
            match e {
                SreExpr::Atom(c) => {
                    if !out.contains(c) {
                        out.push(*c);
                    }
                }
                SreExpr::Choice { left, right, .. } | SreExpr::Concat(left, right) => {
                    go(left, out);
                    go(right, out);
                }
                SreExpr::Star { inner, .. } => go(inner, out),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// The alphabet of symbols that actually occur in the expression.
    pub fn support_alphabet(&self) -> Alphabet {
        Alphabet::new(self.symbols()).expect("expressions contain at least one atom")
    }

    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        self.support_alphabet().check_subset_of(alphabet)
    }

    /// Weight parameters in pre-order (node's own weight before its children).
    pub fn weights(&self) -> Vec<Weight> {
        let mut out = Vec::new();
        self.visit_weights(&mut |w| out.push(*w));
        out
    }

    fn visit_weights(&self, f: &mut impl FnMut(&Weight)) {
        match self {
            SreExpr::Atom(_) => {}
            SreExpr::Choice {
                weight,
                left,
                right,
            } => {
                f(weight);
                left.visit_weights(f);
                right.visit_weights(f);
            }
            SreExpr::Concat(left, right) => {
                left.visit_weights(f);
                right.visit_weights(f);
            }
            SreExpr::Star { inner, weight } => {
                f(weight);
                inner.visit_weights(f);
            }
        }
    }

    /// Copy with the `index`-th weight (pre-order) replaced.
    pub fn with_weight(&self, index: usize, value: Weight) -> Option<SreExpr> {
        let mut out = self.clone();
        let mut seen = 0;
        let mut hit = false;
        out.visit_weights_mut(&mut |w| {
            if seen == index {
                *w = value;
                hit = true;
            }
            seen += 1;
        });
        hit.then_some(out)
    }

    fn visit_weights_mut(&mut self, f: &mut impl FnMut(&mut Weight)) {
        match self {
            SreExpr::Atom(_) => {}
            SreExpr::Choice {
                weight,
                left,
                right,
            } => {
                f(weight);
                left.visit_weights_mut(f);
                right.visit_weights_mut(f);
            }
            SreExpr::Concat(left, right) => {
                left.visit_weights_mut(f);
                right.visit_weights_mut(f);
            }
            SreExpr::Star { inner, weight } => {
                f(weight);
                inner.visit_weights_mut(f);
            }
        }
    }

    /// Probability of `word`.
    pub fn eval(&self, word: &Word) -> f64 {
        let mut ev = IncrementalEval::new(self);
        for &c in word.symbols() {
            ev.push(c);
        }
        ev.value()
    }

    fn precedence(&self) -> u8 {
        match self {
            SreExpr::Choice { .. } => 0,
            SreExpr::Concat(..) => 1,
            SreExpr::Star { .. } | SreExpr::Atom(_) => 2,
        }
    }
}

/// `⟦r⟧(w)`.
pub fn eval_sre(r: &SreExpr, w: &Word) -> f64 {
    r.eval(w)
}

impl MassFunction for SreExpr {
    fn mass(&self, word: &Word) -> f64 {
        self.eval(word)
    }
    fn declared_total(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// Canonical form: minimal parentheses, single spaces around infix operators.
impl fmt::Display for SreExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(f: &mut fmt::Formatter<'_>, e: &SreExpr, min_prec: u8) -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            SreExpr::Atom(c) => write!(f, "'{c}'"),
            SreExpr::Choice {
                weight,
                left,
                right,
            } => {
                operand(f, left, 0)?;
                write!(f, " +[{weight}] ")?;
                operand(f, right, 1)
            }
            SreExpr::Concat(left, right) => {
                operand(f, left, 1)?;
                write!(f, " . ")?;
                operand(f, right, 2)
            }
            SreExpr::Star { inner, weight } => {
                operand(f, inner, 2)?;
                write!(f, " *[{weight}]")
            }
        }
    }
}

/// Canonical text of `r`.
pub fn print_sre(r: &SreExpr) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_reject_boundaries() {
        assert!(Weight::new(0.0).is_err());
        assert!(Weight::new(1.0).is_err());
        assert!(Weight::new(f64::NAN).is_err());
        assert!(Weight::new(0.5).is_ok());
    }

    #[test]
    fn canonical_printing() {
        let a = SreExpr::atom('a');
        let b = SreExpr::atom('b');
        let e = SreExpr::choice(0.3, a.clone(), SreExpr::concat(b.clone(), b.clone())).unwrap();
        assert_eq!(e.to_string(), "'a' +[0.3] 'b' . 'b'");
        let s = SreExpr::star(SreExpr::concat(a.clone(), b.clone()), 0.5).unwrap();
        assert_eq!(s.to_string(), "('a' . 'b') *[0.5]");
        let right_nested = SreExpr::concat(a.clone(), SreExpr::concat(b.clone(), a.clone()));
        assert_eq!(right_nested.to_string(), "'a' . ('b' . 'a')");
        let ss = SreExpr::star(SreExpr::star(a, 0.5).unwrap(), 0.25).unwrap();
        assert_eq!(ss.to_string(), "'a' *[0.5] *[0.25]");
    }

    #[test]
    fn weight_rewriting_follows_preorder() {
        let e = SreExpr::star(
            SreExpr::choice(0.3, SreExpr::atom('a'), SreExpr::atom('b')).unwrap(),
            0.5,
        )
        .unwrap();
        let ws: Vec<f64> = e.weights().iter().map(|w| w.get()).collect();
        assert_eq!(ws, vec![0.5, 0.3]);
        let e2 = e.with_weight(1, Weight::new(0.9).unwrap()).unwrap();
        let ws: Vec<f64> = e2.weights().iter().map(|w| w.get()).collect();
        assert_eq!(ws, vec![0.5, 0.9]);
        assert!(e.with_weight(2, Weight::new(0.9).unwrap()).is_none());
    }
}
