//! Alphabets, non-empty words, and bounded enumeration of `Σ^{≤θ}`.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of words visited by one exhaustive pass.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 2_000_000;

/// A finite, ordered set of single-character symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let mut out: Vec<char> = Vec::new();
        for c in symbols {
            if c.is_whitespace() {
                return Err(Error::Alphabet(format!("whitespace symbol {c:?}")));
            }
            if out.contains(&c) {
                return Err(Error::Alphabet(format!("duplicate symbol {c:?}")));
            }
            out.push(c);
        }
        if out.is_empty() {
            return Err(Error::Alphabet("alphabet must be non-empty".into()));
        }
        Ok(Alphabet { symbols: out })
    }

    /// Parses concatenated symbols, e.g. `"ab"`.
    pub fn parse(s: &str) -> Result<Self> {
        Alphabet::new(s.chars())
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, c: char) -> bool {
        self.symbols.contains(&c)
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    /// Fails unless every symbol of `self` also belongs to `other`.
    pub fn check_subset_of(&self, other: &Alphabet) -> Result<()> {
        match self.symbols.iter().find(|c| !other.contains(**c)) {
            Some(c) => Err(Error::Alphabet(format!(
                "symbol {c:?} is not in alphabet {other}"
            ))),
            None => Ok(()),
        }
    }

    /// Number of words of length `1..=theta`, i.e. `Σ_{i=1}^{θ} |Σ|^i`.
    /// `None` on overflow.
    pub fn count_words_up_to(&self, theta: usize) -> Option<u128> {
        let n = self.len() as u128;
        let mut total: u128 = 0;
        let mut power: u128 = 1;
        for _ in 0..theta {
            power = power.checked_mul(n)?;
            total = total.checked_add(power)?;
        }
        Some(total)
    }

    /// Visits every word with `1 <= |w| <= theta` in depth-first prefix order.
    ///
    /// Fails before visiting anything if the number of words exceeds `budget`.
    pub fn for_each_word_up_to(
        &self,
        theta: usize,
        budget: u64,
        visit: impl FnMut(&[char]),
    ) -> Result<()> {
        struct Plain<F> {
            buf: Vec<char>,
            visit: F,
        }
        impl<F: FnMut(&[char])> PrefixWalker for Plain<F> {
            fn push(&mut self, c: char) {
                self.buf.push(c);
                (self.visit)(&self.buf);
            }
            fn pop(&mut self) {
                self.buf.pop();
            }
        }
        self.walk_prefixes(
            theta,
            budget,
            &mut Plain {
                buf: Vec::with_capacity(theta),
                visit,
            },
        )
    }

    /// Drives `walker` through the prefix tree of `Σ^{≤θ}`: every word is
    /// reached by exactly one `push` and left by the matching `pop`.
    pub fn walk_prefixes(
        &self,
        theta: usize,
        budget: u64,
        walker: &mut impl PrefixWalker,
    ) -> Result<()> {
        self.check_budget(theta, budget)?;
        self.walk(theta, walker);
        Ok(())
    }

    pub(crate) fn check_budget(&self, theta: usize, budget: u64) -> Result<()> {
        let needed = self.count_words_up_to(theta).unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        Ok(())
    }

    fn walk(&self, remaining: usize, walker: &mut impl PrefixWalker) {
        if remaining == 0 {
            return;
        }
        for &c in &self.symbols {
            walker.push(c);
            self.walk(remaining - 1, walker);
            walker.pop();
        }
    }

    /// Words of exactly length `len` in lexicographic order of symbol indices.
    pub fn words_of_length(&self, len: usize) -> Vec<Word> {
        if len == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; len];
        loop {
            out.push(Word(idx.iter().map(|&i| self.symbols[i]).collect()));
            let mut pos = len;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < self.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.symbols {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Callbacks for a depth-first walk over the prefix tree of words.
pub trait PrefixWalker {
    /// Extends the current word by `c`; the extended word is visited here.
    fn push(&mut self, c: char);
    fn pop(&mut self);
}

/// A non-empty word over single-character symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<char>);

impl Word {
    pub fn new(symbols: Vec<char>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word(symbols))
    }

    /// Parses a raw symbol string, checking every symbol against `alphabet`.
    pub fn parse(s: &str, alphabet: &Alphabet) -> Result<Self> {
        let symbols: Vec<char> = s.chars().collect();
        if let Some(c) = symbols.iter().find(|c| !alphabet.contains(**c)) {
            return Err(Error::Alphabet(format!(
                "symbol {c:?} of word {s:?} is not in alphabet {alphabet}"
            )));
        }
        Word::new(symbols)
    }

    /// Caller guarantees `symbols` is non-empty (enumeration internals).
    pub(crate) fn from_nonempty(symbols: &[char]) -> Self {
        debug_assert!(!symbols.is_empty());
        Word(symbols.to_vec())
    }

    pub fn from_slice(symbols: &[char]) -> Result<Self> {
        Word::new(symbols.to_vec())
    }

    pub fn symbols(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `self` repeated `k >= 1` times.
    pub fn repeat(&self, k: usize) -> Word {
        assert!(k >= 1, "repeat count must be positive");
        Word(self.0.repeat(k))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Alphabet::parse("aba").is_err());
        assert!(Alphabet::parse("").is_err());
        assert_eq!(Alphabet::parse("ba").unwrap().symbols(), &['b', 'a']);
    }

    #[test]
    fn empty_word_is_rejected() {
        assert_eq!(Word::new(vec![]), Err(Error::EmptyWord));
        let ab = Alphabet::parse("ab").unwrap();
        assert_eq!(Word::parse("", &ab), Err(Error::EmptyWord));
        assert!(matches!(Word::parse("abc", &ab), Err(Error::Alphabet(_))));
    }

    #[test]
    fn enumeration_counts() {
        let ab = Alphabet::parse("ab").unwrap();
        assert_eq!(ab.count_words_up_to(3), Some(14));
        let mut n = 0;
        let mut max_len = 0;
        ab.for_each_word_up_to(3, 100, |w| {
            n += 1;
            max_len = max_len.max(w.len());
        })
        .unwrap();
        assert_eq!((n, max_len), (14, 3));
        assert!(matches!(
            ab.for_each_word_up_to(3, 13, |_| {}),
            Err(Error::BudgetExceeded { needed: 14, budget: 13 })
        ));
        assert_eq!(ab.words_of_length(2).len(), 4);
    }
}
