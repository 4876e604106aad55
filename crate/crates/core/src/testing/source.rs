use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::sre::{sample_sre, SreExpr};

/// Sample access to an unknown distribution.
pub trait SampleSource {
    /// Alphabet the draws are over.
    fn alphabet(&self) -> &Alphabet;
    fn draw(&mut self) -> Result<Word>;
}

impl<S: SampleSource + ?Sized> SampleSource for &mut S {
    fn alphabet(&self) -> &Alphabet {
        (**self).alphabet()
    }
    fn draw(&mut self) -> Result<Word> {
        (**self).draw()
    }
}

/// Independent draws from an expression, seeded for reproducibility.
#[derive(Debug, Clone)]
pub struct SreSource {
    expr: SreExpr,
    alphabet: Alphabet,
    rng: ChaCha8Rng,
}

impl SreSource {
    pub fn new(expr: SreExpr, alphabet: Alphabet, seed: u64) -> Result<Self> {
        expr.check_alphabet(&alphabet)?;
        Ok(SreSource {
            expr,
            alphabet,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }
}

impl SampleSource for SreSource {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn draw(&mut self) -> Result<Word> {
        Ok(sample_sre(&self.expr, &mut self.rng))
    }
}

/// Conditions another source on `|w| ≤ max_len` by rejection.
#[derive(Debug, Clone)]
pub struct TruncatedSource<S> {
    inner: S,
    max_len: usize,
    /// Rejections allowed per accepted draw.
    max_attempts: u64,
}

impl<S: SampleSource> TruncatedSource<S> {
    pub fn new(inner: S, max_len: usize) -> Self {
        TruncatedSource {
            inner,
            max_len,
            max_attempts: 1_000_000,
        }
    }
}

impl<S: SampleSource> SampleSource for TruncatedSource<S> {
    fn alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }
    fn draw(&mut self) -> Result<Word> {
        for _ in 0..self.max_attempts {
            let w = self.inner.draw()?;
            if w.len() <= self.max_len {
                return Ok(w);
            }
        }
        Err(Error::InvalidParameter(format!(
            "no word of length ≤ {} in {} attempts",
            self.max_len, self.max_attempts
        )))
    }
}

/// Replays recorded words in order; over-reading is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplaySource {
    alphabet: Alphabet,
    words: Vec<Word>,
    pos: usize,
}

impl ReplaySource {
    pub fn new(alphabet: Alphabet, words: Vec<Word>) -> Result<Self> {
        for w in &words {
            for &c in w.symbols() {
                if !alphabet.contains(c) {
                    return Err(Error::Alphabet(format!("symbol '{c}' is not in alphabet {alphabet}")));
                }
            }
        }
        Ok(ReplaySource { alphabet, words, pos: 0 })
    }

    /// Header `alphabet: <symbols>`, then one word per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::format("replay", 1, "empty file"))?;
        let symbols = header
            .trim()
            .strip_prefix("alphabet:")
            .ok_or_else(|| Error::format("replay", 1, "expected header 'alphabet: <symbols>'"))?;
        let alphabet = Alphabet::parse(symbols.trim()).map_err(|e| Error::format("replay", 1, e.to_string()))?;
        let words = lines
            .map(|(i, l)| Word::parse(l.trim(), &alphabet).map_err(|e| Error::format("replay", i + 1, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReplaySource { alphabet, words, pos: 0 })
    }

    pub fn remaining(&self) -> usize {
        self.words.len() - self.pos
    }
}

/// Replay-file text for `words`.
pub fn format_replay(alphabet: &Alphabet, words: &[Word]) -> String {
    let mut out = String::new();
    writeln!(out, "alphabet: {alphabet}").unwrap();
    for w in words {
        writeln!(out, "{w}").unwrap();
    }
    out
}

impl SampleSource for ReplaySource {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn draw(&mut self) -> Result<Word> {
        let w = self
            .words
            .get(self.pos)
            .cloned()
            .ok_or(Error::ExhaustedSource { drawn: self.pos as u64 })?;
        self.pos += 1;
        Ok(w)
    }
}
