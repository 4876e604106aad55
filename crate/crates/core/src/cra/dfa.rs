use std::collections::HashMap;

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};

use super::linear::{LinearCra, Transition};
use super::total::total_weight;

/// Complete deterministic finite automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    /// Indexed by `q * |Σ| + σ`.
    delta: Vec<usize>,
}

impl Dfa {
    pub fn new(alphabet: Alphabet, initial: usize, accepting: Vec<bool>, delta: Vec<usize>) -> Result<Self> {
        let n = accepting.len();
        if n == 0 || initial >= n {
            return Err(Error::InvalidParameter("initial state out of range".into()));
        }
        if delta.len() != n * alphabet.len() {
            return Err(Error::InvalidParameter(format!(
                "transition table needs {} entries, got {}",
                n * alphabet.len(),
                delta.len()
            )));
        }
        if let Some(&t) = delta.iter().find(|&&t| t >= n) {
            return Err(Error::InvalidParameter(format!("transition to unknown state {t}")));
        }
        Ok(Dfa {
            alphabet,
            initial,
            accepting,
            delta,
        })
    }

    /// Accepts every non-empty word.
    pub fn accept_all(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Dfa::new(alphabet, 0, vec![true], vec![0; k]).expect("valid")
    }

    pub fn accept_none(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Dfa::new(alphabet, 0, vec![false], vec![0; k]).expect("valid")
    }

    pub fn even_length(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        let delta = [vec![1; k], vec![0; k]].concat();
        Dfa::new(alphabet, 0, vec![true, false], delta).expect("valid")
    }

    /// Accepts exactly the words of length `1..=max_len`.
    pub fn length_at_most(alphabet: Alphabet, max_len: usize) -> Self {
        let k = alphabet.len();
        let sink = max_len + 1;
        let delta = (0..=sink)
            .flat_map(|q| std::iter::repeat_n((q + 1).min(sink), k))
            .collect();
        let accepting = (0..=sink).map(|q| (1..=max_len).contains(&q)).collect();
        Dfa::new(alphabet, 0, accepting, delta).expect("valid")
    }

    /// Accepts only `w`.
    pub fn single_word(alphabet: Alphabet, w: &Word) -> Result<Self> {
        let k = alphabet.len();
        let n = w.len();
        let sink = n + 1;
        let mut delta = vec![sink; (n + 2) * k];
        for (i, &c) in w.symbols().iter().enumerate() {
            let s = alphabet
                .index_of(c)
                .ok_or_else(|| Error::Alphabet(format!("symbol '{c}' is not in alphabet {alphabet}")))?;
            delta[i * k + s] = i + 1;
        }
        let accepting = (0..=sink).map(|q| q == n).collect();
        Dfa::new(alphabet, 0, accepting, delta)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn next(&self, q: usize, symbol: usize) -> usize {
        self.delta[q * self.alphabet.len() + symbol]
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        let mut q = self.initial;
        for &c in w.symbols() {
            let s = self
                .alphabet
                .index_of(c)
                .ok_or_else(|| Error::Alphabet(format!("symbol '{c}' is not in alphabet {}", self.alphabet)))?;
            q = self.next(q, s);
        }
        Ok(self.accepting[q])
    }
}

fn same_symbols(a: &Alphabet, b: &Alphabet) -> bool {
    a.len() == b.len() && a.symbols().iter().all(|&c| b.contains(c))
}

/// Synchronized product: value `⟦A⟧(w)` where `D` accepts `w`, else 0.
///
/// Only product states reachable from `(q₀, r₀)` are built. The alphabets
/// must contain the same symbols; their order may differ.
pub fn product_with_dfa(a: &LinearCra, d: &Dfa) -> Result<LinearCra> {
    if !same_symbols(a.alphabet(), d.alphabet()) {
        return Err(Error::Alphabet(format!(
            "automaton alphabet {} differs from DFA alphabet {}",
            a.alphabet(),
            d.alphabet()
        )));
    }
    let sym_map: Vec<usize> = a
        .alphabet()
        .symbols()
        .iter()
        .map(|&c| d.alphabet().index_of(c).expect("same symbols"))
        .collect();
    let k = sym_map.len();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut order = vec![(a.initial(), d.initial())];
    index.insert(order[0], 0);
    let mut transitions = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let (q, r) = order[i];
        for s in 0..k {
            let t = a.transition(q, s);
            let pair = (t.target, d.next(r, sym_map[s]));
            let target = *index.entry(pair).or_insert_with(|| {
                order.push(pair);
                order.len() - 1
            });
            transitions.push(Transition {
                target,
                matrix: t.matrix.clone(),
            });
        }
        i += 1;
    }
    let zeros = vec![0.0; a.registers()];
    let finals = order
        .iter()
        .map(|&(q, r)| {
            if d.is_accepting(r) {
                a.final_vector(q).to_vec()
            } else {
                zeros.clone()
            }
        })
        .collect();
    LinearCra::new(a.alphabet().clone(), 0, a.init().to_vec(), transitions, finals)
}

/// Mass `A` assigns to the non-empty words accepted by `D`.
pub fn mass_over_regular(a: &LinearCra, d: &Dfa) -> Result<f64> {
    Ok(total_weight(&product_with_dfa(a, d)?)?.total)
}
