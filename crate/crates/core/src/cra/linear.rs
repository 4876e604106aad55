use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::mass::MassFunction;

use super::matrix::{dot, Matrix};

/// Target state and register update of one `(q, σ)` transition.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub target: usize,
    pub matrix: Matrix,
}

/// Deterministic cost register automaton with linear register updates.
///
/// Reading `σ` in state `q` moves to `δ(q, σ)` and replaces the register
/// vector `x` by `A_{q,σ}·x`; the value of a word is `μ_qᵀ·x` in the state
/// reached at its end.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCra {
    alphabet: Alphabet,
    initial: usize,
    init: Vec<f64>,
    /// Indexed by `q * |Σ| + σ`.
    transitions: Vec<Transition>,
    finals: Vec<Vec<f64>>,
}

impl LinearCra {
    /// `transitions` is indexed by `q * |Σ| + σ`, with `σ` the symbol's
    /// position in `alphabet`.
    pub fn new(
        alphabet: Alphabet,
        initial: usize,
        init: Vec<f64>,
        transitions: Vec<Transition>,
        finals: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let states = finals.len();
        let d = init.len();
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if states == 0 {
            return bad("an automaton needs at least one state".into());
        }
        if d == 0 {
            return bad("an automaton needs at least one register".into());
        }
        if initial >= states {
            return bad(format!("initial state {initial} out of range"));
        }
        if transitions.len() != states * alphabet.len() {
            return bad(format!(
                "expected {} transitions ({} states × {} symbols), got {}",
                states * alphabet.len(),
                states,
                alphabet.len(),
                transitions.len()
            ));
        }
        for (i, t) in transitions.iter().enumerate() {
            if t.target >= states {
                return bad(format!("transition {i} targets unknown state {}", t.target));
            }
            if t.matrix.dim() != d {
                return bad(format!("transition {i} matrix is not {d}×{d}"));
            }
        }
        if let Some(q) = finals.iter().position(|f| f.len() != d) {
            return bad(format!("final vector of state {q} has wrong length"));
        }
        Ok(LinearCra {
            alphabet,
            initial,
            init,
            transitions,
            finals,
        })
    }

    /// Single-state automaton: `A_σ` for each symbol in alphabet order.
    pub fn single_state(
        alphabet: Alphabet,
        init: Vec<f64>,
        matrices: Vec<Matrix>,
        finals: Vec<f64>,
    ) -> Result<Self> {
        let transitions = matrices
            .into_iter()
            .map(|matrix| Transition { target: 0, matrix })
            .collect();
        LinearCra::new(alphabet, 0, init, transitions, vec![finals])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.finals.len()
    }

    pub fn registers(&self) -> usize {
        self.init.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn init(&self) -> &[f64] {
        &self.init
    }

    pub fn transition(&self, state: usize, symbol: usize) -> &Transition {
        &self.transitions[state * self.alphabet.len() + symbol]
    }

    pub fn final_vector(&self, state: usize) -> &[f64] {
        &self.finals[state]
    }

    /// Smallest weight among `x_init`, all update matrices and all final vectors.
    pub fn min_weight(&self) -> f64 {
        let m = self
            .transitions
            .iter()
            .map(|t| t.matrix.min_entry())
            .fold(f64::INFINITY, f64::min);
        self.init
            .iter()
            .chain(self.finals.iter().flatten())
            .copied()
            .fold(m, f64::min)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.min_weight() >= 0.0
    }

    fn symbol_indices(&self, w: &Word) -> Result<Vec<usize>> {
        w.symbols()
            .iter()
            .map(|&c| {
                self.alphabet.index_of(c).ok_or_else(|| {
                    Error::Alphabet(format!("symbol '{c}' is not in alphabet {}", self.alphabet))
                })
            })
            .collect()
    }

    /// Final state and register valuation after reading `symbols`.
    pub fn run_indices(&self, symbols: &[usize]) -> (usize, Vec<f64>) {
        let mut q = self.initial;
        let mut x = self.init.clone();
        for &s in symbols {
            let t = self.transition(q, s);
            x = t.matrix.mul_vec(&x);
            q = t.target;
        }
        (q, x)
    }

    pub fn eval_indices(&self, symbols: &[usize]) -> f64 {
        let (q, x) = self.run_indices(symbols);
        dot(&self.finals[q], &x)
    }

    pub fn eval(&self, w: &Word) -> Result<f64> {
        Ok(self.eval_indices(&self.symbol_indices(w)?))
    }

    /// Entry `ℓ` is the total value of all words of length `ℓ`; entry 0 is
    /// the value of the empty word, `μ_{q₀}ᵀ·x_init`.
    pub fn length_masses(&self, max_len: usize) -> Vec<f64> {
        let d = self.registers();
        let mut v = vec![vec![0.0; d]; self.states()];
        v[self.initial].clone_from(&self.init);
        let mass = |v: &[Vec<f64>]| -> f64 { v.iter().zip(&self.finals).map(|(x, f)| dot(f, x)).sum() };
        let mut out = Vec::with_capacity(max_len + 1);
        out.push(mass(&v));
        for _ in 0..max_len {
            let mut next = vec![vec![0.0; d]; self.states()];
            for (q, x) in v.iter().enumerate() {
                if x.iter().all(|&e| e == 0.0) {
                    continue;
                }
                for s in 0..self.alphabet.len() {
                    let t = self.transition(q, s);
                    t.matrix.mul_vec_add(x, &mut next[t.target]);
                }
            }
            v = next;
            out.push(mass(&v));
        }
        out
    }

    /// `Σ_{1≤|w|≤max_len} ⟦A⟧(w)`.
    pub fn truncated_sum(&self, max_len: usize) -> f64 {
        self.length_masses(max_len)[1..].iter().sum()
    }
}

/// `⟦A⟧(w)`.
pub fn eval_cra(a: &LinearCra, w: &Word) -> Result<f64> {
    a.eval(w)
}

/// Words over other alphabets get mass 0.
impl MassFunction for LinearCra {
    fn mass(&self, word: &Word) -> f64 {
        self.eval(word).unwrap_or(0.0)
    }
}
