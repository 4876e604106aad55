//! Weighted automata and the inductive SRE construction.

use crate::alphabet::Alphabet;
use crate::error::Result;
use crate::sre::SreExpr;

use super::linear::LinearCra;
use super::matrix::Matrix;

/// Nondeterministic weighted automaton: `⟦w⟧ = λᵀ·M_{w₁}⋯M_{wₙ}·f`, where
/// `M_σ[p][q]` is the weight of the edge `p --σ--> q`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAutomaton {
    pub alphabet: Alphabet,
    pub initial: Vec<f64>,
    /// One `n × n` matrix per symbol, in alphabet order.
    pub transitions: Vec<Matrix>,
    pub finals: Vec<f64>,
}

impl WeightedAutomaton {
    pub fn states(&self) -> usize {
        self.initial.len()
    }

    /// Flattens into a one-state CRA with one register per automaton state:
    /// `x_init = λ`, `A_σ = M_σᵀ`, `μ = f`.
    pub fn to_linear_cra(&self) -> Result<LinearCra> {
        LinearCra::single_state(
            self.alphabet.clone(),
            self.initial.clone(),
            self.transitions.iter().map(Matrix::transpose).collect(),
            self.finals.clone(),
        )
    }
}

/// Compiles `r` into a non-negative CRA over `alphabet` with the same
/// semantics. The result has one state and `2·(number of atoms)` registers.
pub fn compile_sre(r: &SreExpr, alphabet: &Alphabet) -> Result<LinearCra> {
    r.check_alphabet(alphabet)?;
    sre_automaton(r, alphabet).to_linear_cra()
}

/// Weighted automaton for `r`: two states per atom, no empty-word weight.
pub fn sre_automaton(r: &SreExpr, alphabet: &Alphabet) -> WeightedAutomaton {
    let k = alphabet.len();
    let Parts {
        initial,
        transitions,
        finals,
    } = build(r, alphabet, k);
    WeightedAutomaton {
        alphabet: alphabet.clone(),
        initial,
        transitions,
        finals,
    }
}

struct Parts {
    initial: Vec<f64>,
    transitions: Vec<Matrix>,
    finals: Vec<f64>,
}

fn build(r: &SreExpr, alphabet: &Alphabet, k: usize) -> Parts {
    match r {
        SreExpr::Atom(c) => {
            let sym = alphabet.index_of(*c).expect("checked by compile_sre");
            let mut transitions = vec![Matrix::zeros(2); k];
            transitions[sym][(0, 1)] = 1.0;
            Parts {
                initial: vec![1.0, 0.0],
                transitions,
                finals: vec![0.0, 1.0],
            }
        }
        SreExpr::Choice {
            weight,
            left,
            right,
        } => {
            let (a, b) = (build(left, alphabet, k), build(right, alphabet, k));
            let alpha = weight.get();
            let initial = a
                .initial
                .iter()
                .map(|x| alpha * x)
                .chain(b.initial.iter().map(|x| (1.0 - alpha) * x))
                .collect();
            let transitions = a
                .transitions
                .iter()
                .zip(&b.transitions)
                .map(|(ma, mb)| block_diag(ma, mb))
                .collect();
            let finals = a.finals.iter().chain(&b.finals).copied().collect();
            Parts {
                initial,
                transitions,
                finals,
            }
        }
        SreExpr::Concat(left, right) => {
            let (a, b) = (build(left, alphabet, k), build(right, alphabet, k));
            let (na, nb) = (a.initial.len(), b.initial.len());
            let transitions = a
                .transitions
                .iter()
                .zip(&b.transitions)
                .map(|(ma, mb)| {
                    let mut m = block_diag(ma, mb);
                    // Leaving A from an accepting state while reading the
                    // first symbol of B: f_A·(λ_Bᵀ·M_B,σ).
                    let entry = row_times(&b.initial, mb);
                    for (p, &fp) in a.finals.iter().enumerate() {
                        if fp == 0.0 {
                            continue;
                        }
                        for (q, &e) in entry.iter().enumerate() {
                            m[(p, na + q)] += fp * e;
                        }
                    }
                    m
                })
                .collect();
            let mut initial = a.initial;
            initial.resize(na + nb, 0.0);
            let mut finals = vec![0.0; na];
            finals.extend(&b.finals);
            Parts {
                initial,
                transitions,
                finals,
            }
        }
        SreExpr::Star { inner, weight } => {
            let a = build(inner, alphabet, k);
            let alpha = weight.get();
            let transitions = a
                .transitions
                .iter()
                .map(|m| {
                    // Restart with probability 1 − α: M + (1−α)·f·(λᵀ·M).
                    let entry = row_times(&a.initial, m);
                    let mut out = m.clone();
                    for (p, &fp) in a.finals.iter().enumerate() {
                        if fp == 0.0 {
                            continue;
                        }
                        for (q, &e) in entry.iter().enumerate() {
                            out[(p, q)] += (1.0 - alpha) * fp * e;
                        }
                    }
                    out
                })
                .collect();
            Parts {
                initial: a.initial,
                transitions,
                finals: a.finals.iter().map(|x| alpha * x).collect(),
            }
        }
    }
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let (na, nb) = (a.dim(), b.dim());
    let mut m = Matrix::zeros(na + nb);
    for i in 0..na {
        for j in 0..na {
            m[(i, j)] = a[(i, j)];
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            m[(na + i, na + j)] = b[(i, j)];
        }
    }
    m
}

/// `vᵀ·M` as a vector.
fn row_times(v: &[f64], m: &Matrix) -> Vec<f64> {
    m.transpose().mul_vec(v)
}
