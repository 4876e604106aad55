//! Seeded random automata for property corpora.

use rand::Rng;

use crate::alphabet::Alphabet;

use super::affine::AffineCra;
use super::dfa::Dfa;
use super::linear::{LinearCra, Transition};
use super::matrix::Matrix;

/// Entries in `[0, 1)`, with update matrices scaled so every column sum
/// is `1/(2|Σ|)`; length-`n` mass then decays at least like `2^{-n}`.
pub fn random_linear_cra<R: Rng + ?Sized>(
    alphabet: &Alphabet,
    states: usize,
    registers: usize,
    rng: &mut R,
) -> LinearCra {
    let k = alphabet.len();
    let d = registers;
    let transitions = (0..states * k)
        .map(|_| {
            let raw: Vec<f64> = (0..d * d).map(|_| rng.gen::<f64>()).collect();
            let mut m = Matrix::from_row_major(d, raw).expect("d×d");
            for j in 0..d {
                let col: f64 = (0..d).map(|i| m[(i, j)]).sum();
                let scale = 0.5 / (k as f64 * col.max(1e-9));
                for i in 0..d {
                    m[(i, j)] *= scale;
                }
            }
            Transition {
                target: rng.gen_range(0..states),
                matrix: m,
            }
        })
        .collect();
    let init = (0..d).map(|_| rng.gen::<f64>()).collect();
    let finals = (0..states).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect()).collect();
    LinearCra::new(alphabet.clone(), 0, init, transitions, finals).expect("consistent shapes")
}

/// Affine automaton with signed entries in `[-1, 1)`; update matrices are
/// scaled to a largest absolute row sum of 0.95.
pub fn random_affine_cra<R: Rng + ?Sized>(
    alphabet: &Alphabet,
    states: usize,
    registers: usize,
    rng: &mut R,
) -> AffineCra {
    let k = alphabet.len();
    let d = registers;
    let signed = |rng: &mut R| rng.gen_range(-1.0..1.0);
    let transitions = (0..states * k)
        .map(|_| {
            let raw: Vec<f64> = (0..d * d).map(|_| signed(rng)).collect();
            let m = Matrix::from_row_major(d, raw).expect("d×d");
            let norm = (0..d)
                .map(|i| (0..d).map(|j| m[(i, j)].abs()).sum::<f64>())
                .fold(0.0, f64::max);
            Transition {
                target: rng.gen_range(0..states),
                matrix: m.scaled(0.95 / norm.max(1e-9)),
            }
        })
        .collect();
    let init = (0..d).map(|_| signed(rng)).collect();
    let finals = (0..states).map(|_| (0..d).map(|_| signed(rng)).collect()).collect();
    let linear = LinearCra::new(alphabet.clone(), 0, init, transitions, finals).expect("consistent shapes");
    let offsets = (0..states * k).map(|_| (0..d).map(|_| signed(rng)).collect()).collect();
    let constants = (0..states).map(|_| signed(rng)).collect();
    AffineCra::new(linear, offsets, constants).expect("consistent shapes")
}

/// Complete DFA with uniformly random transitions; each state accepts
/// with probability 1/2.
pub fn random_dfa<R: Rng + ?Sized>(alphabet: &Alphabet, states: usize, rng: &mut R) -> Dfa {
    let delta = (0..states * alphabet.len()).map(|_| rng.gen_range(0..states)).collect();
    let accepting = (0..states).map(|_| rng.gen_bool(0.5)).collect();
    Dfa::new(alphabet.clone(), rng.gen_range(0..states), accepting, delta).expect("consistent shapes")
}
