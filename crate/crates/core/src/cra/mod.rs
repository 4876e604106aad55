//! Linear cost register automata.
//!
//! A weighted automaton with `n` states is represented as a one-state
//! automaton with `n` registers, so a single interpreter covers both.

mod affine;
mod compile;
mod dfa;
mod linear;
mod matrix;
pub mod random;
pub mod solve;
mod text;
mod total;

pub use affine::{affine_to_linear, AffineCra};
pub use compile::{compile_sre, sre_automaton, WeightedAutomaton};
pub use dfa::{mass_over_regular, product_with_dfa, Dfa};
pub use linear::{eval_cra, LinearCra, Transition};
pub use matrix::Matrix;
pub use total::{
    is_stochastic, total_weight, total_weight_with, CrossCheck, StochasticityReport, TotalWeightOptions,
    TotalWeightSolution,
};
