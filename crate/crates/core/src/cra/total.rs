//! Total weight `Σ_{w∈Σ⁺} ⟦A⟧(w)` via the linear fixed-point system
//! `s_q = μ_q + Σ_σ A_{q,σ}ᵀ·s_{δ(q,σ)}`.
//!
//! The system sums over `Σ*`, so its solution includes the empty word's value
//! `μ_{q₀}ᵀ·x_init`; the reported total subtracts it.

use crate::error::{Error, Result};

use super::linear::LinearCra;
use super::matrix::dot;
use super::solve::{residual_inf, solve_dense};

#[derive(Debug, Clone, PartialEq)]
pub struct TotalWeightOptions {
    /// Length `L₀` of the brute-force cross-check sum.
    pub cross_check_length: usize,
    /// Entries of `s` down to `-tolerance` count as non-negative.
    pub tolerance: f64,
    /// Relative disagreement above which the cross-check fails.
    pub agreement: f64,
}

impl Default for TotalWeightOptions {
    fn default() -> Self {
        TotalWeightOptions {
            cross_check_length: 14,
            tolerance: 1e-9,
            agreement: 0.05,
        }
    }
}

/// Partial sums `Σ_{1≤|w|≤L}` compared against the algebraic total.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheck {
    pub length: usize,
    pub truncated_sum: f64,
    /// `|total − truncated_sum| / max(|total|, tiny)`.
    pub relative_gap: f64,
    pub agrees: bool,
    /// The last three partial sums close in on the total with shrinking steps.
    pub approaching: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TotalWeightSolution {
    /// `s_q` for every state, each of length `d`.
    pub per_state: Vec<Vec<f64>>,
    /// Mass of all non-empty words.
    pub total: f64,
    /// `μ_{q₀}ᵀ·x_init`, excluded from `total`.
    pub empty_word_weight: f64,
    /// `‖M·s − μ‖_∞` of the assembled system.
    pub residual: f64,
    pub nonnegative: bool,
    pub min_entry: f64,
    pub cross_check: CrossCheck,
    /// Non-negative solution that the cross-check supports.
    pub validated: bool,
}

impl TotalWeightSolution {
    /// Largest residual the solver is expected to leave: `10⁻⁸·(1 + ‖μ‖_∞)`.
    pub fn residual_bound(a: &LinearCra) -> f64 {
        let norm = (0..a.states())
            .flat_map(|q| a.final_vector(q).iter())
            .fold(0.0f64, |m, x| m.max(x.abs()));
        1e-8 * (1.0 + norm)
    }
}

pub fn total_weight(a: &LinearCra) -> Result<TotalWeightSolution> {
    total_weight_with(a, &TotalWeightOptions::default())
}

pub fn total_weight_with(a: &LinearCra, opts: &TotalWeightOptions) -> Result<TotalWeightSolution> {
    let d = a.registers();
    let n = a.states() * d;
    let mut m = vec![0.0; n * n];
    let mut rhs = vec![0.0; n];
    for q in 0..a.states() {
        for i in 0..d {
            m[(q * d + i) * n + q * d + i] += 1.0;
            rhs[q * d + i] = a.final_vector(q)[i];
        }
        for s in 0..a.alphabet().len() {
            let t = a.transition(q, s);
            // row block q, column block q′ receives −Aᵀ
            for i in 0..d {
                for j in 0..d {
                    m[(q * d + i) * n + t.target * d + j] -= t.matrix[(j, i)];
                }
            }
        }
    }
    let s = solve_dense(m.clone(), rhs.clone())?;
    let residual = residual_inf(&m, &s, &rhs);
    let per_state: Vec<Vec<f64>> = s.chunks(d).map(<[f64]>::to_vec).collect();
    let min_entry = s.iter().copied().fold(f64::INFINITY, f64::min);
    let finite = s.iter().all(|x| x.is_finite());
    let nonnegative = finite && min_entry >= -opts.tolerance;

    let q0 = a.initial();
    let empty_word_weight = dot(a.final_vector(q0), a.init());
    let total = dot(&per_state[q0], a.init()) - empty_word_weight;

    let cross_check = cross_check(a, total, opts);
    let validated = nonnegative && total.is_finite() && (cross_check.agrees || cross_check.approaching);
    Ok(TotalWeightSolution {
        per_state,
        total,
        empty_word_weight,
        residual,
        nonnegative,
        min_entry,
        cross_check,
        validated,
    })
}

fn cross_check(a: &LinearCra, total: f64, opts: &TotalWeightOptions) -> CrossCheck {
    let len = opts.cross_check_length.max(3);
    let lm = a.length_masses(len);
    let mut partial = Vec::with_capacity(len + 1);
    let mut acc = 0.0;
    partial.push(0.0);
    for &x in &lm[1..] {
        acc += x;
        partial.push(acc);
    }
    let truncated_sum = partial[len];
    let scale = total.abs().max(f64::MIN_POSITIVE);
    let relative_gap = (total - truncated_sum).abs() / scale;
    let agrees = relative_gap <= opts.agreement || (total - truncated_sum).abs() <= 1e-12;
    let gap = |l: usize| (total - partial[l]).abs();
    let step = |l: usize| (partial[l] - partial[l - 1]).abs();
    let approaching =
        gap(len) < gap(len - 1) && gap(len - 1) < gap(len - 2) && step(len) <= step(len - 1);
    CrossCheck {
        length: len,
        truncated_sum,
        relative_gap,
        agrees,
        approaching,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StochasticityReport {
    pub stochastic: bool,
    pub tolerance: f64,
    pub solution: TotalWeightSolution,
}

/// Whether a non-negative automaton defines a probability distribution on
/// `Σ⁺`: total within `tol` of 1 and every `s_q` entry at least `-tol`.
pub fn is_stochastic(a: &LinearCra, tol: f64) -> Result<StochasticityReport> {
    if !a.is_nonnegative() {
        return Err(Error::NegativeWeights);
    }
    let opts = TotalWeightOptions {
        tolerance: tol,
        ..TotalWeightOptions::default()
    };
    let solution = total_weight_with(a, &opts)?;
    let finite = solution.per_state.iter().flatten().all(|x| x.is_finite());
    let stochastic = finite && solution.min_entry >= -tol && (solution.total - 1.0).abs() <= tol;
    Ok(StochasticityReport {
        stochastic,
        tolerance: tol,
        solution,
    })
}
