use crate::alphabet::Word;
use crate::error::{Error, Result};

use super::linear::{LinearCra, Transition};
use super::matrix::{dot, Matrix};

/// CRA with affine updates `x ↦ A_{q,σ}·x + b_{q,σ}` and affine output
/// `μ_qᵀ·x + c_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineCra {
    linear: LinearCra,
    /// Indexed like the transitions, `q * |Σ| + σ`.
    offsets: Vec<Vec<f64>>,
    constants: Vec<f64>,
}

impl AffineCra {
    pub fn new(linear: LinearCra, offsets: Vec<Vec<f64>>, constants: Vec<f64>) -> Result<Self> {
        let d = linear.registers();
        if offsets.len() != linear.states() * linear.alphabet().len() || offsets.iter().any(|b| b.len() != d) {
            return Err(Error::InvalidParameter("one offset vector of length d per transition".into()));
        }
        if constants.len() != linear.states() {
            return Err(Error::InvalidParameter("one finalization constant per state".into()));
        }
        Ok(AffineCra {
            linear,
            offsets,
            constants,
        })
    }

    pub fn linear_part(&self) -> &LinearCra {
        &self.linear
    }

    pub fn offset(&self, state: usize, symbol: usize) -> &[f64] {
        &self.offsets[state * self.linear.alphabet().len() + symbol]
    }

    pub fn constant(&self, state: usize) -> f64 {
        self.constants[state]
    }

    /// Direct interpretation of the affine updates.
    pub fn eval(&self, w: &Word) -> Result<f64> {
        let a = &self.linear;
        let mut q = a.initial();
        let mut x = a.init().to_vec();
        for &c in w.symbols() {
            let s = a
                .alphabet()
                .index_of(c)
                .ok_or_else(|| Error::Alphabet(format!("symbol '{c}' is not in alphabet {}", a.alphabet())))?;
            let t = a.transition(q, s);
            x = t.matrix.mul_vec(&x);
            for (xi, bi) in x.iter_mut().zip(self.offset(q, s)) {
                *xi += bi;
            }
            q = t.target;
        }
        Ok(dot(a.final_vector(q), &x) + self.constants[q])
    }
}

/// Equivalent linear CRA with `2d` registers: the extra `d` registers stay at
/// 1 and feed the offsets through `[[A, diag(b)], [0, I]]`.
pub fn affine_to_linear(a: &AffineCra) -> LinearCra {
    let lin = &a.linear;
    let d = lin.registers();
    let k = lin.alphabet().len();
    let mut transitions = Vec::with_capacity(lin.states() * k);
    for q in 0..lin.states() {
        for s in 0..k {
            let t = lin.transition(q, s);
            let b = a.offset(q, s);
            let mut m = Matrix::zeros(2 * d);
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] = t.matrix[(i, j)];
                }
                m[(i, d + i)] = b[i];
                m[(d + i, d + i)] = 1.0;
            }
            transitions.push(Transition {
                target: t.target,
                matrix: m,
            });
        }
    }
    let mut init = lin.init().to_vec();
    init.extend(std::iter::repeat_n(1.0, d));
    let finals = (0..lin.states())
        .map(|q| {
            let mut f = lin.final_vector(q).to_vec();
            f.push(a.constants[q]);
            f.extend(std::iter::repeat_n(0.0, d - 1));
            f
        })
        .collect();
    LinearCra::new(lin.alphabet().clone(), lin.initial(), init, transitions, finals)
        .expect("shapes follow from a valid affine automaton")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    #[test]
    fn halving_with_offset() {
        let a1 = Alphabet::parse("a").unwrap();
        let x0 = 0.7;
        let lin = LinearCra::single_state(a1.clone(), vec![x0], vec![Matrix::identity(1).scaled(0.5)], vec![1.0])
            .unwrap();
        let aff = AffineCra::new(lin, vec![vec![0.25]], vec![0.0]).unwrap();
        let out = affine_to_linear(&aff);
        assert_eq!(out.registers(), 2);
        let a = Word::parse("a", &a1).unwrap();
        for n in 1..=20 {
            let h = 0.5f64.powi(n);
            let want = h * x0 + 0.25 * (1.0 - h) / 0.5;
            assert!((out.eval(&a.repeat(n as usize)).unwrap() - want).abs() < 1e-14);
            assert!((aff.eval(&a.repeat(n as usize)).unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_offsets_keep_linear_semantics() {
        let ab = Alphabet::parse("ab").unwrap();
        let ma = Matrix::from_rows(&[&[0.2, 0.5], &[0.1, 0.3]]).unwrap();
        let mb = Matrix::from_rows(&[&[0.0, 1.0], &[0.4, 0.0]]).unwrap();
        let lin = LinearCra::single_state(ab.clone(), vec![1.0, 0.5], vec![ma, mb], vec![0.3, 0.7]).unwrap();
        let aff = AffineCra::new(lin.clone(), vec![vec![0.0; 2]; 2], vec![0.0]).unwrap();
        let out = affine_to_linear(&aff);
        ab.for_each_word_up_to(6, 1000, |s| {
            let w = Word::from_slice(s).unwrap();
            assert!((out.eval(&w).unwrap() - lin.eval(&w).unwrap()).abs() < 1e-15);
        })
        .unwrap();
    }
}
