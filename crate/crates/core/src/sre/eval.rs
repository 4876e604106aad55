use crate::alphabet::PrefixWalker;
use crate::error::Result;

use super::SreExpr;

#[derive(Debug, Clone)]
enum Node {
    Atom(char),
    Choice { alpha: f64, left: usize, right: usize },
    Concat { left: usize, right: usize },
    Star { alpha: f64, inner: usize },
}

/// Prefix-incremental evaluator.
///
/// For every sub-expression it keeps the values on all sub-words
/// `w[i..e)` of the current word, one column per end position `e`. Appending
/// a symbol computes one new column per node; removing it drops the column.
/// A push costs `O(|w|²)` per concatenation or star node.
#[derive(Debug, Clone)]
pub struct IncrementalEval {
    nodes: Vec<Node>,
    /// `cols[node][e - 1][i]` is the node's value on `w[i..e)`.
    cols: Vec<Vec<Vec<f64>>>,
    word: Vec<char>,
}

impl IncrementalEval {
    pub fn new(expr: &SreExpr) -> Self {
        let mut nodes = Vec::with_capacity(expr.size());
        flatten(expr, &mut nodes);
        let cols = vec![Vec::new(); nodes.len()];
        IncrementalEval {
            nodes,
            cols,
            word: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn push(&mut self, symbol: char) {
        self.word.push(symbol);
        let end = self.word.len();
        for n in 0..self.nodes.len() {
            let mut col = vec![0.0; end];
            match self.nodes[n] {
                Node::Atom(c) => {
                    if c == symbol {
                        col[end - 1] = 1.0;
                    }
                }
                Node::Choice { alpha, left, right } => {
                    let (l, r) = (&self.cols[left][end - 1], &self.cols[right][end - 1]);
                    for i in 0..end {
                        col[i] = alpha * l[i] + (1.0 - alpha) * r[i];
                    }
                }
                Node::Concat { left, right } => {
                    let lcols = &self.cols[left];
                    let rnew = &self.cols[right][end - 1];
                    for i in 0..end {
                        let mut s = 0.0;
                        for m in (i + 1)..end {
                            s += lcols[m - 1][i] * rnew[m];
                        }
                        col[i] = s;
                    }
                }
                Node::Star { alpha, inner } => {
                    // S(i, e) = α·r(i, e) + (1−α)·Σ_{i<m<e} r(i, m)·S(m, e)
                    let icols = &self.cols[inner];
                    let inew = &icols[end - 1];
                    for i in (0..end).rev() {
                        let mut s = 0.0;
                        for m in (i + 1)..end {
                            s += icols[m - 1][i] * col[m];
                        }
                        col[i] = alpha * inew[i] + (1.0 - alpha) * s;
                    }
                }
            }
            self.cols[n].push(col);
        }
    }

    pub fn pop(&mut self) {
        if self.word.pop().is_some() {
            for c in &mut self.cols {
                c.pop();
            }
        }
    }

    /// Value of the whole current word; 0 for the empty word.
    pub fn value(&self) -> f64 {
        match self.cols.last().and_then(|c| c.last()) {
            Some(col) => col[0],
            None => 0.0,
        }
    }
}

fn flatten(expr: &SreExpr, nodes: &mut Vec<Node>) -> usize {
    let node = match expr {
        SreExpr::Atom(c) => Node::Atom(*c),
        SreExpr::Choice {
            weight,
            left,
            right,
        } => {
            let left = flatten(left, nodes);
            let right = flatten(right, nodes);
            Node::Choice {
                alpha: weight.get(),
                left,
                right,
            }
        }
        SreExpr::Concat(left, right) => {
            let left = flatten(left, nodes);
            let right = flatten(right, nodes);
            Node::Concat { left, right }
        }
        SreExpr::Star { inner, weight } => {
            let inner = flatten(inner, nodes);
            Node::Star {
                alpha: weight.get(),
                inner,
            }
        }
    };
    nodes.push(node);
    nodes.len() - 1
}

struct MassAccumulator {
    eval: IncrementalEval,
    sum: f64,
}

impl PrefixWalker for MassAccumulator {
    fn push(&mut self, c: char) {
        self.eval.push(c);
        self.sum += self.eval.value();
    }
    fn pop(&mut self) {
        self.eval.pop();
    }
}

/// `Σ_{|w|≤θ} ⟦r⟧(w)` by exhaustive enumeration.
///
/// Only symbols occurring in `r` are enumerated; every other word has mass 0.
pub fn mass_up_to(r: &SreExpr, theta: usize, budget: u64) -> Result<f64> {
    let alphabet = r.support_alphabet();
    let mut walker = MassAccumulator {
        eval: IncrementalEval::new(r),
        sum: 0.0,
    };
    alphabet.walk_prefixes(theta, budget, &mut walker)?;
    Ok(walker.sum)
}

/// Exact length marginals: entry `ℓ` is `Σ_{|w|=ℓ} ⟦r⟧(w)` for
/// `ℓ ≤ max_len`; entry 0 is always 0.
pub fn length_masses(r: &SreExpr, max_len: usize) -> Vec<f64> {
    let n = max_len + 1;
    match r {
        SreExpr::Atom(_) => {
            let mut m = vec![0.0; n];
            if max_len >= 1 {
                m[1] = 1.0;
            }
            m
        }
        SreExpr::Choice {
            weight,
            left,
            right,
        } => {
            let (l, rr) = (length_masses(left, max_len), length_masses(right, max_len));
            let a = weight.get();
            l.iter()
                .zip(&rr)
                .map(|(x, y)| a * x + (1.0 - a) * y)
                .collect()
        }
        SreExpr::Concat(left, right) => {
            let (l, rr) = (length_masses(left, max_len), length_masses(right, max_len));
            let mut m = vec![0.0; n];
            for len in 2..n {
                m[len] = (1..len).map(|j| l[j] * rr[len - j]).sum();
            }
            m
        }
        SreExpr::Star { inner, weight } => {
            let t = length_masses(inner, max_len);
            let a = weight.get();
            let mut s = vec![0.0; n];
            for len in 1..n {
                let tail: f64 = (1..len).map(|j| t[j] * s[len - j]).sum();
                s[len] = a * t[len] + (1.0 - a) * tail;
            }
            s
        }
    }
}
