//! Line-oriented text formats.
//!
//! ```text
//! cra states=<n> registers=<d> alphabet=<syms> [initial=<q>]
//! init <d floats>
//! trans <q> <σ> <q'> <d·d floats, row-major>
//! final <q> <d floats>
//!
//! dfa states=<n> initial=<q> accepting=<comma-separated states>
//! trans <q> <σ> <q'>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Floats are written
//! with 17 significant digits, so writing a parsed file reproduces it.

use std::fmt::{self, Write as _};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::numfmt::g17;

use super::dfa::Dfa;
use super::linear::{LinearCra, Transition};
use super::matrix::Matrix;

struct Lines<'a> {
    kind: &'static str,
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(kind: &'static str, text: &'a str) -> Self {
        Lines {
            kind,
            inner: text.lines().enumerate(),
        }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::format(self.kind, line, message)
    }
}

impl<'a> Iterator for Lines<'a> {
    /// (1-based line number, tokens)
    type Item = (usize, Vec<&'a str>);
    fn next(&mut self) -> Option<Self::Item> {
        for (i, l) in self.inner.by_ref() {
            let l = l.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            return Some((i + 1, l.split_whitespace().collect()));
        }
        None
    }
}

fn header<'a>(
    lines: &mut Lines<'a>,
    keyword: &str,
    required: &[&str],
    optional: &[&str],
) -> Result<Vec<Option<&'a str>>> {
    let (no, toks) = lines.next().ok_or_else(|| lines.err(1, "empty file"))?;
    if toks.first() != Some(&keyword) {
        return Err(lines.err(no, format!("expected header starting with '{keyword}'")));
    }
    let keys: Vec<&str> = required.iter().chain(optional).copied().collect();
    let mut vals = vec![None; keys.len()];
    for t in &toks[1..] {
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| lines.err(no, format!("expected key=value, found '{t}'")))?;
        let Some(i) = keys.iter().position(|&key| key == k) else {
            return Err(lines.err(no, format!("unknown header key '{k}'")));
        };
        if vals[i].replace(v).is_some() {
            return Err(lines.err(no, format!("duplicate header key '{k}'")));
        }
    }
    if let Some(i) = (0..required.len()).find(|&i| vals[i].is_none()) {
        return Err(lines.err(no, format!("missing header key '{}'", required[i])));
    }
    Ok(vals)
}

fn parse_num<T: std::str::FromStr>(lines: &Lines, no: usize, what: &str, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| lines.err(no, format!("invalid {what} '{s}'")))
}

fn parse_state(lines: &Lines, no: usize, s: &str, states: usize) -> Result<usize> {
    let q: usize = parse_num(lines, no, "state", s)?;
    if q >= states {
        return Err(lines.err(no, format!("state {q} out of range (states={states})")));
    }
    Ok(q)
}

fn parse_symbol(lines: &Lines, no: usize, s: &str, alphabet: &Alphabet) -> Result<usize> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => alphabet
            .index_of(c)
            .ok_or_else(|| lines.err(no, format!("symbol '{c}' not in alphabet {alphabet}"))),
        _ => Err(lines.err(no, format!("expected a single symbol, found '{s}'"))),
    }
}

fn parse_floats(lines: &Lines, no: usize, toks: &[&str], want: usize) -> Result<Vec<f64>> {
    if toks.len() != want {
        return Err(lines.err(no, format!("expected {want} numbers, found {}", toks.len())));
    }
    toks.iter()
        .map(|t| {
            let x: f64 = parse_num(lines, no, "number", t)?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(lines.err(no, format!("non-finite number '{t}'")))
            }
        })
        .collect()
}

impl LinearCra {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new("cra", text);
        let h = header(&mut lines, "cra", &["states", "registers", "alphabet"], &["initial"])?;
        let states: usize = parse_num(&lines, 1, "state count", h[0].unwrap())?;
        let d: usize = parse_num(&lines, 1, "register count", h[1].unwrap())?;
        let alphabet = Alphabet::parse(h[2].unwrap()).map_err(|e| lines.err(1, e.to_string()))?;
        let initial: usize = h[3].map_or(Ok(0), |s| parse_num(&lines, 1, "initial state", s))?;
        if states == 0 || d == 0 {
            return Err(lines.err(1, "states and registers must be positive"));
        }
        let k = alphabet.len();
        let mut init = None;
        let mut trans: Vec<Option<Transition>> = vec![None; states * k];
        let mut finals: Vec<Option<Vec<f64>>> = vec![None; states];
        let mut last = 1;
        while let Some((no, toks)) = lines.next() {
            last = no;
            match toks[0] {
                "init" => {
                    if init.replace(parse_floats(&lines, no, &toks[1..], d)?).is_some() {
                        return Err(lines.err(no, "duplicate init line"));
                    }
                }
                "trans" => {
                    if toks.len() < 4 {
                        return Err(lines.err(no, "expected 'trans <q> <σ> <q'> <matrix>'"));
                    }
                    let q = parse_state(&lines, no, toks[1], states)?;
                    let s = parse_symbol(&lines, no, toks[2], &alphabet)?;
                    let target = parse_state(&lines, no, toks[3], states)?;
                    let entries = parse_floats(&lines, no, &toks[4..], d * d)?;
                    let matrix = Matrix::from_row_major(d, entries).expect("length checked");
                    if trans[q * k + s].replace(Transition { target, matrix }).is_some() {
                        return Err(lines.err(no, format!("duplicate transition for ({q}, {})", toks[2])));
                    }
                }
                "final" => {
                    if toks.len() < 2 {
                        return Err(lines.err(no, "expected 'final <q> <vector>'"));
                    }
                    let q = parse_state(&lines, no, toks[1], states)?;
                    if finals[q].replace(parse_floats(&lines, no, &toks[2..], d)?).is_some() {
                        return Err(lines.err(no, format!("duplicate final vector for state {q}")));
                    }
                }
                other => return Err(lines.err(no, format!("unknown directive '{other}'"))),
            }
        }
        let init = init.ok_or_else(|| lines.err(last, "missing init line"))?;
        let transitions = trans
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                t.ok_or_else(|| {
                    lines.err(
                        last,
                        format!("missing transition for ({}, {})", i / k, alphabet.symbols()[i % k]),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let finals = finals
            .into_iter()
            .enumerate()
            .map(|(q, f)| f.ok_or_else(|| lines.err(last, format!("missing final vector for state {q}"))))
            .collect::<Result<Vec<_>>>()?;
        LinearCra::new(alphabet, initial, init, transitions, finals).map_err(|e| lines.err(last, e.to_string()))
    }
}

fn push_floats(out: &mut String, xs: &[f64]) {
    for x in xs {
        out.push(' ');
        out.push_str(&g17(*x));
    }
}

impl fmt::Display for LinearCra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write!(
            out,
            "cra states={} registers={} alphabet={}",
            self.states(),
            self.registers(),
            self.alphabet()
        )?;
        if self.initial() != 0 {
            write!(out, " initial={}", self.initial())?;
        }
        out.push_str("\ninit");
        push_floats(&mut out, self.init());
        out.push('\n');
        for q in 0..self.states() {
            for (s, c) in self.alphabet().symbols().iter().enumerate() {
                let t = self.transition(q, s);
                write!(out, "trans {q} {c} {}", t.target)?;
                push_floats(&mut out, t.matrix.row_major());
                out.push('\n');
            }
        }
        for q in 0..self.states() {
            write!(out, "final {q}")?;
            push_floats(&mut out, self.final_vector(q));
            out.push('\n');
        }
        f.write_str(&out)
    }
}

impl Dfa {
    /// The alphabet is the set of symbols on `trans` lines, in order of first
    /// appearance.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new("dfa", text);
        let h = header(&mut lines, "dfa", &["states", "initial", "accepting"], &[])?;
        let states: usize = parse_num(&lines, 1, "state count", h[0].unwrap())?;
        if states == 0 {
            return Err(lines.err(1, "a DFA needs at least one state"));
        }
        let initial = parse_state(&lines, 1, h[1].unwrap(), states)?;
        let mut accepting = vec![false; states];
        for s in h[2].unwrap().split(',').filter(|s| !s.is_empty()) {
            accepting[parse_state(&lines, 1, s, states)?] = true;
        }
        let mut symbols = Vec::new();
        let mut edges = Vec::new();
        let mut last = 1;
        while let Some((no, toks)) = lines.next() {
            last = no;
            if toks[0] != "trans" {
                return Err(lines.err(no, format!("unknown directive '{}'", toks[0])));
            }
            if toks.len() != 4 {
                return Err(lines.err(no, "expected 'trans <q> <σ> <q'>'"));
            }
            let q = parse_state(&lines, no, toks[1], states)?;
            let mut cs = toks[2].chars();
            let c = match (cs.next(), cs.next()) {
                (Some(c), None) => c,
                _ => return Err(lines.err(no, format!("expected a single symbol, found '{}'", toks[2]))),
            };
            let target = parse_state(&lines, no, toks[3], states)?;
            if !symbols.contains(&c) {
                symbols.push(c);
            }
            edges.push((no, q, c, target));
        }
        let alphabet = Alphabet::new(symbols).map_err(|e| lines.err(last, e.to_string()))?;
        let k = alphabet.len();
        let mut delta = vec![None; states * k];
        for (no, q, c, target) in edges {
            let s = alphabet.index_of(c).expect("collected above");
            if delta[q * k + s].replace(target).is_some() {
                return Err(lines.err(no, format!("duplicate transition for ({q}, {c})")));
            }
        }
        let delta = delta
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                t.ok_or_else(|| {
                    lines.err(
                        last,
                        format!("missing transition for ({}, {})", i / k, alphabet.symbols()[i % k]),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Dfa::new(alphabet, initial, accepting, delta).map_err(|e| lines.err(last, e.to_string()))
    }
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let accepting: Vec<String> = (0..self.states())
            .filter(|&q| self.is_accepting(q))
            .map(|q| q.to_string())
            .collect();
        writeln!(
            f,
            "dfa states={} initial={} accepting={}",
            self.states(),
            self.initial(),
            accepting.join(",")
        )?;
        for q in 0..self.states() {
            for (s, c) in self.alphabet().symbols().iter().enumerate() {
                writeln!(f, "trans {q} {c} {}", self.next(q, s))?;
            }
        }
        Ok(())
    }
}
