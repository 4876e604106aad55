//! Recursive-descent parser for the textual expression syntax.
//!
//! ```text
//! choice  := concat ( "+[" number "]" concat )*
//! concat  := postfix ( "." postfix )*
//! postfix := primary ( "*[" number "]" )*
//! primary := "'" symbol "'" | "(" choice ")"
//! ```

use std::fmt;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

use super::{SreExpr, Weight};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => self.error(at, format!("expected '{want}', found '{c}'")),
            None => self.error(at, format!("expected '{want}', found end of input")),
        }
    }

    fn choice(&mut self) -> Result<SreExpr> {
        let mut left = self.concat()?;
        while self.peek() == Some('+') {
            self.bump();
            let weight = self.bracketed_weight()?;
            let right = self.concat()?;
            left = SreExpr::Choice {
                weight,
                left: Box::new(left),
                right: Box::new(right),
            };
        }
        Ok(left)
    }

    fn concat(&mut self) -> Result<SreExpr> {
        let mut left = self.postfix()?;
        while self.peek() == Some('.') {
            self.bump();
            let right = self.postfix()?;
            left = SreExpr::concat(left, right);
        }
        Ok(left)
    }

    fn postfix(&mut self) -> Result<SreExpr> {
        let mut inner = self.primary()?;
        while self.peek() == Some('*') {
            self.bump();
            let weight = self.bracketed_weight()?;
            inner = SreExpr::Star {
                inner: Box::new(inner),
                weight,
            };
        }
        Ok(inner)
    }

    fn primary(&mut self) -> Result<SreExpr> {
        self.skip_ws();
        let at = self.pos;
        match self.bump() {
            Some('\'') => {
                let sym_at = self.pos;
                let Some(sym) = self.src[self.pos..].chars().next() else {
                    return self.error(sym_at, "unterminated symbol literal");
                };
                self.pos += sym.len_utf8();
                if !self.src[self.pos..].starts_with('\'') {
                    return self.error(self.pos, "symbol literal must hold exactly one symbol");
                }
                self.pos += 1;
                if !self.alphabet.contains(sym) {
                    return self.error(
                        sym_at,
                        format!("unknown symbol '{sym}' (alphabet is {})", self.alphabet),
                    );
                }
                Ok(SreExpr::Atom(sym))
            }
            Some('(') => {
                let e = self.choice()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) => self.error(at, format!("expected a symbol or '(', found '{c}'")),
            None => self.error(at, "expected a symbol or '(', found end of input"),
        }
    }

    fn bracketed_weight(&mut self) -> Result<Weight> {
        self.expect('[')?;
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '-' | '+')))
            .unwrap_or(self.src.len() - start);
        let literal = &self.src[start..start + len];
        let Ok(value) = literal.parse::<f64>() else {
            return self.error(start, format!("invalid weight literal '{literal}'"));
        };
        if !(value > 0.0 && value < 1.0) {
            return self.error(start, format!("weight {literal} must lie in (0,1)"));
        }
        self.pos = start + len;
        self.expect(']')?;
        Ok(Weight(value))
    }
}

/// Parses one expression; every atom must belong to `alphabet`.
pub fn parse_sre(text: &str, alphabet: &Alphabet) -> Result<SreExpr> {
    let mut p = Parser {
        src: text,
        pos: 0,
        alphabet,
    };
    let e = p.choice()?;
    p.skip_ws();
    if p.pos != text.len() {
        let c = text[p.pos..].chars().next().unwrap_or(' ');
        return p.error(p.pos, format!("unexpected '{c}' after expression"));
    }
    Ok(e)
}

/// An expression file: an `alphabet: <symbols>` header line, then the
/// expression (which may span several lines).
#[derive(Debug, Clone, PartialEq)]
pub struct SreFile {
    pub alphabet: Alphabet,
    pub expr: SreExpr,
}

impl SreFile {
    pub fn parse(text: &str) -> Result<Self> {
        let header_start = text.len() - text.trim_start().len();
        let header_end = text[header_start..]
            .find('\n')
            .map_or(text.len(), |i| header_start + i);
        let header = text[header_start..header_end].trim_end();
        let Some(symbols) = header.strip_prefix("alphabet:") else {
            return Err(Error::Parse {
                offset: header_start,
                message: "expected header line 'alphabet: <symbols>'".into(),
            });
        };
        let alphabet = Alphabet::parse(symbols.trim()).map_err(|e| Error::Parse {
            offset: header_start,
            message: e.to_string(),
        })?;
        let body = &text[header_end..];
        let expr = parse_sre(body, &alphabet).map_err(|e| match e {
            Error::Parse { offset, message } => Error::Parse {
                offset: offset + header_end,
                message,
            },
            other => other,
        })?;
        Ok(SreFile { alphabet, expr })
    }
}

impl fmt::Display for SreFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        writeln!(f, "{}", self.expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    #[test]
    fn atoms_and_star() {
        assert_eq!(parse_sre("'a'", &ab()).unwrap(), SreExpr::atom('a'));
        let e = parse_sre("('a' . 'b') *[0.5]", &ab()).unwrap();
        let want = SreExpr::star(SreExpr::concat(SreExpr::atom('a'), SreExpr::atom('b')), 0.5)
            .unwrap();
        assert_eq!(e, want);
    }

    #[test]
    fn concat_binds_tighter_than_choice() {
        let e = parse_sre("'a' +[0.3] 'b' . 'b'", &ab()).unwrap();
        let want = SreExpr::choice(
            0.3,
            SreExpr::atom('a'),
            SreExpr::concat(SreExpr::atom('b'), SreExpr::atom('b')),
        )
        .unwrap();
        assert_eq!(e, want);
    }

    #[test]
    fn infix_operators_are_left_associative() {
        let e = parse_sre("'a' . 'b' . 'a'", &ab()).unwrap();
        let want = SreExpr::concat(
            SreExpr::concat(SreExpr::atom('a'), SreExpr::atom('b')),
            SreExpr::atom('a'),
        );
        assert_eq!(e, want);
        let e = parse_sre("'a' +[0.5] 'b' +[0.25] 'a'", &ab()).unwrap();
        assert!(matches!(e, SreExpr::Choice { ref left, .. } if matches!(**left, SreExpr::Choice { .. })));
    }

    #[test]
    fn errors_carry_offsets() {
        let err = parse_sre("'a' +[1.0] 'b'", &ab()).unwrap_err();
        match err {
            Error::Parse { offset, message } => {
                assert_eq!(offset, 6);
                assert!(message.contains("(0,1)"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_sre("'c'", &ab()),
            Err(Error::Parse { offset: 1, .. })
        ));
        assert!(matches!(
            parse_sre("('a' . 'b'", &ab()),
            Err(Error::Parse { offset: 10, .. })
        ));
        assert!(matches!(parse_sre("'a' 'b'", &ab()), Err(Error::Parse { offset: 4, .. })));
        assert!(matches!(parse_sre("'ab'", &ab()), Err(Error::Parse { .. })));
        assert!(matches!(parse_sre("", &ab()), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(parse_sre("'a' *[x]", &ab()), Err(Error::Parse { offset: 6, .. })));
    }

    #[test]
    fn file_round_trip() {
        let f = SreFile::parse("alphabet: ab\n('a' . 'b') *[0.5]\n").unwrap();
        assert_eq!(f.to_string(), "alphabet: ab\n('a' . 'b') *[0.5]\n");
        assert_eq!(SreFile::parse(&f.to_string()).unwrap(), f);
        let err = SreFile::parse("alphabet: a\n'a' . 'b'").unwrap_err();
        assert!(matches!(err, Error::Parse { offset: 19, .. }), "{err:?}");
        assert!(SreFile::parse("'a'").is_err());
    }
}
