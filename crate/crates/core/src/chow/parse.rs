//! Recursive-descent parser for Chow ring expressions.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := int | 'xi' | 'f' | 'h' | 'E' | '(' expr ')'
//! ```
//!
//! Positions in errors are byte offsets into the input.

use num_bigint::BigInt;

use super::{ChowClass, Threefold};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("ascii digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().expect("non-empty");
                return Err(Error::Parse {
                    position: start,
                    expected: "an expression token".into(),
                    found: format!("`{ch}`"),
                });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    model: Threefold,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> Error {
        Error::Parse {
            position: self.offset(),
            expected: expected.into(),
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<ChowClass> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ChowClass> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ChowClass> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        match self.bump().1 {
            Tok::Int(n) => {
                // Anything of positive codimension is nilpotent, so huge exponents are harmless,
                // but the exponent itself must fit the square-and-multiply loop.
                let n = u32::try_from(n).map_err(|_| Error::Parse {
                    position: at,
                    expected: "an exponent below 2^32".into(),
                    found: "a larger integer".into(),
                })?;
                Ok(base.pow(n))
            }
            Tok::Minus => Err(Error::NegativeExponent { position: at }),
            other => Err(Error::Parse {
                position: at,
                expected: "a non-negative integer exponent".into(),
                found: other.describe(),
            }),
        }
    }

    fn atom(&mut self) -> Result<ChowClass> {
        let m = self.model;
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(ChowClass::scalar(m, n))
            }
            Tok::Ident(name) => {
                let class = match name.as_str() {
                    "xi" => ChowClass::xi(m),
                    "f" => ChowClass::f(m),
                    "h" => m.h().class(m),
                    "E" => match m.exceptional() {
                        Some(d) => d.class(m),
                        None => return Err(Error::ExceptionalOnF0 { position: at }),
                    },
                    _ => return Err(self.unexpected("one of `xi`, `f`, `h`, `E`")),
                };
                self.bump();
                Ok(class)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("an integer, a symbol or `(`")),
        }
    }
}

/// Parses `text` into a reduced class on `model`.
pub fn parse_expr(text: &str, model: Threefold) -> Result<ChowClass> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        model,
    };
    let value = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_degrees() {
        let c = parse_expr("(3*xi + f)^3", Threefold::F1).unwrap();
        assert_eq!(c, ChowClass::point(Threefold::F1).scale(54));
        assert!(parse_expr("xi^3 - xi^2*f", Threefold::F1).unwrap().is_zero());
        let c = parse_expr("xi^2*(xi+f)", Threefold::F0).unwrap();
        assert_eq!(c, ChowClass::point(Threefold::F0));
        assert_eq!(parse_expr("h^3", Threefold::F0).unwrap().degree(), 54.into());
        assert_eq!(parse_expr("E*h^2", Threefold::F1).unwrap().degree(), 6.into());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_expr("xi + E", Threefold::F0),
            Err(Error::ExceptionalOnF0 { position: 5 })
        );
        assert_eq!(
            parse_expr("xi^-2", Threefold::F1),
            Err(Error::NegativeExponent { position: 3 })
        );
        match parse_expr("xi + * f", Threefold::F1) {
            Err(Error::Parse { position, found, .. }) => {
                assert_eq!(position, 5);
                assert_eq!(found, "`*`");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_expr("(xi", Threefold::F1), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_expr("xi f", Threefold::F1), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_expr("y", Threefold::F1), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_expr("2 % 3", Threefold::F1), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_expr("", Threefold::F1), Err(Error::Parse { position: 0, .. })));
    }

    #[test]
    fn leading_minus_and_big_literals() {
        let c = parse_expr("-xi - 2*f", Threefold::F1).unwrap();
        assert_eq!(c, ChowClass::divisor(Threefold::F1, -1, -2));
        let c = parse_expr("123456789012345678901234567890*xi", Threefold::F0).unwrap();
        assert_eq!(c.to_string(), "123456789012345678901234567890*xi");
        assert!(parse_expr("xi^4000000000", Threefold::F1).unwrap().is_zero());
    }
}
