//! Reading polynomials and rational functions from text.
//!
//! Grammar: sums of products of powers of atoms, where an atom is an
//! integer, a variable name or a parenthesized expression. Juxtaposed
//! factors multiply, `ℏ` reads as `h`, `a_1` reads as `a1`, and the Unicode
//! minus sign is accepted.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{AlgebraError, AlgebraResult};
use crate::exactalg::poly::{Coeff, MultiPoly};
use crate::exactalg::ratfunc::RationalFunction;
use crate::exactalg::varset::VarSet;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn tokenize(input: &str) -> AlgebraResult<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push((pos, Token::Plus));
            }
            '-' | '−' => {
                chars.next();
                out.push((pos, Token::Minus));
            }
            '*' | '·' => {
                chars.next();
                out.push((pos, Token::Star));
            }
            '/' => {
                chars.next();
                out.push((pos, Token::Slash));
            }
            '^' => {
                chars.next();
                out.push((pos, Token::Caret));
            }
            '(' => {
                chars.next();
                out.push((pos, Token::Open));
            }
            ')' => {
                chars.next();
                out.push((pos, Token::Close));
            }
            'ℏ' => {
                chars.next();
                out.push((pos, Token::Ident("h".into())));
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Token::Num(s.parse().expect("digits"))));
            }
            c if c.is_alphabetic() => {
                let mut s = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() {
                        s.push(d);
                        chars.next();
                    } else if d == '_' {
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Token::Ident(s)));
            }
            other => {
                return Err(AlgebraError::Parse {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    at: usize,
    vars: &'a Arc<VarSet>,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens
            .get(self.at)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse {
            pos: self.pos(),
            msg: msg.to_string(),
        }
    }

    fn expr(&mut self) -> AlgebraResult<RationalFunction> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.at += 1;
                -&self.product()?
            }
            Some(Token::Plus) => {
                self.at += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.at += 1;
                    acc = acc.checked_add(&self.product()?)?;
                }
                Some(Token::Minus) => {
                    self.at += 1;
                    acc = acc.checked_sub(&self.product()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> AlgebraResult<RationalFunction> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.at += 1;
                    acc = acc.checked_mul(&self.power()?)?;
                }
                Some(Token::Slash) => {
                    self.at += 1;
                    acc = acc.checked_div(&self.power()?)?;
                }
                Some(Token::Open) | Some(Token::Ident(_)) | Some(Token::Num(_)) => {
                    acc = acc.checked_mul(&self.power()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> AlgebraResult<RationalFunction> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let negative = if self.peek() == Some(&Token::Minus) {
            self.at += 1;
            true
        } else {
            false
        };
        let Some(Token::Num(e)) = self.peek().cloned() else {
            return Err(self.error("expected an integer exponent"));
        };
        self.at += 1;
        let e: i32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
        base.pow(if negative { -e } else { e })
    }

    fn atom(&mut self) -> AlgebraResult<RationalFunction> {
        match self.peek().cloned() {
            Some(Token::Num(n)) => {
                self.at += 1;
                Ok(RationalFunction::constant(
                    self.vars,
                    Coeff::from_integer(n),
                ))
            }
            Some(Token::Ident(name)) => {
                let idx = self
                    .vars
                    .index_of(&name)
                    .ok_or_else(|| AlgebraError::Parse {
                        pos: self.pos(),
                        msg: format!("unknown variable `{name}`"),
                    })?;
                self.at += 1;
                Ok(RationalFunction::from_poly(MultiPoly::var(self.vars, idx)))
            }
            Some(Token::Open) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(self.error("expected `)`"));
                }
                self.at += 1;
                Ok(inner)
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }
}

/// Parses a rational expression over `vars`.
pub fn parse_rational(input: &str, vars: &Arc<VarSet>) -> AlgebraResult<RationalFunction> {
    let tokens = tokenize(input)?;
    let mut p = Parser {
        tokens,
        at: 0,
        vars,
        end: input.len(),
    };
    let value = p.expr()?;
    if p.at != p.tokens.len() {
        return Err(p.error("trailing input"));
    }
    Ok(value)
}

/// Parses an expression that must be a polynomial.
pub fn parse_poly(input: &str, vars: &Arc<VarSet>) -> AlgebraResult<MultiPoly> {
    parse_rational(input, vars)?.into_polynomial()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_display() {
        let vs = VarSet::new(["a1", "a2", "h"]).unwrap();
        let p = parse_poly("3*a1^2*h - 2*a2", &vs).unwrap();
        assert_eq!(p.to_string(), "3*a1^2*h - 2*a2");
        assert_eq!(parse_poly(&p.to_string(), &vs).unwrap(), p);
    }

    #[test]
    fn accepts_typeset_forms() {
        let vs = VarSet::new(["a1", "a2", "a3", "h"]).unwrap();
        let f = parse_rational("−1/((−ℏ+a_1−a_2)(−ℏ+a_1−a_3))", &vs).unwrap();
        let g = parse_rational("-1/((a1-a2-h)*(a1-a3-h))", &vs).unwrap();
        assert_eq!(f, g);
        assert_eq!(parse_poly("2(a1+1)", &vs).unwrap().to_string(), "2*a1 + 2");
    }

    #[test]
    fn reports_errors() {
        let vs = VarSet::new(["x"]).unwrap();
        assert!(matches!(
            parse_rational("x +", &vs),
            Err(AlgebraError::Parse { .. })
        ));
        assert!(matches!(
            parse_rational("y", &vs),
            Err(AlgebraError::Parse { .. })
        ));
        assert!(matches!(
            parse_rational("(x", &vs),
            Err(AlgebraError::Parse { .. })
        ));
        assert_eq!(
            parse_rational("1/(x-x)", &vs),
            Err(AlgebraError::DivisionByZero)
        );
        assert_eq!(parse_poly("1/x", &vs), Err(AlgebraError::NotAPolynomial));
    }
}
