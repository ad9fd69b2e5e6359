//! Parser for integer polynomials in `T`, e.g. `"T(T-7)"`, `"7*(T+7)*(1+7T)"`, `"T^2"`.
//!
//! Products are truncated at `T^len`, matching the truncation of the series they feed.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Var,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            'T' | 't' => out.push(Token::Var),
            '+' => out.push(Token::Plus),
            '-' => out.push(Token::Minus),
            '*' => out.push(Token::Star),
            '^' => out.push(Token::Caret),
            '(' => out.push(Token::LParen),
            ')' => out.push(Token::RParen),
            d if d.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..=i].iter().collect();
                out.push(Token::Num(text.parse().expect("digits")));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character {other:?} in {s:?}"
                )))
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    len: usize,
}

type Poly = Vec<BigInt>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn constant(&self, c: BigInt) -> Poly {
        let mut p = vec![BigInt::zero(); self.len];
        p[0] = c;
        p
    }

    fn add(&self, a: &Poly, b: &Poly, sign: i32) -> Poly {
        a.iter()
            .zip(b)
            .map(|(x, y)| if sign > 0 { x + y } else { x - y })
            .collect()
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = vec![BigInt::zero(); self.len];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(self.len - i) {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            let sign = match t {
                Token::Plus => 1,
                Token::Minus => -1,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc = self.add(&acc, &rhs, sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.mul(&acc, &rhs);
                }
                // implicit multiplication: 7T, T(T-7), (T+1)(T-1)
                Some(Token::Num(_)) | Some(Token::Var) | Some(Token::LParen) => {
                    let rhs = self.power()?;
                    acc = self.mul(&acc, &rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(inner.into_iter().map(|c| -c).collect());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            let exp = match self.next() {
                Some(Token::Num(n)) => {
                    usize::try_from(&n).map_err(|_| Error::Parse("exponent too large".into()))?
                }
                _ => return Err(Error::Parse("expected exponent after '^'".into())),
            };
            let mut acc = self.constant(BigInt::from(1));
            let mut sq = base;
            let mut e = exp;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul(&acc, &sq);
                }
                e >>= 1;
                if e > 0 {
                    sq = self.mul(&sq, &sq);
                }
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.next() {
            Some(Token::Num(n)) => Ok(self.constant(n)),
            Some(Token::Var) => {
                let mut p = vec![BigInt::zero(); self.len];
                if self.len > 1 {
                    p[1] = BigInt::from(1);
                }
                Ok(p)
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Coefficients (little-endian in `T`) of the polynomial `s`, truncated to `len` terms.
pub fn parse_poly(s: &str, len: usize) -> Result<Vec<BigInt>> {
    if len == 0 {
        return Err(Error::InvalidPrecision(
            "truncation degree must be >= 1".into(),
        ));
    }
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        len,
    };
    let poly = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn parses_common_shapes() {
        assert_eq!(parse_poly("T^2", 4).unwrap(), ints(&[0, 0, 1, 0]));
        assert_eq!(parse_poly("T(T-7)", 3).unwrap(), ints(&[0, -7, 1]));
        assert_eq!(parse_poly("(7+T)*(1+7T)", 4).unwrap(), ints(&[7, 50, 7, 0]));
        assert_eq!(
            parse_poly("7*(T+7)*(1+7T)", 3).unwrap(),
            ints(&[49, 350, 49])
        );
        assert_eq!(parse_poly("-T + 3", 2).unwrap(), ints(&[3, -1]));
        assert_eq!(
            parse_poly("49T^2 + 343T^3", 5).unwrap(),
            ints(&[0, 0, 49, 343, 0])
        );
    }

    #[test]
    fn truncates_high_terms() {
        assert_eq!(parse_poly("1 + T^5", 3).unwrap(), ints(&[1, 0, 0]));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("T +", 3).is_err());
        assert!(parse_poly("x", 3).is_err());
        assert!(parse_poly("(T", 3).is_err());
        assert!(parse_poly("", 3).is_err());
    }
}
