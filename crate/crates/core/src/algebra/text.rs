//! Superfunction text format.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := number | '(' complex ')' | 'i' | 'h' ['^' int] | gen ['^' uint]
//! complex := ['-'] number [('+'|'-') number 'i'] | ['-'] number 'i'
//! number  := digits ['/' digits]
//! gen     := ('x' | 'c' | 'xs' | 'cs') digits        (one-based index)
//! ```
//!
//! Printing emits one term per `(monomial, ħ power)` pair, e.g.
//! `(1/2)*x1^2 + (0+1i)*h^-1*c1*cs1`; parsing the printed text gives back
//! the same superfunction.

use std::sync::Arc;

use num::{BigInt, BigRational, One, Zero};

use super::coefficient::{gaussian, gaussian_factor, Coefficient};
use super::context::{Context, Generator, GeneratorKind};
use super::superfunction::Superfunction;
use crate::error::{Error, Result};

/// A parsed expression not yet bound to a context.
#[derive(Clone, Debug, PartialEq)]
pub struct RawExpr {
    pub terms: Vec<(Coefficient, Vec<(Generator, u32)>)>,
}

impl RawExpr {
    /// Smallest `(n_fields, n_ghosts)` that contains every generator used.
    pub fn required_shape(&self) -> (usize, usize) {
        let mut n = 0;
        let mut m = 0;
        for (_, factors) in &self.terms {
            for (g, _) in factors {
                match g.kind {
                    GeneratorKind::Field | GeneratorKind::Antifield => n = n.max(g.index + 1),
                    GeneratorKind::Ghost | GeneratorKind::Antighost => m = m.max(g.index + 1),
                }
            }
        }
        (n, m)
    }

    pub fn bind(&self, ctx: &Arc<Context>) -> Result<Superfunction> {
        Superfunction::from_products(ctx, self.terms.iter().cloned())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Gen(GeneratorKind, usize),
    H,
    I,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let col = k + 1;
        let ch = bytes[k] as char;
        match ch {
            ' ' | '\t' | '\n' | '\r' => {
                k += 1;
                continue;
            }
            '+' => out.push((col, Tok::Plus)),
            '-' => out.push((col, Tok::Minus)),
            '*' => out.push((col, Tok::Star)),
            '^' => out.push((col, Tok::Caret)),
            '/' => out.push((col, Tok::Slash)),
            '(' => out.push((col, Tok::LParen)),
            ')' => out.push((col, Tok::RParen)),
            '0'..='9' => {
                let start = k;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                let n: BigInt = src[start..k].parse().expect("ascii digits");
                out.push((col, Tok::Num(n)));
                continue;
            }
            'a'..='z' => {
                let start = k;
                while k < bytes.len() && bytes[k].is_ascii_lowercase() {
                    k += 1;
                }
                let word = &src[start..k];
                let kind = match word {
                    "h" => {
                        out.push((col, Tok::H));
                        continue;
                    }
                    "i" => {
                        out.push((col, Tok::I));
                        continue;
                    }
                    "x" => GeneratorKind::Field,
                    "c" => GeneratorKind::Ghost,
                    "xs" => GeneratorKind::Antifield,
                    "cs" => GeneratorKind::Antighost,
                    _ => return Err(Error::parse(1, col, format!("unknown symbol `{word}`"))),
                };
                let dstart = k;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                let index: usize = src[dstart..k].parse().map_err(|_| {
                    Error::parse(1, col, format!("generator `{word}` needs an index"))
                })?;
                if index == 0 {
                    return Err(Error::parse(1, col, "generator indices start at 1"));
                }
                out.push((col, Tok::Gen(kind, index - 1)));
                continue;
            }
            _ => return Err(Error::parse(1, col, format!("unexpected character `{ch}`"))),
        }
        k += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(c, _)| *c)
            .unwrap_or(self.end_col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(1, self.col(), msg))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<BigRational> {
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return self.err("expected a number");
        };
        self.pos += 1;
        if self.eat(&Tok::Slash) {
            let Some(Tok::Num(d)) = self.peek().cloned() else {
                return self.err("expected a denominator");
            };
            if d.is_zero() {
                return self.err("zero denominator");
            }
            self.pos += 1;
            Ok(BigRational::new(n, d))
        } else {
            Ok(BigRational::from_integer(n))
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return self.err("expected an integer exponent");
        };
        self.pos += 1;
        let v: i64 = n
            .try_into()
            .map_err(|_| Error::parse(1, self.col(), "exponent too large"))?;
        Ok(if neg { -v } else { v })
    }

    fn complex(&mut self) -> Result<Coefficient> {
        let neg = self.eat(&Tok::Minus);
        let a = self.number()?;
        let a = if neg { -a } else { a };
        if self.eat(&Tok::I) {
            return Ok(Coefficient::from_gaussian(gaussian(BigRational::zero(), a)));
        }
        let sign = match self.peek() {
            Some(Tok::Plus) => 1,
            Some(Tok::Minus) => -1,
            _ => return Ok(Coefficient::from_rational(a)),
        };
        self.pos += 1;
        let b = if matches!(self.peek(), Some(Tok::I)) {
            BigRational::one()
        } else {
            self.number()?
        };
        if !self.eat(&Tok::I) {
            return self.err("expected `i` closing the imaginary part");
        }
        let b = if sign < 0 { -b } else { b };
        Ok(Coefficient::from_gaussian(gaussian(a, b)))
    }

    fn factor(&mut self, coeff: &mut Coefficient, gens: &mut Vec<(Generator, u32)>) -> Result<()> {
        match self.peek().cloned() {
            Some(Tok::Num(_)) => {
                let r = self.number()?;
                *coeff = coeff.scale(&r);
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let c = self.complex()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                *coeff = &*coeff * &c;
            }
            Some(Tok::I) => {
                self.pos += 1;
                *coeff = &*coeff * &Coefficient::i();
            }
            Some(Tok::H) => {
                self.pos += 1;
                let k = if self.eat(&Tok::Caret) {
                    self.int()?
                } else {
                    1
                };
                let k = i32::try_from(k)
                    .map_err(|_| Error::parse(1, self.col(), "ħ power out of range"))?;
                *coeff = &*coeff * &Coefficient::hbar(k);
            }
            Some(Tok::Gen(kind, index)) => {
                self.pos += 1;
                let e = if self.eat(&Tok::Caret) {
                    self.int()?
                } else {
                    1
                };
                if e < 0 {
                    return self.err("generator exponents must be non-negative");
                }
                gens.push((Generator::new(kind, index), e as u32));
            }
            _ => return self.err("expected a factor"),
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<RawExpr> {
        let mut terms = Vec::new();
        let mut negative = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        loop {
            let mut coeff = Coefficient::one();
            let mut gens = Vec::new();
            self.factor(&mut coeff, &mut gens)?;
            while self.eat(&Tok::Star) {
                self.factor(&mut coeff, &mut gens)?;
            }
            terms.push((if negative { -coeff } else { coeff }, gens));
            match self.peek() {
                None => break,
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                _ => return self.err("expected `+`, `-` or `*`"),
            }
            self.pos += 1;
        }
        Ok(RawExpr { terms })
    }
}

/// Parses without a context; see [`RawExpr::bind`].
pub fn parse_raw(src: &str) -> Result<RawExpr> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::parse(1, 1, "empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: src.len() + 1,
    };
    p.expr()
}

impl Superfunction {
    /// Parses the text format into the given context.
    pub fn parse(src: &str, ctx: &Arc<Context>) -> Result<Superfunction> {
        parse_raw(src)?.bind(ctx).map_err(|e| match e {
            Error::Contract(m) => Error::parse(1, 1, m),
            other => other,
        })
    }
}

pub(crate) fn format_superfunction(f: &Superfunction) -> String {
    let mut out = String::new();
    for (m, c) in f.terms() {
        let gens: Vec<String> = f
            .factors_of(m)
            .into_iter()
            .map(|(g, e)| {
                if e == 1 {
                    g.to_string()
                } else {
                    format!("{g}^{e}")
                }
            })
            .collect();
        for (k, g) in c.terms() {
            let (neg, mag) = gaussian_factor(g);
            let mut factors: Vec<String> = Vec::new();
            let h = match k {
                0 => None,
                1 => Some("h".to_string()),
                _ => Some(format!("h^{k}")),
            };
            if let Some(mag) = mag {
                factors.push(mag);
            } else if h.is_none() && gens.is_empty() {
                factors.push("1".into());
            }
            factors.extend(h);
            factors.extend(gens.iter().cloned());
            let body = factors.join("*");
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_example_round_trips() {
        let ctx = Context::new(1, 1);
        let src = "(1/2)*x1^2 + (0+1i)*h^-1*c1*cs1";
        let f = Superfunction::parse(src, &ctx).unwrap();
        assert_eq!(Superfunction::parse(&f.to_string(), &ctx).unwrap(), f);
        assert_eq!(f.to_string(), "(1/2)*x1^2 + (0+1i)*h^-1*c1*cs1");
    }

    #[test]
    fn signs_and_reordering() {
        let ctx = Context::new(2, 0);
        let f = Superfunction::parse("xs2*xs1", &ctx).unwrap();
        assert_eq!(f.to_string(), "-xs1*xs2");
        let g = Superfunction::parse("-3 - x1 + 2*h", &ctx).unwrap();
        assert_eq!(g.to_string(), "-3 + 2*h - x1");
        assert_eq!(Superfunction::parse("0", &ctx).unwrap().to_string(), "0");
    }

    #[test]
    fn errors_carry_columns() {
        let ctx = Context::new(1, 0);
        match Superfunction::parse("x1 + q2", &ctx) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            Superfunction::parse("x3", &ctx),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Superfunction::parse("x1 +", &ctx),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Superfunction::parse("x0", &ctx),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn required_shape() {
        let raw = parse_raw("x2*cs3 + xs1").unwrap();
        assert_eq!(raw.required_shape(), (2, 3));
    }
}
