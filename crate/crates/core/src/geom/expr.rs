//! Scalar coefficient functions in the normal form `Σ_k (P_k/Q_k)·exp(E_k)`
//! with polynomial `P_k`, `Q_k`, `E_k` and pairwise distinct exponents.
//!
//! Prefix text format:
//!
//! ```text
//! expr := number | var | '(' op expr+ ')'
//! op   := '+' | '-' | '*' | '/' | '^' | 'exp'
//! var  := 'x' digits | 'u' digits                 (one-based)
//! number := ['-'] digits ['/' digits]
//! ```
//!
//! `(- a)` negates, `(- a b ...)` subtracts, `(^ a k)` takes an integer power
//! (negative only for a single-term `a`), `(/ a b)` needs a single-term `b`,
//! and `(exp p)` needs a polynomial `p`.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One};

use super::poly::{fmt_rational, CompiledPoly, Poly, Var};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Fraction {
    num: Poly,
    den: Poly,
}

impl Fraction {
    fn normalized(num: Poly, den: Poly) -> Option<Fraction> {
        if num.is_zero() {
            return None;
        }
        if let Some(c) = den.as_constant() {
            let inv = BigRational::one() / c;
            return Some(Fraction {
                num: num.scale(&inv),
                den: Poly::one(),
            });
        }
        let lead = den
            .leading_coefficient()
            .expect("nonzero denominator")
            .clone();
        let inv = BigRational::one() / lead;
        Some(Fraction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    fn add(&self, other: &Fraction) -> Option<Fraction> {
        if self.den == other.den {
            Fraction::normalized(&self.num + &other.num, self.den.clone())
        } else {
            Fraction::normalized(
                &(&self.num * &other.den) + &(&other.num * &self.den),
                &self.den * &other.den,
            )
        }
    }
}

/// A symbolic scalar function of the coordinates.
#[derive(Clone, Debug, Default, Eq)]
pub struct ScalarExpr {
    /// Exponent `E` to rational prefactor `P/Q`.
    terms: BTreeMap<Poly, Fraction>,
}

impl PartialEq for ScalarExpr {
    /// Equality as functions: the difference has zero numerators.
    fn eq(&self, other: &Self) -> bool {
        if self.terms == other.terms {
            return true;
        }
        (self - other).is_zero()
    }
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr::default()
    }

    pub fn one() -> Self {
        ScalarExpr::poly(Poly::one())
    }

    pub fn constant(c: BigRational) -> Self {
        ScalarExpr::poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        ScalarExpr::poly(Poly::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        ScalarExpr::poly(Poly::var(v))
    }

    pub fn x(i: usize) -> Self {
        ScalarExpr::var(Var::X(i))
    }

    pub fn poly(p: Poly) -> Self {
        ScalarExpr::fraction(p, Poly::one())
    }

    pub fn fraction(num: Poly, den: Poly) -> Self {
        ScalarExpr::term(num, den, Poly::zero())
    }

    fn term(num: Poly, den: Poly, exponent: Poly) -> Self {
        let mut terms = BTreeMap::new();
        if let Some(fr) = Fraction::normalized(num, den) {
            terms.insert(exponent, fr);
        }
        ScalarExpr { terms }
    }

    /// `exp(p)` for a polynomial `p`.
    pub fn exp(p: &ScalarExpr) -> Result<Self> {
        let poly = p
            .as_poly()
            .ok_or_else(|| Error::Contract(format!("exp needs a polynomial argument, got {p}")))?;
        Ok(ScalarExpr::term(Poly::one(), Poly::one(), poly))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The polynomial, if this expression is one.
    pub fn as_poly(&self) -> Option<Poly> {
        match self.terms.len() {
            0 => Some(Poly::zero()),
            1 => {
                let (e, fr) = self.terms.iter().next().unwrap();
                (e.is_zero() && fr.den.as_constant().is_some()).then(|| fr.num.clone())
            }
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|(e, fr)| {
                e.vars()
                    .chain(fr.num.vars())
                    .chain(fr.den.vars())
                    .collect::<Vec<_>>()
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn scale(&self, c: &BigRational) -> ScalarExpr {
        self * &ScalarExpr::constant(c.clone())
    }

    pub fn pow(&self, k: i32) -> Result<ScalarExpr> {
        if k >= 0 {
            let mut out = ScalarExpr::one();
            for _ in 0..k {
                out = &out * self;
            }
            return Ok(out);
        }
        if self.terms.len() != 1 {
            return Err(Error::Contract(format!(
                "negative power of a sum with {} exponential terms is not representable",
                self.terms.len()
            )));
        }
        let (e, fr) = self.terms.iter().next().unwrap();
        let inv = ScalarExpr::term(fr.den.clone(), fr.num.clone(), -e);
        inv.pow(-k)
    }

    pub fn div(&self, other: &ScalarExpr) -> Result<ScalarExpr> {
        if other.is_zero() {
            return Err(Error::Contract("division by zero expression".into()));
        }
        Ok(self * &other.pow(-1)?)
    }

    pub fn derivative(&self, v: Var) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (e, fr) in &self.terms {
            // ((P'Q - PQ') + P Q E') / Q² · exp(E)
            let dp = fr.num.derivative(v);
            let dq = fr.den.derivative(v);
            let de = e.derivative(v);
            let num = &(&(&dp * &fr.den) - &(&fr.num * &dq)) + &(&(&fr.num * &fr.den) * &de);
            let den = &fr.den * &fr.den;
            out = &out + &ScalarExpr::term(num, den, e.clone());
        }
        out
    }

    pub fn compile(&self, slot: &dyn Fn(Var) -> usize) -> CompiledExpr {
        CompiledExpr {
            terms: self
                .terms
                .iter()
                .map(|(e, fr)| CompiledTerm {
                    num: fr.num.compile(slot),
                    den: (fr.den.as_constant().is_none()).then(|| fr.den.compile(slot)),
                    exponent: (!e.is_zero()).then(|| e.compile(slot)),
                })
                .collect(),
        }
    }

    /// Evaluates at a point of `x` coordinates.
    pub fn eval_x(&self, x: &[f64]) -> f64 {
        self.compile(&|v| match v {
            Var::X(i) => i,
            Var::U(_) => usize::MAX,
        })
        .eval(x)
    }

    pub fn parse(src: &str) -> Result<ScalarExpr> {
        let mut p = Parser::new(src);
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}

impl std::ops::Add for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        let mut out = self.clone();
        for (e, fr) in &rhs.terms {
            match out.terms.get(e) {
                Some(existing) => match existing.add(fr) {
                    Some(sum) => {
                        out.terms.insert(e.clone(), sum);
                    }
                    None => {
                        out.terms.remove(e);
                    }
                },
                None => {
                    out.terms.insert(e.clone(), fr.clone());
                }
            }
        }
        out
    }
}

impl std::ops::Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr {
            terms: self
                .terms
                .iter()
                .map(|(e, fr)| {
                    (
                        e.clone(),
                        Fraction {
                            num: -&fr.num,
                            den: fr.den.clone(),
                        },
                    )
                })
                .collect(),
        }
    }
}

impl std::ops::Sub for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (ea, fa) in &self.terms {
            for (eb, fb) in &rhs.terms {
                let t = ScalarExpr::term(&fa.num * &fb.num, &fa.den * &fb.den, ea + eb);
                out = &out + &t;
            }
        }
        out
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|(e, fr)| {
                let mut s = fr.num.to_string();
                if fr.den.as_constant().is_none() {
                    s = format!("(/ {s} {})", fr.den);
                }
                if !e.is_zero() {
                    s = if fr.num.as_constant().is_some_and(|c| c.is_one())
                        && fr.den.as_constant().is_some()
                    {
                        format!("(exp {e})")
                    } else {
                        format!("(* {s} (exp {e}))")
                    };
                }
                s
            })
            .collect();
        match terms.len() {
            0 => f.write_str("0"),
            1 => f.write_str(&terms[0]),
            _ => write!(f, "(+ {})", terms.join(" ")),
        }
    }
}

#[derive(Clone, Debug)]
struct CompiledTerm {
    num: CompiledPoly,
    den: Option<CompiledPoly>,
    exponent: Option<CompiledPoly>,
}

/// A [`ScalarExpr`] prepared for repeated `f64` evaluation.
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    terms: Vec<CompiledTerm>,
}

impl CompiledExpr {
    pub fn eval(&self, values: &[f64]) -> f64 {
        let mut sum = 0.0;
        for t in &self.terms {
            let mut v = t.num.eval(values);
            if let Some(d) = &t.den {
                v /= d.eval(values);
            }
            if let Some(e) = &t.exponent {
                v *= e.eval(values).exp();
            }
            sum += v;
        }
        sum
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len()
            && !self.src[self.pos].is_ascii_whitespace()
            && !b"()".contains(&self.src[self.pos])
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn expr(&mut self) -> Result<ScalarExpr> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Err(self.error("unexpected end of input"));
        }
        if self.src[self.pos] == b'(' {
            self.pos += 1;
            self.skip_ws();
            let op_pos = self.pos;
            let op = self.atom();
            let mut args = Vec::new();
            loop {
                self.skip_ws();
                if self.pos >= self.src.len() {
                    return Err(self.error("missing ')'"));
                }
                if self.src[self.pos] == b')' {
                    self.pos += 1;
                    break;
                }
                let arg_pos = self.pos;
                args.push((arg_pos, self.expr()?));
            }
            let at = |pos: usize, e: Error| match e {
                Error::Contract(m) => Error::parse(1, pos + 1, m),
                other => other,
            };
            let arity = |n: usize| -> Result<()> {
                if args.len() != n {
                    Err(Error::parse(
                        1,
                        op_pos + 1,
                        format!("`{op}` takes {n} argument(s), got {}", args.len()),
                    ))
                } else {
                    Ok(())
                }
            };
            match op {
                "+" => Ok(args.iter().fold(ScalarExpr::zero(), |acc, (_, a)| &acc + a)),
                "*" => Ok(args.iter().fold(ScalarExpr::one(), |acc, (_, a)| &acc * a)),
                "-" => match args.len() {
                    0 => Err(Error::parse(1, op_pos + 1, "`-` needs an argument")),
                    1 => Ok(-&args[0].1),
                    _ => Ok(args[1..]
                        .iter()
                        .fold(args[0].1.clone(), |acc, (_, a)| &acc - a)),
                },
                "/" => {
                    arity(2)?;
                    args[0].1.div(&args[1].1).map_err(|e| at(args[1].0, e))
                }
                "^" => {
                    arity(2)?;
                    let k = args[1]
                        .1
                        .as_constant()
                        .filter(|c| c.is_integer())
                        .and_then(|c| num::ToPrimitive::to_i32(c.numer()))
                        .ok_or_else(|| {
                            Error::parse(1, args[1].0 + 1, "exponent must be an integer constant")
                        })?;
                    args[0].1.pow(k).map_err(|e| at(args[0].0, e))
                }
                "exp" => {
                    arity(1)?;
                    ScalarExpr::exp(&args[0].1).map_err(|e| at(args[0].0, e))
                }
                _ => Err(Error::parse(
                    1,
                    op_pos + 1,
                    format!("unknown operator `{op}`"),
                )),
            }
        } else {
            let start = self.pos;
            let tok = self.atom();
            if tok.is_empty() {
                return Err(self.error("expected an expression"));
            }
            let index = |rest: &str| -> Result<usize> {
                match rest.parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(k - 1),
                    _ => Err(Error::parse(1, start + 1, format!("bad variable `{tok}`"))),
                }
            };
            if let Some(rest) = tok.strip_prefix('x') {
                return Ok(ScalarExpr::x(index(rest)?));
            }
            if let Some(rest) = tok.strip_prefix('u') {
                return Ok(ScalarExpr::var(Var::U(index(rest)?)));
            }
            tok.parse::<BigRational>()
                .map(ScalarExpr::constant)
                .map_err(|_| Error::parse(1, start + 1, format!("bad number `{tok}`")))
        }
    }
}

/// Formats a rational the way the parser reads it.
pub fn format_rational(r: &BigRational) -> String {
    fmt_rational(r)
}

impl From<Poly> for ScalarExpr {
    fn from(p: Poly) -> Self {
        ScalarExpr::poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> ScalarExpr {
        ScalarExpr::parse(s).unwrap()
    }

    #[test]
    fn parse_print_round_trip() {
        for src in [
            "(+ (* 1/2 (^ x1 2)) x2)",
            "(* x1 (exp (- (^ x1 2))))",
            "(/ x1 (+ (^ x1 2) (^ x2 2)))",
            "(+ 3 (exp (* 2 x1)) (* -1 u1))",
        ] {
            let a = e(src);
            let b = e(&a.to_string());
            assert_eq!(a.terms, b.terms, "{src} -> {a}");
        }
    }

    #[test]
    fn exponentials_combine_and_cancel() {
        let a = e("(* (exp (^ x1 2)) (exp (- (^ x1 2))))");
        assert_eq!(a.as_constant(), Some(BigRational::one()));
        let b = e("(- (exp x1) (exp x1))");
        assert!(b.is_zero());
    }

    #[test]
    fn derivative_rules() {
        let g = e("(exp (- (^ x1 2)))");
        assert_eq!(g.derivative(Var::X(0)), e("(* -2 x1 (exp (- (^ x1 2))))"));
        let r = e("(/ x1 (+ (^ x1 2) (^ x2 2)))");
        let expected = e("(/ (- (^ x2 2) (^ x1 2)) (^ (+ (^ x1 2) (^ x2 2)) 2))");
        assert_eq!(r.derivative(Var::X(0)), expected);
        let div =
            &r.derivative(Var::X(0)) + &e("(/ x2 (+ (^ x1 2) (^ x2 2)))").derivative(Var::X(1));
        assert!(div.is_zero());
    }

    #[test]
    fn evaluation() {
        let a = e("(+ (* x1 (exp (- (^ x1 2)))) (/ 1 x2))");
        let v = a.eval_x(&[0.5, 4.0]);
        assert!((v - (0.5 * (-0.25f64).exp() + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            ScalarExpr::parse("(+ x1"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            ScalarExpr::parse("(exp (/ 1 x1))"),
            Err(Error::Parse { column: 6, .. })
        ));
        assert!(matches!(
            ScalarExpr::parse("(^ (+ x1 (exp x1)) -1)"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            ScalarExpr::parse("(% x1 x2)"),
            Err(Error::Parse { column: 2, .. })
        ));
        assert!(matches!(ScalarExpr::parse("x0"), Err(Error::Parse { .. })));
    }
}
