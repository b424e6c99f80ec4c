use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::complex::Complex;
use num::{BigInt, BigRational, One, Signed, Zero};

/// Exact Gaussian rational `a + b i`.
pub type Gaussian = Complex<BigRational>;

pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn gaussian(re: BigRational, im: BigRational) -> Gaussian {
    Complex::new(re, im)
}

pub fn real(re: BigRational) -> Gaussian {
    Complex::new(re, BigRational::zero())
}

/// A Laurent polynomial in the formal symbol ħ with Gaussian-rational
/// coefficients. The zero coefficient is the empty map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coefficient {
    terms: BTreeMap<i32, Gaussian>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::default()
    }

    pub fn one() -> Self {
        Coefficient::from_gaussian(Gaussian::one())
    }

    pub fn from_gaussian(g: Gaussian) -> Self {
        Coefficient::monomial(0, g)
    }

    pub fn from_rational(r: BigRational) -> Self {
        Coefficient::from_gaussian(real(r))
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient::from_rational(BigRational::from_integer(n.into()))
    }

    /// `g · ħ^power`.
    pub fn monomial(power: i32, g: Gaussian) -> Self {
        let mut terms = BTreeMap::new();
        if !g.is_zero() {
            terms.insert(power, g);
        }
        Coefficient { terms }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Coefficient::from_gaussian(Complex::new(BigRational::zero(), BigRational::one()))
    }

    /// `ħ^power`.
    pub fn hbar(power: i32) -> Self {
        Coefficient::monomial(power, Gaussian::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|g| g.is_one())
    }

    /// `(ħ power, coefficient)` pairs in increasing power.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Gaussian)> {
        self.terms.iter().map(|(&k, g)| (k, g))
    }

    /// The rational value, if this is a real constant without ħ.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let g = self.terms.get(&0)?;
                g.im.is_zero().then(|| g.re.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Coefficient::zero();
        }
        Coefficient {
            terms: self
                .terms
                .iter()
                .map(|(&k, g)| (k, Complex::new(&g.re * r, &g.im * r)))
                .collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&BigRational::from_integer(n.into()))
    }

    fn add_term(&mut self, power: i32, g: Gaussian) {
        if g.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(power) {
            Entry::Vacant(e) => {
                e.insert(g);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += g;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        for (&k, g) in &rhs.terms {
            self.add_term(k, g.clone());
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;

    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;

    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;

    fn neg(self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(&k, g)| (k, -g.clone())).collect(),
        }
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;

    fn neg(self) -> Coefficient {
        -&self
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;

    fn mul(self, rhs: &Coefficient) -> Coefficient {
        let mut out = Coefficient::zero();
        for (&ka, a) in &self.terms {
            for (&kb, b) in &rhs.terms {
                out.add_term(ka + kb, a * b);
            }
        }
        out
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Text form of a Gaussian rational as a leading factor of a term.
///
/// Real values give `(sign, magnitude)` with the magnitude `None` when it is
/// one; genuinely complex values are printed as `(a+bi)` with a `+` sign.
pub(crate) fn gaussian_factor(g: &Gaussian) -> (bool, Option<String>) {
    if g.im.is_zero() {
        let neg = g.re.is_negative();
        let mag = g.re.abs();
        if mag.is_one() {
            (neg, None)
        } else if mag.is_integer() {
            (neg, Some(fmt_rational(&mag)))
        } else {
            (neg, Some(format!("({})", fmt_rational(&mag))))
        }
    } else {
        let sign = if g.im.is_negative() { '-' } else { '+' };
        let s = format!(
            "({}{}{}i)",
            fmt_rational(&g.re),
            sign,
            fmt_rational(&g.im.abs())
        );
        (false, Some(s))
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (k, g)) in self.terms().enumerate() {
            let (neg, mag) = gaussian_factor(g);
            let mut factors: Vec<String> = mag.into_iter().collect();
            if k != 0 {
                factors.push(if k == 1 { "h".into() } else { format!("h^{k}") });
            }
            let body = if factors.is_empty() {
                "1".to_string()
            } else {
                factors.join("*")
            };
            match (n, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}
