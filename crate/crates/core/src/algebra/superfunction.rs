use std::collections::{btree_map::Entry, BTreeMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::BigRational;

use super::coefficient::Coefficient;
use super::context::{Context, GenId, Generator, GeneratorKind, Parity};
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Ghost degree of a superfunction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GhostDegree {
    /// The zero superfunction has every degree.
    Zero,
    Homogeneous(i32),
    Inhomogeneous,
}

impl fmt::Display for GhostDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GhostDegree::Zero => write!(f, "zero"),
            GhostDegree::Homogeneous(d) => write!(f, "{d}"),
            GhostDegree::Inhomogeneous => write!(f, "inhomogeneous"),
        }
    }
}

/// A polynomial superfunction on `ΠT*(X x Πg)` with exact coefficients.
///
/// Terms are kept canonical: each monomial lists its generators in context
/// order, odd generators at most once, and no zero coefficient is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superfunction {
    ctx: Arc<Context>,
    terms: BTreeMap<Monomial, Coefficient>,
}

impl Superfunction {
    pub fn zero(ctx: &Arc<Context>) -> Self {
        Superfunction {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Arc<Context>, c: Coefficient) -> Self {
        let mut f = Superfunction::zero(ctx);
        f.add_term(Monomial::one(), c);
        f
    }

    pub fn one(ctx: &Arc<Context>) -> Self {
        Superfunction::constant(ctx, Coefficient::one())
    }

    pub fn from_int(ctx: &Arc<Context>, n: i64) -> Self {
        Superfunction::constant(ctx, Coefficient::from_int(n))
    }

    /// The coordinate function of a single generator.
    pub fn generator(ctx: &Arc<Context>, g: Generator) -> Result<Self> {
        let id = ctx.require(g)?;
        let mut f = Superfunction::zero(ctx);
        f.terms.insert(Monomial(vec![(id, 1)]), Coefficient::one());
        Ok(f)
    }

    /// Shorthand for `generator(..).unwrap()` when the index is known good.
    pub fn var(ctx: &Arc<Context>, g: Generator) -> Self {
        Superfunction::generator(ctx, g).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Builds a superfunction from ordered products of generators, reordering
    /// each product into canonical form with its Koszul sign.
    pub fn from_products<I>(ctx: &Arc<Context>, products: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Coefficient, Vec<(Generator, u32)>)>,
    {
        let mut out = Superfunction::zero(ctx);
        for (c, factors) in products {
            let mut term = Superfunction::constant(ctx, c);
            for (g, e) in factors {
                let v = Superfunction::generator(ctx, g)?;
                for _ in 0..e {
                    term = &term * &v;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Generator factors of a monomial, in canonical order.
    pub fn factors_of(&self, m: &Monomial) -> Vec<(Generator, u32)> {
        m.factors()
            .iter()
            .map(|&(id, e)| (self.ctx.generator(id), e))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn from_raw_terms(
        ctx: &Arc<Context>,
        terms: impl IntoIterator<Item = (Monomial, Coefficient)>,
    ) -> Self {
        let mut f = Superfunction::zero(ctx);
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    fn same_context(&self, other: &Superfunction) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx
    }

    /// Supercommutative product.
    pub fn multiply(&self, other: &Superfunction) -> Result<Superfunction> {
        if !self.same_context(other) {
            return Err(Error::contract("superfunctions live in different contexts"));
        }
        let mut out = Superfunction::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((negative, m)) = ma.mul(mb, &self.ctx) {
                    let c = ca * cb;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coefficient) -> Superfunction {
        let mut out = Superfunction::zero(&self.ctx);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Superfunction {
        Superfunction::from_raw_terms(
            &self.ctx,
            self.terms.iter().map(|(m, c)| (m.clone(), c.scale(r))),
        )
    }

    pub fn scale_int(&self, n: i64) -> Superfunction {
        self.scale_rational(&BigRational::from_integer(n.into()))
    }

    /// `self^n`, with `self^0 = 1`.
    pub fn pow(&self, n: u32) -> Superfunction {
        let mut out = Superfunction::one(&self.ctx);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    fn derivative_by_id(&self, id: GenId, from_right: bool) -> Superfunction {
        let mut out = Superfunction::zero(&self.ctx);
        for (m, c) in &self.terms {
            if let Some((mult, negative, rest)) = m.strip(id, &self.ctx, from_right) {
                let c = c.scale_int(if negative {
                    -(mult as i64)
                } else {
                    mult as i64
                });
                out.add_term(rest, c);
            }
        }
        out
    }

    /// Right derivative: the generator is anticommuted to the rightmost
    /// position of each monomial and then removed.
    pub fn right_derivative(&self, g: Generator) -> Superfunction {
        match self.ctx.id(g) {
            Some(id) => self.right_derivative_id(id),
            None => Superfunction::zero(&self.ctx),
        }
    }

    /// Left derivative: the generator is anticommuted to the leftmost
    /// position and removed. On a parity-homogeneous `F` this equals
    /// `(-1)^{|g|(|F|+1)}` times the right derivative.
    pub fn left_derivative(&self, g: Generator) -> Superfunction {
        match self.ctx.id(g) {
            Some(id) => self.left_derivative_id(id),
            None => Superfunction::zero(&self.ctx),
        }
    }

    pub(crate) fn right_derivative_id(&self, id: GenId) -> Superfunction {
        self.derivative_by_id(id, true)
    }

    pub(crate) fn left_derivative_id(&self, id: GenId) -> Superfunction {
        self.derivative_by_id(id, false)
    }

    pub(crate) fn contains_id(&self, id: GenId) -> bool {
        self.terms.keys().any(|m| m.exponent(id) > 0)
    }

    /// True if any term contains a generator of the given kind.
    pub fn contains_kind(&self, kind: GeneratorKind) -> bool {
        self.terms.keys().any(|m| {
            m.factors()
                .iter()
                .any(|&(id, _)| self.ctx.generator(id).kind == kind)
        })
    }

    pub fn ghost_degree(&self) -> GhostDegree {
        let mut degrees = self.terms.keys().map(|m| m.degree(&self.ctx));
        let Some(first) = degrees.next() else {
            return GhostDegree::Zero;
        };
        if degrees.all(|d| d == first) {
            GhostDegree::Homogeneous(first)
        } else {
            GhostDegree::Inhomogeneous
        }
    }

    /// Common parity of all terms; `None` if mixed. Zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.is_odd(&self.ctx));
        let Some(first) = it.next() else {
            return Some(Parity::Even);
        };
        it.all(|p| p == first)
            .then_some(if first { Parity::Odd } else { Parity::Even })
    }

    /// Splits into `(even part, odd part)`.
    pub fn parity_components(&self) -> (Superfunction, Superfunction) {
        let (odd, even): (Vec<_>, Vec<_>) = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .partition(|(m, _)| m.is_odd(&self.ctx));
        (
            Superfunction::from_raw_terms(&self.ctx, even),
            Superfunction::from_raw_terms(&self.ctx, odd),
        )
    }

    /// Terms whose monomials satisfy `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&[(Generator, u32)]) -> bool) -> Superfunction {
        Superfunction::from_raw_terms(
            &self.ctx,
            self.terms
                .iter()
                .filter(|(m, _)| keep(&self.factors_of(m)))
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Algebra homomorphism sending each listed generator to a superfunction
    /// of the same parity; unlisted generators are fixed.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<Generator, Superfunction>,
    ) -> Result<Superfunction> {
        let mut images: BTreeMap<GenId, &Superfunction> = BTreeMap::new();
        for (g, image) in assignment {
            let id = self.ctx.require(*g)?;
            if !self.same_context(image) {
                return Err(Error::contract(format!(
                    "image of {g} lives in a different context"
                )));
            }
            let want = self.ctx.parity(id);
            match image.parity() {
                Some(p) if p == want || image.is_zero() => {}
                _ => {
                    return Err(Error::contract(format!(
                        "substitution {g} -> {image} does not preserve parity ({want:?})"
                    )))
                }
            }
            images.insert(id, image);
        }
        let mut out = Superfunction::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut term = Superfunction::constant(&self.ctx, c.clone());
            for &(id, e) in m.factors() {
                let factor = match images.get(&id) {
                    Some(img) => (*img).clone(),
                    None => Superfunction::from_raw_terms(
                        &self.ctx,
                        [(Monomial(vec![(id, 1)]), Coefficient::one())],
                    ),
                };
                for _ in 0..e {
                    term = &term * &factor;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Rebuilds the term map from its own ordered products. Stored values are
    /// already canonical, so this is the identity.
    pub fn recanonicalize(&self) -> Superfunction {
        let products = self
            .terms
            .iter()
            .map(|(m, c)| (c.clone(), self.factors_of(m)))
            .collect::<Vec<_>>();
        Superfunction::from_products(&self.ctx, products)
            .expect("generators come from this context")
    }
}

impl Add for &Superfunction {
    type Output = Superfunction;

    fn add(self, rhs: &Superfunction) -> Superfunction {
        assert!(
            self.same_context(rhs),
            "contract violation: adding superfunctions from different contexts"
        );
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Superfunction {
    type Output = Superfunction;

    fn sub(self, rhs: &Superfunction) -> Superfunction {
        self + &(-rhs)
    }
}

impl Neg for &Superfunction {
    type Output = Superfunction;

    fn neg(self) -> Superfunction {
        Superfunction {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Superfunction {
    type Output = Superfunction;

    fn neg(self) -> Superfunction {
        -&self
    }
}

/// Panics on mismatched contexts; use [`Superfunction::multiply`] to get an
/// error instead.
impl Mul for &Superfunction {
    type Output = Superfunction;

    fn mul(self, rhs: &Superfunction) -> Superfunction {
        self.multiply(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for Superfunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_superfunction(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coefficient::{gaussian, rational};

    fn ctx() -> Arc<Context> {
        Context::new(2, 1)
    }

    #[test]
    fn odd_square_vanishes() {
        let ctx = ctx();
        let s1 = Superfunction::var(&ctx, Generator::antifield(0));
        assert!((&s1 * &s1).is_zero());
    }

    #[test]
    fn odd_swap_flips_sign() {
        let ctx = ctx();
        let s1 = Superfunction::var(&ctx, Generator::antifield(0));
        let s2 = Superfunction::var(&ctx, Generator::antifield(1));
        assert_eq!(&s1 * &s2, -(&s2 * &s1));
    }

    #[test]
    fn even_generators_commute_with_exact_coefficients() {
        let ctx = ctx();
        let c = &Coefficient::from_int(2) + &(&Coefficient::i() * &Coefficient::hbar(1));
        let cs = Superfunction::var(&ctx, Generator::antighost(0)).scale(&c);
        let x = Superfunction::var(&ctx, Generator::field(0));
        assert_eq!(&cs * &x, &x * &cs);
        let term = (&cs * &x).terms().next().map(|(_, c)| c.clone()).unwrap();
        assert_eq!(term, c);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = Superfunction::one(&Context::new(1, 0));
        let b = Superfunction::one(&Context::new(2, 0));
        assert!(matches!(a.multiply(&b), Err(Error::Contract(_))));
    }

    #[test]
    fn right_derivative_examples() {
        let ctx = ctx();
        let x1 = Superfunction::var(&ctx, Generator::field(0));
        let s1 = Superfunction::var(&ctx, Generator::antifield(0));
        let s2 = Superfunction::var(&ctx, Generator::antifield(1));
        assert_eq!((&x1 * &s1).right_derivative(Generator::antifield(0)), x1);
        assert_eq!(
            x1.pow(3).right_derivative(Generator::field(0)),
            x1.pow(2).scale_int(3)
        );
        assert_eq!((&s1 * &s2).right_derivative(Generator::antifield(0)), -&s2);
    }

    #[test]
    fn left_derivative_examples() {
        let ctx = ctx();
        let x1 = Superfunction::var(&ctx, Generator::field(0));
        let s1 = Superfunction::var(&ctx, Generator::antifield(0));
        let s2 = Superfunction::var(&ctx, Generator::antifield(1));
        let c1 = Superfunction::var(&ctx, Generator::ghost(0));
        assert_eq!((&x1 * &s1).left_derivative(Generator::antifield(0)), x1);
        assert_eq!(
            c1.left_derivative(Generator::ghost(0)),
            Superfunction::one(&ctx)
        );
        // Moving s1 leftwards in s1*s2 costs nothing.
        assert_eq!((&s1 * &s2).left_derivative(Generator::antifield(0)), s2);
        let f = &(&x1 * &x1) + &(&x1 * &s2);
        assert_eq!(
            f.left_derivative(Generator::field(0)),
            f.right_derivative(Generator::field(0))
        );
    }

    #[test]
    fn ghost_degrees() {
        let ctx = ctx();
        let c = Superfunction::var(&ctx, Generator::ghost(0));
        let cs = Superfunction::var(&ctx, Generator::antighost(0));
        let s1 = Superfunction::var(&ctx, Generator::antifield(0));
        assert_eq!((&c * &cs).ghost_degree(), GhostDegree::Homogeneous(-1));
        assert_eq!(
            Superfunction::one(&ctx).ghost_degree(),
            GhostDegree::Homogeneous(0)
        );
        assert_eq!((&s1 + &c).ghost_degree(), GhostDegree::Inhomogeneous);
        assert_eq!(Superfunction::zero(&ctx).ghost_degree(), GhostDegree::Zero);
    }

    #[test]
    fn substitution_examples() {
        let ctx = ctx();
        let x1 = Superfunction::var(&ctx, Generator::field(0));
        let s1 = Superfunction::var(&ctx, Generator::antifield(0));
        let s2 = Superfunction::var(&ctx, Generator::antifield(1));
        let one = Superfunction::one(&ctx);

        let kill = BTreeMap::from([(Generator::antifield(0), Superfunction::zero(&ctx))]);
        assert!((&x1 * &s1).substitute(&kill).unwrap().is_zero());

        let shift = BTreeMap::from([(Generator::field(0), &x1 + &one)]);
        assert_eq!(x1.substitute(&shift).unwrap(), &x1 + &one);

        let collapse = BTreeMap::from([(Generator::antifield(0), s2.clone())]);
        assert!((&s1 * &s2).substitute(&collapse).unwrap().is_zero());

        let bad = BTreeMap::from([(Generator::antifield(0), x1.clone())]);
        assert!(matches!(
            (&s1 * &s2).substitute(&bad),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn complex_coefficients_survive_products() {
        let ctx = ctx();
        let half_i = Coefficient::from_gaussian(gaussian(rational(1, 2), rational(1, 1)));
        let x = Superfunction::var(&ctx, Generator::field(0)).scale(&half_i);
        let sq = &x * &x;
        let expected = &half_i * &half_i;
        assert_eq!(sq.terms().next().unwrap().1, &expected);
    }
}
