use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::expr::ScalarExpr;
use super::poly::{Poly, Var};
use crate::algebra::{Coefficient, Context, Generator, GeneratorKind, Superfunction};
use crate::error::{Error, Result};

/// Sorts `idx` in place and returns whether the permutation was odd, or
/// `None` on a repeated index.
fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for a in 0..idx.len() {
        for b in 0..idx.len() - 1 - a {
            if idx[b] > idx[b + 1] {
                idx.swap(b, b + 1);
                odd = !odd;
            } else if idx[b] == idx[b + 1] {
                return None;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(odd)
}

/// Concatenates two sorted index sets and sorts the result.
fn merge(a: &[usize], b: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
    sort_with_sign(&mut idx).map(|odd| (odd, idx))
}

fn signed(odd: bool, c: ScalarExpr) -> ScalarExpr {
    if odd {
        -&c
    } else {
        c
    }
}

macro_rules! alternating {
    ($name:ident, $basis:literal) => {
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name {
            dim: usize,
            degree: usize,
            terms: BTreeMap<Vec<usize>, ScalarExpr>,
        }

        impl $name {
            pub fn zero(dim: usize, degree: usize) -> Self {
                $name {
                    dim,
                    degree,
                    terms: BTreeMap::new(),
                }
            }

            /// Builds from `(indices, coefficient)` pairs with 0-based
            /// indices in any order; reordering applies the antisymmetry sign.
            pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
            where
                I: IntoIterator<Item = (Vec<usize>, ScalarExpr)>,
            {
                if degree > dim {
                    return Err(Error::Contract(format!(
                        "degree {degree} exceeds dimension {dim}"
                    )));
                }
                let mut out = $name::zero(dim, degree);
                for (mut idx, c) in terms {
                    if idx.len() != degree {
                        return Err(Error::Contract(format!(
                            "index tuple {idx:?} does not have length {degree}"
                        )));
                    }
                    if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
                        return Err(Error::Contract(format!(
                            "index {} exceeds dimension {dim}",
                            bad + 1
                        )));
                    }
                    if let Some(odd) = sort_with_sign(&mut idx) {
                        out.add_term(idx, signed(odd, c));
                    }
                }
                Ok(out)
            }

            fn add_term(&mut self, idx: Vec<usize>, c: ScalarExpr) {
                let sum = match self.terms.remove(&idx) {
                    Some(old) => &old + &c,
                    None => c,
                };
                if !sum.is_zero() {
                    self.terms.insert(idx, sum);
                }
            }

            pub fn dim(&self) -> usize {
                self.dim
            }

            pub fn degree(&self) -> usize {
                self.degree
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &ScalarExpr)> {
                self.terms.iter()
            }

            pub fn coefficient(&self, idx: &[usize]) -> ScalarExpr {
                self.terms.get(idx).cloned().unwrap_or_default()
            }

            pub fn scale(&self, c: &ScalarExpr) -> Self {
                let mut out = $name::zero(self.dim, self.degree);
                for (idx, v) in &self.terms {
                    out.add_term(idx.clone(), v * c);
                }
                out
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                if (self.dim, self.degree) != (other.dim, other.degree) {
                    return Err(Error::Contract(format!(
                        "cannot add degree {} and degree {} objects in dimensions {} and {}",
                        self.degree, other.degree, self.dim, other.dim
                    )));
                }
                let mut out = self.clone();
                for (idx, v) in &other.terms {
                    out.add_term(idx.clone(), v.clone());
                }
                Ok(out)
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.add(&other.scale(&ScalarExpr::from_int(-1)))
            }

            /// Exterior product; sorting the concatenated indices supplies the sign.
            pub fn wedge(&self, other: &Self) -> Result<Self> {
                if self.dim != other.dim {
                    return Err(Error::Contract("dimension mismatch in wedge".into()));
                }
                if self.degree + other.degree > self.dim {
                    return Ok($name::zero(self.dim, self.dim));
                }
                let mut out = $name::zero(self.dim, self.degree + other.degree);
                for (a, ca) in &self.terms {
                    for (b, cb) in &other.terms {
                        if let Some((odd, idx)) = merge(a, b) {
                            out.add_term(idx, signed(odd, ca * cb));
                        }
                    }
                }
                Ok(out)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.terms.is_empty() {
                    return f.write_str("0");
                }
                let parts: Vec<String> = self
                    .terms
                    .iter()
                    .map(|(idx, c)| {
                        let basis: Vec<String> =
                            idx.iter().map(|i| format!("{}{}", $basis, i + 1)).collect();
                        if basis.is_empty() {
                            c.to_string()
                        } else {
                            format!("{} {}", c, basis.join("^"))
                        }
                    })
                    .collect();
                f.write_str(&parts.join(" + "))
            }
        }
    };
}

alternating!(DifferentialForm, "dx");
alternating!(PolyvectorField, "d");

/// `ι_{i₁} ⋯ ι_{i_p}` applied to `dx^J`, rightmost first.
fn contract_basis(i: &[usize], j: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut cur = j.to_vec();
    let mut odd = false;
    for k in i.iter().rev() {
        let pos = cur.iter().position(|x| x == k)?;
        if pos % 2 == 1 {
            odd = !odd;
        }
        cur.remove(pos);
    }
    Some((odd, cur))
}

/// `α ⌟ ω` with `(α∧β)⌟ω = α⌟(β⌟ω)`.
pub fn contract(alpha: &PolyvectorField, omega: &DifferentialForm) -> Result<DifferentialForm> {
    if alpha.dim != omega.dim {
        return Err(Error::Contract(format!(
            "dimension mismatch: polyvector in {} dimensions, form in {}",
            alpha.dim, omega.dim
        )));
    }
    if alpha.degree > omega.degree {
        return Err(Error::Contract(format!(
            "cannot contract a degree {} polyvector into a degree {} form",
            alpha.degree, omega.degree
        )));
    }
    let mut out = DifferentialForm::zero(omega.dim, omega.degree - alpha.degree);
    for (i, a) in &alpha.terms {
        for (j, w) in &omega.terms {
            if let Some((odd, rest)) = contract_basis(i, j) {
                out.add_term(rest, signed(odd, a * w));
            }
        }
    }
    Ok(out)
}

/// The de Rham differential. A top-degree form maps to the empty form of
/// degree `N + 1`.
pub fn exterior_derivative(omega: &DifferentialForm) -> DifferentialForm {
    let dim = omega.dim;
    if omega.degree >= dim {
        return DifferentialForm::zero(dim, dim + 1);
    }
    let mut out = DifferentialForm::zero(dim, omega.degree + 1);
    for (j, c) in &omega.terms {
        for i in 0..dim {
            if j.contains(&i) {
                continue;
            }
            let dc = c.derivative(Var::X(i));
            if dc.is_zero() {
                continue;
            }
            let before = j.iter().filter(|&&k| k < i).count();
            let mut idx = j.clone();
            idx.insert(before, i);
            out.add_term(idx, signed(before % 2 == 1, dc));
        }
    }
    out
}

/// `e^f dx¹∧⋯∧dxᴺ`.
pub fn volume_form(dim: usize, f: &ScalarExpr) -> Result<DifferentialForm> {
    let density = ScalarExpr::exp(f)?;
    DifferentialForm::from_terms(dim, dim, [((0..dim).collect(), density)])
}

/// The unique `α` with `α ⌟ (e^f dx¹∧⋯∧dxᴺ) = ω`.
pub fn uncontract_volume(omega: &DifferentialForm, f: &ScalarExpr) -> Result<PolyvectorField> {
    let dim = omega.dim;
    let inv_density = ScalarExpr::exp(&-f)?;
    let top: Vec<usize> = (0..dim).collect();
    let mut out = PolyvectorField::zero(dim, dim - omega.degree.min(dim));
    if omega.degree > dim {
        return Ok(out);
    }
    for (k, c) in &omega.terms {
        let i: Vec<usize> = (0..dim).filter(|x| !k.contains(x)).collect();
        let (odd, rest) = contract_basis(&i, &top).expect("complement contracts into the top form");
        debug_assert_eq!(&rest, k);
        out.add_term(i, signed(odd, c * &inv_density));
    }
    Ok(out)
}

/// `Δ_Ω α = F_Ω⁻¹ d F_Ω α` for `Ω = e^f dx¹∧⋯∧dxᴺ`, `f` polynomial.
pub fn delta_geometric(alpha: &PolyvectorField, f: &ScalarExpr) -> Result<PolyvectorField> {
    let omega = volume_form(alpha.dim, f)?;
    if alpha.degree == 0 {
        return Ok(PolyvectorField::zero(alpha.dim, 0));
    }
    let d = exterior_derivative(&contract(alpha, &omega)?);
    uncontract_volume(&d, f)
}

impl PolyvectorField {
    /// The image under `∂_{i₁}∧⋯∧∂_{i_p} ↦ x*_{i₁}⋯x*_{i_p}` (increasing
    /// indices, no sign) in a context with `N` fields and no ghosts.
    ///
    /// Coefficients must be polynomials.
    pub fn to_superfunction(&self) -> Result<Superfunction> {
        let ctx = Context::new(self.dim, 0);
        self.to_superfunction_in(&ctx)
    }

    pub fn to_superfunction_in(&self, ctx: &Arc<Context>) -> Result<Superfunction> {
        let mut products = Vec::new();
        for (idx, c) in &self.terms {
            let p = c
                .as_poly()
                .ok_or_else(|| Error::Contract(format!("coefficient {c} is not a polynomial")))?;
            for (mono, r) in p.terms() {
                let mut factors = Vec::new();
                for (v, e) in mono {
                    match v {
                        Var::X(i) => factors.push((Generator::field(*i), *e)),
                        Var::U(_) => {
                            return Err(Error::Contract(format!(
                                "coefficient {c} depends on a chart parameter"
                            )))
                        }
                    }
                }
                factors.extend(idx.iter().map(|&i| (Generator::antifield(i), 1)));
                products.push((Coefficient::from_rational(r.clone()), factors));
            }
        }
        Superfunction::from_products(ctx, products)
    }

    /// Inverse of [`PolyvectorField::to_superfunction`] on the terms with
    /// exactly `degree` antifields; anything else is an error.
    pub fn from_superfunction(f: &Superfunction, degree: usize) -> Result<PolyvectorField> {
        let dim = f.context().n_fields();
        let mut terms: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
        for (mono, c) in f.terms() {
            let r = c.as_rational().ok_or_else(|| {
                Error::Contract(format!("coefficient {c} is not a real rational"))
            })?;
            let mut poly_mono = Vec::new();
            let mut idx = Vec::new();
            for (g, e) in f.factors_of(mono) {
                match g.kind {
                    GeneratorKind::Field => poly_mono.push((Var::X(g.index), e)),
                    GeneratorKind::Antifield => idx.push(g.index),
                    _ => return Err(Error::Contract(format!("{g} has no polyvector meaning"))),
                }
            }
            if idx.len() != degree {
                return Err(Error::Contract(format!(
                    "term with {} antifields in a degree {degree} polyvector",
                    idx.len()
                )));
            }
            let mut p = Poly::zero();
            p.add_term(poly_mono, r);
            let entry = terms.entry(idx).or_default();
            *entry = &*entry + &p;
        }
        PolyvectorField::from_terms(
            dim,
            degree,
            terms.into_iter().map(|(i, p)| (i, ScalarExpr::poly(p))),
        )
    }
}

/// A base function `f` as an even superfunction, for `Δ + {f, −}`.
pub fn scalar_to_superfunction(f: &ScalarExpr, dim: usize) -> Result<Superfunction> {
    PolyvectorField::from_terms(dim, 0, [(Vec::new(), f.clone())])?.to_superfunction()
}
