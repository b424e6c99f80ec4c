//! BV Laplacian, Schouten-Nijenhuis bracket and the twisted Laplacian.
//!
//! Sign conventions (all fixed by requiring the product rule
//! `Δ(fg) = (Δf)g + (-1)^{|f|} f(Δg) + (-1)^{|f|}{f,g}` exactly):
//!
//! * `Δ = Σ_i ∂/∂x^i ∂ᴸ/∂x*_i − Σ_a ∂ᴸ/∂c^a ∂/∂c*_a`, inner derivative first.
//! * `{F,G} = Σ (F ∂ᴿ/∂x)(∂ᴸG/∂x*) − (F ∂ᴿ/∂x*)(∂ᴸG/∂x)` over all conjugate
//!   pairs `(x, x*)`, i.e. a right derivative on `F` and a left derivative
//!   on `G`.
//!
//! Resolved values: `Δ(x1*xs1) = 1`, `Δ(c1*cs1) = -1`, `{x1, xs1} = 1`,
//! `{c1, cs1} = 1`, `{xs1, x1} = -1`.

mod identities;

pub(crate) use identities::{check, run};

pub use identities::{
    gwilliam_perturbation_check, verify_identities, verify_identities_with, Counterexample,
    IdentityConfig, IdentityReport, PerturbationOutcome,
};

use num::BigRational;

use crate::algebra::{GeneratorKind, Parity, Superfunction};
use crate::error::{Error, Result};

/// The coordinate BV Laplacian of the canonical volume form.
pub fn bv_delta(f: &Superfunction) -> Superfunction {
    Laplacian::Canonical.apply(f)
}

/// The Schouten-Nijenhuis (odd Poisson) bracket.
pub fn schouten_bracket(f: &Superfunction, g: &Superfunction) -> Superfunction {
    let ctx = f.context();
    let mut out = Superfunction::zero(ctx);
    for (x, xs) in ctx.conjugate_pairs() {
        if f.contains_id(x) && g.contains_id(xs) {
            out = &out + &(&f.right_derivative_id(x) * &g.left_derivative_id(xs));
        }
        if f.contains_id(xs) && g.contains_id(x) {
            out = &out - &(&f.right_derivative_id(xs) * &g.left_derivative_id(x));
        }
    }
    out
}

/// `Δ_Ω F = ΔF + {f, F}` for `Ω = e^f Ω₀`.
///
/// `f` must be even and free of antifields and antighosts.
pub fn bv_delta_omega(
    f_density: &Superfunction,
    log_density: &Superfunction,
) -> Result<Superfunction> {
    if log_density.parity() != Some(Parity::Even) {
        return Err(Error::Contract(format!(
            "log-density {log_density} is not even"
        )));
    }
    if log_density.contains_kind(GeneratorKind::Antifield)
        || log_density.contains_kind(GeneratorKind::Antighost)
    {
        return Err(Error::Contract(format!(
            "log-density {log_density} depends on antifields; it must be a function on the base"
        )));
    }
    Ok(&bv_delta(f_density) + &schouten_bracket(log_density, f_density))
}

/// Second-order operators used as the Laplacian in the identity checks.
///
/// Everything except [`Laplacian::Canonical`] is a deliberate deformation,
/// used for mutation testing and for probing which perturbations the
/// product rule detects.
#[derive(Clone, Debug, PartialEq)]
pub enum Laplacian {
    Canonical,
    /// `+` instead of `−` in front of the ghost sector.
    GhostSignFlipped,
    /// Adds `b ∂ᴸ/∂x*_i`.
    FirstOrder {
        antifield: usize,
        coefficient: BigRational,
    },
    /// Adds `a ∂/∂x^i ∂ᴸ/∂x*_j`.
    Mixed {
        field: usize,
        antifield: usize,
        coefficient: BigRational,
    },
    /// Adds `c x*_k ∂ᴸ/∂x*_i ∂ᴸ/∂x*_j`.
    Cubic {
        i: usize,
        j: usize,
        k: usize,
        coefficient: BigRational,
    },
}

impl Laplacian {
    pub fn apply(&self, f: &Superfunction) -> Superfunction {
        let ctx = f.context();
        let n = ctx.n_fields();
        let m = ctx.n_ghosts();
        let field = |i: usize| i as u16;
        let ghost = |a: usize| (n + a) as u16;
        let antifield = |i: usize| (n + m + i) as u16;
        let antighost = |a: usize| (2 * n + m + a) as u16;

        let mut out = Superfunction::zero(ctx);
        for i in 0..n {
            if f.contains_id(antifield(i)) {
                out = &out
                    + &f.left_derivative_id(antifield(i))
                        .left_derivative_id(field(i));
            }
        }
        let mut ghost_part = Superfunction::zero(ctx);
        for a in 0..m {
            if f.contains_id(antighost(a)) {
                ghost_part = &ghost_part
                    + &f.left_derivative_id(antighost(a))
                        .left_derivative_id(ghost(a));
            }
        }
        out = match self {
            Laplacian::GhostSignFlipped => &out + &ghost_part,
            _ => &out - &ghost_part,
        };
        match self {
            Laplacian::Canonical | Laplacian::GhostSignFlipped => out,
            Laplacian::FirstOrder {
                antifield: i,
                coefficient,
            } => {
                &out + &f
                    .left_derivative_id(antifield(*i))
                    .scale_rational(coefficient)
            }
            Laplacian::Mixed {
                field: i,
                antifield: j,
                coefficient,
            } => {
                &out + &f
                    .left_derivative_id(antifield(*j))
                    .left_derivative_id(field(*i))
                    .scale_rational(coefficient)
            }
            Laplacian::Cubic {
                i,
                j,
                k,
                coefficient,
            } => {
                let xs_k = Superfunction::var(ctx, crate::algebra::Generator::antifield(*k));
                let dd = f
                    .left_derivative_id(antifield(*j))
                    .left_derivative_id(antifield(*i));
                &out + &(&xs_k * &dd).scale_rational(coefficient)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Context, Generator, GhostDegree};

    fn p(src: &str, n: usize, m: usize) -> Superfunction {
        Superfunction::parse(src, &Context::new(n, m)).unwrap()
    }

    #[test]
    fn delta_examples() {
        assert_eq!(bv_delta(&p("x1*xs1", 1, 0)).to_string(), "1");
        assert!(bv_delta(&p("x1", 1, 0)).is_zero());
        assert!(bv_delta(&p("x1^3*x2 + c1*c2 + 7", 2, 2)).is_zero());
        assert_eq!(bv_delta(&p("c1*cs1", 0, 1)).to_string(), "-1");
    }

    #[test]
    fn delta_raises_ghost_degree_and_flips_parity() {
        let f = p("x1^2*xs1*xs2 + x2*c1*cs1*xs2", 2, 1);
        let d = bv_delta(&f);
        assert!(!d.is_zero());
        assert_eq!(f.ghost_degree(), GhostDegree::Homogeneous(-2));
        assert_eq!(d.ghost_degree(), GhostDegree::Homogeneous(-1));
        assert_eq!(d.parity(), Some(Parity::Odd));
        assert!(bv_delta(&d).is_zero());
    }

    #[test]
    fn bracket_examples() {
        let ctx = Context::new(2, 1);
        let x1 = Superfunction::var(&ctx, Generator::field(0));
        let xs1 = Superfunction::var(&ctx, Generator::antifield(0));
        let xs2 = Superfunction::var(&ctx, Generator::antifield(1));
        assert_eq!(schouten_bracket(&x1, &xs1), Superfunction::one(&ctx));
        assert!(schouten_bracket(&x1, &xs2).is_zero());
        assert_eq!(
            schouten_bracket(&xs1, &x1),
            Superfunction::from_int(&ctx, -1)
        );
        let c1 = Superfunction::var(&ctx, Generator::ghost(0));
        let cs1 = Superfunction::var(&ctx, Generator::antighost(0));
        assert_eq!(schouten_bracket(&c1, &cs1), Superfunction::one(&ctx));

        let base = Superfunction::parse("x1^2*x2 + c1*x2", &ctx).unwrap();
        assert!(
            schouten_bracket(&base, &Superfunction::parse("x1 + x2^3", &ctx).unwrap()).is_zero()
        );

        let s0 = Superfunction::parse("x1^4 + 3*x1*x2^2", &ctx).unwrap();
        let got = schouten_bracket(&s0, &xs1);
        assert_eq!(got, s0.right_derivative(Generator::field(0)));
    }

    #[test]
    fn bracket_degree_bookkeeping() {
        let ctx = Context::new(2, 1);
        let f = Superfunction::parse("x1*c1*xs2", &ctx).unwrap();
        let g = Superfunction::parse("x2^2*cs1 + xs1*xs2*x1", &ctx).unwrap();
        let b = schouten_bracket(&f, &g);
        assert!(!b.is_zero());
        assert_eq!(b.ghost_degree(), GhostDegree::Homogeneous(-1));
        assert_eq!(b.parity(), Some(Parity::Odd));
    }

    #[test]
    fn twisted_delta() {
        let ctx = Context::new(2, 1);
        let f = Superfunction::parse("x1*x2^2 + c1*xs1*x2", &ctx).unwrap();
        assert_eq!(
            bv_delta_omega(&f, &Superfunction::zero(&ctx)).unwrap(),
            bv_delta(&f)
        );

        let density = Superfunction::parse("x1^2*x2 - 3*x2", &ctx).unwrap();
        let xs1 = Superfunction::var(&ctx, Generator::antifield(0));
        assert_eq!(
            bv_delta_omega(&xs1, &density).unwrap(),
            density.right_derivative(Generator::field(0))
        );

        assert!(bv_delta_omega(&f, &xs1).is_err());
        assert!(bv_delta_omega(&f, &Superfunction::parse("x1*cs1", &ctx).unwrap()).is_err());
        assert!(bv_delta_omega(&f, &Superfunction::parse("c1", &ctx).unwrap()).is_err());
    }

    #[test]
    fn mutated_laplacian_differs_only_in_ghost_sector() {
        let f = p("x1*xs1 + c1*cs1", 1, 1);
        assert_eq!(Laplacian::GhostSignFlipped.apply(&f).to_string(), "2");
        assert_eq!(Laplacian::Canonical.apply(&f).to_string(), "0");
    }
}
