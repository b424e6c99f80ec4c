use std::fmt;

use num::BigRational;

use super::expr::ScalarExpr;
use super::forms::{contract, delta_geometric, volume_form, DifferentialForm, PolyvectorField};
use super::quadrature::QuadratureSpec;
use super::surface::{Boundary, Surface};
use crate::error::{Error, Result};

/// A quadrature value with `|v(n) − v(2n)|` as its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.8} ± {:.1e}", self.value, self.error)
    }
}

fn integrand(
    alpha: &PolyvectorField,
    dim: usize,
    params: usize,
    f: &ScalarExpr,
) -> Result<DifferentialForm> {
    if alpha.dim() != dim {
        return Err(Error::Contract(format!(
            "polyvector lives in R^{} but the surface in R^{dim}",
            alpha.dim()
        )));
    }
    if alpha.degree() + params != dim {
        return Err(Error::Contract(format!(
            "a degree-{} polyvector contracts the volume form to a {}-form, which cannot be integrated over a {params}-dimensional surface",
            alpha.degree(),
            dim.saturating_sub(alpha.degree())
        )));
    }
    contract(alpha, &volume_form(dim, f)?)
}

/// `∫_Σ α⌟Ω` for `Ω = e^f dx¹∧…∧dxᴺ`.
pub fn bv_integral(
    alpha: &PolyvectorField,
    sigma: &Surface,
    f: &ScalarExpr,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let omega = integrand(alpha, sigma.ambient_dim(), sigma.params(), f)?;
    let value = sigma.integrate(&omega, quad)?;
    let refined = sigma.integrate(&omega, &quad.refined())?;
    Ok(Estimate {
        value,
        error: (value - refined).abs(),
    })
}

/// Both sides of the BV Stokes formula `∫_{∂Σ} α⌟Ω = ∫_Σ (Δ_Ω α)⌟Ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct StokesReport {
    pub boundary: f64,
    pub interior: f64,
    pub residual: f64,
}

impl fmt::Display for StokesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "boundary={:.12e}", self.boundary)?;
        writeln!(f, "interior={:.12e}", self.interior)?;
        write!(f, "residual={:.3e}", self.residual)
    }
}

pub fn stokes_residual(
    alpha: &PolyvectorField,
    sigma: &Surface,
    f: &ScalarExpr,
    quad: &QuadratureSpec,
) -> Result<StokesReport> {
    let dim = sigma.ambient_dim();
    let params = sigma.params();
    if params == 0 {
        return Err(Error::Contract(
            "Stokes needs a surface of positive dimension".into(),
        ));
    }
    let omega = integrand(alpha, dim, params - 1, f)?;
    let boundary = match sigma.boundary() {
        Boundary::Unspecified => {
            return Err(Error::Contract(format!(
                "surface {} has no boundary parametrization",
                sigma.name()
            )))
        }
        Boundary::Closed => 0.0,
        Boundary::Charts(charts) => {
            let mut total = 0.0;
            for c in charts {
                total += c.integrate(&omega, quad)?;
            }
            total
        }
    };
    let delta = delta_geometric(alpha, f)?;
    let interior = sigma.integrate(&integrand(&delta, dim, params, f)?, quad)?;
    Ok(StokesReport {
        boundary,
        interior,
        residual: (boundary - interior).abs(),
    })
}

/// Stokes residuals at `points, 2·points, 4·points, …`.
pub fn stokes_convergence(
    alpha: &PolyvectorField,
    sigma: &Surface,
    f: &ScalarExpr,
    quad: &QuadratureSpec,
    steps: usize,
) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::with_capacity(steps);
    let mut q = *quad;
    for _ in 0..steps {
        out.push((q.points(), stokes_residual(alpha, sigma, f, &q)?.residual));
        q = q.refined();
    }
    Ok(out)
}

/// Residual sequence passes if each doubling gains a factor of ten or the
/// residual is already below `floor`.
pub fn converges(residuals: &[(usize, f64)], floor: f64) -> bool {
    residuals
        .windows(2)
        .all(|w| w[1].1 <= floor || w[1].1 * 10.0 <= w[0].1)
}

fn require_closed_polyvector(alpha: &PolyvectorField, f: &ScalarExpr) -> Result<()> {
    let residual = delta_geometric(alpha, f)?;
    if !residual.is_zero() {
        return Err(Error::Precondition(format!(
            "polyvector is not closed under the BV Laplacian: Δ_Ω α = {residual}"
        )));
    }
    Ok(())
}

fn require_closed_surface(sigma: &Surface) -> Result<()> {
    if !sigma.is_closed() {
        return Err(Error::Contract(format!(
            "surface {} is not a closed cycle",
            sigma.name()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomologyReport {
    pub first: Estimate,
    pub second: Estimate,
    pub difference: f64,
    pub tolerance: f64,
}

impl HomologyReport {
    pub fn passed(&self) -> bool {
        self.difference < self.tolerance
    }
}

impl fmt::Display for HomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "first={:.12e}", self.first.value)?;
        writeln!(f, "second={:.12e}", self.second.value)?;
        writeln!(f, "difference={:.3e}", self.difference)?;
        writeln!(f, "tolerance={:.1e}", self.tolerance)?;
        write!(f, "result={}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Compares the integrals of a `Δ_Ω`-closed `α` over two closed cycles.
pub fn homology_invariance_check(
    alpha: &PolyvectorField,
    sigma1: &Surface,
    sigma2: &Surface,
    f: &ScalarExpr,
    quad: &QuadratureSpec,
    tolerance: f64,
) -> Result<HomologyReport> {
    require_closed_polyvector(alpha, f)?;
    require_closed_surface(sigma1)?;
    require_closed_surface(sigma2)?;
    let first = bv_integral(alpha, sigma1, f, quad)?;
    let second = bv_integral(alpha, sigma2, f, quad)?;
    Ok(HomologyReport {
        first,
        second,
        difference: (first.value - second.value).abs(),
        tolerance,
    })
}

/// Integrals of a closed `α` along a family of closed cycles, e.g. the zero
/// sets of `Ψ_t = tΨ₁ + (1−t)Ψ₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub samples: Vec<(BigRational, Estimate)>,
    pub tolerance: f64,
}

impl SweepReport {
    /// Largest deviation between any two samples.
    pub fn spread(&self) -> f64 {
        let values = self.samples.iter().map(|(_, e)| e.value);
        let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
        let min = values.fold(f64::INFINITY, f64::min);
        if self.samples.is_empty() {
            0.0
        } else {
            max - min
        }
    }

    pub fn passed(&self) -> bool {
        self.spread() < self.tolerance
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, e) in &self.samples {
            writeln!(f, "sample.{t}={:.12e}", e.value)?;
        }
        writeln!(f, "spread={:.3e}", self.spread())?;
        write!(f, "result={}", if self.passed() { "pass" } else { "fail" })
    }
}

pub fn level_set_sweep(
    alpha: &PolyvectorField,
    family: &[(BigRational, Surface)],
    f: &ScalarExpr,
    quad: &QuadratureSpec,
    tolerance: f64,
) -> Result<SweepReport> {
    require_closed_polyvector(alpha, f)?;
    let mut samples = Vec::with_capacity(family.len());
    for (t, sigma) in family {
        require_closed_surface(sigma)?;
        samples.push((t.clone(), bv_integral(alpha, sigma, f, quad)?));
    }
    Ok(SweepReport { samples, tolerance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::shapes;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn vector(terms: Vec<(usize, &str)>) -> PolyvectorField {
        PolyvectorField::from_terms(
            2,
            1,
            terms
                .into_iter()
                .map(|(i, s)| (vec![i], ScalarExpr::parse(s).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn degree_mismatch_is_a_contract_violation() {
        let circle = shapes::circle(&q(1, 1)).unwrap();
        let scalar = PolyvectorField::from_terms(2, 0, [(vec![], ScalarExpr::one())]).unwrap();
        let err = bv_integral(
            &scalar,
            &circle,
            &ScalarExpr::zero(),
            &QuadratureSpec::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn disk_stokes_and_unspecified_boundary() {
        let disk = shapes::disk(&q(1, 1)).unwrap();
        let alpha = vector(vec![(0, "x1")]);
        let r = stokes_residual(
            &alpha,
            &disk,
            &ScalarExpr::zero(),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((r.boundary - std::f64::consts::PI).abs() < 1e-10);
        assert!(r.residual < 1e-10);
        let open = Surface::new("open", disk.charts().to_vec(), Boundary::Unspecified).unwrap();
        assert!(stokes_residual(
            &alpha,
            &open,
            &ScalarExpr::zero(),
            &QuadratureSpec::default()
        )
        .is_err());
    }

    #[test]
    fn homology_requires_closed_alpha() {
        let c = shapes::circle(&q(1, 1)).unwrap();
        let alpha = vector(vec![(0, "x1")]);
        let err = homology_invariance_check(
            &alpha,
            &c,
            &c,
            &ScalarExpr::zero(),
            &QuadratureSpec::default(),
            1e-6,
        )
        .unwrap_err();
        match err {
            Error::Precondition(msg) => assert!(msg.contains("Δ_Ω α = "), "{msg}"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn convergence_rule() {
        assert!(converges(&[(32, 1e-3), (64, 1e-4), (128, 1e-12)], 1e-10));
        assert!(!converges(&[(32, 1e-3), (64, 5e-4)], 1e-10));
        assert!(converges(&[(32, 1e-11), (64, 2e-11)], 1e-10));
    }
}
