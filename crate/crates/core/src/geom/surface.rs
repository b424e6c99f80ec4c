use num::{BigRational, ToPrimitive};

use super::expr::{CompiledExpr, ScalarExpr};
use super::forms::DifferentialForm;
use super::poly::Var;
use super::quadrature::{integrate_box, QuadratureSpec};
use crate::error::{Error, Result};

/// A parametrization `u ↦ (x¹(u), …, xᴺ(u))` of a box of `u` values.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    bounds: Vec<(BigRational, BigRational)>,
    map: Vec<ScalarExpr>,
    /// `+1` if the chart agrees with the surface orientation, `-1` otherwise.
    orientation: i8,
}

impl Chart {
    pub fn new(
        bounds: Vec<(BigRational, BigRational)>,
        map: Vec<ScalarExpr>,
        orientation: i8,
    ) -> Result<Chart> {
        if orientation != 1 && orientation != -1 {
            return Err(Error::Contract(format!(
                "orientation must be +1 or -1, got {orientation}"
            )));
        }
        for (lo, hi) in &bounds {
            if lo >= hi {
                return Err(Error::Contract(format!(
                    "empty parameter interval [{lo}, {hi}]"
                )));
            }
        }
        let k = bounds.len();
        for component in &map {
            for v in component.vars() {
                match v {
                    Var::U(p) if p < k => {}
                    other => {
                        return Err(Error::Contract(format!(
                            "chart component {component} uses {other}, expected u1..u{k}"
                        )))
                    }
                }
            }
        }
        Ok(Chart {
            bounds,
            map,
            orientation,
        })
    }

    pub fn params(&self) -> usize {
        self.bounds.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.map.len()
    }

    pub fn bounds(&self) -> &[(BigRational, BigRational)] {
        &self.bounds
    }

    pub fn map(&self) -> &[ScalarExpr] {
        &self.map
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn with_orientation(mut self, orientation: i8) -> Chart {
        self.orientation = orientation;
        self
    }

    /// `∫ φ*ω` over the parameter box.
    pub fn integrate(&self, omega: &DifferentialForm, spec: &QuadratureSpec) -> Result<f64> {
        let k = self.params();
        let n = self.ambient_dim();
        if omega.dim() != n {
            return Err(Error::Contract(format!(
                "form lives in {} dimensions, chart in {n}",
                omega.dim()
            )));
        }
        if omega.degree() != k {
            return Err(Error::Contract(format!(
                "cannot integrate a {}-form over a {k}-dimensional chart",
                omega.degree()
            )));
        }
        let u_slot = |v: Var| match v {
            Var::U(p) => p,
            Var::X(_) => unreachable!("chart maps depend on parameters only"),
        };
        let map: Vec<CompiledExpr> = self.map.iter().map(|c| c.compile(&u_slot)).collect();
        let jac: Vec<Vec<CompiledExpr>> = self
            .map
            .iter()
            .map(|c| {
                (0..k)
                    .map(|p| c.derivative(Var::U(p)).compile(&u_slot))
                    .collect()
            })
            .collect();
        let x_slot = |v: Var| match v {
            Var::X(i) => i,
            Var::U(p) => n + p,
        };
        let terms: Vec<(Vec<usize>, CompiledExpr)> = omega
            .terms()
            .map(|(idx, c)| (idx.clone(), c.compile(&x_slot)))
            .collect();
        let bounds: Vec<(f64, f64)> = self
            .bounds
            .iter()
            .map(|(a, b)| {
                (
                    a.to_f64().unwrap_or(f64::NAN),
                    b.to_f64().unwrap_or(f64::NAN),
                )
            })
            .collect();
        let sign = f64::from(self.orientation);
        let value = integrate_box(
            |u| {
                let mut point = vec![0.0; n + k];
                for (i, m) in map.iter().enumerate() {
                    point[i] = m.eval(u);
                }
                point[n..].copy_from_slice(u);
                let mut total = 0.0;
                let mut minor = vec![0.0; k * k];
                for (idx, c) in &terms {
                    for (r, &row) in idx.iter().enumerate() {
                        for p in 0..k {
                            minor[r * k + p] = jac[row][p].eval(u);
                        }
                    }
                    total += c.eval(&point) * determinant(&mut minor, k);
                }
                sign * total
            },
            &bounds,
            spec,
        );
        if !value.is_finite() {
            return Err(Error::Numeric(format!("quadrature produced {value}")));
        }
        Ok(value)
    }
}

/// Determinant by Gaussian elimination with partial pivoting; destroys `a`.
fn determinant(a: &mut [f64], k: usize) -> f64 {
    match k {
        0 => return 1.0,
        1 => return a[0],
        2 => return a[0] * a[3] - a[1] * a[2],
        _ => {}
    }
    let mut det = 1.0;
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| a[i * k + col].abs().total_cmp(&a[j * k + col].abs()))
            .unwrap();
        if a[pivot * k + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for c in 0..k {
                a.swap(pivot * k + c, col * k + c);
            }
            det = -det;
        }
        let p = a[col * k + col];
        det *= p;
        for r in col + 1..k {
            let factor = a[r * k + col] / p;
            for c in col..k {
                a[r * k + c] -= factor * a[col * k + c];
            }
        }
    }
    det
}

/// What is known about `∂Σ`.
#[derive(Clone, Debug, PartialEq)]
pub enum Boundary {
    /// No boundary information; Stokes checks refuse to run.
    Unspecified,
    /// `∂Σ = ∅`.
    Closed,
    /// Charts of `∂Σ` with the induced (outward normal first) orientation.
    Charts(Vec<Chart>),
}

/// An oriented `k`-dimensional surface in `ℝᴺ` covered by charts that
/// overlap only in measure zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Surface {
    name: String,
    dim: usize,
    params: usize,
    charts: Vec<Chart>,
    boundary: Boundary,
}

impl Surface {
    pub fn new(name: impl Into<String>, charts: Vec<Chart>, boundary: Boundary) -> Result<Surface> {
        let name = name.into();
        let first = charts
            .first()
            .ok_or_else(|| Error::Contract(format!("surface {name} has no charts")))?;
        let (dim, params) = (first.ambient_dim(), first.params());
        for c in &charts {
            if (c.ambient_dim(), c.params()) != (dim, params) {
                return Err(Error::Contract(format!(
                    "charts of surface {name} disagree in dimension"
                )));
            }
        }
        if let Boundary::Charts(bc) = &boundary {
            if params == 0 {
                return Err(Error::Contract(format!(
                    "a point set ({name}) has no boundary charts"
                )));
            }
            for c in bc {
                if (c.ambient_dim(), c.params()) != (dim, params - 1) {
                    return Err(Error::Contract(format!(
                        "boundary charts of {name} must be {}-dimensional in R^{dim}",
                        params - 1
                    )));
                }
            }
        }
        Ok(Surface {
            name,
            dim,
            params,
            charts,
            boundary,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    pub fn is_closed(&self) -> bool {
        self.boundary == Boundary::Closed
    }

    pub fn integrate(&self, omega: &DifferentialForm, spec: &QuadratureSpec) -> Result<f64> {
        let mut total = 0.0;
        for c in &self.charts {
            total += c.integrate(omega, spec)?;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn determinants() {
        assert_eq!(
            determinant(&mut [2.0, 0.0, 0.0, 0.0, 3.0, 0.0, 1.0, 0.0, 4.0], 3),
            24.0
        );
        assert_eq!(
            determinant(&mut [0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0], 3),
            -1.0
        );
    }

    #[test]
    fn square_area_and_orientation() {
        let chart = Chart::new(
            vec![(q(0, 1), q(1, 1)), (q(0, 1), q(2, 1))],
            vec![
                ScalarExpr::parse("u1").unwrap(),
                ScalarExpr::parse("u2").unwrap(),
            ],
            1,
        )
        .unwrap();
        let vol = DifferentialForm::from_terms(2, 2, [(vec![0, 1], ScalarExpr::one())]).unwrap();
        let spec = QuadratureSpec::new(4, 1).unwrap();
        assert!((chart.integrate(&vol, &spec).unwrap() - 2.0).abs() < 1e-14);
        let flipped = chart.clone().with_orientation(-1);
        assert!((flipped.integrate(&vol, &spec).unwrap() + 2.0).abs() < 1e-14);
        let one_form = DifferentialForm::from_terms(2, 1, [(vec![0], ScalarExpr::one())]).unwrap();
        assert!(chart.integrate(&one_form, &spec).is_err());
    }

    #[test]
    fn chart_validation() {
        let bad = Chart::new(
            vec![(q(0, 1), q(1, 1))],
            vec![ScalarExpr::parse("x1").unwrap()],
            1,
        );
        assert!(bad.is_err());
        assert!(Chart::new(vec![(q(1, 1), q(0, 1))], vec![ScalarExpr::one()], 1).is_err());
        assert!(Chart::new(vec![], vec![ScalarExpr::one()], 2).is_err());
    }
}
