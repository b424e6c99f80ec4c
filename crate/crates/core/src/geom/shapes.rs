//! Ready-made surfaces with exact rational charts.
//!
//! Conics use the rational parametrization of `A x² + y² = 1` by lines
//! through the poles, so every chart map is a ratio of polynomials and all
//! derivatives stay symbolic.

use num::{BigRational, One, Signed, ToPrimitive, Zero};

use super::expr::ScalarExpr;
use super::poly::{Poly, Var};
use super::surface::{Boundary, Chart, Surface};
use crate::error::{Error, Result};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn u(p: usize) -> Poly {
    Poly::var(Var::U(p))
}

/// `(2m/(A+m²), (m²−A)/(A+m²))` and `(−2m/(A+m²), (A−m²)/(A+m²))`: the lower
/// and upper arcs of `A x² + y² = 1`, both counter-clockwise. The lower arc
/// uses `m ∈ [−split, split]` and the upper one `m ∈ [−A/split, A/split]`;
/// the two meet exactly at their endpoints. Each arc is cut in half at
/// `m = 0` to keep the charts short.
fn conic_arcs(
    a: &BigRational,
    split: &BigRational,
    scale: &Poly,
    param: usize,
    k: usize,
) -> Result<Vec<Chart>> {
    if !a.is_positive() || !split.is_positive() {
        return Err(Error::Contract(format!(
            "conic needs A > 0 and split > 0, got A={a}, split={split}"
        )));
    }
    let m = u(param);
    let m2 = &m * &m;
    let den = &Poly::constant(a.clone()) + &m2;
    let two_m = m.scale(&int(2));
    let lower = [
        ScalarExpr::fraction(scale * &two_m, den.clone()),
        ScalarExpr::fraction(scale * &(&m2 - &Poly::constant(a.clone())), den.clone()),
    ];
    let upper = [
        ScalarExpr::fraction(scale * &(-&two_m), den.clone()),
        ScalarExpr::fraction(scale * &(&Poly::constant(a.clone()) - &m2), den),
    ];
    let far = a / split;
    let mut charts = Vec::new();
    for (map, half) in [(lower, split.clone()), (upper, far)] {
        for (lo, hi) in [(-half.clone(), int(0)), (int(0), half)] {
            let mut bounds = vec![(int(0), int(1)); k];
            bounds[param] = (lo, hi);
            charts.push(Chart::new(bounds, map.to_vec(), 1)?);
        }
    }
    Ok(charts)
}

/// A dyadic rational close to `√A`, which balances the two arcs.
pub fn balanced_split(a: &BigRational) -> BigRational {
    let root = a.to_f64().unwrap_or(1.0).max(0.0).sqrt();
    let steps = ((root * 1024.0).round() as i64).max(1);
    BigRational::new(steps.into(), 1024.into())
}

/// The closed curve `A x² + y² = 1`, counter-clockwise.
pub fn ellipse(a: &BigRational, split: &BigRational) -> Result<Surface> {
    let charts = conic_arcs(a, split, &Poly::one(), 0, 1)?;
    Surface::new(format!("ellipse(A={a})"), charts, Boundary::Closed)
}

/// The circle of the given radius about the origin, counter-clockwise.
pub fn circle(radius: &BigRational) -> Result<Surface> {
    if !radius.is_positive() {
        return Err(Error::Contract(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let charts = conic_arcs(
        &BigRational::one(),
        &BigRational::one(),
        &Poly::constant(radius.clone()),
        0,
        1,
    )?;
    Surface::new(format!("circle(r={radius})"), charts, Boundary::Closed)
}

/// The closed disk of the given radius, parametrized by `(s, m) ↦ s·γ(m)`,
/// with its boundary circle.
pub fn disk(radius: &BigRational) -> Result<Surface> {
    let boundary = circle(radius)?;
    let scale = u(0).scale(radius);
    let charts = conic_arcs(&BigRational::one(), &BigRational::one(), &scale, 1, 2)?;
    Surface::new(
        format!("disk(r={radius})"),
        charts,
        Boundary::Charts(boundary.charts().to_vec()),
    )
}

/// The zero set of `Ψ = a x₁² + b x₂² − c` in the plane, for `a > 0` and
/// `b = c > 0` so that it is a conic with a rational parametrization.
pub fn level_set(psi: &ScalarExpr) -> Result<Surface> {
    let poly = psi
        .as_poly()
        .ok_or_else(|| Error::Contract(format!("level set function {psi} is not a polynomial")))?;
    let (mut a, mut b, mut c) = (
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    );
    for (mono, coeff) in poly.terms() {
        match mono.as_slice() {
            [] => c = -coeff.clone(),
            [(Var::X(0), 2)] => a = coeff.clone(),
            [(Var::X(1), 2)] => b = coeff.clone(),
            _ => {
                return Err(Error::Contract(format!(
                    "level set function {psi} is not of the form a*x1^2 + b*x2^2 - c"
                )))
            }
        }
    }
    if !c.is_positive() || b != c || !a.is_positive() {
        return Err(Error::Contract(format!(
            "level set function {psi} needs a > 0 and b = c > 0 for an exact rational chart"
        )));
    }
    let conic = a / c;
    let charts = conic_arcs(&conic, &balanced_split(&conic), &Poly::one(), 0, 1)?;
    Surface::new(format!("{{{psi} = 0}}"), charts, Boundary::Closed)
}

/// The straight segment from `p` to `q`, with its two endpoints as boundary.
pub fn segment(p: &[BigRational], q: &[BigRational]) -> Result<Surface> {
    if p.len() != q.len() {
        return Err(Error::Contract(
            "segment endpoints live in different dimensions".into(),
        ));
    }
    let t = u(0);
    let map = p
        .iter()
        .zip(q)
        .map(|(a, b)| ScalarExpr::poly(&Poly::constant(a.clone()) + &t.scale(&(b - a))))
        .collect();
    let point = |x: &[BigRational], sign| {
        Chart::new(
            Vec::new(),
            x.iter().cloned().map(ScalarExpr::constant).collect(),
            sign,
        )
    };
    Surface::new(
        "segment",
        vec![Chart::new(vec![(int(0), int(1))], map, 1)?],
        Boundary::Charts(vec![point(q, 1)?, point(p, -1)?]),
    )
}

/// The six faces of `[−1, 1]³` with outward orientation.
pub fn cube_boundary() -> Result<Surface> {
    let box2 = vec![(int(-1), int(1)); 2];
    let mut charts = Vec::new();
    for axis in 0..3 {
        for side in [1i64, -1] {
            let mut free = (0..2).map(|p| ScalarExpr::var(Var::U(p)));
            let map: Vec<ScalarExpr> = (0..3)
                .map(|i| {
                    if i == axis {
                        ScalarExpr::from_int(side)
                    } else {
                        free.next().unwrap()
                    }
                })
                .collect();
            // Outward normal first: (n, e_u, e_v) is positive except on y faces.
            let sign = if axis == 1 { -side } else { side };
            charts.push(Chart::new(box2.clone(), map, sign as i8)?);
        }
    }
    Surface::new("cube boundary", charts, Boundary::Closed)
}

/// The solid cube `[−1, 1]³` with [`cube_boundary`] as boundary.
pub fn solid_cube() -> Result<Surface> {
    let map = (0..3).map(|p| ScalarExpr::var(Var::U(p))).collect();
    let chart = Chart::new(vec![(int(-1), int(1)); 3], map, 1)?;
    Surface::new(
        "cube",
        vec![chart],
        Boundary::Charts(cube_boundary()?.charts().to_vec()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{DifferentialForm, QuadratureSpec};

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn loop_form() -> DifferentialForm {
        // x dy − y dx
        DifferentialForm::from_terms(
            2,
            1,
            [(vec![1], ScalarExpr::x(0)), (vec![0], -&ScalarExpr::x(1))],
        )
        .unwrap()
    }

    #[test]
    fn conic_points_lie_on_the_curve() {
        for a in [q(1, 1), q(1, 4), q(3, 1)] {
            let e = ellipse(&a, &q(1, 2)).unwrap();
            for chart in e.charts() {
                let (lo, hi) = &chart.bounds()[0];
                for s in [lo.clone(), hi.clone(), (lo + hi) / int(3)] {
                    let x = chart.map()[0].compile(&|_| 0).eval(&[s.to_f64().unwrap()]);
                    let y = chart.map()[1].compile(&|_| 0).eval(&[s.to_f64().unwrap()]);
                    let f = a.to_f64().unwrap();
                    assert!((f * x * x + y * y - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn enclosed_areas() {
        let spec = QuadratureSpec::new(32, 2).unwrap();
        let pi = std::f64::consts::PI;
        // (1/2)∮ x dy − y dx is the enclosed area π/√A.
        let area = ellipse(&q(1, 4), &q(1, 1))
            .unwrap()
            .integrate(&loop_form(), &spec)
            .unwrap()
            / 2.0;
        assert!((area - 2.0 * pi).abs() < 1e-10, "{area}");
        let area = circle(&q(3, 1))
            .unwrap()
            .integrate(&loop_form(), &spec)
            .unwrap()
            / 2.0;
        assert!((area - 9.0 * pi).abs() < 1e-10, "{area}");
        let vol = DifferentialForm::from_terms(2, 2, [(vec![0, 1], ScalarExpr::one())]).unwrap();
        let area = disk(&q(2, 1)).unwrap().integrate(&vol, &spec).unwrap();
        assert!((area - 4.0 * pi).abs() < 1e-10, "{area}");
    }

    #[test]
    fn cube_faces_are_outward() {
        let spec = QuadratureSpec::new(4, 1).unwrap();
        // Flux of x ∂₁ + y ∂₂ + z ∂₃ contracted into dx∧dy∧dz equals 3·volume.
        let terms = [
            (vec![1, 2], ScalarExpr::x(0)),
            (vec![0, 2], -&ScalarExpr::x(1)),
            (vec![0, 1], ScalarExpr::x(2)),
        ];
        let flux = DifferentialForm::from_terms(3, 2, terms).unwrap();
        let total = cube_boundary().unwrap().integrate(&flux, &spec).unwrap();
        assert!((total - 24.0).abs() < 1e-12, "{total}");
    }

    #[test]
    fn level_set_validation() {
        assert!(level_set(&ScalarExpr::parse("(+ (* 1/4 (^ x1 2)) (^ x2 2) -1)").unwrap()).is_ok());
        assert!(level_set(&ScalarExpr::parse("(+ (^ x1 2) (* 2 (^ x2 2)) -1)").unwrap()).is_err());
        assert!(level_set(&ScalarExpr::parse("(+ (^ x1 2) x2 -1)").unwrap()).is_err());
    }
}
