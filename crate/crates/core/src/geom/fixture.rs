//! Integration fixtures: a polyvector, a density and named surfaces.
//!
//! ```toml
//! name = "disk-area"
//! dim = 2
//! density = "0"               # f in Ω = e^f dx¹∧…∧dxᴺ, prefix notation
//! expected = 3.141592653589793
//! tolerance = 1e-9            # default 1e-6
//!
//! [polyvector]                # or [potential], integrating Δ_Ω of it
//! degree = 0
//! terms = [{ index = [], coeff = "1" }]
//!
//! [[surface]]
//! name = "disk"
//! shape = { kind = "disk", radius = "1" }
//!
//! [[surface]]
//! name = "arc"
//! charts = [{ bounds = [["0", "1"]], map = ["u1", "(^ u1 2)"], orientation = 1 }]
//! boundary = "unspecified"    # or "closed"; boundary_charts = [...] lists charts
//!
//! [sweep]                     # zero sets of t*psi1 + (1-t)*psi2
//! psi1 = "(+ (^ x1 2) (^ x2 2) -1)"
//! psi2 = "(+ (* 1/4 (^ x1 2)) (^ x2 2) -1)"
//! t = ["0", "1/4", "1/2", "3/4", "1"]
//! ```
//!
//! Indices are one-based. Shapes: `circle {radius}`, `ellipse {a, split}`
//! for `a x1² + x2² = 1` (split defaults to about `√a`), `disk {radius}`, `level_set {psi}`,
//! `segment {from, to}`, `cube_boundary`, `solid_cube`.

use std::path::Path;
use std::str::FromStr;

use num::{BigRational, One};
use serde::Deserialize;
use toml::Spanned;

use super::expr::ScalarExpr;
use super::forms::{delta_geometric, PolyvectorField};
use super::shapes;
use super::surface::{Boundary, Chart, Surface};
use crate::error::{line_col, toml_error, Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureFile {
    name: Option<String>,
    dim: usize,
    density: Option<Spanned<String>>,
    expected: Option<f64>,
    tolerance: Option<f64>,
    polyvector: Option<PolyvectorSpec>,
    potential: Option<PolyvectorSpec>,
    #[serde(default)]
    surface: Vec<SurfaceSpec>,
    sweep: Option<SweepSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyvectorSpec {
    degree: Spanned<usize>,
    #[serde(default)]
    terms: Vec<TermSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSpec {
    index: Spanned<Vec<usize>>,
    coeff: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceSpec {
    name: Spanned<String>,
    shape: Option<ShapeSpec>,
    #[serde(default)]
    charts: Vec<ChartSpec>,
    boundary: Option<Spanned<String>>,
    boundary_charts: Option<Vec<ChartSpec>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ShapeSpec {
    kind: Spanned<String>,
    radius: Option<Spanned<String>>,
    a: Option<Spanned<String>>,
    split: Option<Spanned<String>>,
    psi: Option<Spanned<String>>,
    from: Option<Vec<Spanned<String>>>,
    to: Option<Vec<Spanned<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChartSpec {
    bounds: Vec<(Spanned<String>, Spanned<String>)>,
    map: Vec<Spanned<String>>,
    orientation: Option<Spanned<i8>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSpec {
    psi1: Spanned<String>,
    psi2: Spanned<String>,
    t: Vec<Spanned<String>>,
}

/// A parsed integration fixture.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub dim: usize,
    pub density: ScalarExpr,
    /// The integrand; `Δ_Ω` of the potential when one is given.
    pub alpha: PolyvectorField,
    pub potential: Option<PolyvectorField>,
    pub expected: Option<f64>,
    pub tolerance: f64,
    pub surfaces: Vec<Surface>,
    pub sweep: Option<Vec<(BigRational, Surface)>>,
}

struct Source<'a>(&'a str);

impl Source<'_> {
    fn error(&self, span: std::ops::Range<usize>, message: impl Into<String>) -> Error {
        let (line, column) = line_col(self.0, span.start);
        Error::parse(line, column, message)
    }

    fn at(&self, span: std::ops::Range<usize>, e: Error) -> Error {
        self.error(span, e.to_string())
    }

    /// Parses a quoted expression, reporting errors at their position in the file.
    fn expr(&self, s: &Spanned<String>) -> Result<ScalarExpr> {
        ScalarExpr::parse(s.get_ref()).map_err(|e| match e {
            Error::Parse {
                column, message, ..
            } => {
                let (line, start) = line_col(self.0, s.span().start);
                Error::parse(line, start + column, message)
            }
            other => self.at(s.span(), other),
        })
    }

    fn rational(&self, s: &Spanned<String>) -> Result<BigRational> {
        BigRational::from_str(s.get_ref().trim()).map_err(|_| {
            self.error(
                s.span(),
                format!("expected a rational number, got {:?}", s.get_ref()),
            )
        })
    }

    fn polyvector(&self, dim: usize, spec: &PolyvectorSpec) -> Result<PolyvectorField> {
        let degree = *spec.degree.get_ref();
        let mut terms = Vec::with_capacity(spec.terms.len());
        for t in &spec.terms {
            let index = t.index.get_ref();
            if index.len() != degree || index.iter().any(|&i| i == 0 || i > dim) {
                return Err(self.error(
                    t.index.span(),
                    format!("index {index:?} must list {degree} coordinates in 1..={dim}"),
                ));
            }
            terms.push((
                index.iter().map(|i| i - 1).collect::<Vec<_>>(),
                self.expr(&t.coeff)?,
            ));
        }
        PolyvectorField::from_terms(dim, degree, terms).map_err(|e| self.at(spec.degree.span(), e))
    }

    fn chart(&self, spec: &ChartSpec) -> Result<Chart> {
        let mut bounds = Vec::with_capacity(spec.bounds.len());
        for (lo, hi) in &spec.bounds {
            bounds.push((self.rational(lo)?, self.rational(hi)?));
        }
        let map = spec
            .map
            .iter()
            .map(|m| self.expr(m))
            .collect::<Result<Vec<_>>>()?;
        let orientation = spec.orientation.as_ref().map_or(1, |o| *o.get_ref());
        let span = spec
            .orientation
            .as_ref()
            .map(|o| o.span())
            .or_else(|| spec.map.first().map(|m| m.span()))
            .unwrap_or(0..0);
        Chart::new(bounds, map, orientation).map_err(|e| self.at(span, e))
    }

    fn shape(&self, spec: &ShapeSpec) -> Result<Surface> {
        let kind = spec.kind.get_ref().as_str();
        fn need<'s>(
            src: &Source<'_>,
            spec: &ShapeSpec,
            field: &'s Option<Spanned<String>>,
            key: &str,
        ) -> Result<&'s Spanned<String>> {
            field.as_ref().ok_or_else(|| {
                src.error(
                    spec.kind.span(),
                    format!("shape {} needs `{key}`", spec.kind.get_ref()),
                )
            })
        }
        let need = |field, key| need(self, spec, field, key);
        let built = match kind {
            "circle" => shapes::circle(&self.rational(need(&spec.radius, "radius")?)?),
            "disk" => shapes::disk(&self.rational(need(&spec.radius, "radius")?)?),
            "ellipse" => {
                let a = self.rational(need(&spec.a, "a")?)?;
                let split = match &spec.split {
                    Some(s) => self.rational(s)?,
                    None => shapes::balanced_split(&a),
                };
                shapes::ellipse(&a, &split)
            }
            "level_set" => shapes::level_set(&self.expr(need(&spec.psi, "psi")?)?),
            "segment" => {
                let point =
                    |p: &Option<Vec<Spanned<String>>>, key: &str| -> Result<Vec<BigRational>> {
                        p.as_ref()
                            .ok_or_else(|| {
                                self.error(spec.kind.span(), format!("shape segment needs `{key}`"))
                            })?
                            .iter()
                            .map(|c| self.rational(c))
                            .collect()
                    };
                shapes::segment(&point(&spec.from, "from")?, &point(&spec.to, "to")?)
            }
            "cube_boundary" => shapes::cube_boundary(),
            "solid_cube" => shapes::solid_cube(),
            other => {
                return Err(self.error(spec.kind.span(), format!("unknown shape kind {other:?}")))
            }
        };
        built.map_err(|e| self.at(spec.kind.span(), e))
    }

    fn surface(&self, dim: usize, spec: &SurfaceSpec) -> Result<Surface> {
        let name = spec.name.get_ref().clone();
        let surface = match (&spec.shape, spec.charts.is_empty()) {
            (Some(shape), true) => {
                if spec.boundary.is_some() || spec.boundary_charts.is_some() {
                    return Err(self.error(spec.name.span(), "shapes bring their own boundary"));
                }
                let s = self.shape(shape)?;
                Surface::new(name, s.charts().to_vec(), s.boundary().clone())
            }
            (None, false) => {
                let charts = spec
                    .charts
                    .iter()
                    .map(|c| self.chart(c))
                    .collect::<Result<Vec<_>>>()?;
                let boundary = match (&spec.boundary, &spec.boundary_charts) {
                    (Some(_), Some(_)) => {
                        return Err(self.error(
                            spec.name.span(),
                            "give either `boundary` or `boundary_charts`",
                        ))
                    }
                    (None, Some(bc)) => {
                        Boundary::Charts(bc.iter().map(|c| self.chart(c)).collect::<Result<_>>()?)
                    }
                    (Some(b), None) => match b.get_ref().as_str() {
                        "closed" => Boundary::Closed,
                        "unspecified" => Boundary::Unspecified,
                        other => {
                            return Err(self.error(
                                b.span(),
                                format!(
                                    "boundary must be \"closed\" or \"unspecified\", got {other:?}"
                                ),
                            ))
                        }
                    },
                    (None, None) => Boundary::Unspecified,
                };
                Surface::new(name, charts, boundary)
            }
            _ => {
                return Err(self.error(
                    spec.name.span(),
                    "a surface needs exactly one of `shape` or `charts`",
                ))
            }
        }
        .map_err(|e| self.at(spec.name.span(), e))?;
        if surface.ambient_dim() != dim {
            return Err(self.error(
                spec.name.span(),
                format!(
                    "surface lives in R^{} but the fixture in R^{dim}",
                    surface.ambient_dim()
                ),
            ));
        }
        Ok(surface)
    }
}

impl Fixture {
    pub fn parse(src: &str) -> Result<Fixture> {
        let file: FixtureFile = toml::from_str(src).map_err(|e| toml_error(src, &e))?;
        let source = Source(src);
        let dim = file.dim;
        if dim == 0 {
            return Err(Error::parse(1, 1, "dim must be positive"));
        }
        let density = match &file.density {
            Some(d) => source.expr(d)?,
            None => ScalarExpr::zero(),
        };
        let (alpha, potential) = match (&file.polyvector, &file.potential) {
            (Some(p), None) => (source.polyvector(dim, p)?, None),
            (None, Some(p)) => {
                let beta = source.polyvector(dim, p)?;
                let alpha =
                    delta_geometric(&beta, &density).map_err(|e| source.at(p.degree.span(), e))?;
                (alpha, Some(beta))
            }
            _ => {
                return Err(Error::parse(
                    1,
                    1,
                    "a fixture needs exactly one of [polyvector] or [potential]",
                ))
            }
        };
        let surfaces = file
            .surface
            .iter()
            .map(|s| source.surface(dim, s))
            .collect::<Result<Vec<_>>>()?;
        for (i, s) in surfaces.iter().enumerate() {
            if surfaces[..i].iter().any(|t| t.name() == s.name()) {
                return Err(source.error(
                    file.surface[i].name.span(),
                    format!("duplicate surface {:?}", s.name()),
                ));
            }
        }
        let sweep = match &file.sweep {
            None => None,
            Some(sw) => {
                let psi1 = source.expr(&sw.psi1)?;
                let psi2 = source.expr(&sw.psi2)?;
                let mut family = Vec::with_capacity(sw.t.len());
                for t in &sw.t {
                    let tv = source.rational(t)?;
                    let psi = &psi1.scale(&tv) + &psi2.scale(&(BigRational::one() - &tv));
                    let s = shapes::level_set(&psi).map_err(|e| source.at(t.span(), e))?;
                    family.push((tv, s));
                }
                Some(family)
            }
        };
        Ok(Fixture {
            name: file.name.unwrap_or_else(|| "fixture".into()),
            dim,
            density,
            alpha,
            potential,
            expected: file.expected,
            tolerance: file.tolerance.unwrap_or(1e-6),
            surfaces,
            sweep,
        })
    }

    pub fn load(path: &Path) -> Result<Fixture> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, &e))?;
        Fixture::parse(&src)
    }

    pub fn surface(&self, name: &str) -> Result<&Surface> {
        self.surfaces
            .iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| {
                let known: Vec<&str> = self.surfaces.iter().map(|s| s.name()).collect();
                Error::Contract(format!(
                    "no surface {name:?} in fixture {}; known: {}",
                    self.name,
                    known.join(", ")
                ))
            })
    }

    /// The first surface, the default integration domain.
    pub fn default_surface(&self) -> Result<&Surface> {
        self.surfaces
            .first()
            .ok_or_else(|| Error::Contract(format!("fixture {} has no surfaces", self.name)))
    }
}
