use std::fmt;
use std::sync::Arc;

use num::{BigRational, Zero};
use serde::Deserialize;

use crate::algebra::{parse_raw, Context, GeneratorKind, GhostDegree, Superfunction};
use crate::error::{toml_error, Error, Result};

pub type Matrix = Vec<Vec<BigRational>>;

/// A Lie algebra acting linearly on field space, with an action `S₀`.
///
/// Indices are 0-based in the API and 1-based in model files.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeModel {
    name: String,
    ctx: Arc<Context>,
    /// `C^γ_{αβ}` stored at `[α][β][γ]`.
    structure: Vec<Vec<Vec<BigRational>>>,
    /// `(ρ_α)^i_j` stored at `[α][i][j]`.
    rho: Vec<Matrix>,
    s0: Superfunction,
}

fn zero_cube(m: usize) -> Vec<Vec<Vec<BigRational>>> {
    vec![vec![vec![BigRational::zero(); m]; m]; m]
}

pub fn zero_matrix(n: usize) -> Matrix {
    vec![vec![BigRational::zero(); n]; n]
}

impl GaugeModel {
    /// Builds and validates a model.
    ///
    /// `structure` lists `(α, β, γ, C^γ_{αβ})`; unlisted entries are zero and
    /// both orderings of `(α, β)` must be given.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        m: usize,
        structure: &[(usize, usize, usize, BigRational)],
        rho: Vec<Matrix>,
        s0: &Superfunction,
    ) -> Result<Self> {
        let ctx = Context::new(n, m);
        let mut c = zero_cube(m);
        for (a, b, g, v) in structure {
            if *a >= m || *b >= m || *g >= m {
                return Err(Error::Contract(format!(
                    "structure constant index ({}, {}, {}) out of range for m = {m}",
                    a + 1,
                    b + 1,
                    g + 1
                )));
            }
            c[*a][*b][*g] = v.clone();
        }
        for a in 0..m {
            for b in 0..m {
                for g in 0..m {
                    if c[a][b][g] != -c[b][a][g].clone() {
                        return Err(Error::Contract(format!(
                            "structure constants are not antisymmetric: C^{}_{{{}{}}} = {} but C^{}_{{{}{}}} = {}",
                            g + 1,
                            a + 1,
                            b + 1,
                            c[a][b][g],
                            g + 1,
                            b + 1,
                            a + 1,
                            c[b][a][g]
                        )));
                    }
                }
            }
        }
        let rho = if rho.is_empty() {
            vec![zero_matrix(n); m]
        } else {
            rho
        };
        if rho.len() != m
            || rho
                .iter()
                .any(|r| r.len() != n || r.iter().any(|row| row.len() != n))
        {
            return Err(Error::Contract(format!(
                "rho must be {m} matrices of size {n}x{n}"
            )));
        }
        let s0 = rebind(s0, &ctx)?;
        if s0.contains_kind(GeneratorKind::Ghost)
            || s0.contains_kind(GeneratorKind::Antifield)
            || s0.contains_kind(GeneratorKind::Antighost)
        {
            return Err(Error::Contract(format!(
                "S0 = {s0} must depend on fields only"
            )));
        }
        debug_assert!(matches!(
            s0.ghost_degree(),
            GhostDegree::Zero | GhostDegree::Homogeneous(0)
        ));
        Ok(GaugeModel {
            name: name.into(),
            ctx,
            structure: c,
            rho,
            s0,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.ctx.n_fields()
    }

    pub fn m(&self) -> usize {
        self.ctx.n_ghosts()
    }

    /// `C^γ_{αβ}`.
    pub fn c(&self, alpha: usize, beta: usize, gamma: usize) -> &BigRational {
        &self.structure[alpha][beta][gamma]
    }

    pub fn rho(&self, alpha: usize) -> &Matrix {
        &self.rho[alpha]
    }

    pub fn s0(&self) -> &Superfunction {
        &self.s0
    }

    pub fn with_s0(&self, s0: &Superfunction) -> Result<Self> {
        let mut out = self.clone();
        out.s0 = rebind(s0, &self.ctx)?;
        Ok(out)
    }

    pub fn with_rho(&self, rho: Vec<Matrix>) -> Result<Self> {
        let structure = self.structure_list();
        GaugeModel::new(
            self.name.clone(),
            self.n(),
            self.m(),
            &structure,
            rho,
            &self.s0,
        )
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    fn structure_list(&self) -> Vec<(usize, usize, usize, BigRational)> {
        let m = self.m();
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                for g in 0..m {
                    if !self.structure[a][b][g].is_zero() {
                        out.push((a, b, g, self.structure[a][b][g].clone()));
                    }
                }
            }
        }
        out
    }

    /// Reads and parses a model file.
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, &e))?;
        GaugeModel::parse(&src)
    }

    /// Parses the TOML model format.
    ///
    /// ```toml
    /// name = "su2"
    /// n = 3
    /// m = 3
    /// # [alpha, beta, gamma, value]: C^gamma_{alpha beta}, 1-based
    /// structure_constants = [[1, 2, 3, 1], [2, 1, 3, -1]]
    /// # one row-major n x n matrix per generator; entries are integers or "p/q"
    /// rho = [[[0, 0, 0], [0, 0, -1], [0, 1, 0]], ...]
    /// S0 = "x1^2 + x2^2"
    /// ```
    pub fn parse(src: &str) -> Result<Self> {
        let file: ModelFile = toml::from_str(src).map_err(|e| toml_error(src, &e))?;
        let at = |key: &str| {
            let (line, col0) = key_position(src, key);
            (line, col0 + 1)
        };
        let rational = |v: &Num, key: &str| -> Result<BigRational> {
            match v {
                Num::Int(i) => Ok(BigRational::from_integer((*i).into())),
                Num::Text(s) => s.trim().parse::<BigRational>().map_err(|_| {
                    let (line, column) = at(key);
                    Error::parse(line, column, format!("`{s}` is not a rational number"))
                }),
            }
        };

        let mut structure = Vec::new();
        for (a, b, g, v) in &file.structure_constants {
            for idx in [*a, *b, *g] {
                if idx == 0 || idx > file.m {
                    let (line, column) = at("structure_constants");
                    return Err(Error::parse(
                        line,
                        column,
                        format!("structure constant index {idx} is outside 1..={}", file.m),
                    ));
                }
            }
            structure.push((a - 1, b - 1, g - 1, rational(v, "structure_constants")?));
        }
        let mut rho = Vec::with_capacity(file.rho.len());
        for mat in &file.rho {
            let mut out = Vec::with_capacity(mat.len());
            for row in mat {
                out.push(
                    row.iter()
                        .map(|v| rational(v, "rho"))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            rho.push(out);
        }
        let ctx = Context::new(file.n, file.m);
        let s0_src = if file.s0.trim().is_empty() {
            "0"
        } else {
            file.s0.as_str()
        };
        let s0 = match parse_raw(s0_src).and_then(|raw| raw.bind(&ctx)) {
            Ok(s) => s,
            Err(Error::Parse {
                column, message, ..
            }) => {
                let (line, base) = key_position(src, "S0");
                return Err(Error::parse(
                    line,
                    base + column,
                    format!("in S0: {message}"),
                ));
            }
            Err(e) => {
                let (line, column) = at("S0");
                return Err(Error::parse(line, column, format!("in S0: {e}")));
            }
        };
        let model = GaugeModel::new(
            file.name.unwrap_or_default(),
            file.n,
            file.m,
            &structure,
            rho,
            &s0,
        );
        model.map_err(|e| match e {
            Error::Contract(msg)
                if msg.contains("antisymmetric") || msg.contains("out of range") =>
            {
                let (line, column) = at("structure_constants");
                Error::parse(line, column, msg)
            }
            other => other,
        })
    }
}

fn rebind(f: &Superfunction, ctx: &Arc<Context>) -> Result<Superfunction> {
    if f.context() == ctx {
        return Ok(f.clone());
    }
    Superfunction::from_products(ctx, f.terms().map(|(m, c)| (c.clone(), f.factors_of(m))))
}

/// Line and 0-based column of the value following `key =` (inside the
/// quotes for a string value).
fn key_position(src: &str, key: &str) -> (usize, usize) {
    for (i, line) in src.lines().enumerate() {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix(key) {
            if rest.trim_start().starts_with('=') {
                let value_start = line.find('=').map_or(0, |p| {
                    p + 1 + line[p + 1..].len() - line[p + 1..].trim_start().len()
                });
                // Skip the opening quote of a string value.
                let quote = usize::from(line[value_start..].starts_with('"'));
                return (i + 1, value_start + quote);
            }
        }
    }
    (1, 0)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    name: Option<String>,
    n: usize,
    m: usize,
    #[serde(default)]
    structure_constants: Vec<(usize, usize, usize, Num)>,
    #[serde(default)]
    rho: Vec<Vec<Vec<Num>>>,
    #[serde(rename = "S0", default)]
    s0: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Text(String),
}

impl fmt::Display for GaugeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n={}, m={})", self.name, self.n(), self.m())
    }
}
