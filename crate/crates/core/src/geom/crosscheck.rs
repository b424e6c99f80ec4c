use rand::Rng;

use super::expr::ScalarExpr;
use super::forms::{delta_geometric, PolyvectorField};
use super::poly::{Poly, Var};
use crate::algebra::{Context, Superfunction};
use crate::error::{Error, Result};
use crate::operators::{bv_delta, bv_delta_omega, check, run, Counterexample, IdentityReport};

#[derive(Clone, Debug)]
pub struct CrossCheckConfig {
    pub seed: u64,
    pub trials: usize,
    pub min_dim: usize,
    pub max_dim: usize,
    /// Maximum total degree of coefficients and of the log-density.
    pub degree_bound: u32,
}

impl Default for CrossCheckConfig {
    fn default() -> Self {
        CrossCheckConfig {
            seed: 1,
            trials: 200,
            min_dim: 2,
            max_dim: 4,
            degree_bound: 3,
        }
    }
}

fn random_poly(rng: &mut impl Rng, dim: usize, degree_bound: u32, max_terms: usize) -> Poly {
    const COEFFS: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (1, 2), (-3, 1), (5, 3)];
    let mut p = Poly::zero();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let degree = rng.gen_range(0..=degree_bound);
        let mut mono = Poly::one();
        for _ in 0..degree {
            mono = &mono * &Poly::var(Var::X(rng.gen_range(0..dim)));
        }
        let (n, d) = COEFFS[rng.gen_range(0..COEFFS.len())];
        p = &p + &mono.scale(&num::BigRational::new(n.into(), d.into()));
    }
    p
}

fn random_polyvector(rng: &mut impl Rng, dim: usize, degree_bound: u32) -> PolyvectorField {
    let degree = rng.gen_range(0..=dim);
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut idx: Vec<usize> = (0..dim).collect();
        for i in (1..dim).rev() {
            idx.swap(i, rng.gen_range(0..=i));
        }
        idx.truncate(degree);
        idx.sort_unstable();
        terms.push((
            idx,
            ScalarExpr::poly(random_poly(rng, dim, degree_bound, 3)),
        ));
    }
    // Repeated index sets just add up.
    let mut out = PolyvectorField::zero(dim, degree);
    for (idx, c) in terms {
        out = out
            .add(
                &PolyvectorField::from_terms(dim, degree, [(idx, c)])
                    .expect("sorted distinct indices"),
            )
            .expect("same shape");
    }
    out
}

fn compare(
    t: usize,
    geometric: Result<PolyvectorField>,
    coordinate: Superfunction,
    inputs: Vec<(&'static str, Superfunction)>,
) -> Option<Counterexample> {
    let ctx = coordinate.context().clone();
    match geometric.and_then(|g| g.to_superfunction_in(&ctx)) {
        Ok(g) => check(t, &g - &coordinate, inputs),
        // A non-polynomial geometric result is itself a mismatch.
        Err(_) => Some(Counterexample {
            trial: t,
            inputs,
            residual: coordinate,
        }),
    }
}

/// Compares the geometric Laplacian `F_Ω⁻¹ d F_Ω` with the coordinate BV
/// Laplacian under the shift isomorphism, first for the flat volume and
/// then for `Ω = e^f dx` against `Δ + {f, −}`, on random polynomial input.
pub fn cross_check_coordinate_vs_geometric(cfg: &CrossCheckConfig) -> Result<Vec<IdentityReport>> {
    if cfg.trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    if cfg.min_dim == 0 || cfg.min_dim > cfg.max_dim {
        return Err(Error::Precondition(format!(
            "dimension range {}..={} is empty or contains 0",
            cfg.min_dim, cfg.max_dim
        )));
    }
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
        let dim = rng.gen_range(cfg.min_dim..=cfg.max_dim);
        let alpha = random_polyvector(rng, dim, cfg.degree_bound);
        let ctx = Context::new(dim, 0);
        let shifted = alpha
            .to_superfunction_in(&ctx)
            .expect("polynomial coefficients");
        (alpha, ctx, shifted)
    };
    let flat = run("geometric_laplacian", 11, cfg.seed, cfg.trials, |t, rng| {
        let (alpha, _, shifted) = draw(rng);
        let coordinate = bv_delta(&shifted);
        compare(
            t,
            delta_geometric(&alpha, &ScalarExpr::zero()),
            coordinate,
            vec![("alpha", shifted)],
        )
    });
    let twisted = run(
        "geometric_twisted_laplacian",
        12,
        cfg.seed,
        cfg.trials,
        |t, rng| {
            let (alpha, ctx, shifted) = draw(rng);
            let f = ScalarExpr::poly(random_poly(rng, alpha.dim(), cfg.degree_bound, 3));
            let f_super = PolyvectorField::from_terms(alpha.dim(), 0, [(Vec::new(), f.clone())])
                .and_then(|p| p.to_superfunction_in(&ctx))
                .expect("polynomial density");
            let coordinate = bv_delta_omega(&shifted, &f_super).expect("even base density");
            compare(
                t,
                delta_geometric(&alpha, &f),
                coordinate,
                vec![("alpha", shifted), ("f", f_super)],
            )
        },
    );
    Ok(vec![flat, twisted])
}
