//! Built-in models covering every diagnosis branch.

use num::BigRational;

use super::model::{zero_matrix, GaugeModel, Matrix};
use crate::algebra::{Context, Superfunction};

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

fn s0(src: &str, n: usize, m: usize) -> Superfunction {
    Superfunction::parse(src, &Context::new(n, m)).expect("catalog S0 parses")
}

/// One abelian generator acting trivially on ℝ².
pub fn abelian() -> GaugeModel {
    GaugeModel::new(
        "abelian",
        2,
        1,
        &[],
        vec![zero_matrix(2)],
        &s0("x1^2 + x2^2 + x1^4", 2, 1),
    )
    .expect("valid model")
}

/// `su(2)` acting by rotations on ℝ³ with `C^γ_{αβ} = ε_{αβγ}` and
/// `(ρ_α)^i_j = −ε_{αij}`, the adjoint representation.
pub fn su2() -> GaugeModel {
    let mut structure = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            for g in 0..3 {
                let e = levi_civita(a, b, g);
                if e != 0 {
                    structure.push((a, b, g, q(e, 1)));
                }
            }
        }
    }
    let rho: Vec<Matrix> = (0..3)
        .map(|a| {
            (0..3)
                .map(|i| (0..3).map(|j| q(-levi_civita(a, i, j), 1)).collect())
                .collect()
        })
        .collect();
    GaugeModel::new(
        "su2",
        3,
        3,
        &structure,
        rho,
        &s0(
            "x1^4 + x2^4 + x3^4 + 2*x1^2*x2^2 + 2*x1^2*x3^2 + 2*x2^2*x3^2",
            3,
            3,
        ),
    )
    .expect("valid model")
}

/// The two-dimensional algebra `[e₁, e₂] = e₂` acting on ℝ² by the
/// traceless representation `ρ₁ = diag(1/2, −1/2)`, `ρ₂ = E₁₂`.
pub fn nonunimodular() -> GaugeModel {
    let structure = [(0, 1, 1, q(1, 1)), (1, 0, 1, q(-1, 1))];
    let rho = vec![
        vec![vec![q(1, 2), q(0, 1)], vec![q(0, 1), q(-1, 2)]],
        vec![vec![q(0, 1), q(1, 1)], vec![q(0, 1), q(0, 1)]],
    ];
    GaugeModel::new("nonunimodular", 2, 2, &structure, rho, &s0("0", 2, 2)).expect("valid model")
}

/// The same algebra in its adjoint representation. Neither unimodular nor
/// measure-preserving, yet the two defects cancel in `ΔS`.
pub fn nonunimodular_adjoint() -> GaugeModel {
    let base = nonunimodular();
    let m = base.m();
    let rho: Vec<Matrix> = (0..m)
        .map(|a| {
            (0..m)
                .map(|g| (0..m).map(|b| base.c(a, b, g).clone()).collect())
                .collect()
        })
        .collect();
    base.with_rho(rho)
        .expect("adjoint has the right shape")
        .renamed("nonunimodular_adjoint")
}

/// `su(2)` with the non-invariant `S₀ = (x¹)²`.
pub fn broken_invariance() -> GaugeModel {
    su2()
        .with_s0(&s0("x1^2", 3, 3))
        .expect("same context")
        .renamed("broken_invariance")
}

/// `su(2)` with the sign of `ρ₁` flipped, which is no longer a
/// representation.
pub fn broken_homomorphism() -> GaugeModel {
    let model = su2();
    let mut rho: Vec<Matrix> = (0..3).map(|a| model.rho(a).clone()).collect();
    for row in rho[0].iter_mut() {
        for v in row.iter_mut() {
            *v = -v.clone();
        }
    }
    model
        .with_rho(rho)
        .expect("same shape")
        .renamed("broken_homomorphism")
}

/// Every built-in model, in a fixed order.
pub fn catalog() -> Vec<GaugeModel> {
    vec![
        abelian(),
        su2(),
        nonunimodular(),
        nonunimodular_adjoint(),
        broken_invariance(),
        broken_homomorphism(),
    ]
}
